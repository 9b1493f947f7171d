#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "qdf/cqdf.hpp"
#include "qdf/errors.hpp"
#include "qdf/synth.hpp"
#include "qmdf_oracle.hpp"

using namespace qdf;

TEST(Unwrap, FollowsContinuousBranch)
{
    std::vector<complex> seq;
    std::vector<double> truth;
    for (int J = 0; J < 50; ++J)
    {
        const double phi = 0.3 + 0.9 * J - 0.02 * J * J;
        truth.push_back(phi);
        seq.push_back(std::polar(1.0, phi));
    }
    const auto p = unwrap_arg(seq);
    const double offset = p.args[0] - truth[0];
    for (std::size_t i = 0; i < seq.size(); ++i)
        EXPECT_NEAR(p.args[i] - truth[i], offset, 1e-12);
}

TEST(Unwrap, HalfTurnTie)
{
    const std::vector<complex> seq{1.0, -1.0, 1.0};
    EXPECT_THROW(unwrap_arg(seq), NumericalError);
    const auto p = unwrap_arg(seq, 0, UnwrapMode::one_sided);
    EXPECT_DOUBLE_EQ(p.args[1], -pi);
    EXPECT_DOUBLE_EQ(p.args[2], -2.0 * pi);
}

TEST(Unwrap, ZeroMagnitudeIsAnError)
{
    const std::vector<complex> seq{1.0, 0.0, 1.0};
    EXPECT_THROW(unwrap_arg(seq), NumericalError);
}

TEST(Derivative, ExactForQuadratics)
{
    std::vector<double> y;
    for (int i = 0; i < 12; ++i)
        y.push_back(2.0 - 0.5 * i + 0.125 * i * i);
    const auto d = unit_step_derivative(y);
    for (int i = 0; i < 12; ++i)
        EXPECT_NEAR(d[i], -0.5 + 0.25 * i, 1e-13);
    EXPECT_THROW(unit_step_derivative({1.0}), DomainError);
    const auto two = unit_step_derivative({1.0, 3.0});
    EXPECT_EQ(two[0], 2.0);
    EXPECT_EQ(two[1], 2.0);
}

TEST(Cqdf, QuadraticPhaseModel)
{
    const double alpha = 0.0123;
    const auto b = synth_smatrix(PhaseModel::quadratic(alpha), 3.0, 0, 80);
    const auto c = cqdf(b, 0, 0);
    ASSERT_EQ(c.J_values.size(), 81u);
    for (std::size_t i = 0; i < c.J_values.size(); ++i)
        EXPECT_NEAR(c.theta_tilde[i], pi - alpha * (2.0 * c.J_values[i] + 1.0), 1e-12);
}

TEST(Cqdf, LinearPhaseModelIsConstant)
{
    const auto b = synth_smatrix(PhaseModel::linear(-0.3), 1.0, 0, 40);
    const auto c = cqdf(b, 0, 0);
    for (double t : c.theta_tilde)
        EXPECT_NEAR(t, pi - 0.3, 1e-12);
}

TEST(Cqdf, GlobalPhaseInvariance)
{
    const auto b = synth_smatrix(PhaseModel::quadratic(0.02), 2.0, 0, 60);
    const auto ref = cqdf(b, 0, 0);
    for (double phi : {0.5, 2.0, -3.0})
    {
        const auto c = cqdf(b.scaled(std::polar(1.0, phi)), 0, 0);
        for (std::size_t i = 0; i < ref.theta_tilde.size(); ++i)
            EXPECT_NEAR(c.theta_tilde[i], ref.theta_tilde[i], 1e-12);
    }
}

TEST(Cqdf, MissingJIsReported)
{
    const auto b = oracle::scalar_block({1.0, 1.0, 0.0, 1.0, 1.0});
    try
    {
        cqdf(b, 0, 0);
        FAIL() << "expected ValidationError";
    }
    catch (const ValidationError& e)
    {
        EXPECT_NE(std::string(e.what()).find("J = 2"), std::string::npos) << e.what();
    }
    EXPECT_THROW(cqdf(b, 1, 0), ValidationError);
}

TEST(Cqdf, ScatteringAngleFolding)
{
    EXPECT_NEAR(fold_angle(-0.5), 0.5, 1e-15);
    EXPECT_NEAR(fold_angle(4.0), 2.0 * pi - 4.0, 1e-15);
    EXPECT_NEAR(fold_angle(7.0), 7.0 - 2.0 * pi, 1e-15);
    EXPECT_NEAR(cqdf_scattering_angle(pi - 0.3), 0.3, 1e-15);
    EXPECT_NEAR(cqdf_scattering_angle(pi), 0.0, 1e-15);
}
