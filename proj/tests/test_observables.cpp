#include <gtest/gtest.h>

#include <random>

#include "qdf/errors.hpp"
#include "qdf/observables.hpp"
#include "qmdf_oracle.hpp"
#include "wigner_oracle.hpp"

using namespace qdf;

TEST(Observables, OpacityAveragesOverInitialHelicity)
{
    const auto b = load_smatrix_string("k 2 1/angstrom\nchannel j=1 jp=1 v=0 vp=0 Jmax=2\n"
                                       "0 0 0 0.5 0\n"
                                       "1 -1 1 0.6 0\n1 0 0 0 0.8\n1 1 -1 0.3 0.4\n");
    EXPECT_NEAR(opacity(b, 0), 0.25, 1e-15);
    EXPECT_NEAR(opacity(b, 1), (0.36 + 0.64 + 0.25) / 3.0, 1e-15);
    EXPECT_EQ(opacity(b, 2), 0.0);
    EXPECT_THROW(opacity(b, 3), DomainError);
    EXPECT_NEAR(partial_cross_section(b, 1), pi / 4.0 * 3.0 / 3.0 * 1.25, 1e-15);
    EXPECT_NEAR(integral_cross_section(b), partial_cross_section(b, 0) + partial_cross_section(b, 1), 1e-15);
}

TEST(Observables, AmplitudeMatchesExplicitSum)
{
    std::mt19937_64 rng(5);
    const auto b = oracle::random_block(rng, 15, 1, 2, 1.7);
    const AngularGrid g({0.0, 0.4, 1.3, 2.2, pi});
    const auto f = scattering_amplitude(b, -2, 1, g);
    for (std::size_t i = 0; i < g.size(); ++i)
    {
        complex ref{};
        for (int J = 2; J <= 15; ++J)
            ref += (2.0 * J + 1.0) * oracle::wigner_d_sum(J, -2, 1, g[i]) * b.at(J, -2, 1);
        ref /= complex(0.0, 2.0 * 1.7);
        EXPECT_NEAR(std::abs(f.values[i] - ref), 0.0, 1e-12);
    }
    EXPECT_THROW(scattering_amplitude(b, 3, 0, g), DomainError);
}

TEST(Observables, DcsIntegratesToIntegralCrossSection)
{
    std::mt19937_64 rng(9);
    for (int trial = 0; trial < 5; ++trial)
    {
        const auto b = oracle::random_block(rng, 25, trial % 3, (trial + 1) % 3, 0.9 + trial);
        const auto g = AngularGrid::uniform(201);
        const auto curve = dcs(b, g);
        const auto w = sine_weighted_weights(g);
        double s = 0.0;
        for (std::size_t i = 0; i < g.size(); ++i)
            s += w[i] * curve.values[i] * std::sin(g[i]);
        s *= 2.0 * pi;
        EXPECT_NEAR(s / integral_cross_section(b), 1.0, 1e-12);
        for (double v : curve.values)
            EXPECT_GE(v, 0.0);
    }
}

TEST(Observables, SingleWaveIsLegendreSquared)
{
    // j = 0, only J = 2 with S = 1: sigma = (5/(2k))^2 P2(cos)^2
    const auto b = oracle::scalar_block({0.0, 0.0, 1.0}, 0.5);
    const AngularGrid g({0.0, 0.7, 1.9, pi});
    const auto c = dcs(b, g);
    for (std::size_t i = 0; i < g.size(); ++i)
    {
        const double x = std::cos(g[i]);
        const double p2 = 0.5 * (3 * x * x - 1);
        EXPECT_NEAR(c.values[i], 25.0 * p2 * p2, 1e-12);
    }
}

TEST(Observables, OpacityDegeneracyFactor)
{
    const auto b = load_smatrix_string("k 1 u\nchannel j=1 jp=1 v=0 vp=0 Jmax=2\n"
                                       "2 0 0 1 0\n2 1 0 1 0\n2 -1 0 1 0\n");
    EXPECT_NEAR(opacity(b, 2), 1.0, 1e-15);
}

TEST(Observables, DegeneracyConsistencyAndPhaseInvariance)
{
    std::mt19937_64 rng(12);
    const auto b = oracle::random_block(rng, 30, 2, 1, 1.6);
    double s = 0.0;
    for (int J = 0; J <= 30; ++J)
        s += (2.0 * J + 1.0) * (2.0 * std::min(J, 2) + 1.0) / 5.0 * opacity(b, J);
    s *= pi / (1.6 * 1.6);
    EXPECT_NEAR(s / integral_cross_section(b), 1.0, 1e-12);

    const auto r = b.scaled(std::polar(1.0, 0.77));
    const auto g = AngularGrid::uniform(91);
    const auto d0 = dcs(b, g), d1 = dcs(r, g);
    for (std::size_t i = 0; i < g.size(); ++i)
        EXPECT_NEAR(d1.values[i], d0.values[i], 1e-12 * d0.values[i]);
    for (int J = 0; J <= 30; ++J)
        EXPECT_NEAR(partial_cross_section(r, J), partial_cross_section(b, J), 1e-12 * partial_cross_section(b, J));
}
