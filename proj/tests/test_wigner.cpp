#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

#include "qdf/errors.hpp"
#include "qdf/wigner.hpp"
#include "qmdf_oracle.hpp"
#include "wigner_oracle.hpp"

using namespace qdf;

namespace
{

int sign(int p) { return (p % 2 == 0) ? 1 : -1; }

} // namespace

TEST(Wigner, LowOrderClosedForms)
{
    for (double t : {0.0, 0.3, 1.1, 2.0, 3.0, pi})
    {
        const double c = std::cos(t), s = std::sin(t);
        EXPECT_NEAR(wigner_d(0, 0, 0, t), 1.0, 1e-15);
        EXPECT_NEAR(wigner_d(1, 0, 0, t), c, 1e-15);
        EXPECT_NEAR(wigner_d(1, 1, 1, t), 0.5 * (1 + c), 1e-15);
        EXPECT_NEAR(wigner_d(1, 1, 0, t), -s / std::sqrt(2.0), 1e-15);
        EXPECT_NEAR(wigner_d(1, 0, 1, t), s / std::sqrt(2.0), 1e-15);
        EXPECT_NEAR(wigner_d(1, 1, -1, t), 0.5 * (1 - c), 1e-15);
        EXPECT_NEAR(wigner_d(2, 0, 0, t), 0.5 * (3 * c * c - 1), 1e-15);
        EXPECT_NEAR(wigner_d(2, 2, 0, t), std::sqrt(6.0) / 4 * s * s, 1e-15);
    }
}

TEST(Wigner, Boundaries)
{
    for (int J = 0; J <= 40; ++J)
        for (int mp = -std::min(J, 3); mp <= std::min(J, 3); ++mp)
            for (int m = -std::min(J, 3); m <= std::min(J, 3); ++m)
            {
                EXPECT_NEAR(wigner_d(J, mp, m, 0.0), mp == m ? 1.0 : 0.0, 1e-12);
                EXPECT_NEAR(wigner_d(J, mp, m, pi), mp == -m ? sign(J - m) : 0.0, 1e-12);
            }
}

TEST(Wigner, SymmetryAndReflection)
{
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<int> Jd(0, 50);
    std::uniform_real_distribution<double> td(0.0, pi);
    for (int n = 0; n < 2000; ++n)
    {
        const int J = Jd(rng);
        std::uniform_int_distribution<int> md(-J, J);
        const int mp = md(rng), m = md(rng);
        const double t = td(rng);
        const double d = wigner_d(J, mp, m, t);
        EXPECT_NEAR(d, sign(mp - m) * wigner_d(J, m, mp, t), 1e-10);
        EXPECT_NEAR(d, wigner_d(J, -m, -mp, t), 1e-10);
        EXPECT_NEAR(wigner_d(J, mp, m, pi - t), sign(J - m) * wigner_d(J, -mp, m, t), 1e-10);
    }
}

TEST(Wigner, Orthogonality)
{
    std::vector<double> x, w;
    oracle::gauss_legendre(64, x, w);
    const int J_max = 60;
    for (auto [mp, m] : {std::pair{0, 0}, std::pair{1, 0}, std::pair{2, -1}, std::pair{3, 3}})
    {
        const int j0 = std::max(std::abs(m), std::abs(mp));
        std::vector<std::vector<double>> d(x.size(), std::vector<double>(J_max + 1));
        for (std::size_t i = 0; i < x.size(); ++i)
            wigner_d_sequence(mp, m, std::acos(x[i]), d[i]);
        for (int J1 = j0; J1 <= J_max; ++J1)
            for (int J2 = J1; J2 <= std::min(J_max, J1 + 4); ++J2)
            {
                double s = 0.0;
                for (std::size_t i = 0; i < x.size(); ++i)
                    s += w[i] * d[i][J1] * d[i][J2];
                EXPECT_NEAR(s, J1 == J2 ? 2.0 / (2 * J1 + 1) : 0.0, 1e-6) << J1 << " " << J2;
            }
    }
}

TEST(Wigner, MatchesExtendedPrecisionSum)
{
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<int> Jd(0, 250);
    std::uniform_real_distribution<double> td(0.0, pi);
    for (int n = 0; n < 40; ++n)
    {
        const int J = Jd(rng);
        std::uniform_int_distribution<int> md(-std::min(J, 6), std::min(J, 6));
        const int mp = md(rng), m = md(rng);
        const double t = td(rng);
        EXPECT_NEAR(wigner_d(J, mp, m, t), oracle::wigner_d_sum(J, mp, m, t), 1e-10)
            << "J=" << J << " mp=" << mp << " m=" << m << " t=" << t;
    }
}

TEST(Wigner, LargeHelicitySeedAtSmallAngle)
{
    // seed underflows to zero in double without log-space evaluation
    EXPECT_NEAR(wigner_d(200, 200, -200, 0.2), oracle::wigner_d_sum(200, 200, -200, 0.2), 1e-12);
    EXPECT_NEAR(wigner_d(220, 30, 5, 1e-3), oracle::wigner_d_sum(220, 30, 5, 1e-3), 1e-10);
}

TEST(Wigner, ColumnMatchesPointwise)
{
    const auto g = AngularGrid::uniform(37);
    const auto col = wigner_d_column({12, 2, -1, g});
    for (std::size_t i = 0; i < g.size(); ++i)
        EXPECT_DOUBLE_EQ(col[i], wigner_d(12, 2, -1, g[i]));
}

TEST(Wigner, RejectsBadArguments)
{
    EXPECT_THROW(wigner_d(2, 3, 0, 0.5), DomainError);
    EXPECT_THROW(wigner_d(-1, 0, 0, 0.5), DomainError);
    EXPECT_THROW(wigner_d(2, 0, 0, -0.1), DomainError);
    EXPECT_THROW(wigner_d(2, 0, 0, 3.2), DomainError);
}
