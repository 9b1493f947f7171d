#ifndef QDF_WIGNER_HPP
#define QDF_WIGNER_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdlib>
#include <span>
#include <string>
#include <vector>

#include "qdf/angular_grid.hpp"
#include "qdf/errors.hpp"

namespace qdf
{

/// Arguments for evaluating one d^J_{Omega' Omega} element over a grid.
struct DTableRequest
{
    int J = 0;
    int omega_prime = 0;
    int omega = 0;
    AngularGrid grid;
};

namespace detail
{

inline double log_factorial(int n)
{
    static const auto table = [] {
        std::array<double, 1025> t{};
        for (std::size_t i = 0; i < t.size(); ++i)
            t[i] = std::lgamma(static_cast<double>(i) + 1.0);
        return t;
    }();
    if (n < static_cast<int>(table.size()))
        return table[static_cast<std::size_t>(n)];
    return std::lgamma(static_cast<double>(n) + 1.0);
}

inline void check_helicity(int J, int omega_prime, int omega)
{
    if (J < 0 || std::abs(omega) > J || std::abs(omega_prime) > J)
        throw DomainError("wigner d: helicity bound violated for J=" + std::to_string(J) +
                          " Omega'=" + std::to_string(omega_prime) + " Omega=" + std::to_string(omega));
}

inline void check_angle(double theta)
{
    if (!(theta >= 0.0 && theta <= pi))
        throw DomainError("wigner d: theta outside [0, pi]");
}

/// d^{J0}_{m' m}(theta) for J0 = max(|m|, |m'|), 0 < theta < pi. At this J the
/// Wigner factorial sum has a single term; it is evaluated in log space.
inline double wigner_d_seed(int mp, int m, double theta)
{
    const int j0 = std::max(std::abs(m), std::abs(mp));
    const int s = std::max(0, m - mp);
    const int pc = 2 * j0 + m - mp - 2 * s; // power of cos(theta/2)
    const int ps = mp - m + 2 * s;          // power of sin(theta/2)
    double logv = 0.5 * (log_factorial(j0 + mp) + log_factorial(j0 - mp) + log_factorial(j0 + m) +
                         log_factorial(j0 - m)) -
                  log_factorial(j0 + m - s) - log_factorial(s) - log_factorial(mp - m + s) -
                  log_factorial(j0 - mp - s);
    if (pc > 0)
        logv += pc * std::log(std::cos(0.5 * theta));
    if (ps > 0)
        logv += ps * std::log(std::sin(0.5 * theta));
    const double sign = ((mp - m + s) % 2 == 0) ? 1.0 : -1.0;
    return sign * std::exp(logv);
}

} // namespace detail

/// Fills out[J] = d^J_{m' m}(theta) for J = 0..out.size()-1 (zero below
/// J0 = max(|m|,|m'|)).
///
/// Upward three-term recursion in J at fixed (m', m):
///   J sqrt[((J+1)^2-m^2)((J+1)^2-m'^2)] d^{J+1}
///     = (2J+1) [J(J+1) cos(theta) - m m'] d^J - (J+1) sqrt[(J^2-m^2)(J^2-m'^2)] d^{J-1},
/// seeded with the closed form at J0. theta = 0 and theta = pi use the
/// closed forms delta_{m'm} and (-1)^{J-m} delta_{m',-m}.
inline void wigner_d_sequence(int mp, int m, double theta, std::span<double> out)
{
    detail::check_angle(theta);
    std::fill(out.begin(), out.end(), 0.0);
    const int j0 = std::max(std::abs(m), std::abs(mp));
    const int n = static_cast<int>(out.size());
    if (j0 >= n)
        return;

    if (theta == 0.0)
    {
        if (mp == m)
            std::fill(out.begin() + j0, out.end(), 1.0);
        return;
    }
    if (theta == pi)
    {
        if (mp == -m)
            for (int J = j0; J < n; ++J)
                out[J] = ((J - m) % 2 == 0) ? 1.0 : -1.0;
        return;
    }

    const double x = std::cos(theta);
    int J = j0;
    out[J] = (j0 == 0) ? 1.0 : detail::wigner_d_seed(mp, m, theta);
    if (j0 == 0 && n > 1)
    {
        // m = m' = 0: d^1_00 = cos(theta); the recursion is singular at J = 0.
        out[1] = x;
        J = 1;
    }
    const double m2 = static_cast<double>(m) * m;
    const double mp2 = static_cast<double>(mp) * mp;
    const double mmp = static_cast<double>(m) * mp;
    for (; J + 1 < n; ++J)
    {
        const double dJ = J;
        const double a = (2.0 * dJ + 1.0) * (dJ * (dJ + 1.0) * x - mmp);
        const double b = (dJ + 1.0) * std::sqrt((dJ * dJ - m2) * (dJ * dJ - mp2));
        const double c = dJ * std::sqrt(((dJ + 1.0) * (dJ + 1.0) - m2) * ((dJ + 1.0) * (dJ + 1.0) - mp2));
        const double prev = (J > j0) ? out[J - 1] : 0.0;
        out[J + 1] = (a * out[J] - b * prev) / c;
    }
}

/// Reduced Wigner rotation matrix element d^J_{Omega' Omega}(theta).
inline double wigner_d(int J, int omega_prime, int omega, double theta)
{
    detail::check_helicity(J, omega_prime, omega);
    std::vector<double> seq(static_cast<std::size_t>(J) + 1);
    wigner_d_sequence(omega_prime, omega, theta, seq);
    return seq.back();
}

inline std::vector<double> wigner_d_column(const DTableRequest& request)
{
    detail::check_helicity(request.J, request.omega_prime, request.omega);
    std::vector<double> out(request.grid.size());
    std::vector<double> seq(static_cast<std::size_t>(request.J) + 1);
    for (std::size_t i = 0; i < request.grid.size(); ++i)
    {
        wigner_d_sequence(request.omega_prime, request.omega, request.grid[i], seq);
        out[i] = seq.back();
    }
    return out;
}

} // namespace qdf

#endif
