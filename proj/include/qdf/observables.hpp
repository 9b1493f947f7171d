#ifndef QDF_OBSERVABLES_HPP
#define QDF_OBSERVABLES_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <span>
#include <string>
#include <vector>

#include "qdf/angular_grid.hpp"
#include "qdf/errors.hpp"
#include "qdf/smatrix.hpp"
#include "qdf/wigner.hpp"

namespace qdf
{

/// f_{Omega' Omega}(theta) on a grid (units of length).
struct AmplitudeCurve
{
    int omega_prime = 0;
    int omega = 0;
    AngularGrid grid;
    std::vector<complex> values;
};

/// Real curve over a grid; a DCS when produced by dcs() or partial_dcs().
struct AngularCurve
{
    AngularGrid grid;
    std::vector<double> values;
};

namespace detail
{

inline void check_J(const SMatrixBlock& block, int J)
{
    if (J < 0 || J > block.J_max())
        throw DomainError("J=" + std::to_string(J) + " outside 0..J_max=" + std::to_string(block.J_max()));
}

inline double sum_squared_modulus_at(const SMatrixBlock& block, int J)
{
    double s = 0.0;
    for (auto it = block.entries().lower_bound(HelicityKey{J, -block.j() - 1, -block.j_final() - 1});
         it != block.entries().end() && it->first.J == J; ++it)
        s += std::norm(it->second);
    return s;
}

/// J-partial amplitudes f^J_{m' m}(theta), J = 0..J_max, for one angle.
///
/// `s` is the dense helicity sequence of the pair and `d` scratch of the same
/// length.
inline void partial_amplitudes(std::span<const complex> s, int mp, int m, double theta, double k,
                               std::span<double> d, std::span<complex> out)
{
    wigner_d_sequence(mp, m, theta, d);
    const complex pref = 1.0 / complex(0.0, 2.0 * k);
    for (std::size_t J = 0; J < s.size(); ++J)
        out[J] = (s[J] == complex{}) ? complex{} : pref * (2.0 * static_cast<double>(J) + 1.0) * d[J] * s[J];
}

/// Visits (theta index, pair index, f^J array) for every grid angle and every
/// helicity pair that carries elements. Pairs can be filtered by Omega'.
template <typename Visitor>
void for_each_partial_amplitude(const SMatrixBlock& block, const AngularGrid& grid,
                                const std::vector<std::pair<int, int>>& pairs, Visitor&& visit)
{
    const std::size_t nJ = static_cast<std::size_t>(block.J_max()) + 1;
    std::vector<std::vector<complex>> seqs;
    seqs.reserve(pairs.size());
    for (const auto& [mp, m] : pairs)
        seqs.push_back(block.helicity_sequence(mp, m));

    std::vector<double> d(nJ);
    std::vector<complex> f(nJ);
    for (std::size_t it = 0; it < grid.size(); ++it)
        for (std::size_t p = 0; p < pairs.size(); ++p)
        {
            partial_amplitudes(seqs[p], pairs[p].first, pairs[p].second, grid[it], block.k(), d, f);
            visit(it, p, std::span<const complex>(f));
        }
}

} // namespace detail

/// Reaction (or inelastic) probability at one J:
///   P_r(J) = [1/(2 min(J,j)+1)] sum_{Omega Omega'} |S^J_{Omega' Omega}|^2.
inline double opacity(const SMatrixBlock& block, int J)
{
    detail::check_J(block, J);
    return detail::sum_squared_modulus_at(block, J) / (2.0 * std::min(J, block.j()) + 1.0);
}

/// sigma^J = (pi/k^2) (2J+1)/(2j+1) sum |S^J|^2.
inline double partial_cross_section(const SMatrixBlock& block, int J)
{
    detail::check_J(block, J);
    const double k = block.k();
    return pi / (k * k) * (2.0 * J + 1.0) / (2.0 * block.j() + 1.0) * detail::sum_squared_modulus_at(block, J);
}

inline double integral_cross_section(const SMatrixBlock& block)
{
    double s = 0.0;
    for (int J = 0; J <= block.J_max(); ++J)
        s += partial_cross_section(block, J);
    return s;
}

/// f_{Omega' Omega}(theta) = [1/(2ik)] sum_J (2J+1) d^J_{Omega' Omega}(theta) S^J_{Omega' Omega}.
inline AmplitudeCurve scattering_amplitude(const SMatrixBlock& block, int omega_prime, int omega,
                                           const AngularGrid& grid)
{
    if (std::abs(omega) > block.j() || std::abs(omega_prime) > block.j_final())
        throw DomainError("scattering amplitude: helicity (" + std::to_string(omega_prime) + ", " +
                          std::to_string(omega) + ") outside the channel range");
    AmplitudeCurve curve{omega_prime, omega, grid, std::vector<complex>(grid.size())};
    detail::for_each_partial_amplitude(block, grid, {{omega_prime, omega}},
                                       [&](std::size_t it, std::size_t, std::span<const complex> f) {
                                           complex sum{};
                                           for (const complex& v : f)
                                               sum += v;
                                           curve.values[it] = sum;
                                       });
    return curve;
}

/// sigma_r(theta) = [1/(2j+1)] sum_{Omega' Omega} |f_{Omega' Omega}(theta)|^2.
inline AngularCurve dcs(const SMatrixBlock& block, const AngularGrid& grid)
{
    AngularCurve curve{grid, std::vector<double>(grid.size(), 0.0)};
    const double norm = 1.0 / (2.0 * block.j() + 1.0);
    detail::for_each_partial_amplitude(block, grid, block.helicity_pairs(),
                                       [&](std::size_t it, std::size_t, std::span<const complex> f) {
                                           complex sum{};
                                           for (const complex& v : f)
                                               sum += v;
                                           curve.values[it] += norm * std::norm(sum);
                                       });
    return curve;
}

} // namespace qdf

#endif
