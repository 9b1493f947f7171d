#ifndef QDF_QMDF_HPP
#define QDF_QMDF_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qdf/angular_grid.hpp"
#include "qdf/errors.hpp"
#include "qdf/observables.hpp"
#include "qdf/smatrix.hpp"

namespace qdf
{

/// Real map over (theta, J) with J = 0..J_count-1, stored theta-major.
///
/// For the quantum deflection function the values carry the sin(theta)
/// factor: summing a row over J gives sigma(theta) sin(theta). Individual
/// entries may be negative.
class DeflectionMap
{
public:
    DeflectionMap() = default;

    DeflectionMap(AngularGrid grid, int J_count)
        : grid_(std::move(grid)), J_count_(J_count),
          values_(grid_.size() * static_cast<std::size_t>(J_count), 0.0)
    {
        if (J_count < 1)
            throw DomainError("deflection map needs at least one J column");
    }

    const AngularGrid& grid() const noexcept { return grid_; }
    int J_count() const noexcept { return J_count_; }
    int J_max() const noexcept { return J_count_ - 1; }
    std::size_t theta_count() const noexcept { return grid_.size(); }

    double operator()(std::size_t itheta, int J) const { return values_[index(itheta, J)]; }
    double& operator()(std::size_t itheta, int J) { return values_[index(itheta, J)]; }

    std::span<const double> row(std::size_t itheta) const
    {
        return std::span<const double>(values_).subspan(itheta * static_cast<std::size_t>(J_count_),
                                                        static_cast<std::size_t>(J_count_));
    }
    std::span<double> row(std::size_t itheta)
    {
        return std::span<double>(values_).subspan(itheta * static_cast<std::size_t>(J_count_),
                                                  static_cast<std::size_t>(J_count_));
    }

    std::span<const double> values() const noexcept { return values_; }
    std::span<double> values() noexcept { return values_; }

    std::vector<double> column(int J) const
    {
        std::vector<double> c(theta_count());
        for (std::size_t i = 0; i < theta_count(); ++i)
            c[i] = (*this)(i, J);
        return c;
    }

    double max_abs() const
    {
        double m = 0.0;
        for (double v : values_)
            m = std::max(m, std::abs(v));
        return m;
    }

private:
    std::size_t index(std::size_t itheta, int J) const
    {
        return itheta * static_cast<std::size_t>(J_count_) + static_cast<std::size_t>(J);
    }

    AngularGrid grid_;
    int J_count_ = 0;
    std::vector<double> values_;
};

/// Inclusive range [J_lo, J_hi] of total angular momenta.
struct JWindow
{
    int J_lo = 0;
    int J_hi = 0;
};

namespace detail
{

inline void check_window(const JWindow& w, int J_max)
{
    if (w.J_lo < 0 || w.J_lo > w.J_hi || w.J_hi > J_max)
        throw DomainError("J window [" + std::to_string(w.J_lo) + ", " + std::to_string(w.J_hi) +
                          "] outside 0..J_max=" + std::to_string(J_max));
}

enum class MapKind
{
    coherent,
    random_phase
};

inline DeflectionMap build_map(const SMatrixBlock& block, const AngularGrid& grid,
                               const std::vector<std::pair<int, int>>& pairs, MapKind kind)
{
    DeflectionMap map(grid, block.J_max() + 1);
    const double norm = 1.0 / (2.0 * block.j() + 1.0);
    for_each_partial_amplitude(block, grid, pairs, [&](std::size_t it, std::size_t, std::span<const complex> f) {
        const double w = norm * sin_theta(grid[it]);
        auto row = map.row(it);
        if (w == 0.0)
            return;
        if (kind == MapKind::random_phase)
        {
            for (std::size_t J = 0; J < f.size(); ++J)
                row[J] += w * std::norm(f[J]);
            return;
        }
        // |f^J|^2 + Re(f^J sum_{J1 != J} f^{J1*}) = Re(f^J F*) with F the full amplitude.
        complex total{};
        for (const complex& v : f)
            total += v;
        for (std::size_t J = 0; J < f.size(); ++J)
            row[J] += w * (f[J].real() * total.real() + f[J].imag() * total.imag());
    });
    return map;
}

} // namespace detail

/// f^J_{Omega' Omega}(theta) = [1/(2ik)] (2J+1) d^J_{Omega' Omega}(theta) S^J_{Omega' Omega}.
inline AmplitudeCurve j_partial_amplitude(const SMatrixBlock& block, int J, int omega_prime, int omega,
                                          const AngularGrid& grid)
{
    detail::check_J(block, J);
    if (std::abs(omega) > std::min(J, block.j()) || std::abs(omega_prime) > std::min(J, block.j_final()))
        throw DomainError("J-partial amplitude: helicity (" + std::to_string(omega_prime) + ", " +
                          std::to_string(omega) + ") outside bounds at J=" + std::to_string(J));
    AmplitudeCurve curve{omega_prime, omega, grid, std::vector<complex>(grid.size())};
    const complex s = block.at(J, omega_prime, omega);
    if (s == complex{})
        return curve;
    const complex pref = (2.0 * J + 1.0) * s / complex(0.0, 2.0 * block.k());
    for (std::size_t i = 0; i < grid.size(); ++i)
        curve.values[i] = pref * wigner_d(J, omega_prime, omega, grid[i]);
    return curve;
}

/// Quantum deflection function Q_r(theta, J).
///
///   Q_r(theta, J) = sin(theta)/(2j+1) sum_{Omega' Omega}
///                   [ |f^J|^2 + Re(f^J sum_{J1 != J} f^{J1*}) ]
///
/// Summing over J recovers sigma_r(theta) sin(theta); 2 pi \int dtheta
/// recovers sigma^J. Entries may be negative where partial waves interfere
/// destructively.
inline DeflectionMap qmdf_map(const SMatrixBlock& block, const AngularGrid& grid)
{
    return detail::build_map(block, grid, block.helicity_pairs(), detail::MapKind::coherent);
}

/// Q_r restricted to one final helicity Omega' (Omega still averaged).
inline DeflectionMap qmdf_helicity_map(const SMatrixBlock& block, int omega_prime, const AngularGrid& grid)
{
    if (std::abs(omega_prime) > block.j_final())
        throw DomainError("Omega'=" + std::to_string(omega_prime) + " outside |Omega'| <= j'=" +
                          std::to_string(block.j_final()));
    std::vector<std::pair<int, int>> pairs;
    for (const auto& p : block.helicity_pairs())
        if (p.first == omega_prime)
            pairs.push_back(p);
    return detail::build_map(block, grid, pairs, detail::MapKind::coherent);
}

/// Diagonal part of Q_r only (no inter-J coherences). Nonnegative.
inline DeflectionMap random_phase_map(const SMatrixBlock& block, const AngularGrid& grid)
{
    return detail::build_map(block, grid, block.helicity_pairs(), detail::MapKind::random_phase);
}

/// Q_r(theta; J_hi - J_lo) = sum_{J in window} Q_r(theta, J). Additive over disjoint windows.
inline AngularCurve sum_over_j(const DeflectionMap& map, const JWindow& window)
{
    detail::check_window(window, map.J_max());
    AngularCurve curve{map.grid(), std::vector<double>(map.theta_count(), 0.0)};
    for (std::size_t i = 0; i < map.theta_count(); ++i)
    {
        double s = 0.0;
        for (int J = window.J_lo; J <= window.J_hi; ++J)
            s += map(i, J);
        curve.values[i] = s;
    }
    return curve;
}

inline AngularCurve sum_over_j(const DeflectionMap& map)
{
    return sum_over_j(map, JWindow{0, map.J_max()});
}

/// DCS from amplitudes summed over J in the window only, then squared:
/// coherences inside the window are kept, those with outside waves dropped.
/// Not additive over windows.
inline AngularCurve partial_dcs(const SMatrixBlock& block, const JWindow& window, const AngularGrid& grid)
{
    detail::check_window(window, block.J_max());
    AngularCurve curve{grid, std::vector<double>(grid.size(), 0.0)};
    const double norm = 1.0 / (2.0 * block.j() + 1.0);
    detail::for_each_partial_amplitude(block, grid, block.helicity_pairs(),
                                       [&](std::size_t it, std::size_t, std::span<const complex> f) {
                                           complex sum{};
                                           for (int J = window.J_lo; J <= window.J_hi; ++J)
                                               sum += f[static_cast<std::size_t>(J)];
                                           curve.values[it] += norm * std::norm(sum);
                                       });
    return curve;
}

/// 2 pi \int_0^pi Q_r(theta, J) dtheta.
///
/// On closed uniform grids the quadrature is exact for Q_r built from up to
/// (N-2)/2 partial waves (see sine_weighted_weights); other grids use the
/// composite trapezoid rule.
inline double integrate_over_theta(const DeflectionMap& map, int J)
{
    if (J < 0 || J > map.J_max())
        throw DomainError("J=" + std::to_string(J) + " outside 0..J_max=" + std::to_string(map.J_max()));
    const auto w = sine_weighted_weights(map.grid());
    double s = 0.0;
    for (std::size_t i = 0; i < map.theta_count(); ++i)
        s += w[i] * map(i, J);
    return 2.0 * pi * s;
}

/// 2 pi \int_0^pi Q_r(theta, J) dtheta for every J, sharing one set of weights.
inline std::vector<double> integrate_over_theta(const DeflectionMap& map)
{
    const auto w = sine_weighted_weights(map.grid());
    std::vector<double> out(static_cast<std::size_t>(map.J_count()), 0.0);
    for (std::size_t i = 0; i < map.theta_count(); ++i)
    {
        const auto row = map.row(i);
        for (std::size_t J = 0; J < out.size(); ++J)
            out[J] += w[i] * row[J];
    }
    for (double& v : out)
        v *= 2.0 * pi;
    return out;
}

/// Presentation widths for smooth_map when none are given.
inline constexpr double default_smooth_J = 1.5;
inline const double default_smooth_theta = deg_to_rad(1.0);

namespace detail
{

/// Discrete normalized Gaussian exp(-(k h)^2/s^2) on integer offsets |k| <= radius.
inline std::vector<double> gaussian_stencil(double s, double h, int& radius)
{
    radius = std::max(1, static_cast<int>(std::ceil(8.0 * s / h)));
    std::vector<double> w(static_cast<std::size_t>(2 * radius + 1));
    double total = 0.0;
    for (int k = -radius; k <= radius; ++k)
    {
        const double x = k * h / s;
        w[static_cast<std::size_t>(k + radius)] = std::exp(-x * x);
        total += w[static_cast<std::size_t>(k + radius)];
    }
    for (double& v : w)
        v /= total;
    return w;
}

} // namespace detail

/// Separable Gaussian smoothing over J (width s_J, in J units) and theta
/// (width s_theta, radians), with kernel exp(-d^2/s^2) normalized on the
/// lattice. Mass leaving the grid at the boundaries is dropped. A zero width
/// leaves that axis untouched; theta smoothing needs a uniform grid.
inline DeflectionMap smooth_map(const DeflectionMap& map, double s_J, double s_theta)
{
    if (!(s_J >= 0.0) || !(s_theta >= 0.0))
        throw DomainError("smoothing widths must be >= 0");
    DeflectionMap out = map;
    const int nJ = map.J_count();
    const std::size_t nt = map.theta_count();

    if (s_J > 0.0)
    {
        int r = 0;
        const auto w = detail::gaussian_stencil(s_J, 1.0, r);
        std::vector<double> buf(static_cast<std::size_t>(nJ));
        for (std::size_t i = 0; i < nt; ++i)
        {
            auto row = out.row(i);
            std::fill(buf.begin(), buf.end(), 0.0);
            for (int J = 0; J < nJ; ++J)
            {
                const double v = row[static_cast<std::size_t>(J)];
                if (v == 0.0)
                    continue;
                for (int k = std::max(-r, -J); k <= std::min(r, nJ - 1 - J); ++k)
                    buf[static_cast<std::size_t>(J + k)] += w[static_cast<std::size_t>(k + r)] * v;
            }
            std::copy(buf.begin(), buf.end(), row.begin());
        }
    }

    if (s_theta > 0.0)
    {
        if (!map.grid().is_uniform())
            throw DomainError("theta smoothing requires a uniform angular grid");
        int r = 0;
        const auto w = detail::gaussian_stencil(s_theta, map.grid().spacing(), r);
        const auto n = static_cast<long>(nt);
        std::vector<double> col(nt);
        std::vector<double> buf(nt);
        for (int J = 0; J < nJ; ++J)
        {
            for (std::size_t i = 0; i < nt; ++i)
                col[i] = out(i, J);
            std::fill(buf.begin(), buf.end(), 0.0);
            for (long i = 0; i < n; ++i)
            {
                const double v = col[static_cast<std::size_t>(i)];
                if (v == 0.0)
                    continue;
                for (long k = std::max<long>(-r, -i); k <= std::min<long>(r, n - 1 - i); ++k)
                    buf[static_cast<std::size_t>(i + k)] += w[static_cast<std::size_t>(k + r)] * v;
            }
            for (std::size_t i = 0; i < nt; ++i)
                out(i, J) = buf[i];
        }
    }
    return out;
}

} // namespace qdf

#endif
