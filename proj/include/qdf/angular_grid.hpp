#ifndef QDF_ANGULAR_GRID_HPP
#define QDF_ANGULAR_GRID_HPP

#include <cmath>
#include <cstddef>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "qdf/errors.hpp"

namespace qdf
{

inline constexpr double pi = std::numbers::pi;

inline double deg_to_rad(double deg) { return deg * (pi / 180.0); }
inline double rad_to_deg(double rad) { return rad * (180.0 / pi); }

/// sin(theta) with the endpoints of [0, pi] mapped to an exact zero.
inline double sin_theta(double theta)
{
    if (theta == 0.0 || theta == pi)
        return 0.0;
    return std::sin(theta);
}

/// Strictly increasing scattering angles in [0, pi], at least two of them.
class AngularGrid
{
public:
    AngularGrid() = default;

    explicit AngularGrid(std::vector<double> thetas) : thetas_(std::move(thetas))
    {
        if (thetas_.size() < 2)
            throw DomainError("angular grid needs at least 2 points");
        for (std::size_t i = 0; i < thetas_.size(); ++i)
        {
            const double t = thetas_[i];
            if (!(t >= 0.0 && t <= pi))
                throw DomainError("angular grid point " + std::to_string(i) + " outside [0, pi]");
            if (i > 0 && !(t > thetas_[i - 1]))
                throw DomainError("angular grid not strictly increasing at point " + std::to_string(i));
        }
    }

    /// `points` equally spaced angles from 0 to pi inclusive. Endpoints are exact.
    static AngularGrid uniform(std::size_t points)
    {
        if (points < 2)
            throw DomainError("angular grid needs at least 2 points");
        const auto intervals = static_cast<double>(points - 1);
        std::vector<double> t(points);
        for (std::size_t i = 0; i < points; ++i)
            t[i] = pi * (static_cast<double>(i) / intervals);
        t.back() = pi;
        return AngularGrid(std::move(t));
    }

    /// Inclusive grid with the given spacing in degrees; 180/step must be an integer.
    static AngularGrid from_step_deg(double step_deg)
    {
        if (!(step_deg > 0.0) || step_deg > 180.0)
            throw DomainError("grid spacing must be in (0, 180] degrees");
        const double n = 180.0 / step_deg;
        const double rounded = std::round(n);
        if (std::abs(n - rounded) > 1e-9 * rounded)
            throw DomainError("grid spacing must divide 180 degrees evenly");
        return uniform(static_cast<std::size_t>(rounded) + 1);
    }

    /// Default presentation grid: 0.25 degree spacing, 721 points.
    static AngularGrid standard() { return uniform(721); }

    std::size_t size() const noexcept { return thetas_.size(); }
    double operator[](std::size_t i) const { return thetas_[i]; }
    std::span<const double> thetas() const noexcept { return thetas_; }
    double front() const { return thetas_.front(); }
    double back() const { return thetas_.back(); }

    /// True when the grid is k*pi/N for k = 0..N (uniform and closed).
    bool is_uniform_closed() const
    {
        if (thetas_.front() != 0.0 || thetas_.back() != pi)
            return false;
        const double h = pi / static_cast<double>(thetas_.size() - 1);
        for (std::size_t i = 0; i < thetas_.size(); ++i)
            if (std::abs(thetas_[i] - h * static_cast<double>(i)) > 1e-12)
                return false;
        return true;
    }

    bool is_uniform() const
    {
        const double h = (back() - front()) / static_cast<double>(size() - 1);
        for (std::size_t i = 0; i < size(); ++i)
            if (std::abs(thetas_[i] - (front() + h * static_cast<double>(i))) > 1e-12)
                return false;
        return true;
    }

    double spacing() const { return (back() - front()) / static_cast<double>(size() - 1); }

    friend bool operator==(const AngularGrid&, const AngularGrid&) = default;

private:
    std::vector<double> thetas_;
};

/// Composite trapezoid weights for \int g(theta) dtheta over the grid span.
inline std::vector<double> trapezoid_weights(const AngularGrid& grid)
{
    std::vector<double> w(grid.size(), 0.0);
    for (std::size_t i = 0; i + 1 < grid.size(); ++i)
    {
        const double h = grid[i + 1] - grid[i];
        w[i] += 0.5 * h;
        w[i + 1] += 0.5 * h;
    }
    return w;
}

/// Weights for \int_0^pi g(theta) dtheta where g = sin(theta) h(cos theta).
///
/// On a closed uniform grid theta_k = k pi / N this is Fejer's second rule
/// applied to h in x = cos(theta): exact whenever h is a polynomial of degree
/// <= N - 2, which covers every Q_r(theta, J) built from partial waves with
/// 2 J_max <= N - 2. Endpoints get zero weight. Other grids fall back to the
/// composite trapezoid rule.
inline std::vector<double> sine_weighted_weights(const AngularGrid& grid)
{
    if (!grid.is_uniform_closed() || grid.size() < 3)
        return trapezoid_weights(grid);

    const std::size_t n = grid.size() - 1;
    const std::size_t half = n / 2;
    std::vector<double> w(grid.size(), 0.0);
    for (std::size_t k = 1; k < n; ++k)
    {
        const double t = grid[k];
        double s = 0.0;
        for (std::size_t j = half; j >= 1; --j)
        {
            const auto odd = static_cast<double>(2 * j - 1);
            s += std::sin(odd * t) / odd;
        }
        w[k] = 4.0 * s / static_cast<double>(n);
    }
    return w;
}

} // namespace qdf

#endif
