#ifndef QDF_CQDF_HPP
#define QDF_CQDF_HPP

#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include "qdf/angular_grid.hpp"
#include "qdf/errors.hpp"
#include "qdf/smatrix.hpp"

namespace qdf
{

/// e^{i pi J} S^J_{Omega' Omega} over a contiguous J range starting at J_first.
struct ModifiedSequence
{
    int omega_prime = 0;
    int omega = 0;
    int J_first = 0;
    std::vector<complex> values;
};

/// Continuous-branch argument of a complex sequence indexed by J.
struct PhaseSequence
{
    int omega_prime = 0;
    int omega = 0;
    int J_first = 0;
    std::vector<double> args;
    std::vector<double> magnitudes;
};

struct CqdfCurve
{
    std::vector<int> J_values;
    std::vector<double> theta_tilde; ///< radians, not confined to [0, pi]
    std::vector<double> magnitudes;
};

/// Branch rule for arg continuity between consecutive J.
///  - two_sided: the step is the one with minimal |delta| (|delta| < pi); an
///    exact half turn is ambiguous and raises NumericalError.
///  - one_sided: the step is the largest delta with delta < pi, i.e. delta in [-pi, pi).
enum class UnwrapMode
{
    two_sided,
    one_sided
};

inline constexpr double unwrap_tie_tolerance = 1e-12;
inline constexpr double unwrap_min_magnitude = 1e-300;

/// S~(J) = e^{i pi J} S^J = (-1)^J S^J for the present J range of one helicity pair.
inline ModifiedSequence modified_smatrix(const SMatrixBlock& block, int omega_prime, int omega)
{
    ModifiedSequence out{omega_prime, omega, 0, {}};
    int first = -1;
    int last = -1;
    for (int J = 0; J <= block.J_max(); ++J)
        if (block.contains(J, omega_prime, omega))
        {
            if (first < 0)
                first = J;
            last = J;
        }
    if (first < 0)
        throw ValidationError("modified S-matrix: no elements for (Omega'=" + std::to_string(omega_prime) +
                              ", Omega=" + std::to_string(omega) + ")");
    std::string missing;
    for (int J = first; J <= last; ++J)
        if (!block.contains(J, omega_prime, omega))
            missing += (missing.empty() ? "" : ", ") + std::to_string(J);
    if (!missing.empty())
        throw ValidationError("modified S-matrix: J coverage has gaps, missing J = " + missing);

    out.J_first = first;
    for (int J = first; J <= last; ++J)
    {
        const complex s = block.at(J, omega_prime, omega);
        out.values.push_back(J % 2 == 0 ? s : -s);
    }
    return out;
}

/// Continuous argument of `seq`: the first element keeps its principal value,
/// each later element takes the 2 pi n branch chosen by `mode`.
inline PhaseSequence unwrap_arg(const std::vector<complex>& seq, int J_first = 0,
                                UnwrapMode mode = UnwrapMode::two_sided)
{
    PhaseSequence out;
    out.J_first = J_first;
    out.args.reserve(seq.size());
    out.magnitudes.reserve(seq.size());
    for (std::size_t i = 0; i < seq.size(); ++i)
    {
        const int J = J_first + static_cast<int>(i);
        const double mag = std::abs(seq[i]);
        if (!(mag >= unwrap_min_magnitude))
            throw NumericalError("unwrap: phase undefined at J=" + std::to_string(J) + " (|S| = 0)");
        const double principal = std::arg(seq[i]);
        out.magnitudes.push_back(mag);
        if (i == 0)
        {
            out.args.push_back(principal);
            continue;
        }
        const double prev = out.args.back();
        // Reduce the raw step into [-pi, pi).
        double delta = std::remainder(principal - prev, 2.0 * pi);
        if (delta >= pi)
            delta -= 2.0 * pi;
        if (mode == UnwrapMode::two_sided && std::abs(std::abs(delta) - pi) <= unwrap_tie_tolerance)
            throw NumericalError("unwrap: half-turn tie between J=" + std::to_string(J - 1) + " and J=" +
                                 std::to_string(J) + " (|delta arg| = pi)");
        out.args.push_back(prev + delta);
    }
    return out;
}

inline PhaseSequence unwrap_arg(const ModifiedSequence& seq, UnwrapMode mode = UnwrapMode::two_sided)
{
    PhaseSequence out = unwrap_arg(seq.values, seq.J_first, mode);
    out.omega_prime = seq.omega_prime;
    out.omega = seq.omega;
    return out;
}

/// d/dJ of a unit-spaced sequence: central differences inside, three-point
/// one-sided differences at both ends (two-point when only two samples).
/// Exact for polynomials up to degree 2.
inline std::vector<double> unit_step_derivative(const std::vector<double>& y)
{
    const std::size_t n = y.size();
    if (n < 2)
        throw DomainError("derivative needs at least two J values");
    std::vector<double> d(n);
    if (n == 2)
    {
        d[0] = d[1] = y[1] - y[0];
        return d;
    }
    for (std::size_t i = 1; i + 1 < n; ++i)
        d[i] = 0.5 * (y[i + 1] - y[i - 1]);
    d[0] = 0.5 * (-3.0 * y[0] + 4.0 * y[1] - y[2]);
    d[n - 1] = 0.5 * (3.0 * y[n - 1] - 4.0 * y[n - 2] + y[n - 3]);
    return d;
}

/// Quantum deflection function Theta~(J) = d[arg S~(J)]/dJ.
inline CqdfCurve cqdf(const SMatrixBlock& block, int omega_prime, int omega,
                      UnwrapMode mode = UnwrapMode::two_sided)
{
    const auto phase = unwrap_arg(modified_smatrix(block, omega_prime, omega), mode);
    CqdfCurve curve;
    curve.theta_tilde = unit_step_derivative(phase.args);
    curve.magnitudes = phase.magnitudes;
    for (std::size_t i = 0; i < phase.args.size(); ++i)
        curve.J_values.push_back(phase.J_first + static_cast<int>(i));
    return curve;
}

/// Folds an angle into [0, pi] by reflection at 0 and pi.
inline double fold_angle(double angle)
{
    double a = std::fmod(std::abs(angle), 2.0 * pi);
    return a > pi ? 2.0 * pi - a : a;
}

/// Scattering angle predicted by Theta~ for amplitudes built with d^J(theta).
/// The e^{i pi J} factor offsets Theta~ by pi from the stationary-phase
/// deflection, so the angle is fold(|Theta~ - pi|).
inline double cqdf_scattering_angle(double theta_tilde)
{
    return fold_angle(theta_tilde - pi);
}

} // namespace qdf

#endif
