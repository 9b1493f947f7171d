#ifndef QDF_QCT_HPP
#define QDF_QCT_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <istream>
#include <map>
#include <numeric>
#include <ostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "qdf/angular_grid.hpp"
#include "qdf/errors.hpp"
#include "qdf/legendre.hpp"
#include "qdf/observables.hpp"
#include "qdf/qmdf.hpp"
#include "qdf/smatrix.hpp"

namespace qdf
{

struct TrajectoryRecord
{
    double w = 1.0;     ///< weight, >= 0
    double J = 0.0;     ///< total angular momentum, may be non-integer
    double theta = 0.0; ///< scattering angle, radians
};

/// Weighted trajectory outcomes plus the ensemble-level normalization.
struct TrajectoryEnsemble
{
    std::vector<TrajectoryRecord> records;
    std::map<int, double> N_tot_by_J; ///< total trajectories per discrete J (opacity only)
    double sigma_r = 1.0;             ///< integral cross section the shapes are normalized to
    double J_max = 0.0;

    double weight_sum() const
    {
        double s = 0.0;
        for (const auto& r : records)
            s += r.w;
        return s;
    }

    void validate() const
    {
        if (!(J_max > 0.0))
            throw ValidationError("trajectory ensemble: J_max must be > 0");
        if (!(sigma_r >= 0.0))
            throw ValidationError("trajectory ensemble: sigma_r must be >= 0");
        for (std::size_t i = 0; i < records.size(); ++i)
        {
            const auto& r = records[i];
            if (!(r.w >= 0.0) || !std::isfinite(r.w))
                throw ValidationError("record " + std::to_string(i) + ": weight must be finite and >= 0");
            if (!(r.J >= 0.0 && r.J <= J_max))
                throw ValidationError("record " + std::to_string(i) + ": J outside [0, J_max]");
            if (!(r.theta >= 0.0 && r.theta <= pi))
                throw ValidationError("record " + std::to_string(i) + ": theta outside [0, pi]");
        }
    }
};

namespace detail
{

inline double require_weight_sum(const TrajectoryEnsemble& ens)
{
    const double s = ens.weight_sum();
    if (!(s > 0.0))
        throw DomainError("trajectory ensemble: sum of weights must be > 0");
    return s;
}

inline int J_axis_count(const TrajectoryEnsemble& ens)
{
    return static_cast<int>(std::floor(ens.J_max)) + 1;
}

} // namespace detail

/// Reduced variable x(J) = 2 J(J+1) / (J_max(J_max+1)) - 1, mapping [0, J_max] onto [-1, 1].
inline double reduced_variable(double J, double J_max)
{
    return 2.0 * J * (J + 1.0) / (J_max * (J_max + 1.0)) - 1.0;
}

/// P_r(J) = S_w(J) / N_tot(J); S_w(J) sums the weights of records at that integer J.
inline double qct_opacity(const TrajectoryEnsemble& ens, int J)
{
    const auto it = ens.N_tot_by_J.find(J);
    if (it == ens.N_tot_by_J.end() || !(it->second > 0.0))
        throw DomainError("opacity: N_tot(J=" + std::to_string(J) + ") is zero or missing");
    double sw = 0.0;
    for (const auto& r : ens.records)
        if (std::abs(r.J - J) < 1e-9)
            sw += r.w;
    return sw / it->second;
}

/// Legendre-moment coefficients of an ensemble, up to orders M (theta) and N (J):
///   a_m     = (2m+1)/2 <P_m(cos theta)>
///   b_n     = (2n+1)/2 <P_n(x)>
///   alpha_mn = (2m+1)(2n+1)/4 <P_m(cos theta) P_n(x)>
/// with weighted averages over the records.
class LegendreDF
{
public:
    LegendreDF() = default;

    LegendreDF(const TrajectoryEnsemble& ens, int M, int N) : M_(M), N_(N), sigma_r_(ens.sigma_r), J_max_(ens.J_max)
    {
        if (M < 0 || N < 0)
            throw DomainError("Legendre orders must be >= 0");
        if (!(ens.J_max > 0.0))
            throw DomainError("Legendre expansion needs J_max > 0");
        const double sw = detail::require_weight_sum(ens);
        a_.assign(static_cast<std::size_t>(M) + 1, 0.0);
        b_.assign(static_cast<std::size_t>(N) + 1, 0.0);
        alpha_.assign(a_.size() * b_.size(), 0.0);
        std::vector<double> pm(a_.size());
        std::vector<double> pn(b_.size());
        for (const auto& r : ens.records)
        {
            if (r.w == 0.0)
                continue;
            legendre_p_all(std::cos(r.theta), pm);
            legendre_p_all(reduced_variable(r.J, ens.J_max), pn);
            for (std::size_t m = 0; m < pm.size(); ++m)
            {
                a_[m] += r.w * pm[m];
                const double wpm = r.w * pm[m];
                double* arow = &alpha_[m * b_.size()];
                for (std::size_t n = 0; n < pn.size(); ++n)
                    arow[n] += wpm * pn[n];
            }
            for (std::size_t n = 0; n < pn.size(); ++n)
                b_[n] += r.w * pn[n];
        }
        for (std::size_t m = 0; m < a_.size(); ++m)
        {
            a_[m] *= (2.0 * m + 1.0) / 2.0 / sw;
            for (std::size_t n = 0; n < b_.size(); ++n)
                alpha_[m * b_.size() + n] *= (2.0 * m + 1.0) * (2.0 * n + 1.0) / 4.0 / sw;
        }
        for (std::size_t n = 0; n < b_.size(); ++n)
            b_[n] *= (2.0 * n + 1.0) / 2.0 / sw;
        // Zeroth moments are exact by construction.
        a_[0] = 0.5;
        b_[0] = 0.5;
        alpha_[0] = 0.25;
    }

    int M() const noexcept { return M_; }
    int N() const noexcept { return N_; }
    double sigma_r() const noexcept { return sigma_r_; }
    double J_max() const noexcept { return J_max_; }
    const std::vector<double>& a() const noexcept { return a_; }
    const std::vector<double>& b() const noexcept { return b_; }
    double alpha(int m, int n) const
    {
        return alpha_[static_cast<std::size_t>(m) * b_.size() + static_cast<std::size_t>(n)];
    }

    /// sigma_r(theta) = sigma_r/(2 pi) sum_m a_m P_m(cos theta).
    double dcs(double theta) const { return sigma_r_ / (2.0 * pi) * legendre_series(a_, std::cos(theta)); }

    /// sigma_r(J) = sigma_r 2(2J+1)/(J_max(J_max+1)) sum_n b_n P_n(x(J)).
    double sigma_j(double J) const
    {
        return sigma_r_ * jacobian(J) * legendre_series(b_, reduced_variable(J, J_max_));
    }

    /// sigma_r(theta, J) = sigma_r/(2 pi) 2(2J+1)/(J_max(J_max+1)) sin(theta)
    ///                     sum_mn alpha_mn P_m(cos theta) P_n(x(J)).
    double density(double theta, double J) const
    {
        std::vector<double> coef(a_.size());
        const double x = reduced_variable(J, J_max_);
        for (std::size_t m = 0; m < a_.size(); ++m)
            coef[m] = legendre_series(std::span<const double>(&alpha_[m * b_.size()], b_.size()), x);
        return sigma_r_ / (2.0 * pi) * jacobian(J) * sin_theta(theta) * legendre_series(coef, std::cos(theta));
    }

private:
    double jacobian(double J) const { return 2.0 * (2.0 * J + 1.0) / (J_max_ * (J_max_ + 1.0)); }

    int M_ = 0;
    int N_ = 0;
    double sigma_r_ = 0.0;
    double J_max_ = 0.0;
    std::vector<double> a_;
    std::vector<double> b_;
    std::vector<double> alpha_;
};

/// J-partial cross section from the Legendre moments of x(J), order N.
inline std::vector<double> qct_sigma_j_legendre(const TrajectoryEnsemble& ens, int N, std::span<const double> J_values)
{
    const LegendreDF df(ens, 0, N);
    std::vector<double> out(J_values.size());
    for (std::size_t i = 0; i < J_values.size(); ++i)
        out[i] = df.sigma_j(J_values[i]);
    return out;
}

inline AngularCurve qct_dcs_legendre(const TrajectoryEnsemble& ens, int M, const AngularGrid& grid)
{
    const LegendreDF df(ens, M, 0);
    AngularCurve curve{grid, std::vector<double>(grid.size())};
    for (std::size_t i = 0; i < grid.size(); ++i)
        curve.values[i] = df.dcs(grid[i]);
    return curve;
}

/// Joint deflection function sigma_r(theta, J) from the double Legendre
/// expansion, on integer J = 0..floor(J_max). Values include sin(theta).
inline DeflectionMap qct_df_legendre(const TrajectoryEnsemble& ens, int M, int N, const AngularGrid& grid)
{
    const LegendreDF df(ens, M, N);
    DeflectionMap map(grid, detail::J_axis_count(ens));
    std::vector<double> coef(df.a().size());
    std::vector<double> brow(df.b().size());
    for (int J = 0; J < map.J_count(); ++J)
    {
        const double x = reduced_variable(J, ens.J_max);
        for (int m = 0; m <= M; ++m)
        {
            for (int n = 0; n <= N; ++n)
                brow[static_cast<std::size_t>(n)] = df.alpha(m, n);
            coef[static_cast<std::size_t>(m)] = legendre_series(brow, x);
        }
        const double pref = ens.sigma_r / (2.0 * pi) * 2.0 * (2.0 * J + 1.0) / (ens.J_max * (ens.J_max + 1.0));
        for (std::size_t i = 0; i < grid.size(); ++i)
            map(i, J) = pref * sin_theta(grid[i]) * legendre_series(coef, std::cos(grid[i]));
    }
    return map;
}

/// Gibbs undershoot check: reports each reconstructed marginal that dips
/// below -2% of its maximum.
inline std::vector<std::string> gibbs_warnings(const LegendreDF& df, const AngularGrid& grid)
{
    std::vector<std::string> warnings;
    auto check = [&](const char* name, const std::vector<double>& v) {
        const double hi = *std::max_element(v.begin(), v.end());
        const double lo = *std::min_element(v.begin(), v.end());
        if (hi > 0.0 && lo < -0.02 * hi)
        {
            char buf[160];
            std::snprintf(buf, sizeof buf, "%s expansion undershoots to %.3g%% of its maximum (Gibbs oscillation)",
                          name, 100.0 * lo / hi);
            warnings.emplace_back(buf);
        }
    };
    std::vector<double> dcs(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i)
        dcs[i] = df.dcs(grid[i]);
    check("DCS", dcs);
    const int nJ = static_cast<int>(std::floor(df.J_max()));
    std::vector<double> sj;
    for (int k = 0; k <= 4 * nJ; ++k)
        sj.push_back(df.sigma_j(0.25 * k));
    check("sigma(J)", sj);
    return warnings;
}

/// Gaussian kernel widths: G(u) = exp(-u^2/s^2)/(s sqrt(pi)).
struct KernelConfig
{
    double s_J = 2.0;
    double s_theta = deg_to_rad(2.0);
    bool renormalize_boundary = false; ///< rescale each kernel to unit mass inside the domain

    void validate() const
    {
        if (!(s_J > 0.0) || !(s_theta > 0.0))
            throw DomainError("kernel widths must be > 0");
    }
};

/// Full width at half maximum of G for width s, under both conventions in use.
struct KernelFwhm
{
    double s_times_ln2 = 0.0;       ///< s = FWHM / ln 2
    double gaussian_standard = 0.0; ///< FWHM = 2 sqrt(ln 2) s
};

inline KernelFwhm kernel_fwhm(double s)
{
    return {s * std::log(2.0), 2.0 * std::sqrt(std::log(2.0)) * s};
}

/// Twice the mean spacing of consecutive distinct J values.
inline double default_kernel_J_width(const TrajectoryEnsemble& ens)
{
    std::vector<double> js;
    for (const auto& r : ens.records)
        js.push_back(r.J);
    std::sort(js.begin(), js.end());
    js.erase(std::unique(js.begin(), js.end()), js.end());
    if (js.size() < 2)
        return 1.0;
    return 2.0 * (js.back() - js.front()) / static_cast<double>(js.size() - 1);
}

namespace detail
{

inline double gaussian_kernel(double u, double s)
{
    const double x = u / s;
    return std::exp(-x * x) / (s * std::sqrt(pi));
}

/// Mass of G(. - c) inside [lo, hi].
inline double gaussian_mass(double c, double s, double lo, double hi)
{
    return 0.5 * (std::erf((hi - c) / s) - std::erf((lo - c) / s));
}

} // namespace detail

/// sigma_r(J) = (sigma_r / S_w) sum_i w_i G(J - J_i).
inline std::vector<double> qct_sigma_j_gaussian(const TrajectoryEnsemble& ens, const KernelConfig& config,
                                                std::span<const double> J_values)
{
    config.validate();
    const double sw = detail::require_weight_sum(ens);
    std::vector<double> out(J_values.size(), 0.0);
    for (const auto& r : ens.records)
    {
        if (r.w == 0.0)
            continue;
        double w = r.w;
        if (config.renormalize_boundary)
            w /= detail::gaussian_mass(r.J, config.s_J, 0.0, ens.J_max);
        for (std::size_t i = 0; i < J_values.size(); ++i)
            out[i] += w * detail::gaussian_kernel(J_values[i] - r.J, config.s_J);
    }
    for (double& v : out)
        v *= ens.sigma_r / sw;
    return out;
}

/// sigma_r(theta, J) = sigma_r/(2 pi) S_w^-1 sum_i w_i G(J - J_i) G(theta - theta_i)
/// on integer J = 0..floor(J_max). Kernels are truncated at 8 widths.
inline DeflectionMap qct_df_gaussian(const TrajectoryEnsemble& ens, const KernelConfig& config,
                                     const AngularGrid& grid)
{
    config.validate();
    const double sw = detail::require_weight_sum(ens);
    DeflectionMap map(grid, detail::J_axis_count(ens));
    const auto thetas = grid.thetas();
    const int nJ = map.J_count();
    std::vector<double> gJ;
    for (const auto& r : ens.records)
    {
        if (r.w == 0.0)
            continue;
        double w = r.w;
        if (config.renormalize_boundary)
            w /= detail::gaussian_mass(r.J, config.s_J, 0.0, ens.J_max) *
                 detail::gaussian_mass(r.theta, config.s_theta, 0.0, pi);
        const int J_lo = std::max(0, static_cast<int>(std::floor(r.J - 8.0 * config.s_J)));
        const int J_hi = std::min(nJ - 1, static_cast<int>(std::ceil(r.J + 8.0 * config.s_J)));
        if (J_lo > J_hi)
            continue;
        gJ.resize(static_cast<std::size_t>(J_hi - J_lo + 1));
        for (int J = J_lo; J <= J_hi; ++J)
            gJ[static_cast<std::size_t>(J - J_lo)] = w * detail::gaussian_kernel(J - r.J, config.s_J);
        const auto t_lo = std::lower_bound(thetas.begin(), thetas.end(), r.theta - 8.0 * config.s_theta);
        const auto t_hi = std::upper_bound(thetas.begin(), thetas.end(), r.theta + 8.0 * config.s_theta);
        for (auto t = t_lo; t != t_hi; ++t)
        {
            const auto i = static_cast<std::size_t>(t - thetas.begin());
            const double gt = detail::gaussian_kernel(*t - r.theta, config.s_theta);
            auto row = map.row(i);
            for (int J = J_lo; J <= J_hi; ++J)
                row[static_cast<std::size_t>(J)] += gt * gJ[static_cast<std::size_t>(J - J_lo)];
        }
    }
    const double norm = ens.sigma_r / (2.0 * pi) / sw;
    for (double& v : map.values())
        v *= norm;
    return map;
}

/// J values with J(J+1) = xi J_max(J_max+1), xi uniform in [0, 1]; the same
/// as sampling the impact parameter as b = xi^{1/2} b_max.
inline double ell_from_uniform(double xi, double J_max)
{
    return 0.5 * (std::sqrt(1.0 + 4.0 * xi * J_max * (J_max + 1.0)) - 1.0);
}

inline std::vector<double> sample_ell_continuous(double J_max, std::size_t count, std::uint64_t seed)
{
    if (count == 0)
        throw DomainError("sample count must be > 0");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> uniform(0.0, 1.0);
    std::vector<double> out(count);
    for (auto& J : out)
        J = ell_from_uniform(uniform(rng), J_max);
    return out;
}

/// Reads a trajectory file:
///
///     # sigma_r = <value>
///     # J_max = <value>
///     # N_tot <J> <count>        (optional, repeatable)
///     <w> <J> <theta_deg>
///     ...
///
/// Other comment lines are ignored.
inline TrajectoryEnsemble load_trajectories(std::istream& in)
{
    TrajectoryEnsemble ens;
    bool have_sigma = false;
    bool have_jmax = false;
    std::string raw;
    std::size_t lineno = 0;
    while (std::getline(in, raw))
    {
        ++lineno;
        const auto hash = raw.find('#');
        if (hash != std::string::npos)
        {
            std::string c = raw.substr(hash + 1);
            for (char& ch : c)
                if (ch == '=' || ch == ':')
                    ch = ' ';
            std::istringstream cs(c);
            std::string key;
            cs >> key;
            if (key == "sigma_r" || key == "J_max")
            {
                std::string value;
                if (!(cs >> value))
                    throw ParseError(lineno, "missing value for " + key);
                const double v = detail::parse_double_token(value, lineno);
                (key == "sigma_r" ? ens.sigma_r : ens.J_max) = v;
                (key == "sigma_r" ? have_sigma : have_jmax) = true;
            }
            else if (key == "N_tot")
            {
                std::string js;
                std::string ns;
                if (!(cs >> js >> ns))
                    throw ParseError(lineno, "expected '# N_tot <J> <count>'");
                const int J = detail::parse_int_token(js, lineno);
                if (ens.N_tot_by_J.contains(J))
                    throw ValidationError("line " + std::to_string(lineno) + ": duplicate N_tot for J=" + js);
                ens.N_tot_by_J[J] = detail::parse_double_token(ns, lineno);
            }
        }
        const std::string line = detail::strip_comment(raw);
        if (line.empty())
            continue;
        std::istringstream ss(line);
        std::vector<std::string> tokens;
        for (std::string t; ss >> t;)
            tokens.push_back(t);
        if (tokens.size() != 3)
            throw ParseError(lineno, "expected '<w> <J> <theta_deg>'");
        ens.records.push_back({detail::parse_double_token(tokens[0], lineno),
                               detail::parse_double_token(tokens[1], lineno),
                               deg_to_rad(detail::parse_double_token(tokens[2], lineno))});
    }
    if (!have_sigma || !have_jmax)
        throw ParseError(lineno + 1, "trajectory header must define sigma_r and J_max");
    ens.validate();
    return ens;
}

inline void save_trajectories(const TrajectoryEnsemble& ens, std::ostream& out)
{
    char buf[128];
    std::snprintf(buf, sizeof buf, "# sigma_r = %.17g\n# J_max = %.17g\n", ens.sigma_r, ens.J_max);
    out << buf;
    for (const auto& [J, n] : ens.N_tot_by_J)
    {
        std::snprintf(buf, sizeof buf, "# N_tot %d %.17g\n", J, n);
        out << buf;
    }
    for (const auto& r : ens.records)
    {
        std::snprintf(buf, sizeof buf, "%.17g %.17g %.17g\n", r.w, r.J, rad_to_deg(r.theta));
        out << buf;
    }
}

} // namespace qdf

#endif
