#ifndef QDF_CLI_HPP
#define QDF_CLI_HPP

#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <iterator>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "qdf/angular_grid.hpp"
#include "qdf/cqdf.hpp"
#include "qdf/csv.hpp"
#include "qdf/errors.hpp"
#include "qdf/observables.hpp"
#include "qdf/qct.hpp"
#include "qdf/qmdf.hpp"
#include "qdf/smatrix.hpp"
#include "qdf/synth.hpp"

namespace qdf::cli
{

inline constexpr const char* version = "1.0.0";

enum ExitCode : int
{
    exit_ok = 0,
    exit_input_error = 1,
    exit_numerical_error = 2
};

struct RunConfig
{
    std::string command;
    std::vector<std::string> inputs;
    double grid_deg = 0.25;
    std::optional<std::size_t> grid_points; ///< overrides grid_deg when set
    std::optional<int> jmin;
    std::optional<int> jmax;
    std::optional<int> omega_prime;
    int omega = 0;
    bool smooth = false;
    std::optional<double> smooth_j;
    std::optional<double> smooth_theta_deg;
    bool no_sin_theta = false;
    UnwrapMode unwrap = UnwrapMode::two_sided;
    std::optional<std::uint64_t> seed;
    std::string out; ///< empty or "-" writes to stdout
    std::string method = "legendre";
    int order_m = 20;
    int order_n = 20;
    bool renormalize_boundary = false;

    void validate() const
    {
        if (!(grid_deg > 0.0))
            throw ValidationError("--grid-deg must be > 0");
        if (grid_points && *grid_points < 2)
            throw ValidationError("--grid-points must be >= 2");
        if (inputs.empty() || inputs.front().empty())
            throw ValidationError("command '" + command + "' needs an input path");
        if (jmin && jmax && *jmin > *jmax)
            throw ValidationError("--jmin must not exceed --jmax");
        if (smooth_j && *smooth_j < 0.0)
            throw ValidationError("--smooth-j must be >= 0");
        if (smooth_theta_deg && *smooth_theta_deg < 0.0)
            throw ValidationError("--smooth-theta-deg must be >= 0");
        if (method != "legendre" && method != "gaussian")
            throw ValidationError("--method must be legendre or gaussian");
        if (order_m < 0 || order_n < 0)
            throw ValidationError("expansion orders must be >= 0");
    }
};

inline const std::vector<std::string>& commands()
{
    static const std::vector<std::string> names = {
        "dcs",     "opacity",    "sigma-j",     "qmdf",   "qmdf-helicity", "random-phase", "sum-j",
        "partial-dcs", "cqdf",   "qct-df",      "qct-dcs", "qct-sigma-j",  "synth"};
    return names;
}

namespace detail
{

inline std::string read_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw ValidationError("cannot open input '" + path + "'");
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline std::string unwrap_name(UnwrapMode m) { return m == UnwrapMode::two_sided ? "two-sided" : "one-sided"; }

class Emitter
{
public:
    Emitter(std::ostream& out, const RunConfig& cfg, const std::string& input_bytes) : out_(out)
    {
        out_ << "# qdf " << version << " command=" << cfg.command << " input=" << cfg.inputs.front()
             << " fnv1a64=" << csv::hex64(csv::fnv1a(input_bytes)) << '\n';
        out_ << "# params";
        if (cfg.grid_points)
            out_ << " grid_points=" << *cfg.grid_points;
        else
            out_ << " grid_deg=" << csv::real(cfg.grid_deg);
        if (cfg.jmin)
            out_ << " jmin=" << *cfg.jmin;
        if (cfg.jmax)
            out_ << " jmax=" << *cfg.jmax;
        if (cfg.omega_prime)
            out_ << " omega_prime=" << *cfg.omega_prime;
        out_ << " omega=" << cfg.omega << " sin_theta=" << (cfg.no_sin_theta ? "divided" : "included")
             << " unwrap=" << unwrap_name(cfg.unwrap) << " method=" << cfg.method << " order_m=" << cfg.order_m
             << " order_n=" << cfg.order_n;
        if (cfg.smooth || cfg.smooth_j || cfg.smooth_theta_deg)
            out_ << " smoothing=on";
        if (cfg.seed)
            out_ << " seed=" << *cfg.seed;
        out_ << '\n';
    }

    void comment(const std::string& text) { out_ << "# " << text << '\n'; }
    void header(const std::string& columns) { out_ << columns << '\n'; }

    template <typename... Fields>
    void row(const Fields&... fields)
    {
        bool first = true;
        ((out_ << (first ? "" : ",") << fields, first = false), ...);
        out_ << '\n';
    }

private:
    std::ostream& out_;
};

inline void emit_map(Emitter& em, const DeflectionMap& map, int J_lo, int J_hi, bool divide_sin)
{
    if (divide_sin)
    {
        em.comment("value = Q/sin(theta); rows at theta = 0 or 180 deg are set to 0 and flagged endpoint=1");
        em.header("theta_deg,J,value,endpoint");
    }
    else
        em.header("theta_deg,J,value");
    for (std::size_t i = 0; i < map.theta_count(); ++i)
    {
        const double t = map.grid()[i];
        const double s = sin_theta(t);
        for (int J = J_lo; J <= J_hi; ++J)
        {
            if (!divide_sin)
                em.row(csv::angle(rad_to_deg(t)), J, csv::real(map(i, J)));
            else if (s == 0.0)
                em.row(csv::angle(rad_to_deg(t)), J, csv::real(0.0), 1);
            else
                em.row(csv::angle(rad_to_deg(t)), J, csv::real(map(i, J) / s), 0);
        }
    }
}

inline void emit_curve(Emitter& em, const AngularCurve& curve, bool divide_sin)
{
    if (divide_sin)
    {
        em.comment("value = sum/sin(theta); rows at theta = 0 or 180 deg are set to 0 and flagged endpoint=1");
        em.header("theta_deg,value,endpoint");
    }
    else
        em.header("theta_deg,value");
    for (std::size_t i = 0; i < curve.grid.size(); ++i)
    {
        const double t = curve.grid[i];
        const double s = sin_theta(t);
        if (!divide_sin)
            em.row(csv::angle(rad_to_deg(t)), csv::real(curve.values[i]));
        else if (s == 0.0)
            em.row(csv::angle(rad_to_deg(t)), csv::real(0.0), 1);
        else
            em.row(csv::angle(rad_to_deg(t)), csv::real(curve.values[i] / s), 0);
    }
}

inline AngularGrid make_grid(const RunConfig& cfg)
{
    return cfg.grid_points ? AngularGrid::uniform(*cfg.grid_points) : AngularGrid::from_step_deg(cfg.grid_deg);
}

inline JWindow window_for(const RunConfig& cfg, int J_max)
{
    JWindow w{cfg.jmin.value_or(0), cfg.jmax.value_or(J_max)};
    qdf::detail::check_window(w, J_max);
    return w;
}

inline DeflectionMap maybe_smooth(const RunConfig& cfg, const DeflectionMap& map)
{
    if (!cfg.smooth && !cfg.smooth_j && !cfg.smooth_theta_deg)
        return map;
    const double sJ = cfg.smooth_j.value_or(default_smooth_J);
    const double st = cfg.smooth_theta_deg ? deg_to_rad(*cfg.smooth_theta_deg) : default_smooth_theta;
    return smooth_map(map, sJ, st);
}

inline void run_quantum(const RunConfig& cfg, const std::string& bytes, std::ostream& out, std::ostream& err)
{
    const SMatrixBlock block = load_smatrix_string(bytes);
    for (const auto& v : validate_unitarity(block))
        err << "warning: |S| = " << v.magnitude << " > 1 at " << to_string(v.key) << '\n';
    const AngularGrid grid = make_grid(cfg);
    Emitter em(out, cfg, bytes);
    const std::string area_unit = block.header().length_unit() + "^2";
    const auto& c = cfg.command;

    if (c == "dcs")
    {
        em.comment("dcs in " + area_unit + "/sr");
        const auto curve = dcs(block, grid);
        em.header("theta_deg,dcs,dcs_sin_theta");
        for (std::size_t i = 0; i < grid.size(); ++i)
            em.row(csv::angle(rad_to_deg(grid[i])), csv::real(curve.values[i]),
                   csv::real(curve.values[i] * sin_theta(grid[i])));
    }
    else if (c == "opacity" || c == "sigma-j")
    {
        const auto w = window_for(cfg, block.J_max());
        if (c == "sigma-j")
            em.comment("sigma_J in " + area_unit + "; integral cross section = " +
                       csv::real(integral_cross_section(block)));
        em.header(c == "opacity" ? "J,opacity" : "J,sigma_J");
        for (int J = w.J_lo; J <= w.J_hi; ++J)
            em.row(J, csv::real(c == "opacity" ? opacity(block, J) : partial_cross_section(block, J)));
    }
    else if (c == "qmdf" || c == "qmdf-helicity" || c == "random-phase")
    {
        DeflectionMap map;
        if (c == "qmdf")
            map = qmdf_map(block, grid);
        else if (c == "random-phase")
            map = random_phase_map(block, grid);
        else
        {
            if (!cfg.omega_prime)
                throw ValidationError("qmdf-helicity needs --omega-prime");
            map = qmdf_helicity_map(block, *cfg.omega_prime, grid);
        }
        map = maybe_smooth(cfg, map);
        const auto w = window_for(cfg, block.J_max());
        em.comment("Q_r in " + area_unit + " per radian per J");
        emit_map(em, map, w.J_lo, w.J_hi, cfg.no_sin_theta);
    }
    else if (c == "sum-j")
    {
        const auto map = maybe_smooth(cfg, qmdf_map(block, grid));
        emit_curve(em, sum_over_j(map, window_for(cfg, block.J_max())), cfg.no_sin_theta);
    }
    else if (c == "partial-dcs")
    {
        em.comment("partial dcs in " + area_unit + "/sr");
        emit_curve(em, partial_dcs(block, window_for(cfg, block.J_max()), grid), false);
    }
    else if (c == "cqdf")
    {
        const auto curve = cqdf(block, cfg.omega_prime.value_or(0), cfg.omega, cfg.unwrap);
        em.header("J,theta_tilde_rad,theta_tilde_deg,magnitude");
        for (std::size_t i = 0; i < curve.J_values.size(); ++i)
        {
            const int J = curve.J_values[i];
            if ((cfg.jmin && J < *cfg.jmin) || (cfg.jmax && J > *cfg.jmax))
                continue;
            em.row(J, csv::real(curve.theta_tilde[i]), csv::angle(rad_to_deg(curve.theta_tilde[i])),
                   csv::real(curve.magnitudes[i]));
        }
    }
}

inline void run_classical(const RunConfig& cfg, const std::string& bytes, std::ostream& out, std::ostream& err)
{
    std::istringstream in(bytes);
    const TrajectoryEnsemble ens = load_trajectories(in);
    const AngularGrid grid = make_grid(cfg);
    Emitter em(out, cfg, bytes);
    const auto& c = cfg.command;

    KernelConfig kernel;
    kernel.s_J = cfg.smooth_j.value_or(default_kernel_J_width(ens));
    kernel.s_theta = deg_to_rad(cfg.smooth_theta_deg.value_or(2.0));
    kernel.renormalize_boundary = cfg.renormalize_boundary;
    const bool gaussian = cfg.method == "gaussian";
    if (gaussian)
    {
        const auto fJ = kernel_fwhm(kernel.s_J);
        const auto ft = kernel_fwhm(rad_to_deg(kernel.s_theta));
        em.comment("kernel s_J=" + csv::real(kernel.s_J) + " (FWHM s*ln2=" + csv::real(fJ.s_times_ln2) +
                   ", 2*sqrt(ln2)*s=" + csv::real(fJ.gaussian_standard) + ") s_theta_deg=" +
                   csv::real(rad_to_deg(kernel.s_theta)) + " (FWHM s*ln2=" + csv::real(ft.s_times_ln2) +
                   ", 2*sqrt(ln2)*s=" + csv::real(ft.gaussian_standard) + ")");
    }
    else
    {
        const LegendreDF df(ens, cfg.order_m, cfg.order_n);
        for (const auto& w : gibbs_warnings(df, grid))
        {
            err << "warning: " << w << '\n';
            em.comment("warning: " + w);
        }
    }

    if (c == "qct-df")
    {
        const auto map = gaussian ? qct_df_gaussian(ens, kernel, grid)
                                  : qct_df_legendre(ens, cfg.order_m, cfg.order_n, grid);
        const int J_hi = std::min(cfg.jmax.value_or(map.J_max()), map.J_max());
        const int J_lo = std::max(cfg.jmin.value_or(0), 0);
        emit_map(em, map, J_lo, J_hi, cfg.no_sin_theta);
    }
    else if (c == "qct-dcs")
    {
        emit_curve(em, qct_dcs_legendre(ens, cfg.order_m, grid), false);
    }
    else if (c == "qct-sigma-j")
    {
        std::vector<double> Js;
        for (int J = cfg.jmin.value_or(0); J <= std::min<double>(cfg.jmax.value_or(1 << 30), ens.J_max); ++J)
            Js.push_back(J);
        const auto v = gaussian ? qct_sigma_j_gaussian(ens, kernel, Js) : qct_sigma_j_legendre(ens, cfg.order_n, Js);
        em.header("J,sigma_J");
        for (std::size_t i = 0; i < Js.size(); ++i)
            em.row(static_cast<int>(Js[i]), csv::real(v[i]));
    }
}

inline void run_synth(const RunConfig& cfg, const std::string& bytes, std::ostream& out)
{
    std::istringstream in(bytes);
    const ModelSpec spec = load_model_spec(in);
    out << "# qdf " << version << " command=synth input=" << cfg.inputs.front()
        << " fnv1a64=" << csv::hex64(csv::fnv1a(bytes)) << '\n';
    if (spec.classical)
    {
        const auto seed = cfg.seed.value_or(spec.seed);
        out << "# seed " << seed << " count " << spec.count << '\n';
        save_trajectories(synth_trajectories(spec.trajectories, spec.count, seed), out);
    }
    else
        save_smatrix(synth_smatrix(spec.phase, spec.k, 0, spec.J_max, spec.k_unit), out);
}

} // namespace detail

/// Runs one command. Output goes to `out`; diagnostics to `err`.
inline int run(const RunConfig& cfg, std::ostream& out, std::ostream& err)
{
    try
    {
        cfg.validate();
        const std::string bytes = detail::read_file(cfg.inputs.front());
        const auto& c = cfg.command;
        if (c == "synth")
            detail::run_synth(cfg, bytes, out);
        else if (c.rfind("qct-", 0) == 0)
            detail::run_classical(cfg, bytes, out, err);
        else if (std::find(commands().begin(), commands().end(), c) != commands().end())
            detail::run_quantum(cfg, bytes, out, err);
        else
            throw ValidationError("unknown command '" + c + "'");
        return exit_ok;
    }
    catch (const NumericalError& e)
    {
        err << "qdf: numerical failure: " << e.what() << '\n';
        return exit_numerical_error;
    }
    catch (const Error& e)
    {
        err << "qdf: " << e.what() << '\n';
        return exit_input_error;
    }
}

/// Runs one command, writing to cfg.out (stdout when empty or "-").
inline int run(const RunConfig& cfg)
{
    if (cfg.out.empty() || cfg.out == "-")
        return run(cfg, std::cout, std::cerr);
    std::ostringstream buffer;
    const int code = run(cfg, buffer, std::cerr);
    if (code != exit_ok)
        return code;
    std::ofstream file(cfg.out, std::ios::binary);
    if (!file)
    {
        std::cerr << "qdf: cannot write '" << cfg.out << "'\n";
        return exit_input_error;
    }
    file << buffer.str();
    return exit_ok;
}

} // namespace qdf::cli

#endif
