#ifndef QDF_SYNTH_HPP
#define QDF_SYNTH_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <istream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "qdf/angular_grid.hpp"
#include "qdf/errors.hpp"
#include "qdf/qct.hpp"
#include "qdf/smatrix.hpp"

namespace qdf
{

/// A(J) = h exp(-(J-J0)^2 / (2 w^2)); constant h when w == 0.
struct AmplitudeProfile
{
    double J0 = 0.0;
    double width = 0.0;
    double height = 1.0;

    double operator()(double J) const
    {
        if (width <= 0.0)
            return height;
        const double u = (J - J0) / width;
        return height * std::exp(-0.5 * u * u);
    }
};

/// One stationary-phase contribution A(J) exp(2 i eta(J)), eta(J) = sum_p c_p J^p.
struct PhaseBranch
{
    AmplitudeProfile amplitude;
    std::vector<double> eta;

    double phase_shift(double J) const
    {
        double v = 0.0;
        for (std::size_t p = eta.size(); p-- > 0;)
            v = v * J + eta[p];
        return v;
    }
};

enum class PhaseModelKind
{
    linear,
    quadratic,
    two_branch
};

struct PhaseModel
{
    PhaseModelKind kind = PhaseModelKind::linear;
    std::vector<PhaseBranch> branches;
    /// Helicity-extended variant: j' > 0 replicates S^J_{00} onto every
    /// |Omega'| <= min(J, j') with phase offset Omega' * helicity_phase_step.
    int j_final = 0;
    double helicity_phase_step = 0.5;

    /// eta(J) = c J / 2, i.e. S^J = exp(i c J).
    static PhaseModel linear(double c, AmplitudeProfile amplitude = {})
    {
        return {PhaseModelKind::linear, {{amplitude, {0.0, 0.5 * c}}}, 0, 0.5};
    }

    /// eta(J) = -alpha J (J+1) / 2.
    static PhaseModel quadratic(double alpha, AmplitudeProfile amplitude = {})
    {
        return {PhaseModelKind::quadratic, {{amplitude, {0.0, -0.5 * alpha, -0.5 * alpha}}}, 0, 0.5};
    }

    void validate() const
    {
        const std::size_t want = kind == PhaseModelKind::two_branch ? 2 : 1;
        if (branches.size() != want)
            throw ValidationError("phase model: expected " + std::to_string(want) + " branch(es)");
        const std::size_t max_terms = kind == PhaseModelKind::linear ? 2 : 3;
        for (const auto& b : branches)
        {
            if (b.eta.size() > max_terms)
                throw ValidationError("phase model: eta polynomial degree too high for model kind");
            if (!(b.amplitude.height >= 0.0 && b.amplitude.height <= 1.0))
                throw ValidationError("phase model: amplitude height must lie in [0, 1]");
        }
        if (j_final < 0)
            throw ValidationError("phase model: j' must be >= 0");
    }
};

/// Entries S^J_{Omega' 0} = A(J) exp(2 i eta(J)) for J = 0..J_max (single
/// initial helicity, j = 0). Two-branch models add the branch amplitudes and
/// rescale by the summed heights when that exceeds one, so |S| <= 1.
inline SMatrixBlock synth_smatrix(const PhaseModel& model, double k, int j, int J_max,
                                  const std::string& k_unit = "1/angstrom")
{
    model.validate();
    if (j != 0)
        throw DomainError("synthetic S-matrices are built for j = 0");
    if (J_max < 2)
        throw DomainError("synthetic S-matrix needs J_max >= 2");

    double heights = 0.0;
    for (const auto& b : model.branches)
        heights += b.amplitude.height;
    const double scale = heights > 1.0 ? 1.0 / heights : 1.0;

    ChannelHeader header;
    header.k = k;
    header.k_unit = k_unit;
    header.j = 0;
    header.j_final = model.j_final;
    header.J_max = J_max;
    header.energy_label = "synthetic";

    std::vector<SMatrixBlock::Entry> entries;
    for (int J = 0; J <= J_max; ++J)
    {
        complex s{};
        for (const auto& b : model.branches)
            s += b.amplitude(J) * std::polar(1.0, 2.0 * b.phase_shift(J));
        s *= scale;
        if (std::abs(s) > 1.0 + 1e-12)
            throw ValidationError("phase model produced |S| > 1 at J=" + std::to_string(J));
        const int om = std::min(J, model.j_final);
        for (int mp = -om; mp <= om; ++mp)
            entries.push_back({HelicityKey{J, 0, mp}, s * std::polar(1.0, mp * model.helicity_phase_step)});
    }
    return SMatrixBlock(header, entries);
}

/// One deflection branch J -> theta: piecewise linear through (J, theta)
/// control points, or isotropic (cos theta uniform, independent of J).
struct DeflectionBranch
{
    std::vector<std::pair<double, double>> points;
    bool isotropic = false;
    double weight = 1.0;

    double operator()(double J) const
    {
        if (points.empty())
            return 0.0;
        if (J <= points.front().first)
            return std::clamp(points.front().second, 0.0, pi);
        for (std::size_t i = 1; i < points.size(); ++i)
            if (J <= points[i].first)
            {
                const auto [J0, t0] = points[i - 1];
                const auto [J1, t1] = points[i];
                const double t = t0 + (t1 - t0) * (J - J0) / (J1 - J0);
                return std::clamp(t, 0.0, pi);
            }
        return std::clamp(points.back().second, 0.0, pi);
    }
};

struct ClassicalModel
{
    std::vector<DeflectionBranch> branches;
    double noise = 0.0; ///< Gaussian standard deviation added to theta, radians
    double J_max = 1.0;
    double sigma_r = 1.0;

    void validate() const
    {
        if (branches.empty())
            throw ValidationError("classical model: no branches");
        double wsum = 0.0;
        for (const auto& b : branches)
        {
            if (!(b.weight >= 0.0))
                throw ValidationError("classical model: branch weights must be >= 0");
            if (!b.isotropic && b.points.empty())
                throw ValidationError("classical model: branch without control points");
            for (std::size_t i = 1; i < b.points.size(); ++i)
                if (!(b.points[i].first > b.points[i - 1].first))
                    throw ValidationError("classical model: control points must have increasing J");
            wsum += b.weight;
        }
        if (!(wsum > 0.0))
            throw ValidationError("classical model: all branch weights are zero");
        if (!(J_max > 0.0) || !(noise >= 0.0))
            throw ValidationError("classical model: J_max must be > 0 and noise >= 0");
    }
};

/// Unit-weight records: J from the continuous (2J+1)-weighted sampler, a
/// branch picked by weight, theta = branch(J) + N(0, noise) clipped to [0, pi].
inline TrajectoryEnsemble synth_trajectories(const ClassicalModel& model, std::size_t count, std::uint64_t seed)
{
    model.validate();
    if (count == 0)
        throw DomainError("trajectory count must be > 0");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> uniform(0.0, 1.0);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::vector<double> weights;
    for (const auto& b : model.branches)
        weights.push_back(b.weight);
    std::discrete_distribution<std::size_t> pick(weights.begin(), weights.end());

    TrajectoryEnsemble ens;
    ens.J_max = model.J_max;
    ens.sigma_r = model.sigma_r;
    ens.records.reserve(count);
    for (std::size_t i = 0; i < count; ++i)
    {
        const double J = std::min(ell_from_uniform(uniform(rng), model.J_max), model.J_max);
        const auto& branch = model.branches[pick(rng)];
        double theta = branch.isotropic ? std::acos(1.0 - 2.0 * uniform(rng)) : branch(J);
        if (model.noise > 0.0)
            theta += model.noise * normal(rng);
        ens.records.push_back({1.0, J, std::clamp(theta, 0.0, pi)});
    }
    return ens;
}

/// Parsed model spec file (key = value lines, '#' comments).
struct ModelSpec
{
    bool classical = false;
    PhaseModel phase;
    ClassicalModel trajectories;
    double k = 1.0;
    std::string k_unit = "1/angstrom";
    int J_max = 60;
    std::size_t count = 10000;
    std::uint64_t seed = 1;
};

namespace detail
{

inline std::vector<double> parse_number_list(const std::string& text, std::size_t line)
{
    std::vector<double> out;
    std::string s = text;
    std::replace(s.begin(), s.end(), ',', ' ');
    std::istringstream ss(s);
    for (std::string t; ss >> t;)
        out.push_back(parse_double_token(t, line));
    return out;
}

/// "J:theta_deg, J:theta_deg, ... ; ..." or "isotropic" per branch.
inline std::vector<DeflectionBranch> parse_branches(const std::string& text, std::size_t line)
{
    std::vector<DeflectionBranch> out;
    std::istringstream groups(text);
    for (std::string group; std::getline(groups, group, ';');)
    {
        group = strip_comment(group);
        if (group.empty())
            continue;
        DeflectionBranch b;
        if (group == "isotropic")
        {
            b.isotropic = true;
            out.push_back(b);
            continue;
        }
        std::replace(group.begin(), group.end(), ',', ' ');
        std::istringstream ss(group);
        for (std::string t; ss >> t;)
        {
            const auto colon = t.find(':');
            if (colon == std::string::npos)
                throw ParseError(line, "branch point '" + t + "' is not J:theta_deg");
            b.points.emplace_back(parse_double_token(t.substr(0, colon), line),
                                  deg_to_rad(parse_double_token(t.substr(colon + 1), line)));
        }
        out.push_back(b);
    }
    return out;
}

} // namespace detail

/// Reads a model spec. Keys:
///   kind = linear | quadratic | two-branch | classical
///   k, k_unit, Jmax, jp, helicity_phase      (S-matrix models)
///   J0, w, h, eta = c0,c1[,c2]               (first branch)
///   J0_2, w_2, h_2, eta_2                    (second branch, two-branch only)
///   alpha                                    (quadratic shorthand: eta = -alpha J(J+1)/2)
///   c                                        (linear shorthand: eta = c J / 2)
///   branches = J:deg,J:deg ; isotropic ; ... (classical)
///   weights = w1,w2,...  noise_deg, sigma_r, count, seed
inline ModelSpec load_model_spec(std::istream& in)
{
    std::map<std::string, std::pair<std::string, std::size_t>> kv;
    std::string raw;
    std::size_t lineno = 0;
    while (std::getline(in, raw))
    {
        ++lineno;
        const std::string line = detail::strip_comment(raw);
        if (line.empty())
            continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ParseError(lineno, "expected key = value");
        const std::string key = detail::strip_comment(line.substr(0, eq));
        const std::string value = detail::strip_comment(line.substr(eq + 1));
        if (!kv.emplace(key, std::make_pair(value, lineno)).second)
            throw ParseError(lineno, "duplicate key '" + key + "'");
    }
    auto has = [&](const std::string& key) { return kv.contains(key); };
    auto num = [&](const std::string& key, double fallback) {
        const auto it = kv.find(key);
        return it == kv.end() ? fallback : detail::parse_double_token(it->second.first, it->second.second);
    };
    auto integer = [&](const std::string& key, long fallback) {
        const auto it = kv.find(key);
        return it == kv.end() ? fallback : static_cast<long>(detail::parse_int_token(it->second.first, it->second.second));
    };

    if (!has("kind"))
        throw ParseError(lineno + 1, "model spec needs 'kind'");
    const std::string kind = kv["kind"].first;
    ModelSpec spec;
    spec.seed = static_cast<std::uint64_t>(integer("seed", 1));
    spec.count = static_cast<std::size_t>(integer("count", 10000));

    if (kind == "classical")
    {
        spec.classical = true;
        auto& m = spec.trajectories;
        if (!has("branches"))
            throw ParseError(lineno + 1, "classical model needs 'branches'");
        m.branches = detail::parse_branches(kv["branches"].first, kv["branches"].second);
        if (has("weights"))
        {
            const auto w = detail::parse_number_list(kv["weights"].first, kv["weights"].second);
            if (w.size() != m.branches.size())
                throw ParseError(kv["weights"].second, "weights count does not match branches");
            for (std::size_t i = 0; i < w.size(); ++i)
                m.branches[i].weight = w[i];
        }
        m.noise = deg_to_rad(num("noise_deg", 0.0));
        m.J_max = num("Jmax", 60.0);
        m.sigma_r = num("sigma_r", 1.0);
        m.validate();
        return spec;
    }

    auto& p = spec.phase;
    if (kind == "linear")
        p.kind = PhaseModelKind::linear;
    else if (kind == "quadratic")
        p.kind = PhaseModelKind::quadratic;
    else if (kind == "two-branch")
        p.kind = PhaseModelKind::two_branch;
    else
        throw ParseError(kv["kind"].second, "unknown model kind '" + kind + "'");

    auto branch = [&](const std::string& suffix) {
        PhaseBranch b;
        b.amplitude = {num("J0" + suffix, 0.0), num("w" + suffix, 0.0), num("h" + suffix, 1.0)};
        if (has("eta" + suffix))
            b.eta = detail::parse_number_list(kv["eta" + suffix].first, kv["eta" + suffix].second);
        else if (suffix.empty() && has("alpha"))
            b.eta = {0.0, -0.5 * num("alpha", 0.0), -0.5 * num("alpha", 0.0)};
        else if (suffix.empty() && has("c"))
            b.eta = {0.0, 0.5 * num("c", 0.0)};
        else
            throw ParseError(lineno + 1, "branch needs 'eta" + suffix + "'");
        return b;
    };
    p.branches.push_back(branch(""));
    if (p.kind == PhaseModelKind::two_branch)
        p.branches.push_back(branch("_2"));
    p.j_final = static_cast<int>(integer("jp", 0));
    p.helicity_phase_step = num("helicity_phase", 0.5);
    p.validate();
    spec.k = num("k", 1.0);
    if (has("k_unit"))
        spec.k_unit = kv["k_unit"].first;
    spec.J_max = static_cast<int>(integer("Jmax", 60));
    return spec;
}

} // namespace qdf

#endif
