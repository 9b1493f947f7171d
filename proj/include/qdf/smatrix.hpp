#ifndef QDF_SMATRIX_HPP
#define QDF_SMATRIX_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <cstdlib>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "qdf/errors.hpp"

namespace qdf
{

using complex = std::complex<double>;

/// Identification of one state-to-state channel at one energy.
struct ChannelHeader
{
    std::string energy_label;
    double k = 1.0;                       ///< initial wavenumber
    std::string k_unit = "1/angstrom";    ///< unit tag of k as written in the file
    int j = 0;                            ///< initial rotational quantum number
    int j_final = 0;                      ///< final rotational quantum number
    int v = 0;
    int v_final = 0;
    int J_max = 0;

    /// Length unit implied by the k unit tag ("1/angstrom" -> "angstrom").
    std::string length_unit() const
    {
        if (k_unit.rfind("1/", 0) == 0)
            return k_unit.substr(2);
        return "(" + k_unit + ")^-1";
    }
};

/// (J, Omega, Omega') index of one S-matrix element.
struct HelicityKey
{
    int J = 0;
    int omega = 0;
    int omega_prime = 0;

    friend auto operator<=>(const HelicityKey&, const HelicityKey&) = default;
};

inline std::string to_string(const HelicityKey& key)
{
    return "(J=" + std::to_string(key.J) + ", Omega=" + std::to_string(key.omega) +
           ", Omega'=" + std::to_string(key.omega_prime) + ")";
}

/// S^J_{Omega' Omega} for one channel, J = 0..J_max. Absent elements are zero.
/// Immutable after construction.
class SMatrixBlock
{
public:
    using Entry = std::pair<HelicityKey, complex>;

    SMatrixBlock() = default;

    /// Validates every invariant; duplicate keys and helicity-bound violations
    /// raise ValidationError.
    SMatrixBlock(ChannelHeader header, const std::vector<Entry>& entries) : header_(std::move(header))
    {
        validate_header(header_);
        for (const auto& [key, value] : entries)
            insert(key, value);
    }

    const ChannelHeader& header() const noexcept { return header_; }
    double k() const noexcept { return header_.k; }
    int j() const noexcept { return header_.j; }
    int j_final() const noexcept { return header_.j_final; }
    int J_max() const noexcept { return header_.J_max; }

    const std::map<HelicityKey, complex>& entries() const noexcept { return entries_; }
    std::size_t size() const noexcept { return entries_.size(); }
    bool empty() const noexcept { return entries_.empty(); }

    bool contains(int J, int omega_prime, int omega) const
    {
        return entries_.contains(HelicityKey{J, omega, omega_prime});
    }

    complex at(int J, int omega_prime, int omega) const
    {
        const auto it = entries_.find(HelicityKey{J, omega, omega_prime});
        return it == entries_.end() ? complex{} : it->second;
    }

    /// S^J_{Omega' Omega} for J = 0..J_max, zeros where absent.
    std::vector<complex> helicity_sequence(int omega_prime, int omega) const
    {
        std::vector<complex> seq(static_cast<std::size_t>(header_.J_max) + 1);
        for (int J = 0; J <= header_.J_max; ++J)
            seq[static_cast<std::size_t>(J)] = at(J, omega_prime, omega);
        return seq;
    }

    /// (Omega', Omega) pairs that carry at least one element, ordered.
    std::vector<std::pair<int, int>> helicity_pairs() const
    {
        std::vector<std::pair<int, int>> pairs;
        for (const auto& [key, value] : entries_)
            pairs.emplace_back(key.omega_prime, key.omega);
        std::sort(pairs.begin(), pairs.end());
        pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());
        return pairs;
    }

    /// Same block with every element multiplied by `factor`.
    SMatrixBlock scaled(complex factor) const
    {
        SMatrixBlock out = *this;
        for (auto& [key, value] : out.entries_)
            value *= factor;
        return out;
    }

private:
    static void validate_header(const ChannelHeader& h)
    {
        if (!(h.k > 0.0) || !std::isfinite(h.k))
            throw ValidationError("channel header: k must be positive and finite");
        if (h.J_max < 0 || h.j < 0 || h.j_final < 0)
            throw ValidationError("channel header: J_max, j and j' must be >= 0");
    }

    void insert(const HelicityKey& key, complex value)
    {
        if (key.J < 0 || key.J > header_.J_max)
            throw ValidationError("entry " + to_string(key) + ": J outside 0..J_max=" +
                                  std::to_string(header_.J_max));
        if (std::abs(key.omega) > std::min(key.J, header_.j))
            throw ValidationError("entry " + to_string(key) + ": |Omega| > min(J, j)=" +
                                  std::to_string(std::min(key.J, header_.j)));
        if (std::abs(key.omega_prime) > std::min(key.J, header_.j_final))
            throw ValidationError("entry " + to_string(key) + ": |Omega'| > min(J, j')=" +
                                  std::to_string(std::min(key.J, header_.j_final)));
        if (!std::isfinite(value.real()) || !std::isfinite(value.imag()))
            throw ValidationError("entry " + to_string(key) + ": non-finite amplitude");
        if (!entries_.emplace(key, value).second)
            throw ValidationError("entry " + to_string(key) + ": duplicate key");
    }

    ChannelHeader header_;
    std::map<HelicityKey, complex> entries_;
};

namespace detail
{

inline std::string strip_comment(const std::string& line)
{
    const auto pos = line.find('#');
    std::string s = pos == std::string::npos ? line : line.substr(0, pos);
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos)
        return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

inline int parse_int_field(const std::string& token, const std::string& key, std::size_t line)
{
    const auto eq = token.find('=');
    if (eq == std::string::npos || token.substr(0, eq) != key)
        throw ParseError(line, "expected '" + key + "=<int>', got '" + token + "'");
    const std::string value = token.substr(eq + 1);
    char* end = nullptr;
    const long v = std::strtol(value.c_str(), &end, 10);
    if (value.empty() || *end != '\0')
        throw ParseError(line, "invalid integer in '" + token + "'");
    return static_cast<int>(v);
}

inline double parse_double_token(const std::string& token, std::size_t line)
{
    char* end = nullptr;
    const double v = std::strtod(token.c_str(), &end);
    if (token.empty() || *end != '\0')
        throw ParseError(line, "invalid number '" + token + "'");
    return v;
}

inline int parse_int_token(const std::string& token, std::size_t line)
{
    char* end = nullptr;
    const long v = std::strtol(token.c_str(), &end, 10);
    if (token.empty() || *end != '\0')
        throw ParseError(line, "invalid integer '" + token + "'");
    return static_cast<int>(v);
}

} // namespace detail

/// Reads the S-matrix text format:
///
///     # comments anywhere; "# energy: <text>" sets the energy label
///     k <value> <unit-tag>
///     channel j=<int> jp=<int> v=<int> vp=<int> Jmax=<int>
///     <J> <Omega> <OmegaPrime> <Re> <Im>
///     ...
inline SMatrixBlock load_smatrix(std::istream& in)
{
    ChannelHeader header;
    std::vector<SMatrixBlock::Entry> entries;
    std::map<HelicityKey, std::size_t> seen;
    bool have_k = false;
    bool have_channel = false;

    std::string raw;
    std::size_t lineno = 0;
    while (std::getline(in, raw))
    {
        ++lineno;
        {
            const auto hash = raw.find('#');
            if (hash != std::string::npos)
            {
                const std::string comment = detail::strip_comment(raw.substr(hash + 1) + " ");
                if (comment.rfind("energy:", 0) == 0)
                    header.energy_label = detail::strip_comment(comment.substr(7));
            }
        }
        const std::string line = detail::strip_comment(raw);
        if (line.empty())
            continue;
        std::istringstream ss(line);
        std::vector<std::string> tokens;
        for (std::string t; ss >> t;)
            tokens.push_back(t);

        if (!have_k)
        {
            if (tokens.size() != 3 || tokens[0] != "k")
                throw ParseError(lineno, "expected 'k <value> <unit-tag>'");
            header.k = detail::parse_double_token(tokens[1], lineno);
            header.k_unit = tokens[2];
            have_k = true;
            continue;
        }
        if (!have_channel)
        {
            if (tokens.size() != 6 || tokens[0] != "channel")
                throw ParseError(lineno, "expected 'channel j=<int> jp=<int> v=<int> vp=<int> Jmax=<int>'");
            header.j = detail::parse_int_field(tokens[1], "j", lineno);
            header.j_final = detail::parse_int_field(tokens[2], "jp", lineno);
            header.v = detail::parse_int_field(tokens[3], "v", lineno);
            header.v_final = detail::parse_int_field(tokens[4], "vp", lineno);
            header.J_max = detail::parse_int_field(tokens[5], "Jmax", lineno);
            have_channel = true;
            continue;
        }
        if (tokens.size() != 5)
            throw ParseError(lineno, "expected '<J> <Omega> <OmegaPrime> <Re> <Im>'");
        HelicityKey key{detail::parse_int_token(tokens[0], lineno), detail::parse_int_token(tokens[1], lineno),
                        detail::parse_int_token(tokens[2], lineno)};
        const complex value{detail::parse_double_token(tokens[3], lineno),
                            detail::parse_double_token(tokens[4], lineno)};
        if (const auto it = seen.find(key); it != seen.end())
            throw ValidationError("line " + std::to_string(lineno) + ": duplicate entry " + to_string(key) +
                                  " (first at line " + std::to_string(it->second) + ")");
        seen.emplace(key, lineno);
        entries.emplace_back(key, value);
    }
    if (!have_k)
        throw ParseError(lineno + 1, "missing 'k' line");
    if (!have_channel)
        throw ParseError(lineno + 1, "missing 'channel' line");
    return SMatrixBlock(header, entries);
}

inline SMatrixBlock load_smatrix_string(const std::string& text)
{
    std::istringstream in(text);
    return load_smatrix(in);
}

/// Writes a block in the text format read by load_smatrix. Doubles use 17
/// significant digits, so a read-back reproduces every value exactly.
inline void save_smatrix(const SMatrixBlock& block, std::ostream& out)
{
    const auto& h = block.header();
    char buf[128];
    if (!h.energy_label.empty())
        out << "# energy: " << h.energy_label << '\n';
    std::snprintf(buf, sizeof buf, "k %.17g ", h.k);
    out << buf << h.k_unit << '\n';
    out << "channel j=" << h.j << " jp=" << h.j_final << " v=" << h.v << " vp=" << h.v_final
        << " Jmax=" << h.J_max << '\n';
    for (const auto& [key, value] : block.entries())
    {
        std::snprintf(buf, sizeof buf, "%d %d %d %.17g %.17g\n", key.J, key.omega, key.omega_prime,
                      value.real(), value.imag());
        out << buf;
    }
}

inline std::string save_smatrix_string(const SMatrixBlock& block)
{
    std::ostringstream out;
    save_smatrix(block, out);
    return out.str();
}

struct UnitarityViolation
{
    HelicityKey key;
    double magnitude = 0.0;
};

/// Lists every element with |S| > 1 + tol. An empty list means the block passes.
inline std::vector<UnitarityViolation> validate_unitarity(const SMatrixBlock& block, double tol = 1e-9)
{
    std::vector<UnitarityViolation> report;
    for (const auto& [key, value] : block.entries())
    {
        const double mag = std::abs(value);
        if (mag > 1.0 + tol)
            report.push_back({key, mag});
    }
    return report;
}

} // namespace qdf

#endif
