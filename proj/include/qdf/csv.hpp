#ifndef QDF_CSV_HPP
#define QDF_CSV_HPP

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <string>
#include <string_view>

namespace qdf::csv
{

/// Angles in degrees, 6 decimals.
inline std::string angle(double deg)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", deg);
    return buf;
}

/// Intensities and other reals: scientific, 9 significant digits.
inline std::string real(double v)
{
    if (v == 0.0)
        v = 0.0; // drop the sign of negative zero
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.8e", v);
    return buf;
}

inline std::string integer(long long v) { return std::to_string(v); }

/// 64-bit FNV-1a, used to fingerprint inputs in provenance lines.
inline std::uint64_t fnv1a(std::string_view bytes)
{
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes)
    {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

inline std::string hex64(std::uint64_t v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

} // namespace qdf::csv

#endif
