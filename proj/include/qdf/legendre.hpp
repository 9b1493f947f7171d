#ifndef QDF_LEGENDRE_HPP
#define QDF_LEGENDRE_HPP

#include <cassert>
#include <span>
#include <vector>

namespace qdf
{

/// Fills out[n] = P_n(x) for n = 0..out.size()-1 using Bonnet's recurrence
///   (n+1) P_{n+1} = (2n+1) x P_n - n P_{n-1}.
inline void legendre_p_all(double x, std::span<double> out)
{
    if (out.empty())
        return;
    out[0] = 1.0;
    if (out.size() == 1)
        return;
    out[1] = x;
    for (std::size_t n = 1; n + 1 < out.size(); ++n)
    {
        const auto dn = static_cast<double>(n);
        out[n + 1] = ((2.0 * dn + 1.0) * x * out[n] - dn * out[n - 1]) / (dn + 1.0);
    }
}

inline double legendre_p(int n, double x)
{
    assert(n >= 0);
    if (n == 0)
        return 1.0;
    double pm1 = 1.0;
    double p = x;
    for (int k = 1; k < n; ++k)
    {
        const double next = ((2.0 * k + 1.0) * x * p - k * pm1) / (k + 1.0);
        pm1 = p;
        p = next;
    }
    return p;
}

/// Sum_n c[n] P_n(x) by Clenshaw's recurrence.
inline double legendre_series(std::span<const double> c, double x)
{
    double b1 = 0.0;
    double b2 = 0.0;
    for (std::size_t i = c.size(); i-- > 0;)
    {
        const auto n = static_cast<double>(i);
        // alpha_n = (2n+1)x/(n+1), beta_{n+1} = -(n+1)/(n+2)
        const double b0 = c[i] + (2.0 * n + 1.0) / (n + 1.0) * x * b1 - (n + 1.0) / (n + 2.0) * b2;
        b2 = b1;
        b1 = b0;
    }
    return b1;
}

} // namespace qdf

#endif
