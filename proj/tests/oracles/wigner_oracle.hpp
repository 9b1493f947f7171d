#ifndef QDF_TEST_WIGNER_ORACLE_HPP
#define QDF_TEST_WIGNER_ORACLE_HPP

// Extended-precision reference values for d^J_{m'm}(theta) from the explicit
// factorial sum. Slow; meant for spot checks only.

#include <algorithm>
#include <vector>
#include <boost/multiprecision/cpp_bin_float.hpp>

namespace oracle
{

using big = boost::multiprecision::number<boost::multiprecision::cpp_bin_float<250>>;

inline const big& big_factorial(int n)
{
    static const std::vector<big> table = [] {
        std::vector<big> t(1025);
        t[0] = 1;
        for (std::size_t i = 1; i < t.size(); ++i)
            t[i] = t[i - 1] * static_cast<int>(i);
        return t;
    }();
    return table.at(static_cast<std::size_t>(n));
}

inline double wigner_d_sum(int J, int mp, int m, double theta)
{
    const big half = big(theta) / 2;
    const big c = boost::multiprecision::cos(half);
    const big s = boost::multiprecision::sin(half);
    const big root = boost::multiprecision::sqrt(big_factorial(J + mp) * big_factorial(J - mp) *
                                                 big_factorial(J + m) * big_factorial(J - m));
    const int k_lo = std::max(0, m - mp);
    const int k_hi = std::min(J + m, J - mp);
    big sum = 0;
    for (int k = k_lo; k <= k_hi; ++k)
    {
        big term = root / (big_factorial(J + m - k) * big_factorial(k) * big_factorial(mp - m + k) *
                           big_factorial(J - mp - k));
        term *= boost::multiprecision::pow(c, 2 * J + m - mp - 2 * k);
        term *= boost::multiprecision::pow(s, mp - m + 2 * k);
        if ((mp - m + k) % 2 != 0)
            term = -term;
        sum += term;
    }
    return static_cast<double>(sum);
}

} // namespace oracle

#endif
