#ifndef HOPF_RATIONAL_HPP_
#define HOPF_RATIONAL_HPP_

#include <boost/multiprecision/cpp_int.hpp>

namespace hopf {

// Exact rational arithmetic for all coefficient pipelines; floating point
// enters only at evaluation time.
using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

inline double to_double(const Rat& q) { return q.convert_to<double>(); }

inline Int factorial(unsigned n)
{
    Int f = 1;
    for (unsigned i = 2; i <= n; ++i) f *= i;
    return f;
}

// (2n-1)!! with the usual convention (-1)!! = 1
inline Int double_factorial_odd(unsigned n)
{
    Int f = 1;
    for (unsigned i = 1; i <= n; ++i) f *= 2 * i - 1;
    return f;
}

inline Int binomial(unsigned n, unsigned k)
{
    if (k > n) return 0;
    if (k > n - k) k = n - k;
    Int b = 1;
    for (unsigned i = 0; i < k; ++i) {
        b *= n - i;
        b /= i + 1;
    }
    return b;
}

} // namespace hopf

#endif
