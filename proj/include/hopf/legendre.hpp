#ifndef HOPF_LEGENDRE_HPP_
#define HOPF_LEGENDRE_HPP_

#include <cmath>
#include <stdexcept>

#include "hopf/cos_poly.hpp"

namespace hopf {

// Associated Legendre polynomial P^m_l(x) with the Condon-Shortley phase,
//   P^m_l(x) = ((-1)^m / 2^l l!) (1-x^2)^{m/2} d^{l+m}/dx^{l+m} (x^2-1)^l,
// evaluated by upward recurrence in l.
inline double legendre_assoc(int l, int m, double x)
{
    if (m < 0 || l < m) throw std::domain_error("legendre_assoc: need l >= m >= 0");
    if (x < -1.0 || x > 1.0) throw std::domain_error("legendre_assoc: |x| > 1");

    // P^m_m = (-1)^m (2m-1)!! (1-x^2)^{m/2}
    double pmm = 1.0;
    if (m > 0) {
        double sx = std::sqrt((1.0 - x) * (1.0 + x));
        double fact = 1.0;
        for (int i = 0; i < m; ++i) {
            pmm *= -fact * sx;
            fact += 2.0;
        }
    }
    if (l == m) return pmm;
    double pmm1 = x * (2 * m + 1) * pmm;
    if (l == m + 1) return pmm1;
    for (int ll = m + 2; ll <= l; ++ll) {
        double p = ((2 * ll - 1) * x * pmm1 - (ll + m - 1) * pmm) / (ll - m);
        pmm = pmm1;
        pmm1 = p;
    }
    return pmm1;
}

// Exact P^m_l as a CosPoly: sin^m(theta) times a degree (l-m) polynomial in
// x = cos(theta), same recurrence in rational arithmetic.
inline CosPoly legendre_assoc_poly(int l, int m)
{
    if (m < 0 || l < m) throw std::domain_error("legendre_assoc_poly: need l >= m >= 0");
    Rat lead = Rat(double_factorial_odd(m));
    if (m % 2 == 1) lead = -lead;
    CosPoly pmm({lead}, m);
    if (l == m) return pmm;
    CosPoly pmm1 = pmm * CosPoly({Rat(0), Rat(2 * m + 1)});
    if (l == m + 1) return pmm1;
    for (int ll = m + 2; ll <= l; ++ll) {
        CosPoly p = (pmm1 * CosPoly({Rat(0), Rat(2 * ll - 1)}) - pmm * Rat(ll + m - 1))
                    * Rat(1, ll - m);
        pmm = pmm1;
        pmm1 = p;
    }
    return pmm1;
}

// The polynomial ratio Q_l = P^n_l / sin^n, degree l - n in x.  These are the
// working basis for exact changes of basis between trigonometric and Legendre
// representations of the astigmatism.
inline CosPoly legendre_ratio_poly(int l, int n)
{
    if (n < 0 || l < n) throw std::domain_error("legendre_ratio_poly: need l >= n >= 0");
    Rat lead = Rat(double_factorial_odd(n));
    if (n % 2 == 1) lead = -lead;
    CosPoly qnn({lead});
    if (l == n) return qnn;
    CosPoly qnn1 = qnn * CosPoly({Rat(0), Rat(2 * n + 1)});
    if (l == n + 1) return qnn1;
    for (int ll = n + 2; ll <= l; ++ll) {
        CosPoly q = (qnn1 * CosPoly({Rat(0), Rat(2 * ll - 1)}) - qnn * Rat(ll + n - 1))
                    * Rat(1, ll - n);
        qnn = qnn1;
        qnn1 = q;
    }
    return qnn1;
}

} // namespace hopf

#endif
