#ifndef HOPF_BASIS_HPP_
#define HOPF_BASIS_HPP_

#include <stdexcept>
#include <utility>
#include <vector>

#include "hopf/cos_poly.hpp"
#include "hopf/legendre.hpp"

namespace hopf {

// Modal representation of the astigmatism adapted to the flow integer n:
//   s = sum_{l<n} (a_l + b_l cos) sin^{2l+2} + sin^{2+n} sum_{l>=n} c_l P^n_l(cos)
// trig_a/trig_b are indexed by l = 0..n-1, legendre_c by l - n.
struct AstigmatismCoefficients {
    int n = 0;
    std::vector<Rat> trig_a, trig_b;
    std::vector<Rat> legendre_c;

    bool is_zero() const
    {
        for (const auto& v : trig_a) if (v != 0) return false;
        for (const auto& v : trig_b) if (v != 0) return false;
        for (const auto& v : legendre_c) if (v != 0) return false;
        return true;
    }

    CosPoly to_poly() const
    {
        CosPoly s;
        for (size_t l = 0; l < trig_a.size() || l < trig_b.size(); ++l) {
            Rat a = l < trig_a.size() ? trig_a[l] : Rat(0);
            Rat b = l < trig_b.size() ? trig_b[l] : Rat(0);
            if (a == 0 && b == 0) continue;
            CosPoly mode = CosPoly({a, b}, 2 * static_cast<int>(l) + 2);
            s = s + mode.normalized();
        }
        for (size_t j = 0; j < legendre_c.size(); ++j) {
            if (legendre_c[j] == 0) continue;
            int l = n + static_cast<int>(j);
            CosPoly mode = CosPoly::sin_power(2 + n) * legendre_assoc_poly(l, n);
            s = s + mode * legendre_c[j];
        }
        s.normalize();
        return s;
    }
};

// Same modal layout with double coefficients, for time-evaluated states.
struct AstigmatismCoefficientsD {
    int n = 0;
    std::vector<double> trig_a, trig_b, legendre_c;
};

// Exact change of basis: sum_{l>=n}(a_l + b_l cos) sin^{2l+2}
//   = sin^{2+n} sum_{l>=n} c_l P^n_l(cos).
// tail_a/tail_b are indexed from l = n; the result is indexed from l = n.
inline std::vector<Rat> trig_to_legendre(const std::vector<Rat>& tail_a,
                                         const std::vector<Rat>& tail_b, int n)
{
    // Divide out sin^{2n+2}: lhs becomes sum_j (a_j + b_j x)(1-x^2)^j with
    // j = l - n, to be matched against Q_l = P^n_l / sin^n.
    CosPoly lhs;
    CosPoly onemx2({Rat(1), Rat(0), Rat(-1)});
    CosPoly pow = CosPoly::constant(Rat(1));
    size_t len = std::max(tail_a.size(), tail_b.size());
    for (size_t j = 0; j < len; ++j) {
        Rat a = j < tail_a.size() ? tail_a[j] : Rat(0);
        Rat b = j < tail_b.size() ? tail_b[j] : Rat(0);
        if (a != 0 || b != 0) lhs = lhs + pow * CosPoly({a, b});
        pow = pow * onemx2;
    }
    int deg = lhs.degree();
    std::vector<Rat> c(deg >= 0 ? deg + 1 : 0);
    // Triangular solve from the top degree down; Q_{n+d} has exact degree d.
    for (int d = deg; d >= 0; --d) {
        Rat lead = lhs.coeff(d);
        if (lead == 0) continue;
        CosPoly q = legendre_ratio_poly(n + d, n);
        Rat cd = lead / q.coeff(d);
        c[d] = cd;
        lhs = lhs - q * cd;
    }
    if (!lhs.is_zero()) throw std::logic_error("trig_to_legendre: residual basis change");
    return c;
}

// Inverse of trig_to_legendre: c_l (indexed from l = n) back to the tail
// coefficients {a_l, b_l | l >= n}.
inline std::pair<std::vector<Rat>, std::vector<Rat>>
legendre_to_trig(const std::vector<Rat>& c, int n)
{
    CosPoly rhs;
    for (size_t d = 0; d < c.size(); ++d)
        if (c[d] != 0) rhs = rhs + legendre_ratio_poly(n + static_cast<int>(d), n) * c[d];

    // Split into even and odd parts and express each in powers of (1-x^2).
    int deg = rhs.degree();
    int jmax = deg >= 0 ? deg / 2 : -1;
    std::vector<Rat> even(jmax + 1), odd(jmax + 1);
    for (int k = 0; k <= deg; ++k) {
        if (k % 2 == 0) even[k / 2] = rhs.coeff(k);
        else if (k / 2 <= jmax) odd[k / 2] = rhs.coeff(k);
    }
    auto to_onemx2_basis = [](std::vector<Rat> e) {
        // e holds coefficients of x^{2m}; alpha_j solves e = sum alpha_j (1-x^2)^j
        int m = static_cast<int>(e.size()) - 1;
        std::vector<Rat> alpha(e.size());
        for (int j = m; j >= 0; --j) {
            Rat sign = (j % 2 == 0) ? Rat(1) : Rat(-1);
            alpha[j] = e[j] * sign;
            // subtract alpha_j (1-x^2)^j from the x^{2i} coefficients, i < j
            for (int i = 0; i < j; ++i) {
                Rat term = alpha[j] * Rat(binomial(j, i));
                if (i % 2 == 1) term = -term;
                e[i] -= term;
            }
        }
        return alpha;
    };
    auto a = to_onemx2_basis(std::move(even));
    auto b = to_onemx2_basis(std::move(odd));
    while (!a.empty() && a.back() == 0 && !b.empty() && b.back() == 0) {
        a.pop_back();
        b.pop_back();
    }
    return {a, b};
}

// Quadrature closed form for s = sin^{2l+2}: the x-polynomial part of r with
// the integration constants dropped.
inline CosPoly quad_sin_mode(int l)
{
    CosPoly r;
    for (int k = 0; k <= l; ++k) {
        Rat coef = Rat(-2) * Rat(binomial(l, k)) / Rat((2 * k + 1) * (2 * k + 2));
        if (k % 2 == 1) coef = -coef;
        r = r + CosPoly::monomial(coef, 2 * k + 2);
    }
    return r;
}

// Quadrature closed form for s = cos sin^{2l+2}.
inline CosPoly quad_cossin_mode(int l)
{
    CosPoly r;
    for (int k = 0; k <= l + 1; ++k) {
        Rat coef = Rat(binomial(l + 1, k)) / Rat((l + 1) * (2 * k + 1));
        if (k % 2 == 1) coef = -coef;
        r = r + CosPoly::monomial(coef, 2 * k + 1);
    }
    return r;
}

// Quadrature closed form for s = sin^{2+n} P^n_l, valid for l >= n + 2:
//   r = -2 sin^{2+n} P^{2+n}_l / ((l+n+2)(l+n+1)(l-n)(l-n-1)).
inline CosPoly quad_legendre_mode(int l, int n)
{
    if (l < n + 2) throw std::domain_error("quad_legendre_mode: denominator vanishes for l < n+2");
    CosPoly p = CosPoly::sin_power(2 + n) * legendre_assoc_poly(l, 2 + n);
    Rat denom = Rat(l + n + 2) * Rat(l + n + 1) * Rat(l - n) * Rat(l - n - 1);
    return p * (Rat(-2) / denom);
}

// r(theta) = C2 + C1 cos + quadrature of each mode of s.  Legendre modes
// l = n and l = n+1 are routed through the trig closed forms since the
// Legendre denominator vanishes there:
//   sin^{2+n} P^n_n     = (-1)^n (2n-1)!! sin^{2n+2}
//   sin^{2+n} P^n_{n+1} = (-1)^n (2n+1)!! cos sin^{2n+2}
inline CosPoly quadrature_r_from_s(const AstigmatismCoefficients& s,
                                   const Rat& C1 = Rat(0), const Rat& C2 = Rat(0))
{
    const int n = s.n;
    CosPoly r({C2, C1});
    for (size_t l = 0; l < s.trig_a.size(); ++l)
        if (s.trig_a[l] != 0) r = r + quad_sin_mode(static_cast<int>(l)) * s.trig_a[l];
    for (size_t l = 0; l < s.trig_b.size(); ++l)
        if (s.trig_b[l] != 0) r = r + quad_cossin_mode(static_cast<int>(l)) * s.trig_b[l];
    for (size_t j = 0; j < s.legendre_c.size(); ++j) {
        const Rat& c = s.legendre_c[j];
        if (c == 0) continue;
        int l = n + static_cast<int>(j);
        Rat sign = (n % 2 == 0) ? Rat(1) : Rat(-1);
        if (l == n)
            r = r + quad_sin_mode(n) * (c * sign * Rat(double_factorial_odd(n)));
        else if (l == n + 1)
            r = r + quad_cossin_mode(n) * (c * sign * Rat(double_factorial_odd(n + 1)));
        else
            r = r + quad_legendre_mode(l, n) * c;
    }
    r.normalize();
    return r;
}

// Double integral r = C2 + C1 cos - 2 int[ sin int (s/sin) ] carried out
// symbolically for any s vanishing to second order at the poles.  Independent
// of the per-mode closed forms above.
inline CosPoly quadrature_r_from_s(const CosPoly& s_in,
                                   const Rat& C1 = Rat(0), const Rat& C2 = Rat(0))
{
    CosPoly s = s_in.normalized();
    if (s.is_zero()) return CosPoly({C2, C1});
    if (s.sin_pow != 0)
        throw std::invalid_argument("quadrature_r_from_s: s must have even pole order");
    CosPoly u = s.divide_exact(CosPoly({Rat(1), Rat(0), Rat(-1)})); // s / sin^2
    CosPoly w = u.integrate_x().integrate_x();
    CosPoly r = CosPoly({C2, C1}) + w * Rat(-2);
    r.normalize();
    return r;
}

// Both combinatorial identities behind the sin-mode quadratures, checked in
// exact arithmetic against their stated case values.
inline bool lemma1_holds(int l, int m)
{
    if (!(m >= 1 && l >= m - 1)) throw std::domain_error("lemma1: need l >= m-1 >= 0");
    Rat sum = 0;
    for (int k = m - 1; k <= l; ++k) {
        Rat term = Rat(k + 2, k + 1) * Rat(binomial(l, k) * binomial(k + 1, m));
        if ((k + m) % 2 == 1) term = -term;
        sum += term;
    }
    Rat expected = l > m ? Rat(0) : (l == m ? Rat(1) : Rat(-1) - Rat(1, l + 1));
    return sum == expected;
}

inline bool lemma2_holds(int l, int m)
{
    if (!(m >= 0 && l >= m)) throw std::domain_error("lemma2: need l >= m >= 0");
    Rat sum = Rat(1 - (2 * m + 1) * (m + 1)) * Rat(binomial(l + 1, m));
    for (int k = m + 1; k <= l + 1; ++k) {
        Rat inner = Rat(1 - (2 * k + 1) * (m + 2)) * Rat(2 * m + 2, 2 * k + 1)
                        * Rat(binomial(k, m + 1))
                    + Rat(1 - (2 * k + 1) * (m + 1)) * Rat(2 * m + 1, 2 * k + 1)
                          * Rat(binomial(k, m));
        Rat term = Rat(binomial(l + 1, k)) * inner;
        if ((k + m) % 2 == 1) term = -term;
        sum += term;
    }
    Rat expected = l > m ? Rat(0) : Rat(2 * (l + 1) * (l + 2));
    return sum == expected;
}

inline std::pair<bool, bool> verify_lemma_identities(int l, int m)
{
    return {lemma1_holds(l, m), lemma2_holds(l, m)};
}

} // namespace hopf

#endif
