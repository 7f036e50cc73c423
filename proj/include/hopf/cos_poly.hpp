#ifndef HOPF_COS_POLY_HPP_
#define HOPF_COS_POLY_HPP_

#include <cmath>
#include <stdexcept>
#include <vector>

#include "hopf/rational.hpp"

namespace hopf {

// Polynomial in x = cos(theta) carrying a symbolic prefactor sin^p(theta).
// Evaluates to sin^p(theta) * sum_k coeffs[k] x^k.  All arithmetic is exact
// over the rationals; sin^2 = 1 - x^2 substitutions keep the prefactor at
// 0 or 1 after normalize().
class CosPoly {
public:
    std::vector<Rat> coeffs; // coeffs[k] multiplies x^k
    int sin_pow = 0;

    CosPoly() = default;
    explicit CosPoly(std::vector<Rat> c, int p = 0) : coeffs(std::move(c)), sin_pow(p)
    {
        if (p < 0) throw std::invalid_argument("CosPoly: negative sin power");
        trim();
    }

    static CosPoly constant(const Rat& c) { return CosPoly({c}); }
    static CosPoly monomial(const Rat& c, int deg)
    {
        std::vector<Rat> v(deg + 1);
        v[deg] = c;
        return CosPoly(std::move(v));
    }
    // sin^p(theta) as a CosPoly
    static CosPoly sin_power(int p) { return CosPoly({Rat(1)}, p); }

    bool is_zero() const { return coeffs.empty(); }
    int degree() const { return static_cast<int>(coeffs.size()) - 1; }

    Rat coeff(int k) const
    {
        return (k >= 0 && k < static_cast<int>(coeffs.size())) ? coeffs[k] : Rat(0);
    }

    void trim()
    {
        while (!coeffs.empty() && coeffs.back() == 0) coeffs.pop_back();
        if (coeffs.empty()) sin_pow = 0;
    }

    // Fold sin^2 = 1 - x^2 into the polynomial until sin_pow is 0 or 1.
    void normalize()
    {
        while (sin_pow >= 2 && !is_zero()) {
            *this = mul_poly(one_minus_x2());
            sin_pow -= 2;
        }
        if (is_zero()) sin_pow = 0;
        trim();
    }

    CosPoly normalized() const
    {
        CosPoly p = *this;
        p.normalize();
        return p;
    }

    CosPoly operator-() const
    {
        CosPoly p = *this;
        for (auto& c : p.coeffs) c = -c;
        return p;
    }

    CosPoly operator+(const CosPoly& other) const
    {
        CosPoly a = normalized(), b = other.normalized();
        if (a.is_zero()) return b;
        if (b.is_zero()) return a;
        if (a.sin_pow != b.sin_pow)
            throw std::invalid_argument("CosPoly: sin-parity mismatch in addition");
        if (a.coeffs.size() < b.coeffs.size()) std::swap(a, b);
        for (size_t k = 0; k < b.coeffs.size(); ++k) a.coeffs[k] += b.coeffs[k];
        a.trim();
        return a;
    }

    CosPoly operator-(const CosPoly& other) const { return *this + (-other); }

    CosPoly operator*(const Rat& c) const
    {
        if (c == 0) return CosPoly();
        CosPoly p = *this;
        for (auto& v : p.coeffs) v *= c;
        return p;
    }

    CosPoly operator*(const CosPoly& other) const
    {
        if (is_zero() || other.is_zero()) return CosPoly();
        CosPoly p = mul_poly(other);
        p.sin_pow = sin_pow + other.sin_pow;
        p.normalize();
        return p;
    }

    bool operator==(const CosPoly& other) const
    {
        CosPoly a = normalized(), b = other.normalized();
        return a.sin_pow == b.sin_pow && a.coeffs == b.coeffs;
    }

    // d/dtheta of sin^p f(x):  sin^{p-1} [ p x f - (1 - x^2) f' ]
    CosPoly deriv_theta() const
    {
        if (is_zero()) return CosPoly();
        CosPoly f = *this; // x-part only; the sin prefactor is re-attached below
        const int p = f.sin_pow;
        f.sin_pow = 0;
        CosPoly fp = f.deriv_x();
        CosPoly r = p == 0 ? -fp : f.mul_x() * Rat(p) - one_minus_x2().mul_poly(fp);
        r.sin_pow = p == 0 ? 1 : p - 1;
        r.trim();
        return r;
    }

    CosPoly mul_sin() const
    {
        CosPoly p = *this;
        if (!p.is_zero()) ++p.sin_pow;
        p.normalize();
        return p;
    }

    // Exact division by sin(theta): f/sin = (f/(1-x^2)) * sin when sin_pow = 0.
    CosPoly div_sin() const
    {
        if (is_zero()) return CosPoly();
        CosPoly p = *this;
        if (p.sin_pow >= 1) {
            --p.sin_pow;
            return p;
        }
        CosPoly q = p.divide_exact(one_minus_x2());
        q.sin_pow = 1;
        q.trim();
        return q;
    }

    // Exact polynomial division of the x-part, throws if remainder is nonzero.
    CosPoly divide_exact(const CosPoly& d) const
    {
        if (is_zero()) return CosPoly();
        std::vector<Rat> rem = coeffs;
        const auto& dc = d.coeffs;
        if (dc.empty()) throw std::invalid_argument("CosPoly: division by zero");
        int dd = static_cast<int>(dc.size()) - 1;
        std::vector<Rat> q(rem.size() > dc.size() - 1 ? rem.size() - dc.size() + 1 : 1);
        for (int k = static_cast<int>(rem.size()) - 1; k >= dd; --k) {
            if (rem[k] == 0) continue;
            Rat f = rem[k] / dc[dd];
            q[k - dd] = f;
            for (int j = 0; j <= dd; ++j) rem[k - dd + j] -= f * dc[j];
        }
        for (const auto& c : rem)
            if (c != 0) throw std::invalid_argument("CosPoly: inexact division");
        CosPoly r(std::move(q), sin_pow);
        return r;
    }

    // Antiderivative in x of the polynomial part (constant of integration 0).
    CosPoly integrate_x() const
    {
        CosPoly p;
        p.sin_pow = sin_pow;
        p.coeffs.assign(coeffs.size() + 1, Rat(0));
        for (size_t k = 0; k < coeffs.size(); ++k)
            p.coeffs[k + 1] = coeffs[k] / Rat(k + 1);
        p.trim();
        return p;
    }

    double eval(double theta) const
    {
        double x = std::cos(theta);
        double v = 0;
        for (size_t k = coeffs.size(); k-- > 0;) v = v * x + to_double(coeffs[k]);
        if (sin_pow > 0) v *= std::pow(std::sin(theta), sin_pow);
        return v;
    }

    // Value of the polynomial part at rational x (prefactor excluded).
    Rat poly_at(const Rat& x) const
    {
        Rat v = 0;
        for (size_t k = coeffs.size(); k-- > 0;) v = v * x + coeffs[k];
        return v;
    }

private:
    static CosPoly one_minus_x2() { return CosPoly({Rat(1), Rat(0), Rat(-1)}); }

    CosPoly mul_x() const
    {
        CosPoly p;
        p.sin_pow = sin_pow;
        p.coeffs.assign(coeffs.size() + 1, Rat(0));
        for (size_t k = 0; k < coeffs.size(); ++k) p.coeffs[k + 1] = coeffs[k];
        return p;
    }

    CosPoly deriv_x() const
    {
        CosPoly p;
        p.sin_pow = sin_pow;
        if (coeffs.size() > 1) {
            p.coeffs.assign(coeffs.size() - 1, Rat(0));
            for (size_t k = 1; k < coeffs.size(); ++k)
                p.coeffs[k - 1] = coeffs[k] * Rat(k);
        }
        p.trim();
        return p;
    }

    // Plain polynomial product, prefactor untouched.
    CosPoly mul_poly(const CosPoly& other) const
    {
        CosPoly p;
        p.sin_pow = sin_pow;
        if (is_zero() || other.is_zero()) return p;
        p.coeffs.assign(coeffs.size() + other.coeffs.size() - 1, Rat(0));
        for (size_t i = 0; i < coeffs.size(); ++i)
            for (size_t j = 0; j < other.coeffs.size(); ++j)
                p.coeffs[i + j] += coeffs[i] * other.coeffs[j];
        p.trim();
        return p;
    }
};

// psi = r + (1/(2 sin)) d/dtheta( sin dr/dtheta )
inline CosPoly psi_from_r(const CosPoly& r)
{
    CosPoly t = r.deriv_theta().mul_sin().deriv_theta().div_sin();
    CosPoly p = r + t * Rat(1, 2);
    p.normalize();
    return p;
}

// s = -(sin/2) d/dtheta( (1/sin) dr/dtheta )
inline CosPoly s_from_r(const CosPoly& r)
{
    CosPoly t = r.deriv_theta().div_sin().deriv_theta().mul_sin();
    CosPoly p = t * Rat(-1, 2);
    p.normalize();
    return p;
}

// Codazzi-Mainardi residual d(psi+s)/dtheta + 2 cot(theta) s as a CosPoly;
// the zero polynomial iff the pair integrates to a surface.
inline CosPoly codazzi_mainardi_poly(const CosPoly& psi, const CosPoly& s)
{
    CosPoly d = (psi + s).deriv_theta();
    CosPoly cot_term = (s * CosPoly({Rat(0), Rat(2)})).div_sin();
    CosPoly r = d + cot_term;
    r.normalize();
    return r;
}

} // namespace hopf

#endif
