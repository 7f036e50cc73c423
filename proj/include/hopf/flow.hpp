#ifndef HOPF_FLOW_HPP_
#define HOPF_FLOW_HPP_

#include <cmath>
#include <optional>
#include <stdexcept>
#include <vector>

#include "hopf/basis.hpp"
#include "hopf/cos_poly.hpp"
#include "hopf/sphere_state.hpp"

namespace hopf {

// Flow integer n, slope lambda = 1 + 1/(n+1) and target mean radius psi_inf.
// The curvature function driving the flow is K = psi + lambda s - psi_inf.
struct FlowParams {
    int n = 0;
    Rat psi_inf = 1;

    FlowParams() = default;
    FlowParams(int n_, Rat psi_inf_) : n(n_), psi_inf(std::move(psi_inf_))
    {
        if (n < 0) throw std::invalid_argument("FlowParams: n must be >= 0");
        if (psi_inf <= 0) throw std::invalid_argument("FlowParams: psi_inf must be > 0");
    }

    Rat lambda() const { return Rat(1) + Rat(1, n + 1); }
};

// Exponential growth/decay rates of the modal ODE system.
struct ModeRates {
    int n = 0;
    std::vector<Rat> mu;      // mu_l = (2l+1)(n-l)/(n+1),        l < n
    std::vector<Rat> mu_half; // mu_{l+1/2} = (l+1)(2n-2l-1)/(n+1), l < n
    std::vector<Rat> nu;      // nu_l = 2l(n-l)/(n+1),            l < n

    // omega_l = (l(l+1) - n(n+1)) / (2(n+1)); zero at the stationary l = n mode
    Rat omega(int l) const { return Rat(l * (l + 1) - n * (n + 1), 2 * (n + 1)); }
};

inline ModeRates mode_rates(int n)
{
    if (n < 0) throw std::invalid_argument("mode_rates: n must be >= 0");
    ModeRates r;
    r.n = n;
    for (int l = 0; l < n; ++l) {
        r.mu.push_back(Rat((2 * l + 1) * (n - l), n + 1));
        r.mu_half.push_back(Rat((l + 1) * (2 * n - 2 * l - 1), n + 1));
        r.nu.push_back(Rat(2 * l * (n - l), n + 1));
    }
    return r;
}

struct TildeCoefficients {
    int n = 0;
    std::vector<Rat> tilde_a, tilde_b;
};

// Finite sum of exponentials sum_i coeff_i e^{rate_i t} with exact rational
// prefactors; floats enter only in eval().
struct ExpSum {
    struct Term {
        Rat rate, coeff;
    };
    std::vector<Term> terms;

    void add(const Rat& rate, const Rat& coeff)
    {
        if (coeff == 0) return;
        for (auto& t : terms)
            if (t.rate == rate) {
                t.coeff += coeff;
                return;
            }
        terms.push_back({rate, coeff});
    }

    Rat at_zero() const
    {
        Rat v = 0;
        for (const auto& t : terms) v += t.coeff;
        return v;
    }

    double eval(double t) const
    {
        double v = 0;
        for (const auto& tm : terms)
            v += to_double(tm.coeff) * std::exp(to_double(tm.rate) * t);
        return v;
    }

    ExpSum deriv() const
    {
        ExpSum d;
        for (const auto& t : terms) d.add(t.rate, t.rate * t.coeff);
        return d;
    }
};

namespace detail {

// Chain factor prod_{p=l+1}^{j} (-nu_p) / prod_{p=l}^{j-1} (rate_j - rate_p)
// propagating the j-th eigen-solution down to mode l (the operator couples
// mode l+1 into mode l with weight -nu_{l+1}; the A and B families share
// this with their respective rate ladders).
inline Rat eigen_chain(int l, int j, const std::vector<Rat>& nu, const std::vector<Rat>& rates)
{
    Rat f = 1;
    for (int p = l + 1; p <= j; ++p) f *= -nu[p];
    for (int p = l; p < j; ++p) f /= rates[j] - rates[p];
    return f;
}

} // namespace detail

// Solve the unitriangular relations of the closed-form solution for the
// tilde constants, back-substituting from l = n-1 down to l = 0.
inline TildeCoefficients tilde_from_initial(const AstigmatismCoefficients& coeffs)
{
    const int n = coeffs.n;
    ModeRates rates = mode_rates(n);
    TildeCoefficients t;
    t.n = n;
    t.tilde_a.assign(n, Rat(0));
    t.tilde_b.assign(n, Rat(0));
    auto a_of = [&](int l) { return l < static_cast<int>(coeffs.trig_a.size()) ? coeffs.trig_a[l] : Rat(0); };
    auto b_of = [&](int l) { return l < static_cast<int>(coeffs.trig_b.size()) ? coeffs.trig_b[l] : Rat(0); };
    for (int l = n - 1; l >= 0; --l) {
        Rat sa = a_of(l), sb = b_of(l);
        for (int j = l + 1; j < n; ++j) {
            sa -= t.tilde_a[j] * detail::eigen_chain(l, j, rates.nu, rates.mu);
            sb -= t.tilde_b[j] * detail::eigen_chain(l, j, rates.nu, rates.mu_half);
        }
        t.tilde_a[l] = sa;
        t.tilde_b[l] = sb;
    }
    return t;
}

// The spatial operator of the astigmatism reaction-diffusion equation,
//   (lambda-1)/(2 sin) d(sin ds) - lambda cot ds + (1+cos^2)/sin^2 s,
// applied exactly to a CosPoly vanishing to second order at the poles.
inline CosPoly flow_operator_s(const CosPoly& s_in, const Rat& lambda)
{
    CosPoly s = s_in.normalized();
    if (s.is_zero()) return s;
    if (s.sin_pow != 0)
        throw std::invalid_argument("flow_operator_s: s must have even pole order");
    CosPoly ds = s.deriv_theta();
    CosPoly diff = ds.mul_sin().deriv_theta().div_sin() * ((lambda - 1) / 2);
    CosPoly conv = (ds * CosPoly({Rat(0), Rat(1)})).div_sin() * (-lambda);
    CosPoly reac = s.divide_exact(CosPoly({Rat(1), Rat(0), Rat(-1)}))
                   * CosPoly({Rat(1), Rat(0), Rat(1)});
    CosPoly out = diff + conv + reac;
    out.normalize();
    return out;
}

// Complete closed-form solution of the integer linear Hopf flow for one
// initial surface: modal coefficients as exponential sums plus the support
// function reconstructed by quadratures.
class FlowSolution {
public:
    FlowParams params;
    AstigmatismCoefficients initial;
    TildeCoefficients tilde;
    ModeRates rates;

    std::vector<ExpSum> trig_a_t, trig_b_t; // l = 0..n-1
    std::vector<ExpSum> legendre_c_t;       // l = n..

    // Eigen-decomposition of s: each component evolves by a single exponential.
    struct Component {
        Rat rate;
        CosPoly s_poly;   // spatial profile (exact eigenvector of the operator)
        CosPoly r_q;      // raw quadrature of s_poly (no integration constants)
        CosPoly psi_q;    // psi of r_q
        Rat p0, p1;       // affine defect feeding the C2/C1 ODEs
    };
    std::vector<Component> comps;
    ExpSum C2_t, C1_t; // r = C2(t) + C1(t) cos + sum_j e^{rate_j t} r_q_j
    Rat D2;            // coefficient of e^{-t} in C2

    FlowSolution(FlowParams p, AstigmatismCoefficients coeffs,
                 std::optional<CosPoly> initial_support = std::nullopt)
        : params(std::move(p)), initial(std::move(coeffs)), rates(mode_rates(params.n))
    {
        if (initial.n != params.n)
            throw std::invalid_argument("FlowSolution: coefficient n does not match flow n");
        const int n = params.n;
        const Rat lambda = params.lambda();
        tilde = tilde_from_initial(initial);

        trig_a_t.assign(n, ExpSum{});
        trig_b_t.assign(n, ExpSum{});
        for (int j = 0; j < n; ++j) {
            CosPoly sa, sb;
            for (int l = j; l >= 0; --l) {
                Rat ka = tilde.tilde_a[j] * detail::eigen_chain(l, j, rates.nu, rates.mu);
                Rat kb = tilde.tilde_b[j] * detail::eigen_chain(l, j, rates.nu, rates.mu_half);
                trig_a_t[l].add(rates.mu[j], ka);
                trig_b_t[l].add(rates.mu_half[j], kb);
                if (ka != 0) sa = sa + CosPoly({ka}, 2 * l + 2).normalized();
                if (kb != 0) sb = sb + CosPoly({Rat(0), kb}, 2 * l + 2).normalized();
            }
            if (!sa.is_zero()) add_component(rates.mu[j], sa, lambda);
            if (!sb.is_zero()) add_component(rates.mu_half[j], sb, lambda);
        }
        for (size_t j = 0; j < initial.legendre_c.size(); ++j) {
            int l = n + static_cast<int>(j);
            ExpSum e;
            e.add(-rates.omega(l), initial.legendre_c[j]);
            legendre_c_t.push_back(e);
            if (initial.legendre_c[j] != 0) {
                CosPoly sp = (CosPoly::sin_power(2 + n) * legendre_assoc_poly(l, n))
                             * initial.legendre_c[j];
                add_component(-rates.omega(l), sp, lambda);
            }
        }

        // C2' = psi_inf - C2 + sum p0_j e^{rate_j t},  C1' = sum p1_j e^{rate_j t}
        C2_t.add(Rat(0), params.psi_inf);
        Rat c2_part = 0, c1_part = 0;
        for (const auto& c : comps) {
            if (c.p0 != 0) {
                if (c.rate == -1)
                    throw std::logic_error("FlowSolution: resonant even mode");
                C2_t.add(c.rate, c.p0 / (Rat(1) + c.rate));
                c2_part += c.p0 / (Rat(1) + c.rate);
            }
            if (c.p1 != 0) {
                if (c.rate == 0)
                    throw std::logic_error("FlowSolution: secular odd mode");
                C1_t.add(c.rate, c.p1 / c.rate);
                c1_part += c.p1 / c.rate;
            }
        }

        // Pin the integration constants to the initial support function; by
        // default the remainder at t = 0 is psi_inf exactly (D2 = -c2_part).
        Rat r0_const = params.psi_inf + c2_part, r0_lin = c1_part;
        if (initial_support) {
            CosPoly diff = initial_support->normalized();
            for (const auto& c : comps) diff = diff - c.r_q;
            diff.normalize();
            if (diff.degree() > 1 || diff.sin_pow != 0)
                throw std::invalid_argument(
                    "FlowSolution: initial support function inconsistent with coefficients");
            r0_const = diff.coeff(0);
            r0_lin = diff.coeff(1);
        }
        D2 = r0_const - params.psi_inf - c2_part;
        C2_t.add(Rat(-1), D2);
        C1_t.add(Rat(0), r0_lin - c1_part);
    }

    const ExpSum& a_t(int l) const { return trig_a_t.at(l); }
    const ExpSum& b_t(int l) const { return trig_b_t.at(l); }
    const ExpSum& c_t(int l) const { return legendre_c_t.at(l - params.n); }

    AstigmatismCoefficientsD evolve_s(double t) const
    {
        AstigmatismCoefficientsD out;
        out.n = params.n;
        for (const auto& e : trig_a_t) out.trig_a.push_back(e.eval(t));
        for (const auto& e : trig_b_t) out.trig_b.push_back(e.eval(t));
        for (const auto& e : legendre_c_t) out.legendre_c.push_back(e.eval(t));
        return out;
    }

    // Exact coefficients at t = 0 (identity of the closed form).
    AstigmatismCoefficients coefficients_at_zero() const
    {
        AstigmatismCoefficients out;
        out.n = params.n;
        for (const auto& e : trig_a_t) out.trig_a.push_back(e.at_zero());
        for (const auto& e : trig_b_t) out.trig_b.push_back(e.at_zero());
        for (const auto& e : legendre_c_t) out.legendre_c.push_back(e.at_zero());
        return out;
    }

    double s_at(double t, double theta) const
    {
        double v = 0;
        for (const auto& c : comps)
            v += std::exp(to_double(c.rate) * t) * c.s_poly.eval(theta);
        return v;
    }

    double psi_at(double t, double theta) const
    {
        double v = C2_t.eval(t);
        for (const auto& c : comps)
            v += std::exp(to_double(c.rate) * t) * c.psi_q.eval(theta);
        return v;
    }

    double r_at(double t, double theta) const
    {
        double v = C2_t.eval(t) + C1_t.eval(t) * std::cos(theta);
        for (const auto& c : comps)
            v += std::exp(to_double(c.rate) * t) * c.r_q.eval(theta);
        return v;
    }

    double dr_dt_at(double t, double theta) const
    {
        double v = C2_t.deriv().eval(t) + C1_t.deriv().eval(t) * std::cos(theta);
        for (const auto& c : comps)
            v += to_double(c.rate) * std::exp(to_double(c.rate) * t) * c.r_q.eval(theta);
        return v;
    }

    // Exact support function at t = 0.
    CosPoly support_at_zero() const
    {
        CosPoly r({C2_t.at_zero(), C1_t.at_zero()});
        for (const auto& c : comps) r = r + c.r_q;
        r.normalize();
        return r;
    }

    SphereState state_at(double t) const
    {
        if (t == 0) {
            SphereState st = SphereState::from_support(support_at_zero(), 0);
            return st;
        }
        // Collapse the components to double-coefficient polynomials at time t.
        std::vector<double> rc{C2_t.eval(t), C1_t.eval(t)}, pc{C2_t.eval(t)}, sc;
        auto fold = [](std::vector<double>& dst, const CosPoly& p, double w) {
            if (dst.size() < p.coeffs.size()) dst.resize(p.coeffs.size(), 0.0);
            for (size_t k = 0; k < p.coeffs.size(); ++k) dst[k] += w * to_double(p.coeffs[k]);
        };
        for (const auto& c : comps) {
            double w = std::exp(to_double(c.rate) * t);
            fold(rc, c.r_q, w);
            fold(pc, c.psi_q, w);
            fold(sc, c.s_poly, w);
        }
        auto horner = [](const std::vector<double>& c, double x) {
            double v = 0;
            for (size_t k = c.size(); k-- > 0;) v = v * x + c[k];
            return v;
        };
        SphereState st;
        st.time_tag = t;
        st.r_fn = [rc, horner](double th) { return horner(rc, std::cos(th)); };
        st.psi_fn = [pc, horner](double th) { return horner(pc, std::cos(th)); };
        st.s_fn = [sc, horner](double th) { return horner(sc, std::cos(th)); };
        std::vector<double> drc(rc.size() > 1 ? rc.size() - 1 : 0);
        for (size_t k = 1; k < rc.size(); ++k) drc[k - 1] = k * rc[k];
        st.dr_fn = [drc, horner](double th) {
            return -std::sin(th) * horner(drc, std::cos(th));
        };
        return st;
    }

private:
    void add_component(const Rat& rate, const CosPoly& s_poly, const Rat& lambda)
    {
        Component c;
        c.rate = rate;
        c.s_poly = s_poly.normalized();
        // Eigenvector sanity: the closed-form profile must satisfy
        // flow_operator_s(s) = rate * s exactly.
        if (!(flow_operator_s(c.s_poly, lambda) == c.s_poly * rate))
            throw std::logic_error("FlowSolution: component is not an eigenvector");
        c.r_q = quadrature_r_from_s(c.s_poly);
        c.psi_q = psi_from_r(c.r_q);
        CosPoly defect = (-c.psi_q) - c.s_poly * lambda - c.r_q * rate;
        defect.normalize();
        if (defect.degree() > 1 || (defect.sin_pow != 0 && !defect.is_zero()))
            throw std::logic_error("FlowSolution: non-affine quadrature defect");
        c.p0 = defect.coeff(0);
        c.p1 = defect.coeff(1);
        comps.push_back(c);
    }
};

// Linear Hopf sphere psi + mu s = psi_inf: s = C0 sin^{2/(mu-1)}.
// Coefficient-backed when the exponent is an even integer, grid-backed
// otherwise (support function by numeric double quadrature).
inline SphereState hopf_sphere(double mu, double psi_inf, double C0)
{
    if (mu <= 1) throw std::domain_error("hopf_sphere: need mu > 1");
    SphereState st;
    double q = 2.0 / (mu - 1.0);
    long qi = std::lround(q);
    bool exact = std::abs(q - static_cast<double>(qi)) < 1e-12 && qi % 2 == 0 && qi >= 2;
    if (C0 == 0.0 || exact) {
        Rat pinf(psi_inf);
        if (C0 == 0.0) {
            st = SphereState::from_polys(CosPoly::constant(pinf),
                                         CosPoly::constant(pinf), CosPoly(), 0);
        } else {
            CosPoly sp = CosPoly({Rat(C0)}, static_cast<int>(qi)).normalized();
            Rat mu_exact = Rat(1) + Rat(2, qi);
            CosPoly psip = CosPoly::constant(pinf) - sp * mu_exact;
            // shift the raw quadrature so that psi_from_r(r) = psi exactly
            CosPoly r_raw = quadrature_r_from_s(sp);
            CosPoly shift = psip - psi_from_r(r_raw);
            if (shift.degree() > 0)
                throw std::logic_error("hopf_sphere: inconsistent quadrature");
            st = SphereState::from_polys(r_raw + shift, psip, sp, 0);
        }
    } else {
        // grid-backed: r = C2 - 2 int[ sin int s/sin ], integrated outward
        // from the equator on a fine uniform grid
        const int N = 1 << 14;
        double h = M_PI / N;
        std::vector<double> i1(N + 1, 0.0), rr(N + 1, 0.0);
        auto integrand1 = [&](double th) { return C0 * std::pow(std::sin(th), q - 1.0); };
        int mid = N / 2;
        for (int i = mid + 1; i <= N; ++i) {
            double a = (i - 1) * h, b = i * h;
            double fa = (i - 1 == 0 || i - 1 == N) ? 0 : integrand1(a);
            double fb = (i == 0 || i == N) ? 0 : integrand1(b);
            i1[i] = i1[i - 1] + 0.5 * h * (fa + fb);
        }
        for (int i = mid - 1; i >= 0; --i) {
            double a = i * h, b = (i + 1) * h;
            double fa = (i == 0) ? 0 : integrand1(a);
            double fb = integrand1(b);
            i1[i] = i1[i + 1] - 0.5 * h * (fa + fb);
        }
        auto integrand2 = [&](int i) { return std::sin(i * h) * i1[i]; };
        for (int i = mid + 1; i <= N; ++i)
            rr[i] = rr[i - 1] - 2.0 * 0.5 * h * (integrand2(i - 1) + integrand2(i));
        for (int i = mid - 1; i >= 0; --i)
            rr[i] = rr[i + 1] + 2.0 * 0.5 * h * (integrand2(i) + integrand2(i + 1));
        // psi(pi/2) = r(pi/2) + r''(pi/2)/2 with r'' = -2 s at the equator
        double C2 = (psi_inf - mu * C0) + C0 - rr[mid];
        auto interp = [=](const std::vector<double>& v, double th) {
            double u = std::clamp(th, 0.0, M_PI) / h;
            int i = std::min(static_cast<int>(u), N - 1);
            double f = u - i;
            return v[i] * (1 - f) + v[i + 1] * f;
        };
        st.r_fn = [=](double th) { return C2 + interp(rr, th); };
        st.psi_fn = [=](double th) { return psi_inf - mu * C0 * std::pow(std::sin(th), q); };
        st.s_fn = [=](double th) { return C0 * std::pow(std::sin(th), q); };
        st.dr_fn = [=](double th) { return -2.0 * std::sin(th) * interp(i1, th); };
    }
    st.time_tag = 0;
    st.convex_known = true;
    st.convex = psi_inf > C0 * mu;
    return st;
}

// Closed-form flow of an initial linear Hopf sphere with mu = 2:
//   psi = alpha(t) + beta(t) sin^2,  s = gamma(t) sin^2,
//   r   = ra(t) + rb(t) sin^2.
struct SolitonSolution {
    double lambda, psi_inf, psi0, s_half;

    SolitonSolution(double lambda_, double psi_inf_, double psi0_, double s_half_)
        : lambda(lambda_), psi_inf(psi_inf_), psi0(psi0_), s_half(s_half_)
    {
        if (lambda <= 1) throw std::domain_error("SolitonSolution: need lambda > 1");
    }

    double gamma(double t) const
    {
        return lambda == 3.0 ? s_half * std::exp(-t) : s_half * std::exp((2.0 - lambda) * t);
    }
    double ra(double t) const
    {
        if (lambda == 3.0)
            return psi_inf + (psi0 - psi_inf - 2.0 * s_half * (t + 1.0)) * std::exp(-t);
        double A = psi0 - psi_inf - 2.0 * (lambda - 2.0) / (lambda - 3.0) * s_half;
        return psi_inf + A * std::exp(-t)
               + 2.0 / (lambda - 3.0) * s_half * std::exp((2.0 - lambda) * t);
    }
    double rb(double t) const { return gamma(t); }
    double alpha(double t) const { return ra(t) + 2.0 * rb(t); }
    double beta(double t) const { return -2.0 * gamma(t); }

    double psi(double t, double theta) const
    {
        double sn = std::sin(theta);
        return alpha(t) + beta(t) * sn * sn;
    }
    double s(double t, double theta) const
    {
        double sn = std::sin(theta);
        return gamma(t) * sn * sn;
    }
    double r(double t, double theta) const
    {
        double sn = std::sin(theta);
        return ra(t) + rb(t) * sn * sn;
    }
};

inline SphereState soliton_state(double lambda, double psi_inf, double psi0,
                                 double s_half, double t)
{
    SolitonSolution sol(lambda, psi_inf, psi0, s_half);
    SphereState st;
    st.time_tag = t;
    st.r_fn = [sol, t](double th) { return sol.r(t, th); };
    st.psi_fn = [sol, t](double th) { return sol.psi(t, th); };
    st.s_fn = [sol, t](double th) { return sol.s(t, th); };
    st.dr_fn = [sol, t](double th) { return sol.rb(t) * std::sin(2.0 * th); };
    return st;
}

// Translation soliton: an initial linear Hopf sphere with mu = lambda keeps
// its shape and its RoC diagram slides horizontally.
inline SphereState translation_soliton_state(double lambda, double psi_inf,
                                             double psi0_shape, double C0, double t)
{
    SphereState base = hopf_sphere(lambda, psi0_shape, C0);
    double shift = (psi0_shape - psi_inf) * std::exp(-t) - (psi0_shape - psi_inf);
    SphereState st = base;
    st.time_tag = t;
    auto r0 = base.r_fn, p0 = base.psi_fn;
    st.r_fn = [r0, shift](double th) { return r0(th) + shift; };
    st.psi_fn = [p0, shift](double th) { return p0(th) + shift; };
    st.r_exact.reset();
    st.psi_exact.reset();
    return st;
}

} // namespace hopf

#endif
