#ifndef HOPF_GEOMETRY_HPP_
#define HOPF_GEOMETRY_HPP_

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "hopf/basis.hpp"
#include "hopf/flow.hpp"
#include "hopf/sphere_state.hpp"

namespace hopf {

// Slope of the RoC diagram at a pole umbilic, mu = lim (psi(pole)-psi)/s.
// kind Round: s identically zero; kind Flat: the limit diverges (flat-order
// contact on one side).
struct Slope {
    enum class Kind { Value, Round, Flat };
    Kind kind = Kind::Round;
    Rat value = 0;

    bool has_value() const { return kind == Kind::Value; }
    double as_double() const { return to_double(value); }
};

namespace detail {

// lim_{x->x0} -N(x)/D(x) for polynomials vanishing to finite order, by
// repeated synthetic division by (x - x0).
inline Slope poly_slope_limit(CosPoly N, CosPoly D, const Rat& x0)
{
    if (D.is_zero()) return {Slope::Kind::Round, 0};
    auto divide_out = [&x0](CosPoly& p) {
        // p := p / (x - x0), exact when p(x0) = 0
        std::vector<Rat> q(p.coeffs.size() - 1);
        Rat carry = 0;
        for (size_t k = p.coeffs.size(); k-- > 1;) {
            carry = p.coeffs[k] + carry * x0;
            q[k - 1] = carry;
        }
        p.coeffs = std::move(q);
        p.trim();
    };
    while (true) {
        Rat dv = D.poly_at(x0);
        Rat nv = N.poly_at(x0);
        if (dv != 0) return {Slope::Kind::Value, -nv / dv};
        if (nv != 0) return {Slope::Kind::Flat, 0};
        if (N.is_zero() && D.is_zero()) return {Slope::Kind::Round, 0};
        if (!N.is_zero()) divide_out(N);
        if (!D.is_zero()) divide_out(D);
        if (N.is_zero() && D.is_zero()) return {Slope::Kind::Round, 0};
    }
}

// With S(x) = s as a polynomial in x:
//   psi' = [(1-x^2)S' - 2xS]/sin,   s' = -(1-x^2)S'/sin,
// so the slope at a pole is the limit of -N/D below.
inline std::pair<Slope, Slope> slopes_from_s_poly(const CosPoly& s)
{
    CosPoly S = s.normalized();
    if (S.is_zero() || S.sin_pow != 0) return {Slope{}, Slope{}};
    CosPoly Sp;
    {
        CosPoly t = S;
        // polynomial d/dx
        std::vector<Rat> d(t.coeffs.size() > 1 ? t.coeffs.size() - 1 : 0);
        for (size_t k = 1; k < t.coeffs.size(); ++k) d[k - 1] = t.coeffs[k] * Rat(k);
        Sp = CosPoly(std::move(d));
    }
    CosPoly onemx2({Rat(1), Rat(0), Rat(-1)});
    CosPoly N = onemx2 * Sp - S * CosPoly({Rat(0), Rat(2)});
    CosPoly D = -(onemx2 * Sp);
    return {poly_slope_limit(N, D, Rat(1)), poly_slope_limit(N, D, Rat(-1))};
}

} // namespace detail

// Exact slopes at the pole umbilics from the modal coefficients.
inline std::pair<Slope, Slope> slope_at_poles(const AstigmatismCoefficients& coeffs)
{
    return detail::slopes_from_s_poly(coeffs.to_poly());
}

// Full trig representation {a_l, b_l} of a coefficient set, with the Legendre
// tail converted exactly.
inline std::pair<std::vector<Rat>, std::vector<Rat>>
full_trig(const AstigmatismCoefficients& coeffs)
{
    auto [ta, tb] = legendre_to_trig(coeffs.legendre_c, coeffs.n);
    size_t len = std::max({coeffs.trig_a.size(), coeffs.trig_b.size(),
                           ta.size() + coeffs.n, tb.size() + coeffs.n});
    std::vector<Rat> a(len), b(len);
    for (size_t l = 0; l < coeffs.trig_a.size(); ++l) a[l] = coeffs.trig_a[l];
    for (size_t l = 0; l < coeffs.trig_b.size(); ++l) b[l] = coeffs.trig_b[l];
    for (size_t j = 0; j < ta.size(); ++j) a[coeffs.n + j] += ta[j];
    for (size_t j = 0; j < tb.size(); ++j) b[coeffs.n + j] += tb[j];
    return {a, b};
}

// Slopes from time-evaluated (floating) coefficients: cascade past leading
// factors below the zero threshold, (l+2)/(l+1) at the first significant one.
inline std::pair<Slope, Slope>
slope_at_poles(const AstigmatismCoefficientsD& coeffs, double tol = 1e-10)
{
    AstigmatismCoefficients exact;
    exact.n = coeffs.n;
    for (double v : coeffs.trig_a) exact.trig_a.push_back(Rat(v));
    for (double v : coeffs.trig_b) exact.trig_b.push_back(Rat(v));
    for (double v : coeffs.legendre_c) exact.legendre_c.push_back(Rat(v));
    auto [a, b] = full_trig(exact);
    double scale = 0;
    for (const auto& v : a) scale = std::max(scale, std::abs(to_double(v)));
    for (const auto& v : b) scale = std::max(scale, std::abs(to_double(v)));
    if (scale == 0) return {Slope{}, Slope{}};
    double thresh = tol * scale;
    auto cascade = [&](int sign) {
        for (size_t l = 0; l < a.size(); ++l) {
            double lead = to_double(b[l]) * sign + to_double(a[l]);
            if (std::abs(lead) > thresh)
                return Slope{Slope::Kind::Value, Rat(static_cast<int>(l) + 2,
                                                     static_cast<int>(l) + 1)};
        }
        return Slope{Slope::Kind::Flat, 0};
    };
    // north pole: factor a_l + b_l; south pole: a_l - b_l
    return {cascade(+1), cascade(-1)};
}

struct UmbilicData {
    int order = -1; // -1: round (all coefficients zero)
    bool nondegenerate = false;
    Slope slope_N, slope_S;
};

inline UmbilicData order_and_degeneracy(const AstigmatismCoefficients& coeffs)
{
    UmbilicData u;
    auto [a, b] = full_trig(coeffs);
    for (size_t l = 0; l < a.size(); ++l) {
        if (a[l] != 0 || b[l] != 0) {
            u.order = static_cast<int>(l);
            u.nondegenerate = a[l] * a[l] != b[l] * b[l];
            break;
        }
    }
    auto [sn, ss] = slope_at_poles(coeffs);
    u.slope_N = sn;
    u.slope_S = ss;
    return u;
}

struct FateReport {
    enum class Verdict { ConvergesRound, ConvergesHopf, Diverges };
    Verdict verdict = Verdict::ConvergesRound;
    int witness_mode = -1;   // modal index of the dominating term
    Rat witness_rate = 0;    // its exponential rate
    std::optional<SphereState> limit;

    std::string verdict_name() const
    {
        switch (verdict) {
        case Verdict::ConvergesRound: return "ConvergesRound";
        case Verdict::ConvergesHopf: return "ConvergesHopf";
        default: return "Diverges";
        }
    }
};

// Fate of the flow from the order k of the initial surface relative to n:
// k < n diverges, k = n converges to a (generically non-round) linear Hopf
// sphere, k > n converges to the round sphere of radius psi_inf.
inline FateReport classify_fate(const AstigmatismCoefficients& coeffs, const FlowParams& params)
{
    FateReport rep;
    const int n = params.n;
    UmbilicData u = order_and_degeneracy(coeffs);
    if (u.order < 0) { // round initial sphere
        rep.verdict = FateReport::Verdict::ConvergesRound;
        rep.limit = SphereState::from_polys(CosPoly::constant(params.psi_inf),
                                            CosPoly::constant(params.psi_inf), CosPoly());
        return rep;
    }
    FlowSolution sol(params, coeffs);
    // dominating rate among the modal exponentials that are actually present
    bool have = false;
    Rat best = 0;
    int best_mode = -1;
    for (int l = 0; l < n; ++l) {
        for (const auto& t : sol.trig_a_t[l].terms)
            if (t.coeff != 0 && (!have || t.rate > best)) { have = true; best = t.rate; best_mode = l; }
        for (const auto& t : sol.trig_b_t[l].terms)
            if (t.coeff != 0 && (!have || t.rate > best)) { have = true; best = t.rate; best_mode = l; }
    }
    for (size_t j = 0; j < sol.legendre_c_t.size(); ++j)
        for (const auto& t : sol.legendre_c_t[j].terms)
            if (t.coeff != 0 && (!have || t.rate > best)) {
                have = true;
                best = t.rate;
                best_mode = n + static_cast<int>(j);
            }
    rep.witness_mode = best_mode;
    rep.witness_rate = best;
    if (best > 0) {
        rep.verdict = FateReport::Verdict::Diverges;
    } else if (best == 0) {
        rep.verdict = FateReport::Verdict::ConvergesHopf;
        // limit: the rate-zero part of the closed form
        CosPoly r_lim, psi_lim, s_lim;
        Rat c2 = 0, c1 = 0;
        for (const auto& t : sol.C2_t.terms) if (t.rate == 0) c2 += t.coeff;
        for (const auto& t : sol.C1_t.terms) if (t.rate == 0) c1 += t.coeff;
        r_lim = CosPoly({c2, c1});
        psi_lim = CosPoly::constant(c2);
        for (const auto& c : sol.comps)
            if (c.rate == 0) {
                r_lim = r_lim + c.r_q;
                psi_lim = psi_lim + c.psi_q;
                s_lim = s_lim + c.s_poly;
            }
        rep.limit = SphereState::from_polys(r_lim, psi_lim, s_lim);
    } else {
        rep.verdict = FateReport::Verdict::ConvergesRound;
        rep.limit = SphereState::from_polys(CosPoly::constant(params.psi_inf),
                                            CosPoly::constant(params.psi_inf), CosPoly());
    }
    return rep;
}

// Planar profile curve (x1 along the symmetry axis):
//   x1 = r cos - sin dr,  x2 = r sin + cos dr.
inline std::vector<std::pair<double, double>>
profile_curve(const SphereState& state, int samples)
{
    std::vector<std::pair<double, double>> pts;
    pts.reserve(samples);
    for (int i = 0; i < samples; ++i) {
        double th = M_PI * i / (samples - 1);
        double r = state.r(th), dr = state.dr_dtheta(th);
        pts.emplace_back(r * std::cos(th) - std::sin(th) * dr,
                         r * std::sin(th) + std::cos(th) * dr);
    }
    return pts;
}

// Sup-norm of the Codazzi-Mainardi residual d(psi+s)/dtheta + 2 cot s over
// the interior grid; exactly zero for polynomial-backed states built by
// quadrature.
inline double cm_residual(const SphereState& state, int grid = 2048)
{
    if (state.psi_exact && state.s_exact) {
        CosPoly res = codazzi_mainardi_poly(*state.psi_exact, *state.s_exact);
        if (res.is_zero()) return 0.0;
        double sup = 0;
        for (int i = 1; i < grid; ++i)
            sup = std::max(sup, std::abs(res.eval(M_PI * i / grid)));
        return sup;
    }
    double sup = 0;
    double h = M_PI / grid;
    for (int i = 2; i < grid - 1; ++i) {
        double th = i * h;
        double d = (state.psi(th + h) + state.s(th + h) - state.psi(th - h) - state.s(th - h))
                   / (2 * h);
        double res = d + 2.0 * (std::cos(th) / std::sin(th)) * state.s(th);
        sup = std::max(sup, std::abs(res));
    }
    return sup;
}

struct FlowEvent {
    enum class Type { FocalCrossing, UmbilicPop };
    Type type;
    double t;
    double theta; // crossing angle; 0 or pi for pops
};

// Interior zeros of s(t, .) located by sign-change bracketing + bisection.
inline std::vector<double> umbilic_circles(const FlowSolution& sol, double t, int grid = 2048)
{
    std::vector<double> zeros;
    double h = M_PI / grid;
    double prev = sol.s_at(t, h);
    for (int i = 2; i < grid; ++i) {
        double th = i * h;
        double cur = sol.s_at(t, th);
        if ((prev < 0) != (cur < 0) && prev != 0) {
            double lo = th - h, hi = th;
            for (int it = 0; it < 80; ++it) {
                double mid = 0.5 * (lo + hi);
                if ((sol.s_at(t, lo) < 0) != (sol.s_at(t, mid) < 0)) hi = mid;
                else lo = mid;
            }
            zeros.push_back(0.5 * (lo + hi));
        }
        prev = cur;
    }
    return zeros;
}

// Focal-set crossings (min of psi -+ s reaching 0) and umbilic pops (interior
// zero of s reaching a pole) over a finite time window.
inline std::vector<FlowEvent>
convexity_and_umbilic_events(const FlowSolution& sol, double t0, double t1,
                             int t_steps = 1024, int grid = 2048)
{
    std::vector<FlowEvent> events;
    auto bisect = [](auto f, double lo, double hi) {
        double flo = f(lo);
        for (int it = 0; it < 100 && hi - lo > 1e-12; ++it) {
            double mid = 0.5 * (lo + hi);
            if ((flo < 0) == (f(mid) < 0)) { lo = mid; flo = f(mid); }
            else hi = mid;
        }
        return 0.5 * (lo + hi);
    };

    // (a) focal-set crossing: min over theta of min(psi+s, psi-s)
    auto min_radius = [&](double t) {
        double m = std::numeric_limits<double>::infinity();
        for (int i = 0; i <= grid; ++i) {
            double th = M_PI * i / grid;
            double p = sol.psi_at(t, th), s = sol.s_at(t, th);
            m = std::min(m, std::min(p + s, p - s));
        }
        return m;
    };
    double dt = (t1 - t0) / t_steps;
    double prev = min_radius(t0);
    for (int i = 1; i <= t_steps; ++i) {
        double t = t0 + i * dt;
        double cur = min_radius(t);
        if ((prev < 0) != (cur < 0)) {
            double tc = bisect(min_radius, t - dt, t);
            // locate the crossing angle
            double best_th = 0, best = std::numeric_limits<double>::infinity();
            for (int j = 0; j <= grid; ++j) {
                double th = M_PI * j / grid;
                double p = sol.psi_at(tc, th), s = sol.s_at(tc, th);
                double v = std::abs(std::min(p + s, p - s));
                if (v < best) { best = v; best_th = th; }
            }
            events.push_back({FlowEvent::Type::FocalCrossing, tc, best_th});
        }
        prev = cur;
    }

    // (b) umbilic pop: the pole-limit of s/sin^2 changes sign
    for (int pole = 0; pole < 2; ++pole) {
        Rat x0 = pole == 0 ? Rat(1) : Rat(-1);
        std::vector<std::pair<double, double>> edge; // (rate, weight)
        for (const auto& c : sol.comps) {
            CosPoly q = c.s_poly.divide_exact(CosPoly({Rat(1), Rat(0), Rat(-1)}));
            edge.emplace_back(to_double(c.rate), to_double(q.poly_at(x0)));
        }
        auto edge_val = [&edge](double t) {
            double v = 0;
            for (const auto& [rate, w] : edge) v += w * std::exp(rate * t);
            return v;
        };
        double ep = edge_val(t0);
        for (int i = 1; i <= t_steps; ++i) {
            double t = t0 + i * dt;
            double ec = edge_val(t);
            if ((ep < 0) != (ec < 0)) {
                double tc = bisect(edge_val, t - dt, t);
                events.push_back({FlowEvent::Type::UmbilicPop, tc, pole == 0 ? 0.0 : M_PI});
            }
            ep = ec;
        }
    }
    std::sort(events.begin(), events.end(),
              [](const FlowEvent& a, const FlowEvent& b) { return a.t < b.t; });
    return events;
}

} // namespace hopf

#endif
