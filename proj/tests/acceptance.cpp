// Acceptance gate: one pass/fail line per criterion, exit 0 iff all pass.
#include <cmath>
#include <cstdio>
#include <random>

#include "hopf/flow.hpp"
#include "hopf/geometry.hpp"
#include "hopf/oracle.hpp"

using namespace hopf;

namespace {

AstigmatismCoefficients trig_init(int n, const std::vector<Rat>& a, const std::vector<Rat>& b)
{
    AstigmatismCoefficients co;
    co.n = n;
    std::vector<Rat> ta, tb;
    for (size_t l = 0; l < a.size() || l < b.size(); ++l) {
        Rat av = l < a.size() ? a[l] : Rat(0);
        Rat bv = l < b.size() ? b[l] : Rat(0);
        if (static_cast<int>(l) < n) {
            co.trig_a.push_back(av);
            co.trig_b.push_back(bv);
        } else {
            ta.push_back(av);
            tb.push_back(bv);
        }
    }
    co.trig_a.resize(n, Rat(0));
    co.trig_b.resize(n, Rat(0));
    co.legendre_c = trig_to_legendre(ta, tb, n);
    return co;
}

// Full trig coefficients (a_l(t), b_l(t)) of an evolved coefficient set.
std::pair<std::vector<double>, std::vector<double>> full_trig_at(const FlowSolution& sol,
                                                                 double t)
{
    AstigmatismCoefficientsD d = sol.evolve_s(t);
    AstigmatismCoefficients exact;
    exact.n = d.n;
    for (double v : d.trig_a) exact.trig_a.push_back(Rat(v));
    for (double v : d.trig_b) exact.trig_b.push_back(Rat(v));
    for (double v : d.legendre_c) exact.legendre_c.push_back(Rat(v));
    auto [a, b] = full_trig(exact);
    std::vector<double> ad, bd;
    for (const auto& v : a) ad.push_back(to_double(v));
    for (const auto& v : b) bd.push_back(to_double(v));
    ad.resize(4, 0.0);
    bd.resize(4, 0.0);
    return {ad, bd};
}

// 1. n=0 closed form for (a0,b0,a1,b1) = (1,1,2,3) at t in {0.1, 1, 5},
//    coefficient-by-coefficient to 1e-12.
bool criterion1()
{
    FlowSolution sol(FlowParams(0, Rat(10)),
                     trig_init(0, {Rat(1), Rat(2)}, {Rat(1), Rat(3)}));
    double a0 = 1, b0 = 1, a1 = 2, b1 = 3;
    for (double t : {0.1, 1.0, 5.0}) {
        auto [a, b] = full_trig_at(sol, t);
        double e3 = std::exp(-3 * t), e1 = std::exp(-t), e6 = std::exp(-6 * t);
        double ref_a0 = a0 + 2.0 / 3.0 * a1 * (1 - e3);
        double ref_b0 = b0 * e1 + 0.4 * b1 * (e1 - e6);
        double ref_a1 = a1 * e3;
        double ref_b1 = b1 * e6;
        if (std::abs(a[0] - ref_a0) > 1e-12 || std::abs(b[0] - ref_b0) > 1e-12
            || std::abs(a[1] - ref_a1) > 1e-12 || std::abs(b[1] - ref_b1) > 1e-12
            || std::abs(a[2]) > 1e-12 || std::abs(b[2]) > 1e-12)
            return false;
    }
    return true;
}

// 2. n=1 closed form for the same tuple: e^{t/2} growth on the sin^2 pair,
//    stationary a1, e^{-t} decay on b1 (not e^{-3t/4}).
bool criterion2()
{
    FlowSolution sol(FlowParams(1, Rat(10)),
                     trig_init(1, {Rat(1), Rat(2)}, {Rat(1), Rat(3)}));
    double a0 = 1, b0 = 1, a1 = 2, b1 = 3;
    for (double t : {0.1, 1.0, 5.0}) {
        auto [a, b] = full_trig_at(sol, t);
        double eh = std::exp(0.5 * t);
        if (std::abs(a[0] - a0 * eh) > 1e-12 * eh || std::abs(b[0] - b0 * eh) > 1e-12 * eh
            || std::abs(a[1] - a1) > 1e-12
            || std::abs(b[1] - b1 * std::exp(-t)) > 1e-12)
            return false;
    }
    return true;
}

// 3. Finite-difference oracle vs closed form for both reference flows:
//    sup-norm < 5e-4 at N=512, dt=1e-3, T=1; observed order 2.0 +- 0.2
//    across N in {128, 256, 512}.
bool criterion3()
{
    auto check = [](int n) {
        AstigmatismCoefficients co;
        if (n == 0) {
            co = trig_init(0, {Rat(1), Rat(2)}, {Rat(1), Rat(3)});
        } else {
            co = trig_init(1, {Rat(1), Rat(2)}, {Rat(1), Rat(3)});
        }
        FlowParams p(n, Rat(10));
        FlowSolution sol(p, co);
        double lambda = to_double(p.lambda());
        auto s0 = [&](double th) { return sol.s_at(0.0, th); };
        auto sup_err = [&](int N, double dt) {
            auto u = fd_evolve_s(lambda, s0, 1.0, N, dt);
            Grid g(N);
            double e = 0;
            for (int i = 0; i < N - 1; ++i)
                e = std::max(e, std::abs(u[i] - sol.s_at(1.0, g.theta[i])));
            return e;
        };
        double e128 = sup_err(128, 4e-3), e256 = sup_err(256, 2e-3),
               e512 = sup_err(512, 1e-3);
        if (e512 >= 5e-4) return false;
        double p1 = std::log2(e128 / e256), p2 = std::log2(e256 / e512);
        return p1 > 1.8 && p1 < 2.2 && p2 > 1.8 && p2 < 2.2;
    };
    return check(0) && check(1);
}

// 4. Combinatorial lemmas hold exactly for every valid 0 <= m, l <= 30.
bool criterion4()
{
    for (int m = 0; m <= 30; ++m)
        for (int l = 0; l <= 30; ++l) {
            if (m >= 1 && l >= m - 1 && !lemma1_holds(l, m)) return false;
            if (l >= m && !lemma2_holds(l, m)) return false;
        }
    return true;
}

// 5. Quadrature roundtrip s -> r -> (psi, s) is exact (rational equality) and
//    the Codazzi-Mainardi residual is the zero polynomial.
bool criterion5()
{
    for (int l = 0; l <= 8; ++l)
        for (int kind = 0; kind < 2; ++kind) {
            CosPoly s = kind == 0 ? CosPoly({Rat(1)}, 2 * l + 2).normalized()
                                  : CosPoly({Rat(0), Rat(1)}, 2 * l + 2).normalized();
            CosPoly r = quadrature_r_from_s(s, Rat(2), Rat(7));
            if (!(s_from_r(r) == s)) return false;
            if (!codazzi_mainardi_poly(psi_from_r(r), s).is_zero()) return false;
        }
    for (int n = 0; n <= 3; ++n)
        for (int l = n; l <= 10; ++l) {
            AstigmatismCoefficients co;
            co.n = n;
            co.legendre_c.assign(l - n + 1, Rat(0));
            co.legendre_c[l - n] = Rat(1);
            CosPoly r = quadrature_r_from_s(co, Rat(1), Rat(3));
            if (!(s_from_r(r) == co.to_poly())) return false;
            if (!codazzi_mainardi_poly(psi_from_r(r), co.to_poly()).is_zero()) return false;
        }
    return true;
}

// 6. Slope quantization: 500 random sets per order k in {0..3}; slope always
//    <= 1 + 1/(k+1), equality iff a_k^2 != b_k^2; plus the slope-jump
//    regression (mu_S: 3/2 at t=0, 2 at t=1e-3).
bool criterion6()
{
    std::mt19937 rng(11);
    std::uniform_int_distribution<int> num(-6, 6);
    for (int k = 0; k <= 3; ++k)
        for (int rep = 0; rep < 500; ++rep) {
            std::vector<Rat> a(k + 3, Rat(0)), b(k + 3, Rat(0));
            do {
                a[k] = Rat(num(rng));
                b[k] = Rat(num(rng));
            } while (a[k] == 0 && b[k] == 0);
            for (size_t l = k + 1; l < a.size(); ++l) {
                a[l] = Rat(num(rng));
                b[l] = Rat(num(rng));
            }
            auto [sn, ss] = slope_at_poles(trig_init(0, a, b));
            Rat bound(k + 2, k + 1);
            if (sn.has_value() && sn.value > bound) return false;
            if (ss.has_value() && ss.value > bound) return false;
            bool nondeg = a[k] * a[k] != b[k] * b[k];
            bool both_max = sn.has_value() && sn.value == bound && ss.has_value()
                            && ss.value == bound;
            if (nondeg != both_max) return false;
        }

    auto co = trig_init(0, {Rat(1), Rat(2)}, {Rat(1), Rat(3)});
    FlowSolution sol(FlowParams(0, Rat(10)), co);
    auto [n0, s0] = slope_at_poles(co);
    auto [n1, s1] = slope_at_poles(sol.evolve_s(1e-3));
    return s0.value == Rat(3, 2) && s1.value == Rat(2) && n0.value == Rat(2)
           && n1.value == Rat(2);
}

// 7. Umbilic pop for (a0,b0,a1,b1) = (1,5,2,3) under n=0: the interior
//    umbilic circle reaches theta=pi at the pinned root t*, and no interior
//    umbilics remain afterwards.
bool criterion7()
{
    const double t_star = 1.00444929013544272; // root of the pole-edge exponential sum
    auto co = trig_init(0, {Rat(1), Rat(2)}, {Rat(5), Rat(3)});
    // support constant chosen so the state stays convex throughout
    FlowSolution base(FlowParams(0, Rat(10)), co);
    FlowSolution sol(FlowParams(0, Rat(10)), co,
                     base.support_at_zero() + CosPoly::constant(Rat(3)));
    auto events = convexity_and_umbilic_events(sol, 0.0, 4.0);
    if (events.size() != 1) return false;
    if (events[0].type != FlowEvent::Type::UmbilicPop) return false;
    if (std::abs(events[0].theta - M_PI) > 1e-12) return false;
    if (std::abs(events[0].t - t_star) > 1e-8) return false;
    return umbilic_circles(sol, 0.0).size() == 1
           && umbilic_circles(sol, t_star - 0.1).size() == 1
           && umbilic_circles(sol, t_star + 0.1).empty()
           && umbilic_circles(sol, 4.0).empty();
}

// 8. Soliton residuals < 1e-9 at 200 random points for lambda in
//    {1.5, 2.5, 3, 4} (both exponential branches), and the dilation orbit is
//    a pointwise dilation about (psi_inf, 0) to 1e-10.
bool criterion8()
{
    std::mt19937 rng(17);
    std::uniform_real_distribution<double> ut(0.05, 3.0), uth(0.1, M_PI - 0.1);
    for (double lambda : {1.5, 2.5, 3.0, 4.0}) {
        SolitonSolution sol(lambda, 10.0, 13.0, 0.7);
        const double e = 1e-3;
        for (int i = 0; i < 200; ++i) {
            double t = ut(rng), th = uth(rng);
            // dr/dt by 4th-order stencil vs -(psi + lambda s - psi_inf)
            double drdt = (8 * (sol.r(t + e, th) - sol.r(t - e, th))
                           - (sol.r(t + 2 * e, th) - sol.r(t - 2 * e, th)))
                          / (12 * e);
            double K = sol.psi(t, th) + lambda * sol.s(t, th) - 10.0;
            if (std::abs(drdt + K) > 1e-9) return false;
            // Codazzi-Mainardi in theta, same stencil
            auto g = [&](double x) { return sol.psi(t, x) + sol.s(t, x); };
            double dth = (8 * (g(th + e) - g(th - e)) - (g(th + 2 * e) - g(th - 2 * e)))
                         / (12 * e);
            double cm = dth + 2.0 * (std::cos(th) / std::sin(th)) * sol.s(t, th);
            if (std::abs(cm) > 1e-9) return false;
        }
    }

    // dilation orbit: psi_inf=10, lambda=4, s_{pi/2}=1, psi0 on the orbit
    SolitonSolution dil(4.0, 10.0, 14.0, 1.0);
    for (double t : {0.0, 0.4, 1.1, 2.5})
        for (double th : {0.3, 1.0, 1.57, 2.3, 2.9}) {
            double fac = std::exp((2.0 - 4.0) * t);
            if (std::abs(dil.psi(t, th) - (10.0 + fac * (dil.psi(0, th) - 10.0))) > 1e-10)
                return false;
            if (std::abs(dil.s(t, th) - fac * dil.s(0, th)) > 1e-10) return false;
        }
    return true;
}

// 9. Fate matrix: for every (k, n) in {0,1,2}^2 the verdict matches the
//    empirical long-time behavior of the evolved astigmatism.
bool criterion9()
{
    for (int k = 0; k <= 2; ++k)
        for (int n = 0; n <= 2; ++n) {
            std::vector<Rat> a(k + 1, Rat(0));
            a[k] = Rat(1);
            auto co = trig_init(n, a, {});
            FlowParams p(n, Rat(10));
            FlowSolution sol(p, co);
            FateReport rep = classify_fate(co, p);
            double norm_small = 0, norm_large = 0;
            for (double th = 0.1; th < M_PI; th += 0.05) {
                norm_small = std::max(norm_small, std::abs(sol.s_at(20.0, th)));
                norm_large = std::max(norm_large, std::abs(sol.s_at(40.0, th)));
            }
            FateReport::Verdict want;
            if (norm_large > 10 * norm_small && norm_large > 1)
                want = FateReport::Verdict::Diverges;
            else if (norm_large > 1e-3)
                want = FateReport::Verdict::ConvergesHopf;
            else
                want = FateReport::Verdict::ConvergesRound;
            if (rep.verdict != want) return false;
        }
    return true;
}

} // namespace

int main()
{
    struct Criterion {
        const char* name;
        bool (*fn)();
    };
    const Criterion criteria[] = {
        {"1 n=0 closed-form evolution (term-by-term, 1e-12)", criterion1},
        {"2 n=1 closed-form evolution (growth/stationary/decay rates)", criterion2},
        {"3 finite-difference oracle agreement and 2nd-order convergence", criterion3},
        {"4 combinatorial lemmas exact for all indices <= 30", criterion4},
        {"5 quadrature roundtrip exact, zero Codazzi-Mainardi residual", criterion5},
        {"6 slope quantization bound, equality cases, slope jump", criterion6},
        {"7 umbilic pop time pinned by independent root-finder", criterion7},
        {"8 soliton flow residuals and dilation orbit", criterion8},
        {"9 fate matrix matches empirical long-time behavior", criterion9},
    };
    int fails = 0;
    for (const auto& c : criteria) {
        bool ok = c.fn();
        std::printf("criterion %s: %s\n", c.name, ok ? "PASS" : "FAIL");
        if (!ok) ++fails;
    }
    return fails ? 1 : 0;
}
