#ifndef HOPF_ORACLE_HPP_
#define HOPF_ORACLE_HPP_

#include <cmath>
#include <stdexcept>
#include <vector>

#include "hopf/legendre.hpp"

namespace hopf {

// Uniform interior grid theta_i = i pi / N, i = 1..N-1, Dirichlet ends.
struct Grid {
    int N;
    double h;
    std::vector<double> theta;

    explicit Grid(int N_) : N(N_), h(M_PI / N_)
    {
        if (N < 16) throw std::invalid_argument("Grid: need N >= 16");
        theta.reserve(N - 1);
        for (int i = 1; i < N; ++i) theta.push_back(i * h);
    }
};

namespace detail {

// Thomas solve of a tridiagonal system (a: sub, b: diag, c: super), in place.
inline void thomas_solve(std::vector<double> a, std::vector<double> b,
                         std::vector<double> c, std::vector<double>& d)
{
    const size_t m = b.size();
    for (size_t i = 1; i < m; ++i) {
        double w = a[i] / b[i - 1];
        b[i] -= w * c[i - 1];
        d[i] -= w * d[i - 1];
    }
    d[m - 1] /= b[m - 1];
    for (size_t i = m - 1; i-- > 0;) d[i] = (d[i] - c[i] * d[i + 1]) / b[i];
}

} // namespace detail

// Crank-Nicolson integration of the astigmatism reaction-diffusion equation
//   ds/dt = (lambda-1)/(2 sin) d(sin ds) - lambda cot ds + (1+cos^2)/sin^2 s,
// s(0) = s(pi) = 0, entirely independent of the closed-form machinery.
//
// Discretizing s directly is unconditionally unstable: the singular reaction
// (1+cos^2)/sin^2 gives the interior-node operator spurious pole-localized
// eigenvalues growing like +N^2, which Crank-Nicolson cannot damp.  Since
// every admissible s vanishes at least quadratically at the poles, the solver
// works in the regular variable v = s/sin^2, for which all pole singularities
// cancel exactly:
//   dv/dt = (lambda-1)/2 v'' + (3 lambda - 5)/2 cot v' + (2-lambda) v,
// with evenness closure at the poles (second-order ghost extrapolation).
// Input and output remain s samples on the interior grid.
template <typename F>
std::vector<double> fd_evolve_s(double lambda, F&& s0, double t_final, int N = 512,
                                double dt = 1e-3)
{
    if (lambda <= 1) throw std::domain_error("fd_evolve_s: need lambda > 1");
    if (t_final < 0 || dt <= 0) throw std::invalid_argument("fd_evolve_s: bad time stepping");
    Grid g(N);
    const int m = N - 1;
    std::vector<double> u(m);
    double scale0 = 0;
    for (int i = 0; i < m; ++i) {
        double sn = std::sin(g.theta[i]);
        u[i] = s0(g.theta[i]) / (sn * sn);
        scale0 = std::max(scale0, std::abs(u[i]));
    }

    // stencil of the regular operator: lo*v[i-1] + di*v[i] + hi*v[i+1]
    std::vector<double> lo(m), di(m), hi(m);
    const double idh2 = 1.0 / (g.h * g.h), idh = 1.0 / (2.0 * g.h);
    const double diff = 0.5 * (lambda - 1.0);
    for (int i = 0; i < m; ++i) {
        double ct = std::cos(g.theta[i]) / std::sin(g.theta[i]);
        double conv = 0.5 * (3.0 * lambda - 5.0) * ct;
        lo[i] = diff * idh2 - conv * idh;
        di[i] = -2.0 * diff * idh2 + (2.0 - lambda);
        hi[i] = diff * idh2 + conv * idh;
    }
    // v is even about both poles: ghost v(0) = (4 v(h) - v(2h)) / 3
    di[0] += lo[0] * 4.0 / 3.0;
    hi[0] -= lo[0] / 3.0;
    lo[0] = 0;
    di[m - 1] += hi[m - 1] * 4.0 / 3.0;
    lo[m - 1] -= hi[m - 1] / 3.0;
    hi[m - 1] = 0;

    long steps = std::lround(t_final / dt);
    double dt_eff = steps > 0 ? t_final / steps : dt;
    double guard_rate = std::max(lambda - 1.0, 2.0 - lambda);
    for (long k = 0; k < steps; ++k) {
        std::vector<double> rhs(m), a(m), b(m), c(m);
        for (int i = 0; i < m; ++i) {
            double left = i > 0 ? u[i - 1] : 0.0;
            double right = i < m - 1 ? u[i + 1] : 0.0;
            rhs[i] = u[i] + 0.5 * dt_eff * (lo[i] * left + di[i] * u[i] + hi[i] * right);
            a[i] = -0.5 * dt_eff * lo[i];
            b[i] = 1.0 - 0.5 * dt_eff * di[i];
            c[i] = -0.5 * dt_eff * hi[i];
        }
        detail::thomas_solve(std::move(a), std::move(b), std::move(c), rhs);
        u = std::move(rhs);
        double sup = 0;
        for (double v : u) sup = std::max(sup, std::abs(v));
        double bound = 10.0 * (scale0 + 1e-12) * std::exp(guard_rate * (k + 1) * dt_eff);
        if (!std::isfinite(sup) || sup > bound)
            throw std::runtime_error("fd_evolve_s: instability detected");
    }
    std::vector<double> s(m);
    for (int i = 0; i < m; ++i) {
        double sn = std::sin(g.theta[i]);
        s[i] = u[i] * sn * sn;
    }
    return s;
}

// Observed spatial convergence order against a reference solution: errors at
// N and 2N (time step refined alongside), order = log2(e_N / e_2N).
template <typename F, typename G>
double fd_convergence_order(double lambda, F&& s0, G&& s_exact_at_t, double t,
                            int N = 128, double dt = 1e-3)
{
    auto sup_error = [&](int n, double step) {
        auto u = fd_evolve_s(lambda, s0, t, n, step);
        Grid g(n);
        double e = 0;
        for (int i = 0; i < n - 1; ++i)
            e = std::max(e, std::abs(u[i] - s_exact_at_t(g.theta[i])));
        return e;
    };
    double e1 = sup_error(N, dt);
    double e2 = sup_error(2 * N, dt / 2);
    return std::log2(e1 / e2);
}

// Discretized Legendre operator eigenvalue check: with
//   M = (1/(2(n+1))) [ d^2 + cot d + n(n+1) - n^2/sin^2 ],
// samples of P^n_l are an eigenvector with eigenvalue
// (n(n+1) - l(l+1))/(2(n+1)) = -omega_l.  Returns the least-squares
// eigenvalue estimate of M on the sampled P^n_l.
inline double legpoly_operator_eigenvalue(int l, int n, int N = 512)
{
    Grid g(N);
    const int m = N - 1;
    std::vector<double> p(m);
    for (int i = 0; i < m; ++i) p[i] = legendre_assoc(l, n, std::cos(g.theta[i]));
    double num = 0, den = 0;
    const double idh2 = 1.0 / (g.h * g.h), idh = 1.0 / (2.0 * g.h);
    for (int i = 1; i < m - 1; ++i) {
        double th = g.theta[i];
        double ct = std::cos(th) / std::sin(th);
        double sn = std::sin(th);
        double d2 = (p[i + 1] - 2.0 * p[i] + p[i - 1]) * idh2;
        double d1 = (p[i + 1] - p[i - 1]) * idh;
        double Mp = (d2 + ct * d1 + (n * (n + 1) - n * n / (sn * sn)) * p[i])
                    / (2.0 * (n + 1));
        num += Mp * p[i];
        den += p[i] * p[i];
    }
    return num / den;
}

} // namespace hopf

#endif
