#ifndef HOPF_FIT_HPP_
#define HOPF_FIT_HPP_

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "hopf/basis.hpp"
#include "hopf/legendre.hpp"

namespace hopf {

struct DecompositionResult {
    AstigmatismCoefficientsD coeffs;
    double residual_sup = 0; // L-inf misfit over the input samples
    bool converged = false;  // residual_sup <= tol
};

// Least-squares modal decomposition of sampled astigmatism data against the
// mixed basis {sin^{2l+2}, cos sin^{2l+2} | l < n} u {sin^{2+n} P^n_l | n <= l <= L_max}.
inline DecompositionResult
decompose_samples(const std::vector<std::pair<double, double>>& samples, int n,
                  int L_max = 32, double tol = 1e-9)
{
    if (n < 0) throw std::invalid_argument("decompose_samples: n must be >= 0");
    if (L_max < n) throw std::invalid_argument("decompose_samples: L_max must be >= n");
    const int m = static_cast<int>(samples.size());
    const int cols = 2 * n + (L_max - n + 1);
    if (m < cols) throw std::invalid_argument("decompose_samples: underdetermined sample set");

    Eigen::MatrixXd A(m, cols);
    Eigen::VectorXd y(m);
    for (int i = 0; i < m; ++i) {
        double th = samples[i].first;
        double sn = std::sin(th), cs = std::cos(th);
        y(i) = samples[i].second;
        for (int l = 0; l < n; ++l) {
            double p = std::pow(sn, 2 * l + 2);
            A(i, 2 * l) = p;
            A(i, 2 * l + 1) = cs * p;
        }
        double tail = std::pow(sn, 2 + n);
        for (int l = n; l <= L_max; ++l)
            A(i, 2 * n + l - n) = tail * legendre_assoc(l, n, cs);
    }

    // equilibrate columns: high-l Legendre modes dwarf the trig modes otherwise
    Eigen::VectorXd scale(cols);
    for (int j = 0; j < cols; ++j) {
        double s = A.col(j).lpNorm<Eigen::Infinity>();
        scale(j) = s > 0 ? s : 1.0;
        A.col(j) /= scale(j);
    }
    Eigen::VectorXd c = A.colPivHouseholderQr().solve(y);
    Eigen::VectorXd r = A * c - y;
    c = c.cwiseQuotient(scale);

    DecompositionResult out;
    out.coeffs.n = n;
    for (int l = 0; l < n; ++l) {
        out.coeffs.trig_a.push_back(c(2 * l));
        out.coeffs.trig_b.push_back(c(2 * l + 1));
    }
    for (int l = n; l <= L_max; ++l) out.coeffs.legendre_c.push_back(c(2 * n + l - n));

    out.residual_sup = r.lpNorm<Eigen::Infinity>();
    out.converged = out.residual_sup <= tol;
    return out;
}

// Sample an evaluator on the uniform interior grid and decompose it.
template <typename F>
DecompositionResult decompose_function(F&& s, int n, int grid = 512, int L_max = 32,
                                       double tol = 1e-9)
{
    std::vector<std::pair<double, double>> samples;
    samples.reserve(grid - 1);
    for (int i = 1; i < grid; ++i) {
        double th = M_PI * i / grid;
        samples.emplace_back(th, s(th));
    }
    return decompose_samples(samples, n, L_max, tol);
}

} // namespace hopf

#endif
