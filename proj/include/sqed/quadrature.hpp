#pragma once

// Gauss-Hermite nodes and weights (weight exp(-x^2) on the real line)
// via Golub-Welsch on the symmetric Jacobi matrix.

#include <Eigen/Dense>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace sqed {

struct QuadratureRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

inline QuadratureRule gauss_hermite(int order) {
    if (order < 3)
        throw std::invalid_argument("gauss_hermite: order < 3");
    Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(order, order);
    for (int k = 1; k < order; ++k) {
        const double beta = std::sqrt(k / 2.0);
        jacobi(k - 1, k) = beta;
        jacobi(k, k - 1) = beta;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(jacobi);
    QuadratureRule rule;
    rule.nodes.resize(static_cast<std::size_t>(order));
    rule.weights.resize(static_cast<std::size_t>(order));
    const double mu0 = std::sqrt(std::numbers::pi); // integral of exp(-x^2)
    for (int i = 0; i < order; ++i) {
        rule.nodes[std::size_t(i)] = es.eigenvalues()(i);
        const double v0 = es.eigenvectors()(0, i);
        rule.weights[std::size_t(i)] = mu0 * v0 * v0;
    }
    return rule;
}

/// Expectation of f under the normal density with standard deviation s:
/// substitute x = theta/(sqrt(2) s) into the Hermite weight.
template <typename F>
double gaussian_average(double s, int order, F&& f) {
    if (s == 0.0) return f(0.0);
    QuadratureRule rule = gauss_hermite(order);
    double acc = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i)
        acc += rule.weights[i] * f(std::numbers::sqrt2 * s * rule.nodes[i]);
    return acc / std::sqrt(std::numbers::pi);
}

} // namespace sqed
