#pragma once

// Entanglement measures: two-qubit concurrence and entanglement of
// formation, von Neumann entropy across a bipartition of a pure state,
// and the entropy of a two-mode squeezed vacuum.

#include <Eigen/Dense>
#include <cmath>

#include "sqed/core.hpp"

namespace sqed {

inline double binary_entropy(double x) {
    if (x <= 0.0 || x >= 1.0) return 0.0;
    return -x * std::log2(x) - (1.0 - x) * std::log2(1.0 - x);
}

/// Wootters concurrence C = max(0, l1 - l2 - l3 - l4). The spin-flip
/// spectrum is computed through the Hermitian form sqrt(rho) rho~
/// sqrt(rho), which is stable where the nonsymmetric product is not.
inline double concurrence(const DensityMatrix& rho) {
    if (rho.space.dims() != std::vector<int>{2, 2})
        throw std::invalid_argument("concurrence: space must be [2,2]");
    Matrix yy = Matrix::Zero(4, 4); // sigma_y (x) sigma_y
    yy(0, 3) = -1.0;
    yy(1, 2) = 1.0;
    yy(2, 1) = 1.0;
    yy(3, 0) = -1.0;
    Matrix herm = (rho.matrix + rho.matrix.adjoint()) / 2.0;
    Matrix tilde = yy * herm.conjugate() * yy;

    Eigen::SelfAdjointEigenSolver<Matrix> es(herm);
    Eigen::VectorXd w = es.eigenvalues().cwiseMax(0.0);
    Matrix sqrt_rho = es.eigenvectors() * w.cwiseSqrt().asDiagonal() *
                      es.eigenvectors().adjoint();

    Eigen::SelfAdjointEigenSolver<Matrix> es2(
        Matrix(sqrt_rho * tilde * sqrt_rho), Eigen::EigenvaluesOnly);
    Eigen::VectorXd lam = es2.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    // ascending order from the solver
    const double c = lam(3) - lam(2) - lam(1) - lam(0);
    return c > 0.0 ? c : 0.0;
}

/// EoF in ebits via the Wootters function of the concurrence.
inline double eof_two_qubit(const DensityMatrix& rho) {
    const double c = concurrence(rho);
    return binary_entropy((1.0 + std::sqrt(std::max(0.0, 1.0 - c * c))) / 2.0);
}

/// Von Neumann entropy (base 2) of the reduced state on `bipartition`.
inline double entanglement_entropy(const StateVector& psi,
                                   const std::vector<int>& bipartition) {
    Matrix rho = psi.amplitudes * psi.amplitudes.adjoint();
    Matrix red = partial_trace_matrix(rho, psi.space, bipartition);
    Eigen::SelfAdjointEigenSolver<Matrix> es(
        Matrix((red + red.adjoint()) / 2.0), Eigen::EigenvaluesOnly);
    double s = 0.0;
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
        const double p = es.eigenvalues()(i);
        if (p > 1e-15) s -= p * std::log2(p);
    }
    return s;
}

/// Entropy of entanglement of the two-mode squeezed vacuum:
/// (N+1) log2(N+1) - N log2(N).
inline double squeezed_state_eof(double N) {
    if (N < 0) throw std::invalid_argument("squeezed_state_eof: N < 0");
    if (N == 0.0) return 0.0;
    return (N + 1.0) * std::log2(N + 1.0) - N * std::log2(N);
}

} // namespace sqed
