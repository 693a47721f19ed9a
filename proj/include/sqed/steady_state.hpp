#pragma once

// Stationary states of a Liouvillian: a direct trace-constrained linear
// solve, a fourth-order explicit time integrator as an independent
// cross-check, and a null-space uniqueness probe.

#include <Eigen/Dense>
#include <Eigen/SparseCore>
#include <Eigen/SparseLU>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>

#include "sqed/core.hpp"
#include "sqed/superop.hpp"

namespace sqed {

struct SolverError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct TruncationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct SteadyStateReport {
    DensityMatrix state;
    double residual;               // ||L rho||_F
    bool unique;
    double spectral_gap_estimate;  // second-smallest singular value of L (0 if skipped)
    double truncation_tail;        // full models only, else 0
    long iterations = 0;
};

namespace detail {

/// Max over cavities of the population in the top two Fock levels.
/// Meaningful for the [2,2,n,n] layout; 0 for qubit-only spaces.
inline double truncation_tail_of(const Matrix& rho, const HilbertSpace& space) {
    if (space.num_factors() != 4) return 0.0;
    const int n = space.factor(2);
    double tail_a = 0.0, tail_b = 0.0;
    Matrix cav_a = partial_trace_matrix(rho, space, {2});
    Matrix cav_b = partial_trace_matrix(rho, space, {3});
    for (int k = n - 2; k < n; ++k) {
        tail_a += std::real(cav_a(k, k));
        tail_b += std::real(cav_b(k, k));
    }
    return std::max(tail_a, tail_b);
}

/// Hermitize, check the PSD floor, clip small negative eigenvalues,
/// renormalize.
inline DensityMatrix sanitize_state(Matrix rho, const HilbertSpace& space) {
    rho = ((rho + rho.adjoint()) / 2.0).eval();
    rho /= rho.trace().real();
    Eigen::SelfAdjointEigenSolver<Matrix> es(rho);
    const double min_ev = es.eigenvalues().minCoeff();
    if (min_ev < -kPsdTol)
        throw SolverError("steady state has eigenvalue " + std::to_string(min_ev) +
                          " below the -1e-8 floor");
    if (min_ev < 0.0) {
        Eigen::VectorXd ev = es.eigenvalues().cwiseMax(0.0);
        rho = es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().adjoint();
        rho /= rho.trace().real();
    }
    return {space, std::move(rho)};
}

inline double sup_norm_estimate(const SparseMatrix& l) {
    // max absolute row sum via the transpose's column structure
    Eigen::VectorXd row_sums = Eigen::VectorXd::Zero(l.rows());
    for (int k = 0; k < l.outerSize(); ++k)
        for (SparseMatrix::InnerIterator it(l, k); it; ++it)
            row_sums(it.row()) += std::abs(it.value());
    return row_sums.maxCoeff();
}

} // namespace detail

/// Smallest two singular values of the dense supermatrix. Unique steady
/// state iff the null space is one-dimensional.
inline std::pair<bool, double> uniqueness_check(const Liouvillian& l,
                                                double rel_tol = 1e-10) {
    Matrix dense = l.dense();
    Eigen::BDCSVD<Matrix> svd(dense);
    const auto& sv = svd.singularValues();
    const double scale = sv(0) > 0 ? sv(0) : 1.0;
    const Eigen::Index n = sv.size();
    const double second_smallest = sv(n - 2);
    const bool unique = second_smallest > rel_tol * scale;
    return {unique, second_smallest};
}

/// Solve L rho = 0 with one row replaced by the trace constraint.
inline SteadyStateReport steady_state_direct(const Liouvillian& l,
                                             bool check_uniqueness = true) {
    const int d = l.dim();
    const Eigen::Index d2 = Eigen::Index(d) * d;
    Vector rhs = Vector::Zero(d2);
    rhs(0) = 1.0;

    Vector x;
    if (d2 <= 4096) {
        Matrix a = l.dense();
        a.row(0).setZero();
        for (int k = 0; k < d; ++k) a(0, Eigen::Index(k) * d + k) = 1.0;
        x = a.partialPivLu().solve(rhs);
    } else {
        // sparse path: same trace-row replacement
        std::vector<Eigen::Triplet<Complex>> trips;
        trips.reserve(static_cast<std::size_t>(l.supermatrix.nonZeros()) + d);
        for (int k = 0; k < l.supermatrix.outerSize(); ++k)
            for (SparseMatrix::InnerIterator it(l.supermatrix, k); it; ++it)
                if (it.row() != 0)
                    trips.emplace_back(it.row(), it.col(), it.value());
        for (int k = 0; k < d; ++k)
            trips.emplace_back(0, Eigen::Index(k) * d + k, Complex(1.0, 0.0));
        SparseMatrix a(d2, d2);
        a.setFromTriplets(trips.begin(), trips.end());
        a.makeCompressed();
        Eigen::SparseLU<SparseMatrix> lu(a);
        if (lu.info() != Eigen::Success)
            throw SolverError("steady_state_direct: sparse factorization failed "
                              "(degenerate steady-state manifold?)");
        x = lu.solve(rhs);
    }
    if (!x.allFinite())
        throw SolverError("steady_state_direct: singular system beyond the "
                          "trace deficiency (non-unique steady state)");

    Matrix rho = Eigen::Map<const Matrix>(x.data(), d, d);
    DensityMatrix state = detail::sanitize_state(std::move(rho), l.space);
    const double residual = l.apply(state.matrix).norm();
    const double l_norm = l.supermatrix.norm();
    if (residual > 1e-8 * l_norm)
        throw SolverError("steady_state_direct: residual " +
                          std::to_string(residual) + " above tolerance");

    bool unique = true;
    double gap = 0.0;
    if (check_uniqueness && d2 <= 1024)
        std::tie(unique, gap) = uniqueness_check(l);
    if (!unique)
        throw SolverError("steady_state_direct: non-unique steady state "
                          "(null space dimension > 1)");

    const double tail = detail::truncation_tail_of(state.matrix, l.space);
    return {std::move(state), residual, unique, gap, tail, 0};
}

struct EvolveOptions {
    double dt = 0.0;            // 0: pick from the stability bound
    double tol = 1e-8;          // stop when ||L rho||_F < tol
    long max_steps = 2'000'000;
    int check_every = 50;
    double tail_limit = std::numeric_limits<double>::infinity();
};

/// Integrate d rho/dt = L rho with classic RK4 until the residual drops
/// below tol. The RK4 fixed point coincides with the exact steady state,
/// so the step size only affects stability, not the answer.
inline SteadyStateReport steady_state_evolve(const Liouvillian& l,
                                             const DensityMatrix& rho0,
                                             EvolveOptions opts = {}) {
    if (rho0.space != l.space)
        throw std::invalid_argument("steady_state_evolve: space mismatch");
    const int d = l.dim();
    const Eigen::Index d2 = Eigen::Index(d) * d;
    double dt = opts.dt;
    if (dt <= 0.0) dt = 1.5 / detail::sup_norm_estimate(l.supermatrix);

    Vector v = Eigen::Map<const Vector>(rho0.matrix.data(), d2);
    Vector k1 = l.supermatrix * v;
    double residual = k1.norm();
    long steps = 0;
    if (residual >= opts.tol) {
        Vector k2(d2), k3(d2), k4(d2);
        while (steps < opts.max_steps) {
            for (int i = 0; i < opts.check_every && steps < opts.max_steps; ++i) {
                k2 = l.supermatrix * (v + (0.5 * dt) * k1);
                k3 = l.supermatrix * (v + (0.5 * dt) * k2);
                k4 = l.supermatrix * (v + dt * k3);
                v += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
                k1 = l.supermatrix * v;
                ++steps;
            }
            // keep the trace pinned against integrator drift
            Complex tr = 0.0;
            for (int k = 0; k < d; ++k) tr += v(Eigen::Index(k) * d + k);
            v /= tr.real();
            k1 = l.supermatrix * v;
            residual = k1.norm();
            if (residual < opts.tol) break;
            if (!v.allFinite())
                throw SolverError("steady_state_evolve: integration diverged "
                                  "(dt above the stability bound?)");
        }
        if (residual >= opts.tol)
            throw SolverError("steady_state_evolve: iteration cap reached with "
                              "residual " + std::to_string(residual));
    }

    Matrix rho = Eigen::Map<const Matrix>(v.data(), d, d);
    DensityMatrix state = detail::sanitize_state(std::move(rho), l.space);
    const double tail = detail::truncation_tail_of(state.matrix, l.space);
    if (tail > opts.tail_limit)
        throw TruncationError("steady_state_evolve: truncation tail " +
                              std::to_string(tail) + " above limit; raise n_max");
    const double final_residual = l.apply(state.matrix).norm();
    return {std::move(state), final_residual, true, 0.0, tail, steps};
}

} // namespace sqed
