#pragma once

// Liouvillian superoperators acting on column-stacked density matrices:
// vec(A rho B) = kron(B^T, A) vec(rho).

#include <Eigen/Dense>
#include <Eigen/SparseCore>
#include <string>
#include <utility>

#include "sqed/core.hpp"

namespace sqed {

using SparseMatrix = Eigen::SparseMatrix<Complex>;

inline SparseMatrix sparse_kron(const SparseMatrix& a, const SparseMatrix& b) {
    SparseMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    out.reserve(Eigen::VectorXi::Constant(out.cols(), 8));
    std::vector<Eigen::Triplet<Complex>> trips;
    trips.reserve(static_cast<std::size_t>(a.nonZeros()) *
                  static_cast<std::size_t>(b.nonZeros()));
    for (int ka = 0; ka < a.outerSize(); ++ka)
        for (SparseMatrix::InnerIterator ia(a, ka); ia; ++ia)
            for (int kb = 0; kb < b.outerSize(); ++kb)
                for (SparseMatrix::InnerIterator ib(b, kb); ib; ++ib)
                    trips.emplace_back(ia.row() * b.rows() + ib.row(),
                                       ia.col() * b.cols() + ib.col(),
                                       ia.value() * ib.value());
    SparseMatrix res(a.rows() * b.rows(), a.cols() * b.cols());
    res.setFromTriplets(trips.begin(), trips.end());
    return res;
}

/// Superoperator for rho -> A rho B.
inline SparseMatrix left_right(const SparseMatrix& a, const SparseMatrix& b) {
    return sparse_kron(SparseMatrix(b.transpose()), a);
}

inline SparseMatrix sparse_identity(int d) {
    SparseMatrix id(d, d);
    id.setIdentity();
    return id;
}

/// 2 J rho J^dag - J^dag J rho - rho J^dag J.
inline SparseMatrix dissipator2(const SparseMatrix& j) {
    const int d = static_cast<int>(j.rows());
    SparseMatrix jd = j.adjoint();
    SparseMatrix jdj = jd * j;
    return SparseMatrix(2.0 * left_right(j, jd) -
                        left_right(jdj, sparse_identity(d)) -
                        left_right(sparse_identity(d), jdj));
}

/// -i [H, rho].
inline SparseMatrix commutator_superop(const SparseMatrix& h) {
    const int d = static_cast<int>(h.rows());
    return SparseMatrix(Complex(0, -1) * (left_right(h, sparse_identity(d)) -
                                          left_right(sparse_identity(d), h)));
}

/// Generator of d rho/dt = L rho, stored sparse; dense view on demand.
struct Liouvillian {
    HilbertSpace space;
    SparseMatrix supermatrix; // d^2 x d^2
    std::string metadata;

    Liouvillian(HilbertSpace s, SparseMatrix m, std::string meta)
        : space(std::move(s)), supermatrix(std::move(m)), metadata(std::move(meta)) {
        const int d = space.total_dim();
        if (supermatrix.rows() != Eigen::Index(d) * d ||
            supermatrix.cols() != Eigen::Index(d) * d)
            throw std::invalid_argument("Liouvillian: supermatrix is not d^2 x d^2");
    }

    int dim() const { return space.total_dim(); }

    Matrix dense() const { return Matrix(supermatrix); }

    /// L rho as a matrix.
    Matrix apply(const Matrix& rho) const {
        const int d = dim();
        Vector v = supermatrix * Eigen::Map<const Vector>(rho.data(), Eigen::Index(d) * d);
        return Eigen::Map<const Matrix>(v.data(), d, d);
    }
};

} // namespace sqed
