#pragma once

// Operator algebra on tensor-product Hilbert spaces with truncated Fock
// factors. Factor order is fixed per model (atoms first, then cavity
// modes) and every builder documents the order it assumes.

#include <Eigen/Dense>
#include <complex>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace sqed {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

inline constexpr double kHermTol = 1e-10;
inline constexpr double kTraceTol = 1e-10;
inline constexpr double kPsdTol = 1e-8;
inline constexpr double kNormTol = 1e-12;

/// Ordered list of factor dimensions, e.g. {2,2,n,n} for
/// atom A, atom B, cavity a, cavity b.
class HilbertSpace {
public:
    explicit HilbertSpace(std::vector<int> dims) : dims_(std::move(dims)) {
        if (dims_.empty())
            throw std::invalid_argument("HilbertSpace: no factors");
        for (int d : dims_)
            if (d < 2)
                throw std::invalid_argument("HilbertSpace: factor dim < 2");
    }

    const std::vector<int>& dims() const { return dims_; }
    int factor(int i) const { return dims_.at(static_cast<std::size_t>(i)); }
    int num_factors() const { return static_cast<int>(dims_.size()); }

    int total_dim() const {
        return std::accumulate(dims_.begin(), dims_.end(), 1,
                               std::multiplies<int>());
    }

    bool operator==(const HilbertSpace& o) const { return dims_ == o.dims_; }
    bool operator!=(const HilbertSpace& o) const { return !(*this == o); }

private:
    std::vector<int> dims_;
};

/// Complex square matrix tagged with its composite space.
struct Operator {
    HilbertSpace space;
    Matrix matrix;

    Operator(HilbertSpace s, Matrix m) : space(std::move(s)), matrix(std::move(m)) {
        if (matrix.rows() != matrix.cols() || matrix.rows() != space.total_dim())
            throw std::invalid_argument("Operator: matrix/space dimension mismatch");
    }

    Operator adjoint() const { return {space, matrix.adjoint()}; }

    Operator operator*(const Operator& o) const {
        if (space != o.space)
            throw std::invalid_argument("Operator product: space mismatch");
        return {space, matrix * o.matrix};
    }
    Operator operator+(const Operator& o) const {
        if (space != o.space)
            throw std::invalid_argument("Operator sum: space mismatch");
        return {space, matrix + o.matrix};
    }
    Operator operator-(const Operator& o) const {
        if (space != o.space)
            throw std::invalid_argument("Operator difference: space mismatch");
        return {space, matrix - o.matrix};
    }
    friend Operator operator*(Complex c, const Operator& o) {
        return {o.space, c * o.matrix};
    }
};

/// Normalized pure state.
struct StateVector {
    HilbertSpace space;
    Vector amplitudes;

    StateVector(HilbertSpace s, Vector v) : space(std::move(s)), amplitudes(std::move(v)) {
        if (amplitudes.size() != space.total_dim())
            throw std::invalid_argument("StateVector: vector/space dimension mismatch");
        if (std::abs(amplitudes.norm() - 1.0) > kNormTol)
            throw std::invalid_argument("StateVector: not normalized");
    }
};

inline Operator identity(const HilbertSpace& space) {
    return {space, Matrix::Identity(space.total_dim(), space.total_dim())};
}

/// Kronecker product in declared factor order.
inline Operator tensor(const std::vector<Operator>& factors) {
    if (factors.empty())
        throw std::invalid_argument("tensor: no factors");
    std::vector<int> dims;
    Matrix out = Matrix::Constant(1, 1, Complex(1.0, 0.0));
    for (std::size_t i = 0; i < factors.size(); ++i) {
        const Matrix& f = factors[i].matrix;
        for (int d : factors[i].space.dims()) dims.push_back(d);
        Matrix next(out.rows() * f.rows(), out.cols() * f.cols());
        for (Eigen::Index r = 0; r < out.rows(); ++r)
            for (Eigen::Index c = 0; c < out.cols(); ++c)
                next.block(r * f.rows(), c * f.cols(), f.rows(), f.cols()) =
                    out(r, c) * f;
        out = std::move(next);
    }
    return {HilbertSpace(dims), std::move(out)};
}

/// Embed a single-factor operator into `space` at factor index `pos`,
/// identities elsewhere.
inline Operator embed(const HilbertSpace& space, int pos, const Matrix& op) {
    if (pos < 0 || pos >= space.num_factors())
        throw std::invalid_argument("embed: factor index " + std::to_string(pos) +
                                    " out of range");
    if (op.rows() != space.factor(pos) || op.cols() != space.factor(pos))
        throw std::invalid_argument("embed: operator does not fit factor " +
                                    std::to_string(pos));
    std::vector<Operator> factors;
    for (int i = 0; i < space.num_factors(); ++i) {
        HilbertSpace fs({space.factor(i)});
        factors.emplace_back(fs, i == pos
                                     ? op
                                     : Matrix(Matrix::Identity(space.factor(i),
                                                               space.factor(i))));
    }
    Operator full = tensor(factors);
    return {space, std::move(full.matrix)};
}

/// Truncated annihilation operator: <k-1|a|k> = sqrt(k). The adjoint is
/// the exact conjugate transpose, so the top Fock level is lossy.
inline Matrix annihilation_matrix(int n_max) {
    if (n_max < 2)
        throw std::invalid_argument("annihilation: n_max < 2");
    Matrix a = Matrix::Zero(n_max, n_max);
    for (int k = 1; k < n_max; ++k) a(k - 1, k) = std::sqrt(double(k));
    return a;
}

inline Operator annihilation(int n_max) {
    return {HilbertSpace({n_max}), annihilation_matrix(n_max)};
}

// Qubit convention: index 0 = |g>, index 1 = |e>; sigma^+ = |e><g|.
inline Matrix sigma_minus_matrix() {
    Matrix s = Matrix::Zero(2, 2);
    s(0, 1) = 1.0;
    return s;
}
inline Matrix sigma_plus_matrix() { return sigma_minus_matrix().adjoint(); }

/// Hermitian, unit-trace, numerically positive-semidefinite state.
struct DensityMatrix {
    HilbertSpace space;
    Matrix matrix;

    DensityMatrix(HilbertSpace s, Matrix m, bool validate = true)
        : space(std::move(s)), matrix(std::move(m)) {
        if (matrix.rows() != matrix.cols() || matrix.rows() != space.total_dim())
            throw std::invalid_argument("DensityMatrix: matrix/space mismatch");
        if (validate) check_invariants();
    }

    void check_invariants() const {
        if ((matrix - matrix.adjoint()).cwiseAbs().maxCoeff() > kHermTol)
            throw std::invalid_argument("DensityMatrix: not Hermitian");
        if (std::abs(matrix.trace() - Complex(1.0, 0.0)) > kTraceTol)
            throw std::invalid_argument("DensityMatrix: trace != 1");
        Eigen::SelfAdjointEigenSolver<Matrix> es(
            ((matrix + matrix.adjoint()) / 2.0).eval(),
            Eigen::EigenvaluesOnly);
        if (es.eigenvalues().minCoeff() < -kPsdTol)
            throw std::invalid_argument("DensityMatrix: negative eigenvalue");
    }
};

inline DensityMatrix pure_density(const StateVector& psi) {
    return {psi.space, psi.amplitudes * psi.amplitudes.adjoint()};
}

/// Partial trace keeping the listed factor indices, in their original order.
inline Matrix partial_trace_matrix(const Matrix& rho, const HilbertSpace& space,
                                   const std::vector<int>& keep) {
    if (keep.empty())
        throw std::invalid_argument("partial_trace: empty keep set");
    const int nf = space.num_factors();
    std::vector<bool> kept(static_cast<std::size_t>(nf), false);
    for (int k : keep) {
        if (k < 0 || k >= nf)
            throw std::invalid_argument("partial_trace: invalid factor index");
        if (kept[static_cast<std::size_t>(k)])
            throw std::invalid_argument("partial_trace: duplicate factor index");
        kept[static_cast<std::size_t>(k)] = true;
    }
    // strides of each factor in the flat index (row-major over factors)
    std::vector<int> stride(static_cast<std::size_t>(nf), 1);
    for (int i = nf - 2; i >= 0; --i)
        stride[std::size_t(i)] = stride[std::size_t(i) + 1] * space.factor(i + 1);

    std::vector<int> keep_idx, tr_idx;
    for (int i = 0; i < nf; ++i)
        (kept[std::size_t(i)] ? keep_idx : tr_idx).push_back(i);

    int dk = 1;
    for (int i : keep_idx) dk *= space.factor(i);
    int dt = 1;
    for (int i : tr_idx) dt *= space.factor(i);

    auto unrank = [&](int flat, const std::vector<int>& idx) {
        // map a flat index over the sub-factors to its offset in the full index
        int off = 0;
        for (auto it = idx.rbegin(); it != idx.rend(); ++it) {
            const int d = space.factor(*it);
            off += (flat % d) * stride[static_cast<std::size_t>(*it)];
            flat /= d;
        }
        return off;
    };

    Matrix out = Matrix::Zero(dk, dk);
    for (int i = 0; i < dk; ++i) {
        const int oi = unrank(i, keep_idx);
        for (int j = 0; j < dk; ++j) {
            const int oj = unrank(j, keep_idx);
            Complex s = 0.0;
            for (int t = 0; t < dt; ++t) {
                const int ot = unrank(t, tr_idx);
                s += rho(oi + ot, oj + ot);
            }
            out(i, j) = s;
        }
    }
    return out;
}

inline DensityMatrix partial_trace(const DensityMatrix& rho,
                                   const std::vector<int>& keep) {
    Matrix out = partial_trace_matrix(rho.matrix, rho.space, keep);
    std::vector<int> dims;
    std::vector<int> sorted = keep;
    std::sort(sorted.begin(), sorted.end());
    for (int k : sorted) dims.push_back(rho.space.factor(k));
    return {HilbertSpace(dims), std::move(out)};
}

inline double fidelity_pure(const StateVector& psi, const DensityMatrix& rho) {
    if (psi.space != rho.space)
        throw std::invalid_argument("fidelity: space mismatch");
    return std::real(psi.amplitudes.dot(rho.matrix * psi.amplitudes));
}

inline double trace_distance(const Matrix& a, const Matrix& b) {
    Matrix d = ((a - b) + (a - b).adjoint()) / 2.0;
    Eigen::SelfAdjointEigenSolver<Matrix> es(d, Eigen::EigenvaluesOnly);
    return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

} // namespace sqed
