#pragma once

// Local post-processing of the steady state: the no-detection branch of
// the auxiliary-level filtering pulse, its angle optimization, and the
// projective node-B measurement of the three-node scheme.

#include <Eigen/Dense>
#include <cmath>
#include <functional>
#include <numbers>
#include <vector>

#include "sqed/core.hpp"
#include "sqed/entanglement.hpp"

namespace sqed {

/// Per-atom rotation angles of the filtering pulse and which qubit basis
/// state gets attenuated (0 = |g>, 1 = the stored excited branch).
struct FilterSpec {
    double theta_a = 0.0;
    double theta_b = 0.0;
    int target_level = 0;

    FilterSpec() = default;
    FilterSpec(double ta, double tb, int level)
        : theta_a(ta), theta_b(tb), target_level(level) {
        const double half_pi = std::numbers::pi / 2.0;
        if (ta < 0 || ta > half_pi || tb < 0 || tb > half_pi)
            throw std::invalid_argument("FilterSpec: angle outside [0, pi/2]");
        if (level != 0 && level != 1)
            throw std::invalid_argument("FilterSpec: target level must be 0 or 1");
    }
};

struct FilterOutcome {
    DensityMatrix post_state;
    double success_prob;
    double eof_after;
};

/// No-detection Kraus branch: each atom's target level is attenuated by
/// cos(theta), the other level untouched. Renormalized on success.
inline FilterOutcome filter_state(const DensityMatrix& rho, const FilterSpec& spec) {
    if (rho.space.dims() != std::vector<int>{2, 2})
        throw std::invalid_argument("filter_state: space must be [2,2]");
    auto kraus = [&](double theta) {
        Matrix f = Matrix::Identity(2, 2);
        f(spec.target_level, spec.target_level) = std::cos(theta);
        return f;
    };
    Matrix k = tensor({Operator(HilbertSpace({2}), kraus(spec.theta_a)),
                       Operator(HilbertSpace({2}), kraus(spec.theta_b))})
                   .matrix;
    Matrix filtered = k * rho.matrix * k.adjoint();
    const double p = filtered.trace().real();
    if (p < 1e-12)
        throw std::runtime_error("filter_state: outcome probability below 1e-12");
    DensityMatrix post(rho.space, filtered / p);
    const double e = eof_two_qubit(post);
    return {std::move(post), p, e};
}

namespace detail {

inline double filtered_eof(const DensityMatrix& rho, double theta, int level) {
    Matrix f = Matrix::Identity(2, 2);
    f(level, level) = std::cos(theta);
    Matrix k = Matrix::Zero(4, 4);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            k(2 * i + j, 2 * i + j) = f(i, i) * f(j, j);
    Matrix filtered = k * rho.matrix * k.adjoint();
    const double p = filtered.trace().real();
    if (p < 1e-12) return -1.0;
    return eof_two_qubit(DensityMatrix(rho.space, filtered / p, false));
}

inline double golden_section_max(const std::function<double(double)>& f,
                                 double lo, double hi, double tol) {
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = lo, b = hi;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = f(c), fd = f(d);
    while (b - a > tol) {
        if (fc > fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    return (a + b) / 2.0;
}

} // namespace detail

/// Maximize the filtered EoF over a symmetric angle (theta_a = theta_b)
/// and over which level is attenuated: 181-point coarse grid on
/// [0, pi/2], then golden-section refinement to 1e-6.
inline std::pair<FilterSpec, FilterOutcome> optimize_filter(const DensityMatrix& rho) {
    const double half_pi = std::numbers::pi / 2.0;
    FilterSpec best_spec; // identity filter fallback
    double best_eof = eof_two_qubit(rho);
    for (int level = 0; level < 2; ++level) {
        double coarse_best = 0.0, coarse_eof = -1.0;
        for (int i = 0; i <= 180; ++i) {
            const double theta = half_pi * i / 180.0;
            const double e = detail::filtered_eof(rho, theta, level);
            if (e > coarse_eof) {
                coarse_eof = e;
                coarse_best = theta;
            }
        }
        const double step = half_pi / 180.0;
        const double lo = std::max(0.0, coarse_best - step);
        const double hi = std::min(half_pi, coarse_best + step);
        const double theta = detail::golden_section_max(
            [&](double t) { return detail::filtered_eof(rho, t, level); }, lo, hi,
            1e-6);
        const double e = detail::filtered_eof(rho, theta, level);
        if (e > best_eof) {
            best_eof = e;
            best_spec = FilterSpec(theta, theta, level);
        }
    }
    FilterOutcome out = filter_state(rho, best_spec);
    return {best_spec, std::move(out)};
}

struct MeasurementOutcome {
    int label;
    double prob;
    DensityMatrix post_state; // on A (x) C, space [2,2]
};

/// Projective measurement of the 4-dim node-B factor of a [2,4,2] state
/// in the given orthonormal basis. Returns every outcome with its
/// probability and the conditional A-C state (outcomes with negligible
/// probability carry a maximally mixed placeholder).
inline std::vector<MeasurementOutcome> measure_node_B(
    const DensityMatrix& rho, const std::vector<Vector>& basis) {
    if (rho.space.dims() != std::vector<int>{2, 4, 2})
        throw std::invalid_argument("measure_node_B: space must be [2,4,2]");
    if (basis.size() != 4)
        throw std::invalid_argument("measure_node_B: basis must have 4 vectors");
    for (std::size_t i = 0; i < basis.size(); ++i) {
        if (basis[i].size() != 4)
            throw std::invalid_argument("measure_node_B: basis vector size != 4");
        for (std::size_t j = 0; j <= i; ++j) {
            const Complex ip = basis[j].dot(basis[i]);
            const double expect = (i == j) ? 1.0 : 0.0;
            if (std::abs(ip - expect) > 1e-10)
                throw std::invalid_argument("measure_node_B: basis not orthonormal");
        }
    }

    std::vector<MeasurementOutcome> outcomes;
    HilbertSpace ac({2, 2});
    for (int k = 0; k < 4; ++k) {
        // contract the B factor with |b_k>: <b_k| rho |b_k> as a 4x4 on A(x)C
        Matrix cond = Matrix::Zero(4, 4);
        for (int a1 = 0; a1 < 2; ++a1)
            for (int c1 = 0; c1 < 2; ++c1)
                for (int a2 = 0; a2 < 2; ++a2)
                    for (int c2 = 0; c2 < 2; ++c2) {
                        Complex s = 0.0;
                        for (int b1 = 0; b1 < 2 * 2; ++b1)
                            for (int b2 = 0; b2 < 2 * 2; ++b2)
                                s += std::conj(basis[std::size_t(k)](b1)) *
                                     rho.matrix(a1 * 8 + b1 * 2 + c1,
                                                a2 * 8 + b2 * 2 + c2) *
                                     basis[std::size_t(k)](b2);
                        cond(a1 * 2 + c1, a2 * 2 + c2) = s;
                    }
        const double p = cond.trace().real();
        if (p > 1e-14) {
            outcomes.push_back({k, p, DensityMatrix(ac, cond / p)});
        } else {
            outcomes.push_back({k, std::max(p, 0.0),
                                DensityMatrix(ac, Matrix::Identity(4, 4) / 4.0)});
        }
    }
    return outcomes;
}

/// Bell-type node-B basis {|0,0>, |1,1>, (|0,1> +/- |1,0>)/sqrt(2)}.
inline std::vector<Vector> bell_type_node_basis() {
    std::vector<Vector> basis(4, Vector::Zero(4));
    basis[0](0) = 1.0;
    basis[1](3) = 1.0;
    basis[2](1) = std::numbers::sqrt2 / 2.0;
    basis[2](2) = std::numbers::sqrt2 / 2.0;
    basis[3](1) = std::numbers::sqrt2 / 2.0;
    basis[3](2) = -std::numbers::sqrt2 / 2.0;
    return basis;
}

} // namespace sqed
