#pragma once

// Master-equation builders for two atoms in cavities driven by broadband
// two-mode squeezed light, the Bogoliubov-transformed picture, the
// cavity-eliminated two-qubit dynamics, and the three-node network, plus
// the analytic stationary states.
//
// Factor-order convention (used by every builder here):
//   full model        [2, 2, n, n]  = atom A, atom B, cavity a, cavity b
//   effective model   [2, 2]        = atom A, atom B
//   network model     [2, 4, 2]     = node A qubit, node B (two bits), node C qubit

#include <cmath>
#include <sstream>

#include "sqed/core.hpp"
#include "sqed/superop.hpp"

namespace sqed {

/// Broadband two-mode squeezed drive. M is taken real and nonnegative at
/// this interface; the internal sign conventions absorb the phase.
struct SqueezingParams {
    double N = 0.0;
    double M = 0.0;

    SqueezingParams(double n, double m) : N(n), M(m) {
        if (N < 0) throw std::invalid_argument("SqueezingParams: N < 0");
        // M carries the squeezing phase: negative values are a pi phase flip
        if (std::abs(M) > std::sqrt(N * (N + 1.0)) + 1e-12)
            throw std::invalid_argument("SqueezingParams: M exceeds sqrt(N(N+1))");
    }

    static SqueezingParams perfect(double n) {
        return {n, std::sqrt(n * (n + 1.0))};
    }

    bool is_perfect(double tol = 1e-12) const {
        return std::abs(M - std::sqrt(N * (N + 1.0))) <= tol;
    }
};

/// Rates in units where kappa = 1 is the usual choice.
struct PhysicalParams {
    double g_a = 0.0;
    double g_b = 0.0;
    double kappa = 1.0;
    double gamma_sp = 0.0;

    PhysicalParams(double ga, double gb, double k, double gam)
        : g_a(ga), g_b(gb), kappa(k), gamma_sp(gam) {
        if (kappa <= 0) throw std::invalid_argument("PhysicalParams: kappa <= 0");
        if (g_a < 0 || g_b < 0)
            throw std::invalid_argument("PhysicalParams: negative coupling");
        if (gamma_sp < 0)
            throw std::invalid_argument("PhysicalParams: negative gamma");
    }

    static PhysicalParams symmetric(double g, double kappa, double gamma_sp) {
        return {g, g, kappa, gamma_sp};
    }
    static PhysicalParams from_epsilon(double g, double kappa, double epsilon) {
        return {g, g, kappa, epsilon * g * g / kappa};
    }

    bool symmetric_couplings() const { return g_a == g_b; }
    double g() const { return std::sqrt(g_a * g_b); }
    double epsilon() const { return gamma_sp * kappa / (g_a * g_b); }
};

/// Renormalized squeezed-reservoir parameters seen by the atoms.
struct EffectiveBathParams {
    double gamma_eff;
    double n_eff;
    double m_eff; // signed
};

/// gamma = (g^2/kappa)(2+eps), n = N/(1+eps/2), m = -M/(1+eps/2).
inline EffectiveBathParams effective_bath_params(const PhysicalParams& phys,
                                                 const SqueezingParams& sq) {
    if (!phys.symmetric_couplings())
        throw std::invalid_argument(
            "effective_bath_params: symmetric couplings required; use "
            "build_effective_me for g_a != g_b");
    const double eps = phys.epsilon();
    const double g2k = phys.g_a * phys.g_b / phys.kappa;
    return {g2k * (2.0 + eps), sq.N / (1.0 + eps / 2.0), -sq.M / (1.0 + eps / 2.0)};
}

namespace detail {

/// Common squeezed-reservoir generator for a pair of two-level
/// transitions with lowering operators j_a, j_b (already embedded in the
/// full space). Per-transition rates r_a, r_b, cross rate r_ab:
///   sum_x r_x [ (N+1) D[j_x] + N D[j_x^dag] ]
///   - r_ab M [ j_a . j_b + j_b . j_a - {j_a j_b, .} + h.c. ]
/// with D[J]r = J r J^dag - {J^dag J, r}/2. At r_a = r_b = r_ab and
/// perfect squeezing this is r (D[t_a] + D[t_b]) with
/// t_a = sqrt(N+1) j_a - sqrt(N) j_b^dag.
inline SparseMatrix squeezed_pair_dissipator(const SparseMatrix& j_a,
                                             const SparseMatrix& j_b,
                                             double r_a, double r_b, double r_ab,
                                             double N, double M) {
    const int d = static_cast<int>(j_a.rows());
    SparseMatrix id = sparse_identity(d);
    SparseMatrix l(Eigen::Index(d) * d, Eigen::Index(d) * d);
    l += 0.5 * r_a * (N + 1.0) * dissipator2(j_a);
    l += 0.5 * r_b * (N + 1.0) * dissipator2(j_b);
    l += 0.5 * r_a * N * dissipator2(SparseMatrix(j_a.adjoint()));
    l += 0.5 * r_b * N * dissipator2(SparseMatrix(j_b.adjoint()));
    const double c = -r_ab * M;
    SparseMatrix x = j_a * j_b;
    SparseMatrix xd = x.adjoint();
    SparseMatrix ja_d = j_a.adjoint();
    SparseMatrix jb_d = j_b.adjoint();
    l += c * (left_right(j_a, j_b) + left_right(j_b, j_a) -
              left_right(x, id) - left_right(id, x));
    l += c * (left_right(ja_d, jb_d) + left_right(jb_d, ja_d) -
              left_right(xd, id) - left_right(id, xd));
    return l;
}

inline SparseMatrix to_sparse(const Matrix& m) {
    return m.sparseView(1.0, 0.0);
}

} // namespace detail

/// Bogoliubov modes a~ = sqrt(N+1) a + sqrt(N) b^dag and the b~ analogue,
/// embedded on the full [2,2,n,n] space.
inline std::pair<Operator, Operator> bogoliubov_modes(double N, int n_max) {
    if (N < 0) throw std::invalid_argument("bogoliubov_modes: N < 0");
    HilbertSpace space({2, 2, n_max, n_max});
    Matrix am = annihilation_matrix(n_max);
    Operator a = embed(space, 2, am);
    Operator b = embed(space, 3, am);
    const Complex cp(std::sqrt(N + 1.0), 0.0), cn(std::sqrt(N), 0.0);
    Operator at = cp * a + cn * b.adjoint();
    Operator bt = cp * b + cn * a.adjoint();
    return {at, bt};
}

/// Truncated two-mode squeezed vacuum on [n,n]: the state annihilated by
/// the Bogoliubov modes, amplitudes (-1)^k (N/(N+1))^(k/2) on |k,k>.
/// The alternating sign follows from the plus sign in a~.
inline StateVector two_mode_squeezed_vacuum(double N, int n_max) {
    if (N < 0) throw std::invalid_argument("two_mode_squeezed_vacuum: N < 0");
    Vector v = Vector::Zero(Eigen::Index(n_max) * n_max);
    const double lambda = std::sqrt(N / (N + 1.0));
    double amp = 1.0;
    for (int k = 0; k < n_max; ++k) {
        v(Eigen::Index(k) * n_max + k) = amp;
        amp *= -lambda;
    }
    v.normalize();
    return {HilbertSpace({n_max, n_max}), std::move(v)};
}

/// Two-qubit stationary state at perfect squeezing:
/// sqrt((N+1)/(2N+1)) |gg> + sqrt(N/(2N+1)) |ee>.
inline StateVector dark_state(double N) {
    if (N < 0) throw std::invalid_argument("dark_state: N < 0");
    Vector v = Vector::Zero(4);
    v(0) = std::sqrt((N + 1.0) / (2.0 * N + 1.0));
    v(3) = std::sqrt(N / (2.0 * N + 1.0));
    return {HilbertSpace({2, 2}), std::move(v)};
}

/// Three-node stationary state on [2,4,2] under ideal driving of both
/// links with equal N. Node-B basis |i,j> maps to index 2i+j.
inline StateVector network_dark_state(double N) {
    if (N < 0) throw std::invalid_argument("network_dark_state: N < 0");
    Vector v = Vector::Zero(16);
    const double w = 2.0 * N + 1.0;
    v(0) = (N + 1.0) / w;               // |g>|0,0>|g>
    v(15) = N / w;                      // |e>|1,1>|e>
    v(3) = std::sqrt(N * (N + 1.0)) / w;  // |g>|0,1>|e>
    v(12) = std::sqrt(N * (N + 1.0)) / w; // |e>|1,0>|g>
    return {HilbertSpace({2, 4, 2}), std::move(v)};
}

/// Full atoms-plus-cavities generator on [2,2,n,n]:
///   -i[H_a + H_b, .] + L_cav(N, M) + spontaneous emission at Gamma.
/// The cross (M) terms are built in the symmetric Lindblad form, which is
/// the reading consistent with the transformed picture.
inline Liouvillian build_full_me(const PhysicalParams& phys,
                                 const SqueezingParams& sq, int n_max) {
    if (n_max < 2) throw std::invalid_argument("build_full_me: n_max < 2");
    HilbertSpace space({2, 2, n_max, n_max});
    const SparseMatrix sam = detail::to_sparse(embed(space, 0, sigma_minus_matrix()).matrix);
    const SparseMatrix sbm = detail::to_sparse(embed(space, 1, sigma_minus_matrix()).matrix);
    const SparseMatrix a = detail::to_sparse(embed(space, 2, annihilation_matrix(n_max)).matrix);
    const SparseMatrix b = detail::to_sparse(embed(space, 3, annihilation_matrix(n_max)).matrix);
    const SparseMatrix sap = sam.adjoint(), sbp = sbm.adjoint();
    const SparseMatrix ad = a.adjoint(), bd = b.adjoint();
    const int d = space.total_dim();
    const SparseMatrix id = sparse_identity(d);

    SparseMatrix h = phys.g_a * (SparseMatrix(a * sap) + SparseMatrix(ad * sam)) +
                     phys.g_b * (SparseMatrix(b * sbp) + SparseMatrix(bd * sbm));
    SparseMatrix l = commutator_superop(h);

    const double k = phys.kappa;
    l += k * (sq.N + 1.0) * (dissipator2(a) + dissipator2(b));
    l += k * sq.N * (dissipator2(ad) + dissipator2(bd));

    // Cross terms of the squeezed drive.
    SparseMatrix ab = a * b;
    SparseMatrix adbd = ab.adjoint();
    l += 2.0 * k * sq.M *
         (left_right(a, b) + left_right(b, a) + left_right(ad, bd) +
          left_right(bd, ad) - left_right(ab, id) - left_right(id, ab) -
          left_right(adbd, id) - left_right(id, adbd));

    // Atomic population decays at Gamma.
    l += 0.5 * phys.gamma_sp * (dissipator2(sam) + dissipator2(sbm));

    std::ostringstream meta;
    meta << "full(N=" << sq.N << ",M=" << sq.M << ",g_a=" << phys.g_a
         << ",g_b=" << phys.g_b << ",kappa=" << phys.kappa
         << ",Gamma=" << phys.gamma_sp << ",n_max=" << n_max << ")";
    return {space, std::move(l), meta.str()};
}

/// Bogoliubov-frame generator, valid at perfect squeezing and Gamma = 0:
///   -i[H~_a + H~_b, .] + kappa sum D2[a~], D2[b~]
/// with H~_x = g (tau_x^+ x~ + x~^dag tau_x^-) and
/// tau_a^+ = sqrt(N+1) sigma_a^+ - sqrt(N) sigma_b^-.
inline Liouvillian build_transformed_me(const PhysicalParams& phys,
                                        const SqueezingParams& sq, int n_max) {
    if (!sq.is_perfect())
        throw std::invalid_argument(
            "build_transformed_me: requires perfect squeezing");
    if (phys.gamma_sp != 0.0)
        throw std::invalid_argument("build_transformed_me: requires Gamma = 0");
    if (n_max < 2) throw std::invalid_argument("build_transformed_me: n_max < 2");
    HilbertSpace space({2, 2, n_max, n_max});
    auto [at_op, bt_op] = bogoliubov_modes(sq.N, n_max);
    const SparseMatrix at = detail::to_sparse(at_op.matrix);
    const SparseMatrix bt = detail::to_sparse(bt_op.matrix);
    const SparseMatrix sam = detail::to_sparse(embed(space, 0, sigma_minus_matrix()).matrix);
    const SparseMatrix sbm = detail::to_sparse(embed(space, 1, sigma_minus_matrix()).matrix);
    const double cp = std::sqrt(sq.N + 1.0), cn = std::sqrt(sq.N);
    SparseMatrix tau_a_p = cp * SparseMatrix(sam.adjoint()) - cn * sbm;
    SparseMatrix tau_b_p = cp * SparseMatrix(sbm.adjoint()) - cn * sam;

    SparseMatrix h = phys.g_a * (SparseMatrix(tau_a_p * at) +
                                 SparseMatrix(SparseMatrix(at.adjoint()) *
                                              SparseMatrix(tau_a_p.adjoint()))) +
                     phys.g_b * (SparseMatrix(tau_b_p * bt) +
                                 SparseMatrix(SparseMatrix(bt.adjoint()) *
                                              SparseMatrix(tau_b_p.adjoint())));
    SparseMatrix l = commutator_superop(h);
    l += phys.kappa * (dissipator2(at) + dissipator2(bt));

    std::ostringstream meta;
    meta << "transformed(N=" << sq.N << ",g_a=" << phys.g_a << ",g_b=" << phys.g_b
         << ",kappa=" << phys.kappa << ",n_max=" << n_max << ")";
    return {space, std::move(l), meta.str()};
}

/// Cavity-eliminated two-qubit generator. Symmetric couplings reproduce
/// the renormalized (gamma, n, m) reservoir exactly; for g_a != g_b the
/// single-atom rates scale with 2 g_x^2/kappa and the cross terms with
/// 2 g_a g_b/kappa. Spontaneous emission adds Gamma to each atom.
inline Liouvillian build_effective_me(const PhysicalParams& phys,
                                      const SqueezingParams& sq) {
    HilbertSpace space({2, 2});
    const SparseMatrix sam = detail::to_sparse(embed(space, 0, sigma_minus_matrix()).matrix);
    const SparseMatrix sbm = detail::to_sparse(embed(space, 1, sigma_minus_matrix()).matrix);
    const double r_a = 2.0 * phys.g_a * phys.g_a / phys.kappa;
    const double r_b = 2.0 * phys.g_b * phys.g_b / phys.kappa;
    const double r_ab = 2.0 * phys.g_a * phys.g_b / phys.kappa;
    SparseMatrix l =
        detail::squeezed_pair_dissipator(sam, sbm, r_a, r_b, r_ab, sq.N, sq.M);
    l += 0.5 * phys.gamma_sp * (dissipator2(sam) + dissipator2(sbm));

    std::ostringstream meta;
    meta << "effective(N=" << sq.N << ",M=" << sq.M << ",g_a=" << phys.g_a
         << ",g_b=" << phys.g_b << ",kappa=" << phys.kappa
         << ",Gamma=" << phys.gamma_sp << ")";
    return {space, std::move(l), meta.str()};
}

/// Node-B raising operators on the 4-dim factor, |i,j> -> 2i+j.
inline Matrix sigma_b1_plus_matrix() {
    Matrix s = Matrix::Zero(4, 4);
    s(2, 0) = 1.0; // |1,0><0,0|
    s(3, 1) = 1.0; // |1,1><0,1|
    return s;
}
inline Matrix sigma_b2_plus_matrix() {
    Matrix s = Matrix::Zero(4, 4);
    s(1, 0) = 1.0; // |0,1><0,0|
    s(3, 2) = 1.0; // |1,1><1,0|
    return s;
}

/// Three-node generator on [2,4,2]: two independent squeezed-reservoir
/// links, (sigma_a, sigma_b1) driven with sq_pair.first and
/// (sigma_c, sigma_b2) with sq_pair.second. With `ideal`, Gamma is forced
/// to zero.
inline Liouvillian build_network_me(const PhysicalParams& phys,
                                    std::pair<SqueezingParams, SqueezingParams> sq_pair,
                                    bool ideal = true) {
    HilbertSpace space({2, 4, 2});
    const SparseMatrix ja = detail::to_sparse(embed(space, 0, sigma_minus_matrix()).matrix);
    const SparseMatrix jc = detail::to_sparse(embed(space, 2, sigma_minus_matrix()).matrix);
    const SparseMatrix jb1 =
        detail::to_sparse(embed(space, 1, Matrix(sigma_b1_plus_matrix().adjoint())).matrix);
    const SparseMatrix jb2 =
        detail::to_sparse(embed(space, 1, Matrix(sigma_b2_plus_matrix().adjoint())).matrix);
    const double r = 2.0 * phys.g() * phys.g() / phys.kappa;
    SparseMatrix l = detail::squeezed_pair_dissipator(ja, jb1, r, r, r,
                                                      sq_pair.first.N, sq_pair.first.M);
    l += detail::squeezed_pair_dissipator(jc, jb2, r, r, r,
                                          sq_pair.second.N, sq_pair.second.M);
    const double gamma = ideal ? 0.0 : phys.gamma_sp;
    if (gamma > 0.0)
        l += 0.5 * gamma * (dissipator2(ja) + dissipator2(jc) +
                            dissipator2(jb1) + dissipator2(jb2));

    std::ostringstream meta;
    meta << "network(N1=" << sq_pair.first.N << ",N2=" << sq_pair.second.N
         << ",g=" << phys.g() << ",kappa=" << phys.kappa
         << ",Gamma=" << gamma << ")";
    return {space, std::move(l), meta.str()};
}

} // namespace sqed
