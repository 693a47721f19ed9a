#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "sqed/models.hpp"
#include "sqed/steady_state.hpp"

using namespace sqed;

namespace {

Liouvillian decaying_qubit(double gamma) {
    HilbertSpace q({2});
    SparseMatrix j = sigma_minus_matrix().sparseView();
    SparseMatrix l = SparseMatrix(0.5 * gamma * dissipator2(j));
    return {q, std::move(l), "decaying qubit"};
}

} // namespace

TEST_CASE("direct solve: single decaying qubit lands in the ground state") {
    const auto rep = steady_state_direct(decaying_qubit(0.7));
    CHECK(std::abs(rep.state.matrix(0, 0).real() - 1.0) < 1e-13);
    CHECK(rep.residual < 1e-13);
    CHECK(rep.unique);
}

TEST_CASE("direct solve: rate-equation oracle for a thermally driven qubit") {
    // up rate n, down rate n+1 (in units of gamma): population n/(2n+1)
    const double gamma = 0.4, n = 0.8;
    HilbertSpace q({2});
    SparseMatrix j = sigma_minus_matrix().sparseView();
    SparseMatrix jd = j.adjoint();
    SparseMatrix l = SparseMatrix(0.5 * gamma * (n + 1.0) * dissipator2(j));
    l += SparseMatrix(0.5 * gamma * n * dissipator2(jd));
    const auto rep = steady_state_direct(Liouvillian{q, std::move(l), ""});
    CHECK(rep.state.matrix(1, 1).real() ==
          doctest::Approx(n / (2.0 * n + 1.0)).epsilon(1e-12));
}

TEST_CASE("direct solve: non-unique steady state is detected") {
    // two decoupled qubits with no dynamics on the second
    HilbertSpace s({2, 2});
    SparseMatrix j = embed(s, 0, sigma_minus_matrix()).matrix.sparseView();
    SparseMatrix l = SparseMatrix(0.5 * dissipator2(j));
    CHECK_THROWS_AS(steady_state_direct(Liouvillian{s, std::move(l), ""}),
                    SolverError);
}

TEST_CASE("uniqueness check: effective model has a 1-dim null space") {
    const auto l = build_effective_me(PhysicalParams::symmetric(0.1, 1.0, 0.001),
                                      SqueezingParams::perfect(0.6));
    auto [unique, gap] = uniqueness_check(l);
    CHECK(unique);
    CHECK(gap > 0.0);
}

TEST_CASE("evolution: agrees with the direct solve across the model family") {
    std::mt19937 rng(5);
    std::uniform_real_distribution<double> un(0.1, 1.5), ue(0.0, 0.5);
    for (int trial = 0; trial < 8; ++trial) {
        const double n = un(rng), eps = ue(rng);
        const auto l = build_effective_me(
            PhysicalParams::from_epsilon(0.08, 1.0, eps),
            SqueezingParams::perfect(n));
        const auto direct = steady_state_direct(l);
        // start well away from the answer
        Matrix rho0 = Matrix::Identity(4, 4) / 4.0;
        const auto evolved = steady_state_evolve(
            l, DensityMatrix(l.space, rho0), {.tol = 1e-11});
        CHECK(trace_distance(direct.state.matrix, evolved.state.matrix) < 1e-7);
    }
}

TEST_CASE("evolution: stationary start returns without stepping") {
    const auto l = build_effective_me(PhysicalParams::symmetric(0.1, 1.0, 0.0),
                                      SqueezingParams::perfect(0.4));
    DensityMatrix rho0 = pure_density(dark_state(0.4));
    const auto rep = steady_state_evolve(l, rho0);
    CHECK(rep.iterations == 0);
    CHECK(rep.residual < 1e-12);
}

TEST_CASE("evolution: full model converges to the dark state") {
    // small truncation, strong coupling so the transient is short
    const double N = 0.2;
    const int n = 4;
    const auto l = build_full_me(PhysicalParams::symmetric(0.3, 1.0, 0.0),
                                 SqueezingParams::perfect(N), n);
    // neutral start: both atoms ground, cavities empty
    Vector v = Vector::Zero(l.dim());
    v(0) = 1.0;
    DensityMatrix rho0(l.space, Matrix(v * v.adjoint()));
    const auto rep = steady_state_evolve(l, rho0, {.tol = 1e-9});
    CHECK(rep.iterations > 0);
    Matrix atomic = partial_trace_matrix(rep.state.matrix, l.space, {0, 1});
    const double f =
        std::real(dark_state(N).amplitudes.dot(atomic * dark_state(N).amplitudes));
    CHECK(f > 0.9999);
    // thermal cavity marginal with mean N: the n_max = 4 tail is a few percent
    CHECK(rep.truncation_tail < 5e-2);
}

TEST_CASE("evolution: truncation tail limit triggers the dedicated error") {
    const double N = 1.0; // hot reservoir against a tiny truncation
    const auto l = build_full_me(PhysicalParams::symmetric(0.3, 1.0, 0.0),
                                 SqueezingParams::perfect(N), 2);
    Vector v = Vector::Zero(l.dim());
    v(0) = 1.0;
    DensityMatrix rho0(l.space, Matrix(v * v.adjoint()));
    EvolveOptions opts;
    opts.tol = 1e-6;
    opts.tail_limit = 1e-6;
    CHECK_THROWS_AS(steady_state_evolve(l, rho0, opts), TruncationError);
}

TEST_CASE("evolution: iteration cap raises a solver error") {
    const auto l = build_effective_me(PhysicalParams::symmetric(0.05, 1.0, 0.0),
                                      SqueezingParams::perfect(0.5));
    Matrix rho0 = Matrix::Identity(4, 4) / 4.0;
    EvolveOptions opts;
    opts.tol = 1e-12;
    opts.max_steps = 3;
    CHECK_THROWS_AS(
        steady_state_evolve(l, DensityMatrix(l.space, rho0), opts), SolverError);
}

TEST_CASE("report invariants hold on a mixed-steady-state run") {
    const auto l = build_effective_me(PhysicalParams::from_epsilon(0.1, 1.0, 0.3),
                                      SqueezingParams::perfect(0.7));
    const auto rep = steady_state_direct(l);
    CHECK_NOTHROW(rep.state.check_invariants());
    CHECK(rep.residual >= 0.0);
    CHECK(rep.truncation_tail == 0.0); // qubit-only space
}
