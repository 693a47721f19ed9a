#pragma once

// Parameter sweeps over the model family, CSV emission, and the
// cross-model validation runs. Grids are generated deterministically and
// rows are written in grid order, so identical configs give bit-identical
// output.

#include <cstdio>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "sqed/core.hpp"
#include "sqed/entanglement.hpp"
#include "sqed/filtering.hpp"
#include "sqed/models.hpp"
#include "sqed/quadrature.hpp"
#include "sqed/steady_state.hpp"

namespace sqed {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Flat key=value configuration with figure-matching defaults.
struct SweepConfig {
    std::string model = "effective"; // full | effective | network
    double eps_min = 0.0, eps_max = 0.5, eps_step = 0.01;
    double n_min = 0.1, n_max_grid = 2.0, n_step = 0.05;
    std::string m_policy = "perfect"; // perfect | explicit
    double m_value = 0.0;
    bool filter = true;
    double s_min = 0.0, s_max = 0.5, s_step = 0.1;
    int quad_order = 21;
    int n_max = 6;      // Fock truncation
    double tol = 1e-8;  // evolution residual target
    double tail_limit = std::numeric_limits<double>::infinity();
    double epsilon = 0.1;
    double big_n = 1.0; // single-N runs (steady, network, position-avg)
    double g = 0.05;
    double kappa = 1.0;
    std::string out;

    static SweepConfig from_file(const std::string& path) {
        SweepConfig cfg;
        std::ifstream in(path);
        if (!in) throw ConfigError("cannot open config file: " + path);
        std::string line;
        int lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            const auto hash = line.find('#');
            if (hash != std::string::npos) line.erase(hash);
            // trim
            const auto b = line.find_first_not_of(" \t\r");
            if (b == std::string::npos) continue;
            const auto e = line.find_last_not_of(" \t\r");
            line = line.substr(b, e - b + 1);
            const auto eq = line.find('=');
            if (eq == std::string::npos)
                throw ConfigError("config line " + std::to_string(lineno) +
                                  ": expected key=value");
            cfg.set(line.substr(0, eq), line.substr(eq + 1));
        }
        return cfg;
    }

    void set(const std::string& raw_key, const std::string& raw_value) {
        auto trim = [](std::string s) {
            const auto b = s.find_first_not_of(" \t");
            if (b == std::string::npos) return std::string();
            const auto e = s.find_last_not_of(" \t");
            return s.substr(b, e - b + 1);
        };
        const std::string key = trim(raw_key);
        const std::string value = trim(raw_value);
        auto num = [&] {
            try {
                std::size_t pos = 0;
                double v = std::stod(value, &pos);
                if (pos != value.size()) throw std::invalid_argument("");
                return v;
            } catch (const std::exception&) {
                throw ConfigError("config key " + key + ": bad number '" + value +
                                  "'");
            }
        };
        auto flag = [&] {
            if (value == "1" || value == "true" || value == "yes") return true;
            if (value == "0" || value == "false" || value == "no") return false;
            throw ConfigError("config key " + key + ": bad flag '" + value + "'");
        };
        if (key == "model") model = value;
        else if (key == "eps_min") eps_min = num();
        else if (key == "eps_max") eps_max = num();
        else if (key == "eps_step") eps_step = num();
        else if (key == "N_min") n_min = num();
        else if (key == "N_max") n_max_grid = num();
        else if (key == "N_step") n_step = num();
        else if (key == "M_policy") m_policy = value;
        else if (key == "M_value") m_value = num();
        else if (key == "filter") filter = flag();
        else if (key == "s_min") s_min = num();
        else if (key == "s_max") s_max = num();
        else if (key == "s_step") s_step = num();
        else if (key == "quad_order") quad_order = int(num());
        else if (key == "n_max") n_max = int(num());
        else if (key == "tol") tol = num();
        else if (key == "tail_limit") tail_limit = num();
        else if (key == "epsilon") epsilon = num();
        else if (key == "N") big_n = num();
        else if (key == "g") g = num();
        else if (key == "kappa") kappa = num();
        else if (key == "out") out = value;
        else throw ConfigError("unknown config key: " + key);
    }

    void validate() const {
        if (model != "full" && model != "effective" && model != "network")
            throw ConfigError("model must be full|effective|network");
        if (m_policy != "perfect" && m_policy != "explicit")
            throw ConfigError("M_policy must be perfect|explicit");
        if (eps_step <= 0 || n_step <= 0 || s_step <= 0)
            throw ConfigError("grid steps must be positive");
        if (tol <= 0) throw ConfigError("tol must be positive");
        if (quad_order < 3) throw ConfigError("quad_order must be >= 3");
        if (n_max < 2) throw ConfigError("n_max must be >= 2");
    }

    SqueezingParams squeezing(double n) const {
        if (m_policy == "perfect") return SqueezingParams::perfect(n);
        return {n, m_value};
    }
};

inline std::vector<double> make_grid(double lo, double hi, double step) {
    std::vector<double> g;
    const int count = int(std::floor((hi - lo) / step + 0.5)) + 1;
    for (int i = 0; i < count; ++i) {
        const double v = lo + i * step;
        if (v <= hi + step * 1e-9) g.push_back(v);
    }
    return g;
}

struct SweepTable {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;

    /// 12 significant digits, '.' decimal separator, LF line endings.
    void write_csv(std::ostream& os) const {
        for (std::size_t c = 0; c < columns.size(); ++c)
            os << (c ? "," : "") << columns[c];
        os << "\n";
        char buf[40];
        for (const auto& row : rows) {
            for (std::size_t c = 0; c < row.size(); ++c) {
                std::snprintf(buf, sizeof buf, "%.11e", row[c]);
                os << (c ? "," : "") << buf;
            }
            os << "\n";
        }
    }

    void write_csv_file(const std::string& path) const {
        std::ofstream os(path, std::ios::binary);
        if (!os) throw ConfigError("cannot open output file: " + path);
        write_csv(os);
    }
};

/// Steady-state EoF over the (epsilon, N) grid of the effective model,
/// optionally with the optimized filtering measurement. The `optimal`
/// column marks, per epsilon, the N maximizing the unfiltered EoF.
inline SweepTable sweep_epsilon(const SweepConfig& cfg) {
    cfg.validate();
    if (cfg.model != "effective")
        throw ConfigError("sweep_epsilon: effective model only");
    SweepTable table;
    table.columns = {"epsilon", "N",            "eof",     "eof_filtered",
                     "success_prob", "theta_opt", "residual", "optimal"};
    const auto eps_grid = make_grid(cfg.eps_min, cfg.eps_max, cfg.eps_step);
    const auto n_grid = make_grid(cfg.n_min, cfg.n_max_grid, cfg.n_step);
    for (double eps : eps_grid) {
        std::size_t first = table.rows.size();
        double best_eof = -1.0;
        std::size_t best_row = first;
        for (double n : n_grid) {
            const auto phys = PhysicalParams::from_epsilon(cfg.g, cfg.kappa, eps);
            const auto l = build_effective_me(phys, cfg.squeezing(n));
            const auto report = steady_state_direct(l);
            const double e = eof_two_qubit(report.state);
            double ef = e, p = 1.0, theta = 0.0;
            if (cfg.filter) {
                auto [spec, outcome] = optimize_filter(report.state);
                ef = outcome.eof_after;
                p = outcome.success_prob;
                theta = spec.theta_a;
            }
            if (e > best_eof) {
                best_eof = e;
                best_row = table.rows.size();
            }
            table.rows.push_back({eps, n, e, ef, p, theta, report.residual, 0.0});
        }
        table.rows[best_row].back() = 1.0;
    }
    return table;
}

/// EoF of the steady state averaged over Gaussian coupling-angle jitter
/// of width s on both atoms (averaging the density operator, then
/// measuring), with and without the optimized filter.
inline std::pair<double, double> position_average(double s, double n_photon,
                                                  double epsilon, int quad_order,
                                                  double g = 0.05,
                                                  double kappa = 1.0) {
    if (s < 0) throw std::invalid_argument("position_average: s < 0");
    if (quad_order < 3)
        throw std::invalid_argument("position_average: quadrature order < 3");
    const SqueezingParams sq = SqueezingParams::perfect(n_photon);
    const double gamma_sp = epsilon * g * g / kappa;
    auto steady_at = [&](double theta_a, double theta_b) {
        const double ca = std::cos(theta_a), cb = std::cos(theta_b);
        // a sign flip of one coupling is the same as flipping the sign of M
        const PhysicalParams phys(g * std::abs(ca), g * std::abs(cb), kappa,
                                  gamma_sp);
        SqueezingParams sq_eff(sq.N, (ca * cb < 0) ? -sq.M : sq.M);
        return steady_state_direct(build_effective_me(phys, sq_eff)).state.matrix;
    };
    Matrix avg;
    if (s == 0.0) {
        avg = steady_at(0.0, 0.0);
    } else {
        const QuadratureRule rule = gauss_hermite(quad_order);
        avg = Matrix::Zero(4, 4);
        double wsum = 0.0;
        for (std::size_t i = 0; i < rule.nodes.size(); ++i)
            for (std::size_t j = 0; j < rule.nodes.size(); ++j) {
                const double w = rule.weights[i] * rule.weights[j];
                avg += w * steady_at(std::numbers::sqrt2 * s * rule.nodes[i],
                                     std::numbers::sqrt2 * s * rule.nodes[j]);
                wsum += w;
            }
        avg /= wsum;
    }
    DensityMatrix rho(HilbertSpace({2, 2}), std::move(avg));
    const double e = eof_two_qubit(rho);
    auto [spec, outcome] = optimize_filter(rho);
    return {e, outcome.eof_after};
}

inline SweepTable position_average_sweep(const SweepConfig& cfg) {
    cfg.validate();
    SweepTable table;
    table.columns = {"s", "N", "epsilon", "eof", "eof_filtered"};
    for (double s : make_grid(cfg.s_min, cfg.s_max, cfg.s_step)) {
        auto [e, ef] = position_average(s, cfg.big_n, cfg.epsilon, cfg.quad_order,
                                        cfg.g, cfg.kappa);
        table.rows.push_back({s, cfg.big_n, cfg.epsilon, e, ef});
    }
    return table;
}

/// Continuous-to-discrete transfer: atomic EoF against the squeezed-state
/// EoF over the N grid at fixed epsilon.
inline SweepTable transfer_curve(const SweepConfig& cfg) {
    cfg.validate();
    if (cfg.model != "effective")
        throw ConfigError("transfer_curve: effective model only");
    SweepTable table;
    table.columns = {"N", "squeezed_eof", "eof", "eof_filtered"};
    for (double n : make_grid(cfg.n_min, cfg.n_max_grid, cfg.n_step)) {
        const auto phys = PhysicalParams::from_epsilon(cfg.g, cfg.kappa, cfg.epsilon);
        const auto report =
            steady_state_direct(build_effective_me(phys, cfg.squeezing(n)));
        const double e = eof_two_qubit(report.state);
        double ef = e;
        if (cfg.filter) ef = optimize_filter(report.state).second.eof_after;
        table.rows.push_back({n, squeezed_state_eof(n), e, ef});
    }
    return table;
}

struct EliminationReport {
    double td_full_g;      // trace distance at coupling g
    double td_full_ghalf;  // trace distance at coupling g/2
    double error_ratio;    // expected ~4 for O((g/kappa)^2) scaling
    double tail_g;
    double tail_ghalf;
    double residual_g;
    double residual_ghalf;
};

namespace detail {

/// Full-model steady state by RK4 evolution, started from the
/// effective-model prediction tensored with the driven-cavity stationary
/// state (the squeezed vacuum), which shortens the slow atomic transient.
inline SteadyStateReport full_steady_by_evolution(
    const PhysicalParams& phys, const SqueezingParams& sq, int n_max, double tol,
    double tail_limit = std::numeric_limits<double>::infinity()) {
    const Liouvillian l_full = build_full_me(phys, sq, n_max);
    const PhysicalParams sym = PhysicalParams::symmetric(phys.g(), phys.kappa,
                                                         phys.gamma_sp);
    const Matrix atomic =
        steady_state_direct(build_effective_me(sym, sq)).state.matrix;
    const StateVector cav = two_mode_squeezed_vacuum(sq.N, n_max);
    Matrix rho0_m(Matrix::Zero(l_full.dim(), l_full.dim()));
    {
        const Matrix cav_rho = cav.amplitudes * cav.amplitudes.adjoint();
        const int dc = n_max * n_max;
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j)
                rho0_m.block(i * dc, j * dc, dc, dc) = atomic(i, j) * cav_rho;
    }
    DensityMatrix rho0(l_full.space, std::move(rho0_m));
    EvolveOptions opts;
    opts.tol = tol;
    opts.tail_limit = tail_limit;
    return steady_state_evolve(l_full, rho0, opts);
}

} // namespace detail

/// Compare full-model and cavity-eliminated atomic steady states at
/// coupling g and g/2 with epsilon held fixed (Gamma rescales with g^2),
/// so the effective-model target is identical in both runs.
inline EliminationReport validate_elimination(const PhysicalParams& phys,
                                              const SqueezingParams& sq,
                                              int n_max, double tol = 1e-8) {
    const double eps = phys.gamma_sp > 0 ? phys.epsilon() : 0.0;
    const Matrix atomic_eff =
        steady_state_direct(build_effective_me(phys, sq)).state.matrix;

    EliminationReport rep{};
    bool first = true;
    for (double g : {phys.g(), phys.g() / 2.0}) {
        const PhysicalParams p = PhysicalParams::from_epsilon(g, phys.kappa, eps);
        const auto report = detail::full_steady_by_evolution(p, sq, n_max, tol);
        const Matrix atomic_full =
            partial_trace_matrix(report.state.matrix, report.state.space, {0, 1});
        const double td = trace_distance(atomic_full, atomic_eff);
        if (first) {
            rep.td_full_g = td;
            rep.tail_g = report.truncation_tail;
            rep.residual_g = report.residual;
        } else {
            rep.td_full_ghalf = td;
            rep.tail_ghalf = report.truncation_tail;
            rep.residual_ghalf = report.residual;
        }
        first = false;
    }
    rep.error_ratio = rep.td_full_g / rep.td_full_ghalf;
    return rep;
}

struct NetworkReport {
    SteadyStateReport steady;
    double fidelity_dark;      // to the printed three-node state
    double entropy_a_bc;       // ebits across A | (B,C)
    double entropy_ab_c;       // ebits across (A,B) | C
    std::vector<MeasurementOutcome> bell_outcomes;
    double bell_success_prob;  // total probability of the +/- outcomes
};

inline NetworkReport run_network(const SweepConfig& cfg) {
    cfg.validate();
    const auto sq = cfg.squeezing(cfg.big_n);
    const PhysicalParams phys = PhysicalParams::symmetric(cfg.g, cfg.kappa, 0.0);
    const Liouvillian l = build_network_me(phys, {sq, sq}, true);
    NetworkReport rep{steady_state_direct(l), 0, 0, 0, {}, 0};
    const StateVector dark = network_dark_state(cfg.big_n);
    rep.fidelity_dark = fidelity_pure(dark, rep.steady.state);
    rep.entropy_a_bc = entanglement_entropy(dark, {0});
    rep.entropy_ab_c = entanglement_entropy(dark, {2});
    rep.bell_outcomes = measure_node_B(rep.steady.state, bell_type_node_basis());
    rep.bell_success_prob =
        rep.bell_outcomes[2].prob + rep.bell_outcomes[3].prob;
    return rep;
}

} // namespace sqed
