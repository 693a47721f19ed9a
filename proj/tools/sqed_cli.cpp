// Command-line front end: steady-state runs, figure sweeps, and the
// cross-model validation, all emitting CSV.
//
// Exit codes: 0 success, 1 invalid config, 2 solver non-convergence,
// 3 truncation-tail failure.

#include <CLI11.hpp>
#include <iostream>

#include "sqed/sweeps.hpp"

namespace {

sqed::SweepConfig load_config(const std::string& config_path) {
    if (config_path.empty()) return {};
    return sqed::SweepConfig::from_file(config_path);
}

void emit(const sqed::SweepTable& table, const std::string& out) {
    if (out.empty())
        table.write_csv(std::cout);
    else
        table.write_csv_file(out);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"steady-state entanglement from squeezed light"};
    app.require_subcommand(1);
    app.fallthrough(); // let global flags appear after the subcommand

    std::string config_path, out, model;
    int n_max = -1;
    double tol = -1.0;
    app.add_option("--config", config_path, "flat key=value config file");
    app.add_option("--out", out, "output CSV path (default stdout)");
    app.add_option("--model", model, "model selector: full|effective|network");
    app.add_option("--n-max", n_max, "Fock truncation per cavity mode");
    app.add_option("--tol", tol, "solver residual tolerance");

    auto* steady = app.add_subcommand("steady", "single steady state and its EoF");
    auto* sweep = app.add_subcommand("sweep-eps", "EoF over the (epsilon, N) grid");
    auto* posavg = app.add_subcommand("position-avg",
                                      "EoF under Gaussian position jitter");
    auto* transfer = app.add_subcommand("transfer",
                                        "atomic vs squeezed-state EoF curve");
    auto* velim = app.add_subcommand("validate-elim",
                                     "full vs eliminated model comparison");
    auto* network = app.add_subcommand("network", "three-node steady state");

    CLI11_PARSE(app, argc, argv);

    try {
        sqed::SweepConfig cfg = load_config(config_path);
        if (!model.empty()) cfg.model = model;
        if (n_max > 0) cfg.n_max = n_max;
        if (tol > 0) cfg.tol = tol;
        if (!out.empty()) cfg.out = out;
        cfg.validate();

        if (steady->parsed()) {
            const auto sq = cfg.squeezing(cfg.big_n);
            sqed::SweepTable table;
            table.columns = {"N", "M", "epsilon", "eof", "eof_filtered",
                             "success_prob", "residual", "truncation_tail"};
            if (cfg.model == "effective") {
                const auto phys = sqed::PhysicalParams::from_epsilon(
                    cfg.g, cfg.kappa, cfg.epsilon);
                auto report = sqed::steady_state_direct(
                    sqed::build_effective_me(phys, sq));
                const double e = sqed::eof_two_qubit(report.state);
                auto [spec, outcome] = sqed::optimize_filter(report.state);
                table.rows.push_back({cfg.big_n, sq.M, cfg.epsilon, e,
                                      outcome.eof_after, outcome.success_prob,
                                      report.residual, 0.0});
            } else if (cfg.model == "full") {
                const auto phys = sqed::PhysicalParams::from_epsilon(
                    cfg.g, cfg.kappa, cfg.epsilon);
                auto report = sqed::detail::full_steady_by_evolution(
                    phys, sq, cfg.n_max, cfg.tol, cfg.tail_limit);
                sqed::DensityMatrix atomic =
                    sqed::partial_trace(report.state, {0, 1});
                const double e = sqed::eof_two_qubit(atomic);
                auto [spec, outcome] = sqed::optimize_filter(atomic);
                table.rows.push_back({cfg.big_n, sq.M, cfg.epsilon, e,
                                      outcome.eof_after, outcome.success_prob,
                                      report.residual, report.truncation_tail});
            } else {
                throw sqed::ConfigError("steady: model must be full|effective");
            }
            emit(table, cfg.out);
        } else if (sweep->parsed()) {
            emit(sqed::sweep_epsilon(cfg), cfg.out);
        } else if (posavg->parsed()) {
            emit(sqed::position_average_sweep(cfg), cfg.out);
        } else if (transfer->parsed()) {
            emit(sqed::transfer_curve(cfg), cfg.out);
        } else if (velim->parsed()) {
            const auto phys = sqed::PhysicalParams::from_epsilon(cfg.g, cfg.kappa,
                                                                 cfg.epsilon);
            const auto rep = sqed::validate_elimination(
                phys, cfg.squeezing(cfg.big_n), cfg.n_max, cfg.tol);
            sqed::SweepTable table;
            table.columns = {"g",  "trace_distance", "truncation_tail",
                             "residual", "error_ratio"};
            table.rows.push_back({cfg.g, rep.td_full_g, rep.tail_g,
                                  rep.residual_g, rep.error_ratio});
            table.rows.push_back({cfg.g / 2.0, rep.td_full_ghalf, rep.tail_ghalf,
                                  rep.residual_ghalf, rep.error_ratio});
            emit(table, cfg.out);
        } else if (network->parsed()) {
            const auto rep = sqed::run_network(cfg);
            sqed::SweepTable table;
            table.columns = {"N", "fidelity_dark", "entropy_A_BC", "entropy_AB_C",
                             "bell_prob_plus", "bell_prob_minus",
                             "bell_success_prob", "residual"};
            table.rows.push_back({cfg.big_n, rep.fidelity_dark, rep.entropy_a_bc,
                                  rep.entropy_ab_c, rep.bell_outcomes[2].prob,
                                  rep.bell_outcomes[3].prob, rep.bell_success_prob,
                                  rep.steady.residual});
            emit(table, cfg.out);
        }
    } catch (const sqed::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const sqed::TruncationError& e) {
        std::cerr << "truncation failure: " << e.what() << "\n";
        return 3;
    } catch (const sqed::SolverError& e) {
        std::cerr << "solver failure: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
