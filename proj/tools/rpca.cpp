#include <CLI11.hpp>
#include <cstdio>
#include <filesystem>
#include <iostream>

#include "rpca/experiments.hpp"

using namespace rpca;

namespace {

constexpr int kExitSolverFailure = 2;
constexpr int kExitConfigError = 3;

struct CommonArgs {
    std::string config_path;
    int64_t seed = -1;
    int64_t trials = -1;
    double scale = -1.0;
    std::string out;

    ExperimentConfig resolve() const {
        ExperimentConfig cfg;
        if (!config_path.empty()) cfg = load_config(config_path);
        if (seed >= 0) cfg.seed = static_cast<uint64_t>(seed);
        if (trials > 0) cfg.trials = trials;
        if (scale > 0.0) cfg.scale = scale;
        if (!out.empty()) cfg.output_path = out;
        cfg.validate();
        return cfg;
    }
};

void add_common(CLI::App* cmd, CommonArgs& args) {
    cmd->add_option("--config", args.config_path, "config file (key = value)");
    cmd->add_option("--seed", args.seed, "master seed");
    cmd->add_option("--trials", args.trials, "trials per sweep point");
    cmd->add_option("--scale", args.scale, "multiplier on the reference size n = 1000");
    cmd->add_option("--out", args.out, "output CSV path");
}

int emit(const ExperimentConfig& cfg, const ResultTable& rows) {
    bool failed = false;
    for (const auto& r : rows)
        if (r.status != "ok") failed = true;
    if (cfg.output_path.empty()) {
        std::cout << result_csv(rows);
    } else {
        write_result_csv(cfg.output_path, rows);
        if (cfg.emit_gnuplot) write_gnuplot_script(cfg.output_path);
    }
    return failed ? kExitSolverFailure : 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"robust PCA experiment driver"};
    app.require_subcommand(1);

    CommonArgs fig_args[6];
    const char* fig_names[6] = {"fig1a", "fig1b", "fig2", "fig3", "fig4", "fig5"};
    ResultTable (*fig_fns[6])(const ExperimentConfig&) = {
        run_fig1a, run_fig1b, run_fig2, run_fig3, run_fig4, run_fig5};
    CLI::App* fig_cmds[6];
    for (int k = 0; k < 6; ++k) {
        fig_cmds[k] = app.add_subcommand(fig_names[k]);
        add_common(fig_cmds[k], fig_args[k]);
    }

    CommonArgs check_args;
    CLI::App* check_cmd = app.add_subcommand("check", "diagnostics suite");
    add_common(check_cmd, check_args);

    CommonArgs solve_args;
    std::string solve_in;
    double solve_lambda = -1.0, solve_tau = -1.0, solve_sigma = -1.0;
    CLI::App* solve_cmd =
        app.add_subcommand("solve", "solve an observation set from files");
    add_common(solve_cmd, solve_args);
    solve_cmd->add_option("--in", solve_in, "observation set directory")
        ->required();
    solve_cmd->add_option("--lambda", solve_lambda, "nuclear norm weight");
    solve_cmd->add_option("--tau", solve_tau, "l1 weight");
    solve_cmd->add_option("--sigma", solve_sigma,
                          "noise scale for default lambda/tau");

    CommonArgs gen_args;
    CLI::App* gen_cmd = app.add_subcommand("generate", "write a synthetic instance");
    add_common(gen_cmd, gen_args);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : kExitConfigError;
    }

    try {
        for (int k = 0; k < 6; ++k) {
            if (!fig_cmds[k]->parsed()) continue;
            ExperimentConfig cfg = fig_args[k].resolve();
            return emit(cfg, fig_fns[k](cfg));
        }

        if (check_cmd->parsed()) {
            ExperimentConfig cfg = check_args.resolve();
            auto lines = run_check(cfg);
            bool all_ok = true;
            for (const auto& l : lines) {
                std::printf("%-28s %s  value=%.6g threshold=%.6g\n",
                            l.name.c_str(), l.ok ? "PASS" : "FAIL", l.value,
                            l.threshold);
                all_ok = all_ok && l.ok;
            }
            return all_ok ? 0 : kExitSolverFailure;
        }

        if (solve_cmd->parsed()) {
            ExperimentConfig cfg = solve_args.resolve();
            ObservationSet obs = load_observation_set(solve_in);
            double lambda = solve_lambda, tau = solve_tau;
            if (lambda < 0.0 || tau < 0.0) {
                if (solve_sigma < 0.0)
                    throw std::invalid_argument(
                        "solve: pass --lambda/--tau or --sigma");
                double p = static_cast<double>(obs.omega_obs.size()) /
                           (obs.M.rows() * obs.M.cols());
                default_lambda_tau(obs.M.rows(), obs.M.cols(), std::max(p, 1e-12),
                                   solve_sigma, lambda, tau);
            }
            ConvexSolution sol;
            try {
                sol = solve_convex(obs, lambda, tau, cfg.convex);
            } catch (const std::exception& e) {
                std::cerr << "solver failure: " << e.what() << "\n";
                return kExitSolverFailure;
            }
            std::string dir = cfg.output_path.empty() ? "." : cfg.output_path;
            std::filesystem::create_directories(dir);
            save_matrix(dir + "/L.txt", sol.L);
            save_matrix(dir + "/S.txt", sol.S);
            sol.trace.to_csv(dir + "/trace.csv", false);
            return 0;
        }

        if (gen_cmd->parsed()) {
            ExperimentConfig cfg = gen_args.resolve();
            ModelParams mp = cfg.custom_params;
            mp.seed = cfg.seed;
            GroundTruth gt = generate(mp);
            std::string dir = cfg.output_path.empty() ? "instance" : cfg.output_path;
            save_ground_truth(dir, gt);
            save_observation_set(dir, assemble(gt));
            return 0;
        }
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfigError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitSolverFailure;
    }
    return 0;
}
