#include "rpca/experiments.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "rpca/kernels.hpp"

namespace rpca {

void ExperimentConfig::validate() const {
    if (trials < 1) throw std::invalid_argument("trials must be >= 1");
    if (scale <= 0.0) throw std::invalid_argument("scale must be positive");
}

uint64_t trial_seed(uint64_t seed, Index sweep_index, Index trial) {
    uint64_t s = substream_seed(seed, 0x7472 /* stream tag */);
    s = substream_seed(s, static_cast<uint64_t>(sweep_index));
    return substream_seed(s, static_cast<uint64_t>(trial));
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2)
        throw std::invalid_argument("loglog_slope: need >= 2 points");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double n = static_cast<double>(x.size());
    for (size_t k = 0; k < x.size(); ++k) {
        double lx = std::log(x[k]), ly = std::log(y[k]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

std::string result_csv(const ResultTable& rows) {
    std::ostringstream out;
    out << "figure,sweep,trial,estimator,err_fro,err_op,err_inf,rel_fro,rel_op,"
           "rel_inf,dist_L,dist_S,status,wall_ms,seed\n";
    char buf[512];
    for (const auto& r : rows) {
        std::snprintf(buf, sizeof(buf),
                      "%s,%.17g,%lld,%s,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,"
                      "%.17g,%.17g,%s,%.3f,%llu\n",
                      r.figure.c_str(), r.sweep, static_cast<long long>(r.trial),
                      r.estimator.c_str(), r.err_fro, r.err_op, r.err_inf,
                      r.rel_fro, r.rel_op, r.rel_inf, r.dist_L, r.dist_S,
                      r.status.c_str(), r.wall_ms,
                      static_cast<unsigned long long>(r.seed_used));
        out << buf;
    }
    return out.str();
}

void write_result_csv(const std::string& path, const ResultTable& rows) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path);
    out << result_csv(rows);
}

void write_gnuplot_script(const std::string& csv_path) {
    std::ofstream out(csv_path + ".gp");
    out << "set datafile separator ','\n"
           "set logscale xy\n"
           "set key autotitle columnhead\n"
           "plot '" << csv_path << "' using 2:5 with points\n";
}

namespace {

struct Timer {
    std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
    double ms() const {
        return std::chrono::duration<double, std::milli>(
                   std::chrono::steady_clock::now() - t0)
            .count();
    }
};

ResultRow base_row(const std::string& figure, double sweep, Index trial,
                   const std::string& estimator, uint64_t seed) {
    ResultRow row;
    row.figure = figure;
    row.sweep = sweep;
    row.trial = trial;
    row.estimator = estimator;
    row.seed_used = seed;
    return row;
}

void fill_errors(ResultRow& row, const ErrorReport& rep) {
    row.err_fro = rep.fro;
    row.err_op = rep.spectral;
    row.err_inf = rep.linf;
    row.rel_fro = rep.rel_fro;
    row.rel_op = rep.rel_spectral;
    row.rel_inf = rep.rel_linf;
}

Index desk_n(const ExperimentConfig& cfg) {
    return static_cast<Index>(std::llround(1000.0 * cfg.scale));
}

std::vector<double> default_n_sweep(const ExperimentConfig& cfg) {
    if (!cfg.sweep.empty()) return cfg.sweep;
    std::vector<double> out;
    for (double base : {500.0, 1000.0, 1500.0, 2000.0})
        out.push_back(std::llround(base * cfg.scale));
    return out;
}

std::vector<double> default_sigma_sweep(const ExperimentConfig& cfg) {
    if (!cfg.sweep.empty()) return cfg.sweep;
    return {1e-4, 3e-4, 1e-3, 3e-3, 1e-2};
}

// Convex solve plus error rows shared by the sigma-sweep figures.
void convex_and_oracle_rows(const std::string& fig, double sweep_value,
                            Index trial, uint64_t seed, const ModelParams& mp,
                            const ExperimentConfig& cfg, bool with_oracle,
                            bool with_rank_r, ResultTable& out) {
    GroundTruth gt = generate(mp);
    ObservationSet obs = assemble(gt);
    double lambda, tau;
    default_lambda_tau(mp.n1, mp.n2, mp.p, mp.sigma, lambda, tau);

    {
        ResultRow row = base_row(fig, sweep_value, trial, "cvx", seed);
        Timer timer;
        try {
            ConvexSolution sol = solve_convex(obs, lambda, tau, cfg.convex);
            row.wall_ms = timer.ms();
            fill_errors(row, error_report(sol.L, sol.S, gt));
            out.push_back(row);
            if (with_rank_r) {
                ResultRow rr =
                    base_row(fig, sweep_value, trial, "cvx_rank_r", seed);
                Timer t2;
                Mat Lr = rank_r_truncate(sol.L, mp.r);
                rr.wall_ms = t2.ms();
                fill_errors(rr, error_report(Lr, sol.S, gt));
                // distance between the truncation and the full solution
                rr.dist_L = (Lr - sol.L).norm();
                out.push_back(rr);
            }
        } catch (const std::exception&) {
            row.status = "solver_failure";
            row.wall_ms = timer.ms();
            out.push_back(row);
        }
    }

    if (with_oracle) {
        ResultRow row = base_row(fig, sweep_value, trial, "oracle", seed);
        Timer timer;
        double lam_oracle =
            5.0 * mp.sigma * std::sqrt(static_cast<double>(mp.n1));
        Mat Lhat = solve_oracle_denoise(gt.Lstar + gt.E, lam_oracle);
        row.wall_ms = timer.ms();
        fill_errors(row, error_report(Lhat, gt.Sstar, gt));
        out.push_back(row);
    }
}

}  // namespace

ResultTable run_fig1a(const ExperimentConfig& cfg) {
    cfg.validate();
    std::vector<double> ns = cfg.sweep.empty()
                                 ? std::vector<double>{100, 200, 300, 400}
                                 : cfg.sweep;
    ResultTable out;
    for (size_t si = 0; si < ns.size(); ++si) {
        Index n = static_cast<Index>(ns[si]);
        for (Index trial = 0; trial < cfg.trials; ++trial) {
            uint64_t seed = trial_seed(cfg.seed, static_cast<Index>(si), trial);
            ModelParams mp;
            mp.n1 = mp.n2 = n;
            mp.r = 5;
            mp.p = 1.0;
            mp.rho_s = 0.1;
            mp.sigma = 1e-3;
            mp.outlier_magnitude = OutlierMagnitude::gaussian(10.0);
            mp.sign_mode = SignMode::random;
            mp.seed = seed;
            convex_and_oracle_rows("fig1a", ns[si], trial, seed, mp, cfg, true,
                                   false, out);
        }
    }
    return out;
}

ResultTable run_fig1b(const ExperimentConfig& cfg) {
    cfg.validate();
    std::vector<double> sigmas = default_sigma_sweep(cfg);
    const Index n = desk_n(cfg);
    ResultTable out;
    for (size_t si = 0; si < sigmas.size(); ++si) {
        for (Index trial = 0; trial < cfg.trials; ++trial) {
            // noise pairing across the sigma sweep: same trial, same substream
            uint64_t seed = trial_seed(cfg.seed, 0, trial);
            ModelParams mp;
            mp.n1 = mp.n2 = n;
            mp.r = 5;
            mp.p = 1.0;
            mp.rho_s = 0.1;
            mp.sigma = sigmas[si];
            mp.outlier_magnitude = OutlierMagnitude::gaussian(10.0);
            mp.seed = seed;
            convex_and_oracle_rows("fig1b", sigmas[si], trial, seed, mp, cfg,
                                   true, false, out);
        }
    }
    return out;
}

ResultTable run_fig2(const ExperimentConfig& cfg) {
    cfg.validate();
    std::vector<double> sigmas = default_sigma_sweep(cfg);
    const Index n = desk_n(cfg);
    ResultTable out;
    for (size_t si = 0; si < sigmas.size(); ++si) {
        for (Index trial = 0; trial < cfg.trials; ++trial) {
            uint64_t seed = trial_seed(cfg.seed, 0, trial);
            ModelParams mp;
            mp.n1 = mp.n2 = n;
            mp.r = 5;
            mp.p = 0.2;
            mp.rho_s = 0.1;
            mp.sigma = sigmas[si];
            mp.outlier_magnitude = OutlierMagnitude::gaussian(10.0);
            mp.seed = seed;
            convex_and_oracle_rows("fig2", sigmas[si], trial, seed, mp, cfg,
                                   false, true, out);
        }
    }
    return out;
}

ResultTable run_fig3(const ExperimentConfig& cfg) {
    cfg.validate();
    std::vector<double> rhos = cfg.sweep.empty()
                                   ? std::vector<double>{0.02, 0.05, 0.1, 0.15, 0.2}
                                   : cfg.sweep;
    std::vector<Index> ranks =
        cfg.ranks.empty() ? std::vector<Index>{2, 4, 6} : cfg.ranks;
    const Index n = desk_n(cfg);
    ResultTable out;
    for (size_t ri = 0; ri < ranks.size(); ++ri) {
        for (size_t si = 0; si < rhos.size(); ++si) {
            for (Index trial = 0; trial < cfg.trials; ++trial) {
                uint64_t seed = trial_seed(
                    cfg.seed, static_cast<Index>(ri * rhos.size() + si), trial);
                ModelParams mp;
                mp.n1 = mp.n2 = n;
                mp.r = ranks[ri];
                mp.p = std::min(1.0, 0.1 * static_cast<double>(ranks[ri]));
                mp.rho_s = rhos[si];
                mp.sigma = 1e-3;
                mp.outlier_magnitude = OutlierMagnitude::gaussian(10.0);
                mp.seed = seed;
                std::string fig = "fig3_r" + std::to_string(ranks[ri]);
                convex_and_oracle_rows(fig, rhos[si], trial, seed, mp, cfg,
                                       false, false, out);
            }
        }
    }
    return out;
}

ResultTable run_fig4(const ExperimentConfig& cfg) {
    cfg.validate();
    std::vector<double> sigmas = default_sigma_sweep(cfg);
    const Index n = desk_n(cfg);
    ResultTable out;
    for (size_t si = 0; si < sigmas.size(); ++si) {
        for (Index trial = 0; trial < cfg.trials; ++trial) {
            uint64_t seed = trial_seed(cfg.seed, 0, trial);
            ModelParams mp;
            mp.n1 = mp.n2 = n;
            mp.r = 5;
            mp.p = 0.2;
            mp.rho_s = 0.1;
            mp.sigma = sigmas[si];
            mp.outlier_magnitude = OutlierMagnitude::gaussian(10.0);
            mp.seed = seed;

            GroundTruth gt = generate(mp);
            ObservationSet obs = assemble(gt);
            double lambda, tau;
            default_lambda_tau(mp.n1, mp.n2, mp.p, mp.sigma, lambda, tau);

            ResultRow rc = base_row("fig4", sigmas[si], trial, "cvx", seed);
            ResultRow rn = base_row("fig4", sigmas[si], trial, "ncvx", seed);
            Timer timer;
            try {
                ConvexSolution cvx = solve_convex(obs, lambda, tau, cfg.convex);
                rc.wall_ms = timer.ms();
                Timer t2;
                NcvxOptions no = cfg.ncvx;
                no.init = NcvxInit::ground_truth;
                NcvxResult ncvx = run(obs, lambda, tau, no, &gt);
                rn.wall_ms = t2.ms();

                fill_errors(rc, error_report(cvx.L, cvx.S, gt));
                Mat Ln = ncvx.best_state.X * ncvx.best_state.Y.transpose();
                fill_errors(rn, error_report(Ln, ncvx.best_state.S, gt));

                CvxNcvxDistance d = cvx_ncvx_distance(cvx, ncvx);
                double lf = gt.Lstar.norm();
                double sf = std::max(gt.Sstar.norm(), 1e-300);
                rc.dist_L = rn.dist_L = d.dL_fro / std::max(lf, 1e-300);
                rc.dist_S = rn.dist_S = d.dS_fro / sf;
            } catch (const std::exception&) {
                rc.status = rn.status = "solver_failure";
            }
            out.push_back(rc);
            out.push_back(rn);
        }
    }
    return out;
}

ResultTable run_fig5(const ExperimentConfig& cfg) {
    cfg.validate();
    std::vector<double> ns = cfg.sweep.empty()
                                 ? std::vector<double>{100, 200, 300, 400}
                                 : cfg.sweep;
    constexpr double c0 = 5.0;
    ResultTable out;
    for (size_t si = 0; si < ns.size(); ++si) {
        Index n = static_cast<Index>(ns[si]);
        double rho = 1.0 / std::log(static_cast<double>(n));
        for (Index trial = 0; trial < cfg.trials; ++trial) {
            uint64_t seed = trial_seed(cfg.seed, static_cast<Index>(si), trial);
            for (SignMode mode : {SignMode::random, SignMode::fixed_positive}) {
                ModelParams mp;
                mp.n1 = mp.n2 = n;
                mp.r = 5;
                mp.p = 1.0;
                mp.rho_s = rho;
                mp.sigma = 1e-3;
                mp.outlier_magnitude = OutlierMagnitude::constant(c0 * mp.sigma);
                mp.sign_mode = mode;
                mp.seed = seed;  // paired draw across modes

                std::string fig = mode == SignMode::random ? "fig5_random"
                                                           : "fig5_fixed";
                GroundTruth gt = generate(mp);
                ObservationSet obs = assemble(gt);
                double lambda, tau;
                default_lambda_tau(mp.n1, mp.n2, mp.p, mp.sigma, lambda, tau);

                ResultRow row = base_row(fig, ns[si], trial, "cvx", seed);
                Timer timer;
                try {
                    ConvexSolution sol = solve_convex(obs, lambda, tau, cfg.convex);
                    row.wall_ms = timer.ms();
                    fill_errors(row, error_report(sol.L, sol.S, gt));
                    if (mode == SignMode::fixed_positive) {
                        Mat Ltilde = gt.Lstar +
                                     Mat::Constant(n, n, c0 * rho * mp.sigma);
                        row.dist_L = (sol.L - Ltilde).norm();
                    }
                } catch (const std::exception&) {
                    row.status = "solver_failure";
                    row.wall_ms = timer.ms();
                }
                out.push_back(row);
            }
        }
    }
    return out;
}

std::vector<CheckLine> run_check(const ExperimentConfig& cfg) {
    cfg.validate();
    ModelParams mp = cfg.custom_params;
    if (mp.sigma == 0.0) {
        // default: the partially observed, outlier-corrupted desk regime
        mp.n1 = mp.n2 = desk_n(cfg);
        mp.r = 5;
        mp.p = 0.2;
        mp.rho_s = 0.1;
        mp.sigma = 1e-3;
        mp.outlier_magnitude = OutlierMagnitude::gaussian(10.0);
    }
    mp.seed = cfg.seed;
    GroundTruth gt = generate(mp);
    ObservationSet obs = assemble(gt);
    double lambda, tau;
    default_lambda_tau(mp.n1, mp.n2, mp.p, mp.sigma, lambda, tau);

    std::vector<CheckLine> lines;
    auto add = [&](const std::string& name, double value, double threshold,
                   bool ok) {
        lines.push_back({name, value, threshold, ok});
    };

    TruncatedSvd svd = truncated_svd(gt.Lstar, mp.r);
    TangentSpace T{svd.U, svd.V};

    Rng rng = make_rng(cfg.seed, 0xd1a6);
    RatioRange iso = check_near_isometry(T, gt.omega_obs, mp.p, 100, rng);
    add("near_isometry_min", iso.min_ratio, 0.4, iso.min_ratio >= 0.4);
    add("near_isometry_max", iso.max_ratio, 1.6, iso.max_ratio <= 1.6);

    InjectivityReport inj =
        check_injectivity(T, gt.omega_obs, gt.omega_star, mp.p, 100, rng);
    double inj_floor = 1.0 / (32.0 * gt.kappa);
    add("injectivity_lower", inj.c_lower, inj_floor, inj.c_lower >= inj_floor);
    add("injectivity_upper", inj.c_upper, inj.c_lower / 4.0,
        inj.c_upper <= inj.c_lower / 4.0);

    double conc = check_operator_concentration(svd.U, svd.V, gt.omega_obs, mp.p);
    add("operator_concentration", conc, 10.0, conc <= 10.0);

    NoiseBoundReport nb = check_noise_bound(gt.E, gt.omega_obs, mp.sigma, mp.p);
    add("noise_bound_op", nb.op_ratio, 3.0, nb.op_ratio <= 3.0);
    add("noise_bound_fro", nb.fro_ratio, 1.5, nb.fro_ratio <= 1.5);

    double noise_spec = norm(kernels::project_mask(gt.E, gt.omega_obs),
                             NormKind::spectral);
    add("noise_spectrum_vs_lambda", noise_spec / lambda, 1.0,
        noise_spec < lambda);

    ConvexOptions copts = cfg.convex;
    ConvexSolution cvx = solve_convex(obs, lambda, tau, copts);
    add("kkt_pt_r1", cvx.kkt_report.pt_r1_fro, copts.kkt_tol,
        cvx.kkt_report.pt_r1_fro <= copts.kkt_tol);
    add("kkt_ptperp_r1", cvx.kkt_report.ptperp_r1_op, 1.0 + copts.kkt_tol,
        cvx.kkt_report.ptperp_r1_op <= 1.0 + copts.kkt_tol);
    add("kkt_r2_on", cvx.kkt_report.r2_on_support_max, 1e-6,
        cvx.kkt_report.r2_on_support_max <= 1e-6);
    add("kkt_r2_off", cvx.kkt_report.r2_off_support_max, 1.0 + 1e-6,
        cvx.kkt_report.r2_off_support_max <= 1.0 + 1e-6);

    NcvxOptions nopts = cfg.ncvx;
    nopts.init = NcvxInit::ground_truth;
    NcvxResult ncvx = run(obs, lambda, tau, nopts, &gt);
    Mat Ln = ncvx.best_state.X * ncvx.best_state.Y.transpose();
    SupportDecomposition sd =
        support_decomposition(Ln, ncvx.best_state.S, obs, gt, tau,
                              cvx.L - Ln, cvx.S - ncvx.best_state.S);
    add("support_omega2_disjoint", sd.omega2_disjoint_omega ? 1.0 : 0.0, 1.0,
        sd.omega2_disjoint_omega);
    add("support_cover", sd.obs_minus_omega_covered ? 1.0 : 0.0, 1.0,
        sd.obs_minus_omega_covered);
    add("support_in_star", sd.omega_union_omega2_in_star ? 1.0 : 0.0, 1.0,
        sd.omega_union_omega2_in_star);
    return lines;
}

namespace {

std::map<std::string, std::string> parse_kv_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("config: cannot open " + path);
    std::map<std::string, std::string> kv;
    std::string line;
    while (std::getline(in, line)) {
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        auto eq = line.find('=');
        if (eq == std::string::npos) continue;
        auto trim = [](std::string s) {
            s.erase(0, s.find_first_not_of(" \t"));
            auto e = s.find_last_not_of(" \t\r");
            s.erase(e == std::string::npos ? 0 : e + 1);
            return s;
        };
        kv[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
    }
    return kv;
}

std::vector<double> parse_list(const std::string& s) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) out.push_back(std::stod(tok));
    return out;
}

}  // namespace

ExperimentConfig load_config(const std::string& path) {
    ExperimentConfig cfg;
    auto kv = parse_kv_file(path);
    for (const auto& [key, val] : kv) {
        if (key == "figure") {
            static const std::map<std::string, Figure> names = {
                {"fig1a", Figure::fig1a}, {"fig1b", Figure::fig1b},
                {"fig2", Figure::fig2},   {"fig3", Figure::fig3},
                {"fig4", Figure::fig4},   {"fig5", Figure::fig5},
                {"custom", Figure::custom}};
            auto it = names.find(val);
            if (it == names.end())
                throw std::invalid_argument("config: unknown figure " + val);
            cfg.figure = it->second;
        } else if (key == "sweep") {
            cfg.sweep = parse_list(val);
        } else if (key == "ranks") {
            for (double v : parse_list(val))
                cfg.ranks.push_back(static_cast<Index>(v));
        } else if (key == "trials") {
            cfg.trials = std::stoll(val);
        } else if (key == "seed") {
            cfg.seed = std::stoull(val);
        } else if (key == "scale") {
            cfg.scale = std::stod(val);
        } else if (key == "out") {
            cfg.output_path = val;
        } else if (key == "gnuplot") {
            cfg.emit_gnuplot = val == "1" || val == "true";
        } else if (key == "cvx_max_iters") {
            cfg.convex.max_iters = std::stoll(val);
        } else if (key == "cvx_step") {
            cfg.convex.step = std::stod(val);
        } else if (key == "cvx_rel_obj_tol") {
            cfg.convex.rel_obj_tol = std::stod(val);
        } else if (key == "cvx_kkt_tol") {
            cfg.convex.kkt_tol = std::stod(val);
        } else if (key == "cvx_acceleration") {
            cfg.convex.use_acceleration = val == "1" || val == "true";
        } else if (key == "ncvx_max_iters") {
            cfg.ncvx.max_iters = std::stoll(val);
        } else if (key == "ncvx_eta") {
            cfg.ncvx.eta = std::stod(val);
        } else if (key == "ncvx_grad_tol") {
            cfg.ncvx.grad_tol = std::stod(val);
        } else if (key == "n") {
            cfg.custom_params.n1 = cfg.custom_params.n2 = std::stoll(val);
        } else if (key == "r") {
            cfg.custom_params.r = std::stoll(val);
        } else if (key == "p") {
            cfg.custom_params.p = std::stod(val);
        } else if (key == "rho_s") {
            cfg.custom_params.rho_s = std::stod(val);
        } else if (key == "sigma") {
            cfg.custom_params.sigma = std::stod(val);
        } else {
            throw std::invalid_argument("config: unknown key " + key);
        }
    }
    cfg.validate();
    return cfg;
}

}  // namespace rpca
