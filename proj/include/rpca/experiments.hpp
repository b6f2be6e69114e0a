#pragma once

#include <string>
#include <vector>

#include "rpca/convex.hpp"
#include "rpca/diagnostics.hpp"
#include "rpca/model.hpp"
#include "rpca/nonconvex.hpp"

namespace rpca {

enum class Figure { fig1a, fig1b, fig2, fig3, fig4, fig5, custom };

struct ExperimentConfig {
    Figure figure = Figure::custom;
    std::vector<double> sweep;  // n values or sigma values depending on figure
    std::vector<Index> ranks;   // fig3 only
    Index trials = 10;
    uint64_t seed = 1;
    double scale = 0.2;  // multiplier on the reference size n = 1000
    std::string output_path;
    bool emit_gnuplot = false;
    ConvexOptions convex;
    NcvxOptions ncvx;
    // custom-run model overrides
    ModelParams custom_params;

    void validate() const;
};

struct ResultRow {
    std::string figure;
    double sweep = 0.0;
    Index trial = 0;
    std::string estimator;  // cvx | cvx_rank_r | oracle | ncvx
    double err_fro = 0.0, err_op = 0.0, err_inf = 0.0;
    double rel_fro = 0.0, rel_op = 0.0, rel_inf = 0.0;
    double dist_L = 0.0, dist_S = 0.0;
    std::string status = "ok";
    double wall_ms = 0.0;
    uint64_t seed_used = 0;
};

using ResultTable = std::vector<ResultRow>;

// CSV header: figure,sweep,trial,estimator,err_fro,err_op,err_inf,
//             rel_fro,rel_op,rel_inf,dist_L,dist_S,status,wall_ms,seed
std::string result_csv(const ResultTable& rows);
void write_result_csv(const std::string& path, const ResultTable& rows);
void write_gnuplot_script(const std::string& csv_path);

ResultTable run_fig1a(const ExperimentConfig& cfg);
ResultTable run_fig1b(const ExperimentConfig& cfg);
ResultTable run_fig2(const ExperimentConfig& cfg);
ResultTable run_fig3(const ExperimentConfig& cfg);
ResultTable run_fig4(const ExperimentConfig& cfg);
ResultTable run_fig5(const ExperimentConfig& cfg);

struct CheckLine {
    std::string name;
    double value = 0.0;
    double threshold = 0.0;
    bool ok = false;
};

// Diagnostics sweep on one generated-and-solved instance.
std::vector<CheckLine> run_check(const ExperimentConfig& cfg);

// Least-squares slope of log(y) against log(x).
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

// Flat "key = value" config file; unknown keys rejected.
ExperimentConfig load_config(const std::string& path);

// Per-trial substream: hash of (seed, sweep index, trial).
uint64_t trial_seed(uint64_t seed, Index sweep_index, Index trial);

}  // namespace rpca
