#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "rpca/experiments.hpp"

using namespace rpca;

namespace {

// drop the wall_ms column (14th) so timings do not break byte comparisons
std::string strip_wall(const std::string& csv) {
    std::istringstream in(csv);
    std::ostringstream out;
    std::string line;
    while (std::getline(in, line)) {
        std::istringstream cells(line);
        std::string cell;
        int idx = 0;
        while (std::getline(cells, cell, ',')) {
            if (idx != 13) out << cell << ',';
            ++idx;
        }
        out << '\n';
    }
    return out.str();
}

std::filesystem::path write_temp(const std::string& name,
                                 const std::string& body) {
    auto dir = std::filesystem::temp_directory_path() / "rpca_cfg_test";
    std::filesystem::create_directories(dir);
    auto path = dir / name;
    std::ofstream(path) << body;
    return path;
}

}  // namespace

TEST_CASE("loglog_slope recovers exact power laws") {
    std::vector<double> x{1.0, 2.0, 4.0, 8.0};
    std::vector<double> y;
    for (double v : x) y.push_back(3.0 * v * v);
    CHECK(loglog_slope(x, y) == doctest::Approx(2.0).epsilon(1e-12));

    std::vector<double> flat(4, 7.0);
    CHECK(loglog_slope(x, flat) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK_THROWS_AS(loglog_slope({1.0}, {1.0}), std::invalid_argument);
}

TEST_CASE("trial_seed is deterministic and spreads across indices") {
    CHECK(trial_seed(5, 1, 2) == trial_seed(5, 1, 2));
    CHECK(trial_seed(5, 1, 2) != trial_seed(5, 1, 3));
    CHECK(trial_seed(5, 1, 2) != trial_seed(5, 2, 2));
    CHECK(trial_seed(5, 1, 2) != trial_seed(6, 1, 2));
}

TEST_CASE("result_csv emits the pinned header and one line per row") {
    ResultTable rows;
    ResultRow r;
    r.figure = "fig1a";
    r.sweep = 100;
    r.estimator = "cvx";
    rows.push_back(r);
    std::string csv = result_csv(rows);
    CHECK(csv.rfind("figure,sweep,trial,estimator,err_fro,err_op,err_inf,"
                    "rel_fro,rel_op,rel_inf,dist_L,dist_S,status,wall_ms,seed\n",
                    0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 2);
}

TEST_CASE("fig1a row-count contract and finite values") {
    ExperimentConfig cfg;
    cfg.trials = 1;
    cfg.sweep = {30};
    ResultTable rows = run_fig1a(cfg);
    REQUIRE(rows.size() == 2);
    CHECK(rows[0].estimator == "cvx");
    CHECK(rows[1].estimator == "oracle");
    for (const auto& row : rows) {
        CHECK(row.status == "ok");
        CHECK(std::isfinite(row.err_fro));
        CHECK(std::isfinite(row.rel_inf));
    }
}

TEST_CASE("fig2 emits rank-truncated companion rows") {
    ExperimentConfig cfg;
    cfg.trials = 1;
    cfg.sweep = {1e-3};
    cfg.scale = 0.04;  // n = 40
    ResultTable rows = run_fig2(cfg);
    REQUIRE(rows.size() == 2);
    CHECK(rows[0].estimator == "cvx");
    CHECK(rows[1].estimator == "cvx_rank_r");
    CHECK(rows[1].dist_L >= 0.0);
    CHECK(rows[1].seed_used == rows[0].seed_used);
}

TEST_CASE("fig3 sweeps ranks and tags figure ids") {
    ExperimentConfig cfg;
    cfg.trials = 1;
    cfg.sweep = {0.05, 0.1};
    cfg.ranks = {2, 3};
    cfg.scale = 0.04;
    ResultTable rows = run_fig3(cfg);
    REQUIRE(rows.size() == 4);
    CHECK(rows[0].figure == "fig3_r2");
    CHECK(rows[2].figure == "fig3_r3");
}

TEST_CASE("fig4 pairs solvers on a shared instance") {
    ExperimentConfig cfg;
    cfg.trials = 1;
    cfg.sweep = {1e-3};
    cfg.scale = 0.04;
    cfg.ncvx.max_iters = 300;
    ResultTable rows = run_fig4(cfg);
    REQUIRE(rows.size() == 2);
    CHECK(rows[0].estimator == "cvx");
    CHECK(rows[1].estimator == "ncvx");
    CHECK(rows[0].dist_L == rows[1].dist_L);
    CHECK(rows[0].dist_S == rows[1].dist_S);
    CHECK(rows[0].status == "ok");
}

TEST_CASE("fig5 pairs sign modes with the same seed") {
    ExperimentConfig cfg;
    cfg.trials = 1;
    cfg.sweep = {40};
    ResultTable rows = run_fig5(cfg);
    REQUIRE(rows.size() == 2);
    CHECK(rows[0].figure == "fig5_random");
    CHECK(rows[1].figure == "fig5_fixed");
    CHECK(rows[0].seed_used == rows[1].seed_used);
    CHECK(rows[1].dist_L > 0.0);  // distance to the shifted target
}

TEST_CASE("figure output is deterministic up to wall_ms") {
    ExperimentConfig cfg;
    cfg.trials = 2;
    cfg.sweep = {25, 30};
    std::string a = strip_wall(result_csv(run_fig1a(cfg)));
    std::string b = strip_wall(result_csv(run_fig1a(cfg)));
    CHECK(a == b);

    cfg.seed = 99;
    std::string c = strip_wall(result_csv(run_fig1a(cfg)));
    CHECK(a != c);
}

TEST_CASE("run_check produces the full battery on a small instance") {
    ExperimentConfig cfg;
    cfg.scale = 0.06;  // n = 60: just exercises plumbing, thresholds come later
    cfg.ncvx.max_iters = 200;
    std::vector<CheckLine> lines = run_check(cfg);
    REQUIRE(lines.size() == 15);
    for (const auto& line : lines) {
        CHECK(!line.name.empty());
        CHECK(std::isfinite(line.value));
    }
}

TEST_CASE("config parsing: round trip, comments, unknown keys") {
    auto path = write_temp("good.cfg",
                           "# experiment configuration\n"
                           "figure = fig1b\n"
                           "sweep = 1e-4, 1e-3\n"
                           "trials = 3\n"
                           "seed = 42\n"
                           "scale = 0.1  # desk scale\n"
                           "cvx_max_iters = 123\n"
                           "ncvx_eta = 0.25\n");
    ExperimentConfig cfg = load_config(path.string());
    CHECK(cfg.figure == Figure::fig1b);
    REQUIRE(cfg.sweep.size() == 2);
    CHECK(cfg.sweep[1] == 1e-3);
    CHECK(cfg.trials == 3);
    CHECK(cfg.seed == 42);
    CHECK(cfg.scale == 0.1);
    CHECK(cfg.convex.max_iters == 123);
    CHECK(cfg.ncvx.eta == 0.25);

    auto bad = write_temp("bad.cfg", "figur = fig1b\n");
    CHECK_THROWS_AS(load_config(bad.string()), std::invalid_argument);
    auto badfig = write_temp("badfig.cfg", "figure = fig9\n");
    CHECK_THROWS_AS(load_config(badfig.string()), std::invalid_argument);
    auto badtrials = write_temp("badtrials.cfg", "trials = 0\n");
    CHECK_THROWS_AS(load_config(badtrials.string()), std::invalid_argument);
    CHECK_THROWS_AS(load_config("/nonexistent/rpca.cfg"), std::invalid_argument);
}

TEST_CASE("csv and gnuplot files land on disk") {
    ExperimentConfig cfg;
    cfg.trials = 1;
    cfg.sweep = {25};
    ResultTable rows = run_fig1a(cfg);
    auto dir = std::filesystem::temp_directory_path() / "rpca_csv_test";
    std::filesystem::create_directories(dir);
    auto csv = (dir / "out.csv").string();
    write_result_csv(csv, rows);
    write_gnuplot_script(csv);
    CHECK(std::filesystem::exists(csv));
    CHECK(std::filesystem::exists(csv + ".gp"));
    std::filesystem::remove_all(dir);
}
