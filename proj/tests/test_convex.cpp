#include <doctest.h>

#include <cmath>
#include <limits>

#include "rpca/convex.hpp"
#include "rpca/kernels.hpp"
#include "rpca/model.hpp"
#include "rpca/prox.hpp"
#include "convex_oracle.hpp"

using namespace rpca;

namespace {

GroundTruth small_instance(Index n, double p, double rho_s, double sigma,
                           uint64_t seed) {
    ModelParams mp;
    mp.n1 = mp.n2 = n;
    mp.r = 2;
    mp.p = p;
    mp.rho_s = rho_s;
    mp.sigma = sigma;
    mp.outlier_magnitude = OutlierMagnitude::gaussian(10.0);
    mp.seed = seed;
    return generate(mp);
}

ConvexOptions tight_options() {
    ConvexOptions opts;
    opts.max_iters = 20000;
    opts.rel_obj_tol = 1e-15;
    opts.kkt_tol = 1e-9;
    return opts;
}

}  // namespace

TEST_CASE("default_lambda_tau matches the closed forms") {
    double lambda, tau;
    default_lambda_tau(1000, 1000, 0.2, 1e-3, lambda, tau);
    CHECK(lambda == doctest::Approx(5e-3 * std::sqrt(200.0)).epsilon(1e-12));
    CHECK(tau == doctest::Approx(2e-3 * std::sqrt(std::log(1000.0))).epsilon(1e-12));

    default_lambda_tau(100, 100, 1.0, 0.0, lambda, tau);
    CHECK(lambda == 0.0);
    CHECK(tau == 0.0);

    CHECK_THROWS_AS(default_lambda_tau(10, 10, 0.0, 1.0, lambda, tau),
                    std::invalid_argument);
}

TEST_CASE("zero data yields the zero solution") {
    ObservationSet obs{Mat::Zero(5, 5), IndexMask::full(5, 5)};
    ConvexSolution sol = solve_convex(obs, 0.1, 0.1);
    CHECK(sol.L.norm() == 0.0);
    CHECK(sol.S.norm() == 0.0);
    CHECK(sol.objective == 0.0);
    CHECK(sol.converged);
}

TEST_CASE("huge regularizers kill the solution") {
    GroundTruth gt = small_instance(10, 1.0, 0.1, 1e-2, 3);
    ObservationSet obs = assemble(gt);
    double lambda = 2.0 * norm(obs.M, NormKind::spectral);
    double tau = 2.0 * norm(obs.M, NormKind::linf);
    ConvexSolution sol = solve_convex(obs, lambda, tau);
    CHECK(sol.L.norm() == 0.0);
    CHECK(sol.S.norm() == 0.0);
    // subgradient condition at zero
    KktReport rep = kkt_residuals(sol.L, sol.S, obs, lambda, tau);
    CHECK(rep.ptperp_r1_op <= 1.0);
    CHECK(rep.r2_off_support_max <= 1.0);
}

TEST_CASE("objective trace is monotone without acceleration") {
    GroundTruth gt = small_instance(20, 0.8, 0.1, 1e-3, 5);
    ObservationSet obs = assemble(gt);
    double lambda, tau;
    default_lambda_tau(20, 20, 0.8, 1e-3, lambda, tau);
    ConvexOptions opts;
    opts.use_acceleration = false;
    opts.max_iters = 500;
    ConvexSolution sol = solve_convex(obs, lambda, tau, opts);
    REQUIRE(sol.trace.rows.size() > 2);
    for (size_t k = 1; k < sol.trace.rows.size(); ++k) {
        double prev = sol.trace.rows[k - 1].objective;
        double cur = sol.trace.rows[k].objective;
        CHECK(cur <= prev + 1e-12 * std::abs(prev));
    }
}

TEST_CASE("accelerated run also never increases the objective (restart rule)") {
    GroundTruth gt = small_instance(20, 0.8, 0.1, 1e-3, 6);
    ObservationSet obs = assemble(gt);
    double lambda, tau;
    default_lambda_tau(20, 20, 0.8, 1e-3, lambda, tau);
    ConvexOptions opts;
    opts.max_iters = 500;
    ConvexSolution sol = solve_convex(obs, lambda, tau, opts);
    for (size_t k = 1; k < sol.trace.rows.size(); ++k)
        CHECK(sol.trace.rows[k].objective <=
              sol.trace.rows[k - 1].objective + 1e-12);
}

TEST_CASE("S block is the exact masked soft threshold of M - L") {
    GroundTruth gt = small_instance(15, 0.7, 0.15, 1e-3, 7);
    ObservationSet obs = assemble(gt);
    double lambda, tau;
    default_lambda_tau(15, 15, 0.7, 1e-3, lambda, tau);
    ConvexSolution sol = solve_convex(obs, lambda, tau);
    Mat expect = soft_threshold_matrix(obs.M - sol.L, tau, obs.omega_obs);
    CHECK((sol.S - expect).norm() == 0.0);
    // supported on the mask
    for (Index i = 0; i < 15; ++i)
        for (Index j = 0; j < 15; ++j)
            if (!obs.omega_obs.contains(i, j)) CHECK(sol.S(i, j) == 0.0);
}

TEST_CASE("one more block update leaves a converged solution in place") {
    GroundTruth gt = small_instance(15, 1.0, 0.1, 1e-3, 9);
    ObservationSet obs = assemble(gt);
    double lambda, tau;
    default_lambda_tau(15, 15, 1.0, 1e-3, lambda, tau);
    ConvexSolution sol = solve_convex(obs, lambda, tau, tight_options());
    REQUIRE(sol.converged);

    Mat G = kernels::project_mask(sol.L + sol.S - obs.M, obs.omega_obs);
    Mat L2 = singular_value_threshold(sol.L - 0.5 * G, 0.5 * lambda);
    Mat S2 = soft_threshold_matrix(obs.M - L2, tau, obs.omega_obs);
    double obj2 = convex_objective(L2, S2, obs, lambda, tau);
    CHECK(std::abs(obj2 - sol.objective) <= 1e-12 * std::abs(sol.objective));
}

TEST_CASE("joint scaling of (M, lambda, tau) scales the solution") {
    GroundTruth gt = small_instance(12, 0.8, 0.1, 1e-3, 11);
    ObservationSet obs = assemble(gt);
    double lambda, tau;
    default_lambda_tau(12, 12, 0.8, 1e-3, lambda, tau);
    ConvexSolution a = solve_convex(obs, lambda, tau, tight_options());

    double gamma = 3.7;
    ObservationSet scaled{gamma * obs.M, obs.omega_obs};
    ConvexSolution b =
        solve_convex(scaled, gamma * lambda, gamma * tau, tight_options());
    double denom = std::max(1e-300, gamma * a.L.norm());
    CHECK((b.L - gamma * a.L).norm() / denom < 1e-9);
    CHECK((b.S - gamma * a.S).norm() /
              std::max(1e-300, gamma * a.S.norm() + 1.0) <
          1e-9);
}

TEST_CASE("matches an independent splitting oracle on a 20x20 instance") {
    GroundTruth gt = small_instance(20, 1.0, 0.1, 1e-3, 13);
    ObservationSet obs = assemble(gt);
    double lambda, tau;
    default_lambda_tau(20, 20, 1.0, 1e-3, lambda, tau);
    ConvexSolution sol = solve_convex(obs, lambda, tau, tight_options());
    auto oracle = test_oracle::independent_minimize(obs, lambda, tau);
    CHECK(std::abs(sol.objective - oracle.objective) <=
          1e-8 * std::abs(oracle.objective));
}

TEST_CASE("scalar single-cell problem solved by hand") {
    // min 0.5 (l + s - 1)^2 + 0.3 |l| + 0.2 |s|: only the cheaper penalty is
    // active, so l = 0, s = 1 - 0.2 = 0.8, residual -0.2
    ObservationSet obs{Mat::Constant(1, 1, 1.0), IndexMask::full(1, 1)};
    ConvexSolution sol = solve_convex(obs, 0.3, 0.2, tight_options());
    CHECK(sol.L(0, 0) == doctest::Approx(0.0).epsilon(1e-9));
    CHECK(sol.S(0, 0) == doctest::Approx(0.8).epsilon(1e-9));
    KktReport rep = kkt_residuals(sol.L, sol.S, obs, 0.3, 0.2);
    CHECK(rep.numerical_rank == 0);
    CHECK(rep.ptperp_r1_op == doctest::Approx(0.2 / 0.3).epsilon(1e-6));
    CHECK(rep.r2_on_support_max < 1e-9);
}

TEST_CASE("converged solutions certify KKT, random points do not") {
    GroundTruth gt = small_instance(20, 0.8, 0.1, 1e-3, 17);
    ObservationSet obs = assemble(gt);
    double lambda, tau;
    default_lambda_tau(20, 20, 0.8, 1e-3, lambda, tau);
    ConvexOptions opts = tight_options();
    opts.kkt_tol = 1e-8;
    ConvexSolution sol = solve_convex(obs, lambda, tau, opts);
    KktReport rep = kkt_residuals(sol.L, sol.S, obs, lambda, tau);
    CHECK(rep.pt_r1_fro <= 1e-6);
    CHECK(rep.ptperp_r1_op <= 1.0 + 1e-6);
    CHECK(rep.r2_on_support_max <= 1e-6);
    CHECK(rep.r2_off_support_max <= 1.0 + 1e-6);

    // a generic point leaves at least one residual far out of range
    Rng rng = make_rng(999, 0);
    std::normal_distribution<double> g(0.0, 1.0);
    Mat Lr(20, 20), Sr(20, 20);
    for (Index i = 0; i < 20; ++i)
        for (Index j = 0; j < 20; ++j) {
            Lr(i, j) = g(rng);
            Sr(i, j) = g(rng);
        }
    Sr = kernels::project_mask(Sr, obs.omega_obs);
    KktReport bad = kkt_residuals(Lr, Sr, obs, lambda, tau);
    bool violated = bad.pt_r1_fro > 1e-6 || bad.ptperp_r1_op > 1.0 + 1e-6 ||
                    bad.r2_on_support_max > 1e-6;
    CHECK(violated);

    CHECK_THROWS_AS(kkt_residuals(Lr, Sr, obs, 0.0, tau), std::invalid_argument);
}

TEST_CASE("rank_r_truncate basics") {
    Mat D = Mat::Zero(3, 3);
    D(0, 0) = 3;
    D(1, 1) = 2;
    D(2, 2) = 1;
    Mat T = rank_r_truncate(D, 2);
    Mat expect = D;
    expect(2, 2) = 0;
    CHECK((T - expect).norm() < 1e-10);

    // already rank <= r: unchanged
    Mat R1 = Vec::LinSpaced(4, 1, 4) * Vec::LinSpaced(4, 1, 4).transpose();
    CHECK((rank_r_truncate(R1, 2) - R1).norm() < 1e-10);
    CHECK_THROWS_AS(rank_r_truncate(D, 0), std::invalid_argument);
}

TEST_CASE("solve_oracle_denoise shrinks singular values in place") {
    GroundTruth gt = small_instance(30, 1.0, 0.0, 0.0, 19);
    Vec spec(2);
    spec << 5.0, 3.0;
    ModelParams mp = gt.params;
    mp.spectrum = spec;
    gt = generate(mp);

    double lambda = 1.0;  // below sigma_min
    Mat D = solve_oracle_denoise(gt.Lstar, lambda);
    TruncatedSvd s = truncated_svd(D, 2);
    CHECK(s.singular_values(0) == doctest::Approx(4.0).epsilon(1e-9));
    CHECK(s.singular_values(1) == doctest::Approx(2.0).epsilon(1e-9));
    // singular spaces unchanged: D and Lstar have proportional projections
    TruncatedSvd s0 = truncated_svd(gt.Lstar, 2);
    Mat P = s.U * s.U.transpose() - s0.U * s0.U.transpose();
    CHECK(P.norm() < 1e-8);

    CHECK((solve_oracle_denoise(gt.Lstar, 0.0) - gt.Lstar).norm() < 1e-12);
}

TEST_CASE("non-finite data raises a diagnostic error") {
    Mat M = Mat::Zero(4, 4);
    M(0, 0) = std::numeric_limits<double>::infinity();
    ObservationSet obs{M, IndexMask::full(4, 4)};
    CHECK_THROWS_AS(solve_convex(obs, 1.0, 1.0), std::runtime_error);
}

TEST_CASE("option validation") {
    ConvexOptions opts;
    opts.step = 0.75;
    GroundTruth gt = small_instance(5, 1.0, 0.0, 0.0, 21);
    ObservationSet obs = assemble(gt);
    CHECK_THROWS_AS(solve_convex(obs, 1.0, 1.0, opts), std::invalid_argument);
    opts = ConvexOptions{};
    opts.max_iters = 0;
    CHECK_THROWS_AS(solve_convex(obs, 1.0, 1.0, opts), std::invalid_argument);
    CHECK_THROWS_AS(solve_convex(obs, -1.0, 1.0), std::invalid_argument);
}
