#include "rpca/convex.hpp"

#include <chrono>
#include <cmath>

#include "rpca/kernels.hpp"
#include "rpca/prox.hpp"

namespace rpca {

void ConvexOptions::validate() const {
    if (max_iters < 1) throw std::invalid_argument("max_iters must be >= 1");
    if (!(step > 0.0 && step <= 0.5))
        throw std::invalid_argument("step must lie in (0, 0.5]");
    if (!(rel_obj_tol > 0.0 && kkt_tol > 0.0))
        throw std::invalid_argument("tolerances must be positive");
}

void default_lambda_tau(Index n1, Index n2, double p, double sigma,
                        double& lambda, double& tau) {
    if (!(p > 0.0 && p <= 1.0))
        throw std::invalid_argument("default_lambda_tau: p out of (0,1]");
    if (sigma < 0.0) throw std::invalid_argument("default_lambda_tau: sigma < 0");
    lambda = 5.0 * sigma * std::sqrt(static_cast<double>(n1) * p);
    tau = 2.0 * sigma * std::sqrt(std::log(static_cast<double>(n2)));
}

double convex_objective(const Mat& L, const Mat& S, const ObservationSet& obs,
                        double lambda, double tau) {
    Mat res = kernels::project_mask(L + S - obs.M, obs.omega_obs);
    return 0.5 * res.squaredNorm() + lambda * norm(L, NormKind::nuclear) +
           tau * S.cwiseAbs().sum();
}

// SVT via a reusable SVD so the nuclear norm of the result comes for free.
static Mat svt_with_nuclear(const Mat& B, double level, double& nuclear) {
    TruncatedSvd s = full_svd(B);
    Vec shrunk = (s.singular_values.array() - level).max(0.0);
    nuclear = shrunk.sum();
    Index k = 0;
    while (k < shrunk.size() && shrunk(k) > 0.0) ++k;
    if (k == 0) return Mat::Zero(B.rows(), B.cols());
    return s.U.leftCols(k) * shrunk.head(k).asDiagonal() *
           s.V.leftCols(k).transpose();
}

ConvexSolution solve_convex(const ObservationSet& obs, double lambda,
                            double tau, const ConvexOptions& opts) {
    opts.validate();
    if (lambda < 0.0 || tau < 0.0)
        throw std::invalid_argument("solve_convex: negative regularizers");
    const Index n1 = obs.M.rows(), n2 = obs.M.cols();

    ConvexSolution sol;
    sol.L = Mat::Zero(n1, n2);
    sol.S = Mat::Zero(n1, n2);

    Mat L = sol.L, L_prev = sol.L, S = sol.S;
    double fista_t = 1.0;
    double obj = convex_objective(L, S, obs, lambda, tau);
    double prev_obj = obj;

    auto t0 = std::chrono::steady_clock::now();
    auto wall_ms = [&] {
        return std::chrono::duration<double, std::milli>(
                   std::chrono::steady_clock::now() - t0)
            .count();
    };

    auto s_update = [&](const Mat& Lnew) {
        return soft_threshold_matrix(obs.M - Lnew, tau, obs.omega_obs);
    };

    auto evaluate = [&](const Mat& Lnew, const Mat& Snew, double nuclear) {
        Mat res = kernels::project_mask(Lnew + Snew - obs.M, obs.omega_obs);
        return 0.5 * res.squaredNorm() + lambda * nuclear +
               tau * Snew.cwiseAbs().sum();
    };

    Index it = 0;
    for (; it < opts.max_iters; ++it) {
        double nuclear = 0.0;
        Mat L_new, S_new;
        double new_obj;

        if (opts.use_acceleration) {
            double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * fista_t * fista_t));
            double beta = (fista_t - 1.0) / t_next;
            Mat Z = L + beta * (L - L_prev);
            Mat G = kernels::project_mask(Z + S - obs.M, obs.omega_obs);
            L_new = svt_with_nuclear(Z - opts.step * G, opts.step * lambda,
                                     nuclear);
            S_new = s_update(L_new);
            new_obj = evaluate(L_new, S_new, nuclear);
            if (new_obj > obj) {
                // restart: plain step from the current point
                fista_t = 1.0;
                Mat G2 = kernels::project_mask(L + S - obs.M, obs.omega_obs);
                L_new = svt_with_nuclear(L - opts.step * G2, opts.step * lambda,
                                         nuclear);
                S_new = s_update(L_new);
                new_obj = evaluate(L_new, S_new, nuclear);
            } else {
                fista_t = t_next;
            }
        } else {
            Mat G = kernels::project_mask(L + S - obs.M, obs.omega_obs);
            L_new = svt_with_nuclear(L - opts.step * G, opts.step * lambda,
                                     nuclear);
            S_new = s_update(L_new);
            new_obj = evaluate(L_new, S_new, nuclear);
        }

        if (!std::isfinite(new_obj))
            throw std::runtime_error("solve_convex: non-finite objective at iteration " +
                                     std::to_string(it));

        L_prev = L;
        L = L_new;
        S = S_new;
        prev_obj = obj;
        obj = new_obj;

        TraceRow row;
        row.iter = it;
        row.objective = obj;
        row.wall_ms = wall_ms();

        bool kkt_due = (it + 1) % opts.kkt_check_every == 0 ||
                       it + 1 == opts.max_iters;
        bool obj_flat = std::abs(prev_obj - obj) <=
                        opts.rel_obj_tol * std::max(1e-300, std::abs(prev_obj));
        if (kkt_due || obj_flat) {
            sol.kkt_report = kkt_residuals(L, S, obs, std::max(lambda, 1e-300),
                                           std::max(tau, 1e-300));
            row.kkt_pt_r1 = sol.kkt_report.pt_r1_fro;
            row.kkt_ptperp_r1 = sol.kkt_report.ptperp_r1_op;
            row.kkt_r2_off = sol.kkt_report.r2_off_support_max;
            bool kkt_ok = sol.kkt_report.pt_r1_fro <= opts.kkt_tol &&
                          sol.kkt_report.ptperp_r1_op <= 1.0 + opts.kkt_tol;
            if (kkt_ok || obj_flat) {
                sol.converged = true;
                sol.trace.rows.push_back(row);
                ++it;
                break;
            }
        }
        if (it % opts.record_every == 0) sol.trace.rows.push_back(row);
    }

    sol.L = L;
    sol.S = S;
    sol.objective = obj;
    sol.iters = it;
    if (!sol.converged)
        sol.kkt_report = kkt_residuals(L, S, obs, std::max(lambda, 1e-300),
                                       std::max(tau, 1e-300));
    return sol;
}

Mat solve_oracle_denoise(const Mat& A, double lambda) {
    return singular_value_threshold(A, lambda);
}

Mat rank_r_truncate(const Mat& L, Index r) {
    return truncated_svd(L, r).reconstruct();
}

KktReport kkt_residuals(const Mat& L, const Mat& S, const ObservationSet& obs,
                        double lambda, double tau) {
    if (lambda <= 0.0 || tau <= 0.0)
        throw std::invalid_argument("kkt_residuals: lambda, tau must be positive");
    KktReport rep;

    Mat res = kernels::project_mask(L + S - obs.M, obs.omega_obs);

    // numerical rank of L: singular values above 1e-8 * sigma_max
    TruncatedSvd s = full_svd(L);
    double smax = s.singular_values.size() > 0 ? s.singular_values(0) : 0.0;
    Index rank = 0;
    while (rank < s.singular_values.size() &&
           s.singular_values(rank) > 1e-8 * smax && smax > 0.0)
        ++rank;
    rep.numerical_rank = rank;

    Mat R1 = res / lambda;
    if (rank > 0) {
        TangentSpace T{s.U.leftCols(rank), s.V.leftCols(rank)};
        R1 += T.U * T.V.transpose();
        rep.pt_r1_fro = project_tangent(R1, T).norm();
        rep.ptperp_r1_op = norm(project_tangent_perp(R1, T), NormKind::spectral);
    } else {
        rep.pt_r1_fro = 0.0;
        rep.ptperp_r1_op = norm(R1, NormKind::spectral);
    }

    for (const auto& [i, j] : obs.omega_obs.entries()) {
        double v = res(i, j) / tau;
        if (S(i, j) != 0.0) {
            double on = std::abs((S(i, j) > 0.0 ? 1.0 : -1.0) + v);
            rep.r2_on_support_max = std::max(rep.r2_on_support_max, on);
        } else {
            rep.r2_off_support_max = std::max(rep.r2_off_support_max, std::abs(v));
        }
    }
    return rep;
}

}  // namespace rpca
