#pragma once

#include "rpca/linalg.hpp"
#include "rpca/model.hpp"
#include "rpca/trace.hpp"

namespace rpca {

struct ConvexOptions {
    Index max_iters = 5000;
    double step = 0.5;           // in (0, 0.5]
    double rel_obj_tol = 1e-10;
    double kkt_tol = 1e-6;
    bool use_acceleration = true;
    Index kkt_check_every = 25;
    Index record_every = 1;

    void validate() const;
};

// Residual statistics against the first-order optimality conditions of the
// convex program: R1 for the nuclear-norm block, R2 for the l1 block.
struct KktReport {
    double pt_r1_fro = 0.0;         // ||P_T(R1)||_F
    double ptperp_r1_op = 0.0;      // ||P_{T perp}(R1)||
    double r2_on_support_max = 0.0;
    double r2_off_support_max = 0.0;
    Index numerical_rank = 0;
};

struct ConvexSolution {
    Mat L;
    Mat S;  // supported exactly on omega_obs
    SolveTrace trace;
    bool converged = false;
    KktReport kkt_report;
    double objective = 0.0;
    Index iters = 0;
};

// lambda = 5 sigma sqrt(n1 p), tau = 2 sigma sqrt(log n2).
void default_lambda_tau(Index n1, Index n2, double p, double sigma,
                        double& lambda, double& tau);

double convex_objective(const Mat& L, const Mat& S, const ObservationSet& obs,
                        double lambda, double tau);

// Block proximal gradient: L-block SVT step with optional momentum
// (restarted on objective increase), S-block solved exactly by masked soft
// thresholding. Starts at (0, 0).
ConvexSolution solve_convex(const ObservationSet& obs, double lambda,
                            double tau, const ConvexOptions& opts = {});

// Full-observation nuclear-norm denoiser: SVT(A, lambda).
Mat solve_oracle_denoise(const Mat& A, double lambda);

Mat rank_r_truncate(const Mat& L, Index r);

KktReport kkt_residuals(const Mat& L, const Mat& S, const ObservationSet& obs,
                        double lambda, double tau);

}  // namespace rpca
