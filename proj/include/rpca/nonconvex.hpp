#pragma once

#include <optional>

#include "rpca/linalg.hpp"
#include "rpca/model.hpp"
#include "rpca/trace.hpp"

namespace rpca {

struct NcvxState {
    Mat X;  // n1 x r
    Mat Y;  // n2 x r
    Mat S;  // n1 x n2, supported on omega_obs
    Index t = 0;
};

enum class NcvxInit { ground_truth, spectral, provided };

struct NcvxOptions {
    double eta = 0.0;  // 0: auto, 0.5 / sigma_max estimate
    Index max_iters = 10000;
    double grad_tol = 0.0;  // 0: auto, see solver
    NcvxInit init = NcvxInit::ground_truth;
    std::optional<NcvxState> start;  // for init = provided
    Index record_every = 1;
    bool assert_descent = false;  // throw if F increases beyond tolerance

    void validate() const;
};

struct NcvxResult {
    NcvxState best_state;  // iterate at t_star
    SolveTrace trace;
    Index t_star = 0;
    double min_grad_norm = 0.0;
    double eta_used = 0.0;
    Index iters = 0;
};

// f(X, Y; S) = (1/2p)||P_Omega(XY^T + S - M)||_F^2
//            + (lambda/2p)(||X||_F^2 + ||Y||_F^2)
double loss_f(const NcvxState& state, const ObservationSet& obs, double lambda,
              double p);

// F = f + (tau/p) ||S||_1
double loss_F(const NcvxState& state, const ObservationSet& obs, double lambda,
              double tau, double p);

// f_aug = f + (1/8)||X^T X - Y^T Y||_F^2, f_diff = f - f_aug.
double loss_f_aug(const NcvxState& state, const ObservationSet& obs,
                  double lambda, double p);
double loss_f_diff(const NcvxState& state);

void grad_f(const NcvxState& state, const ObservationSet& obs, double lambda,
            double p, Mat& Gx, Mat& Gy);

// One full iteration: gradient steps on X and Y, then
// S <- S_tau[P_Omega(M - X_new Y_new^T)].
NcvxState step(const NcvxState& state, const ObservationSet& obs,
               double lambda, double tau, double eta, double p);

// ||X^T X - Y^T Y||_F
double balancedness(const NcvxState& state);

NcvxResult run(const ObservationSet& obs, double lambda, double tau,
               const NcvxOptions& opts,
               const GroundTruth* gt = nullptr);

// Leave-one-out sequence for row l (l in [0, n1)) or column l - n1
// (l in [n1, n1 + n2)): the masked residual drops the left-out line, the
// loss adds the exact population term on it, and S pins the line to Sstar.
struct LooResult {
    NcvxResult result;
    // ||F^t H^t - F^{t,(l)} R^{t,(l)}||_F per recorded iteration, where H^t
    // aligns the original iterate to Fstar and R^{t,(l)} aligns the
    // leave-one-out iterate to the original.
    std::vector<double> proximity;
    std::vector<double> aligned_error;  // ||F^t H^t - Fstar||_F, same grid
};

LooResult leave_one_out_run(Index l, const ObservationSet& obs,
                            const GroundTruth& gt, double lambda, double tau,
                            const NcvxOptions& opts);

// Top singular value of p^{-1} P_Omega(M); the solver's smoothness scale.
double sigma_max_estimate(const ObservationSet& obs, double p);

}  // namespace rpca
