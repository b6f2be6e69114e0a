#include "rpca/nonconvex.hpp"

#include <cmath>

#include "rpca/kernels.hpp"
#include "rpca/prox.hpp"

namespace rpca {

void NcvxOptions::validate() const {
    if (max_iters < 0) throw std::invalid_argument("max_iters must be >= 0");
    if (eta < 0.0) throw std::invalid_argument("eta must be nonnegative");
    if (record_every < 1) throw std::invalid_argument("record_every must be >= 1");
    if (init == NcvxInit::provided && !start)
        throw std::invalid_argument("init = provided requires a start state");
}

double sigma_max_estimate(const ObservationSet& obs, double p) {
    return norm(obs.M, NormKind::spectral) / p;
}

double loss_f(const NcvxState& state, const ObservationSet& obs, double lambda,
              double p) {
    Mat res = kernels::masked_residual(state.X, state.Y, state.S, obs.M,
                                       obs.omega_obs);
    return 0.5 / p * res.squaredNorm() +
           0.5 * lambda / p *
               (state.X.squaredNorm() + state.Y.squaredNorm());
}

double loss_F(const NcvxState& state, const ObservationSet& obs, double lambda,
              double tau, double p) {
    return loss_f(state, obs, lambda, p) +
           tau / p * state.S.cwiseAbs().sum();
}

double loss_f_diff(const NcvxState& state) {
    Mat gap = state.X.transpose() * state.X - state.Y.transpose() * state.Y;
    return -0.125 * gap.squaredNorm();
}

double loss_f_aug(const NcvxState& state, const ObservationSet& obs,
                  double lambda, double p) {
    return loss_f(state, obs, lambda, p) - loss_f_diff(state);
}

double balancedness(const NcvxState& state) {
    Mat gap = state.X.transpose() * state.X - state.Y.transpose() * state.Y;
    return gap.norm();
}

void grad_f(const NcvxState& state, const ObservationSet& obs, double lambda,
            double p, Mat& Gx, Mat& Gy) {
    Mat res = kernels::masked_residual(state.X, state.Y, state.S, obs.M,
                                       obs.omega_obs);
    Gx = (res * state.Y + lambda * state.X) / p;
    Gy = (res.transpose() * state.X + lambda * state.Y) / p;
}

NcvxState step(const NcvxState& state, const ObservationSet& obs,
               double lambda, double tau, double eta, double p) {
    if (eta <= 0.0) throw std::invalid_argument("step: eta must be positive");
    Mat Gx, Gy;
    grad_f(state, obs, lambda, p, Gx, Gy);
    NcvxState next;
    next.X = state.X - eta * Gx;
    next.Y = state.Y - eta * Gy;
    Mat neg_res = kernels::masked_residual(next.X, next.Y,
                                           Mat::Zero(obs.M.rows(), obs.M.cols()),
                                           obs.M, obs.omega_obs);
    // neg_res = P_Omega(X_new Y_new^T - M); S = S_tau(-neg_res) on the mask
    next.S = kernels::soft_threshold(-neg_res, tau);
    next.t = state.t + 1;
    if (!next.X.allFinite() || !next.Y.allFinite() || !next.S.allFinite())
        throw std::runtime_error("nonconvex step: non-finite iterate at t = " +
                                 std::to_string(state.t));
    return next;
}

namespace {

NcvxState initial_state(const ObservationSet& obs, double lambda, double tau,
                        const NcvxOptions& opts, const GroundTruth* gt,
                        double p, Index rank) {
    NcvxState s0;
    switch (opts.init) {
        case NcvxInit::ground_truth:
            if (!gt)
                throw std::invalid_argument(
                    "init = ground_truth requires ground truth");
            s0.X = gt->Xstar;
            s0.Y = gt->Ystar;
            s0.S = gt->Sstar;
            break;
        case NcvxInit::provided:
            s0 = *opts.start;
            break;
        case NcvxInit::spectral: {
            if (rank < 1)
                throw std::invalid_argument("spectral init requires a rank");
            Mat S0 = soft_threshold_matrix(obs.M, tau, obs.omega_obs);
            Mat B = (obs.M - S0) / p;
            TruncatedSvd svd = truncated_svd(B, rank);
            Vec root = svd.singular_values.cwiseSqrt();
            s0.X = svd.U * root.asDiagonal();
            s0.Y = svd.V * root.asDiagonal();
            Mat neg_res = kernels::masked_residual(
                s0.X, s0.Y, Mat::Zero(obs.M.rows(), obs.M.cols()), obs.M,
                obs.omega_obs);
            s0.S = kernels::soft_threshold(-neg_res, tau);
            break;
        }
    }
    s0.t = 0;
    (void)lambda;
    return s0;
}

}  // namespace

NcvxResult run(const ObservationSet& obs, double lambda, double tau,
               const NcvxOptions& opts, const GroundTruth* gt) {
    opts.validate();
    const double p = gt ? gt->params.p
                        : std::max(1e-12, static_cast<double>(obs.omega_obs.size()) /
                                              (obs.M.rows() * obs.M.cols()));

    Index rank = 0;
    if (gt) rank = gt->params.r;
    if (opts.start) rank = opts.start->X.cols();

    NcvxState state = initial_state(obs, lambda, tau, opts, gt, p, rank);
    rank = state.X.cols();

    double eta = opts.eta;
    double smax_est = sigma_max_estimate(obs, p);
    if (eta <= 0.0) eta = 0.5 / std::max(smax_est, 1e-12);

    double grad_tol = opts.grad_tol;
    if (grad_tol <= 0.0 && lambda > 0.0) {
        // stationarity scale (lambda/p) sqrt(sigma_min estimate), floored to
        // avoid underflow
        TruncatedSvd svd = truncated_svd(obs.M / p, std::max<Index>(rank, 1));
        double smin_est = svd.singular_values(svd.singular_values.size() - 1);
        grad_tol = std::max(lambda / p * std::sqrt(std::max(smin_est, 0.0)) * 1e-8,
                            1e-12 * lambda / p);
    }

    Mat Fstar;
    if (gt) {
        Fstar.resize(gt->Xstar.rows() + gt->Ystar.rows(), rank);
        Fstar << gt->Xstar, gt->Ystar;
    }

    NcvxResult out;
    out.eta_used = eta;
    out.trace.has_errors = gt != nullptr;
    out.min_grad_norm = std::numeric_limits<double>::infinity();

    double prev_F = std::numeric_limits<double>::infinity();
    Mat Gx, Gy;
    Index t = 0;
    for (;; ++t) {
        grad_f(state, obs, lambda, p, Gx, Gy);
        double gnorm = std::sqrt(Gx.squaredNorm() + Gy.squaredNorm());
        double Fval = loss_F(state, obs, lambda, tau, p);

        if (opts.assert_descent && t > 0 &&
            Fval > prev_F + 1e-9 * std::abs(prev_F))
            throw std::runtime_error(
                "nonconvex run: objective increased at iteration " +
                std::to_string(t));
        prev_F = Fval;

        if (gnorm < out.min_grad_norm) {
            out.min_grad_norm = gnorm;
            out.t_star = t;
            out.best_state = state;
        }

        if (t % opts.record_every == 0 || t == opts.max_iters ||
            gnorm <= grad_tol) {
            TraceRow row;
            row.iter = t;
            row.objective = Fval;
            row.f_smooth = loss_f(state, obs, lambda, p);
            row.grad_norm = gnorm;
            row.balancedness = balancedness(state);
            if (gt) {
                Mat F(Fstar.rows(), rank);
                F << state.X, state.Y;
                Mat H = procrustes_align(F, Fstar).H;
                Mat dX = state.X * H - gt->Xstar;
                Mat dY = state.Y * H - gt->Ystar;
                row.err_fro = std::max(dX.norm(), dY.norm());
                row.err_op = std::max(norm(dX, NormKind::spectral),
                                      norm(dY, NormKind::spectral));
                row.err_2inf = std::max(norm(dX, NormKind::two_inf),
                                        norm(dY, NormKind::two_inf));
                row.err_inf =
                    norm(state.X * state.Y.transpose() - gt->Lstar, NormKind::linf);
            }
            out.trace.rows.push_back(row);
        }

        if (gnorm <= grad_tol || t == opts.max_iters) break;
        state = step(state, obs, lambda, tau, eta, p);
    }

    out.iters = t;
    return out;
}

namespace {

// Leave-one-out variants of the residual, gradient and S update for a
// left-out row (row_mode) or column l of the mask.
struct LooContext {
    Index l = 0;
    bool row_mode = true;
    const ObservationSet* obs = nullptr;
    const GroundTruth* gt = nullptr;
    double p = 1.0;

    // P_{Omega, -l}(X Y^T + S - M): masked residual with line l dropped.
    Mat dropped_residual(const NcvxState& s) const {
        Mat res = kernels::masked_residual(s.X, s.Y, s.S, obs->M,
                                           obs->omega_obs);
        if (row_mode)
            res.row(l).setZero();
        else
            res.col(l).setZero();
        return res;
    }

    // P_{l,.}(X Y^T - Lstar) restricted to the left-out line.
    Mat line_population(const NcvxState& s) const {
        Mat out = Mat::Zero(obs->M.rows(), obs->M.cols());
        if (row_mode)
            out.row(l) = s.X.row(l) * s.Y.transpose() - gt->Lstar.row(l);
        else
            out.col(l) = s.X * s.Y.row(l).transpose() - gt->Lstar.col(l);
        return out;
    }

    void grad(const NcvxState& s, double lambda, Mat& Gx, Mat& Gy) const {
        Mat res = dropped_residual(s);
        Mat pop = line_population(s);
        Gx = (res * s.Y + lambda * s.X) / p + pop * s.Y;
        Gy = (res.transpose() * s.X + lambda * s.Y) / p +
             pop.transpose() * s.X;
    }

    NcvxState advance(const NcvxState& s, double lambda, double tau,
                      double eta) const {
        Mat Gx, Gy;
        grad(s, lambda, Gx, Gy);
        NcvxState next;
        next.X = s.X - eta * Gx;
        next.Y = s.Y - eta * Gy;
        Mat neg_res = kernels::masked_residual(
            next.X, next.Y, Mat::Zero(obs->M.rows(), obs->M.cols()), obs->M,
            obs->omega_obs);
        Mat shr = kernels::soft_threshold(-neg_res, tau);
        if (row_mode) {
            shr.row(l) = gt->Sstar.row(l);
        } else {
            shr.col(l) = gt->Sstar.col(l);
        }
        next.S = shr;
        next.t = s.t + 1;
        return next;
    }
};

}  // namespace

LooResult leave_one_out_run(Index l, const ObservationSet& obs,
                            const GroundTruth& gt, double lambda, double tau,
                            const NcvxOptions& opts) {
    const Index n1 = obs.M.rows(), n2 = obs.M.cols();
    if (l < 0 || l >= n1 + n2)
        throw std::invalid_argument("leave_one_out_run: index out of range");
    opts.validate();
    const double p = gt.params.p;
    const Index r = gt.params.r;

    LooContext ctx;
    ctx.row_mode = l < n1;
    ctx.l = ctx.row_mode ? l : l - n1;
    ctx.obs = &obs;
    ctx.gt = &gt;
    ctx.p = p;

    double eta = opts.eta;
    if (eta <= 0.0) eta = 0.5 / std::max(sigma_max_estimate(obs, p), 1e-12);

    // both sequences start from the truth and run in lockstep
    NcvxState orig;
    orig.X = gt.Xstar;
    orig.Y = gt.Ystar;
    orig.S = gt.Sstar;
    NcvxState loo = orig;

    Mat Fstar(n1 + n2, r);
    Fstar << gt.Xstar, gt.Ystar;

    LooResult out;
    out.result.eta_used = eta;
    out.result.min_grad_norm = std::numeric_limits<double>::infinity();
    out.result.trace.has_errors = true;

    Mat Gx, Gy;
    for (Index t = 0;; ++t) {
        ctx.grad(loo, lambda, Gx, Gy);
        double gnorm = std::sqrt(Gx.squaredNorm() + Gy.squaredNorm());
        if (gnorm < out.result.min_grad_norm) {
            out.result.min_grad_norm = gnorm;
            out.result.t_star = t;
            out.result.best_state = loo;
        }

        if (t % opts.record_every == 0 || t == opts.max_iters) {
            Mat F(n1 + n2, r), Fl(n1 + n2, r);
            F << orig.X, orig.Y;
            Fl << loo.X, loo.Y;
            Mat H = procrustes_align(F, Fstar).H;
            // ||F H - Fl R'|| minimized over orthonormal R' is rotation
            // invariant, so align Fl to F directly
            Mat R = procrustes_align(Fl, F).H;
            out.proximity.push_back((F - Fl * R).norm());
            out.aligned_error.push_back((F * H - Fstar).norm());

            TraceRow row;
            row.iter = t;
            row.objective = loss_F(loo, obs, lambda, tau, p);
            row.grad_norm = gnorm;
            row.balancedness = balancedness(loo);
            out.result.trace.rows.push_back(row);
        }

        if (t == opts.max_iters) {
            out.result.iters = t;
            break;
        }
        orig = step(orig, obs, lambda, tau, eta, p);
        loo = ctx.advance(loo, lambda, tau, eta);
    }
    return out;
}

}  // namespace rpca
