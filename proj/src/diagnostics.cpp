#include "rpca/diagnostics.hpp"

#include <cmath>

#include "rpca/kernels.hpp"

namespace rpca {

ErrorReport error_report(const Mat& Lhat, const Mat& Shat,
                         const GroundTruth& gt) {
    if (Lhat.rows() != gt.Lstar.rows() || Lhat.cols() != gt.Lstar.cols())
        throw std::invalid_argument("error_report: shape mismatch");
    ErrorReport rep;
    Mat dL = Lhat - gt.Lstar;
    Mat dS = Shat - gt.Sstar;
    rep.fro = dL.norm();
    rep.spectral = norm(dL, NormKind::spectral);
    rep.linf = norm(dL, NormKind::linf);
    rep.two_inf = norm(dL, NormKind::two_inf);
    double lf = gt.Lstar.norm();
    double lop = norm(gt.Lstar, NormKind::spectral);
    double li = norm(gt.Lstar, NormKind::linf);
    rep.rel_fro = lf > 0.0 ? rep.fro / lf : rep.fro;
    rep.rel_spectral = lop > 0.0 ? rep.spectral / lop : rep.spectral;
    rep.rel_linf = li > 0.0 ? rep.linf / li : rep.linf;
    rep.s_fro = dS.norm();
    rep.s_spectral = norm(dS, NormKind::spectral);
    return rep;
}

// Gaussian tangent probe H = U A^T + B V^T.
static Mat tangent_probe(const TangentSpace& T, Rng& rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    const Index n1 = T.U.rows(), n2 = T.V.rows(), r = T.U.cols();
    for (;;) {
        Mat A(n2, r), B(n1, r);
        for (Index i = 0; i < n2; ++i)
            for (Index j = 0; j < r; ++j) A(i, j) = gauss(rng);
        for (Index i = 0; i < n1; ++i)
            for (Index j = 0; j < r; ++j) B(i, j) = gauss(rng);
        Mat H = T.U * A.transpose() + B * T.V.transpose();
        if (H.norm() > 0.0) return H;
    }
}

RatioRange check_near_isometry(const TangentSpace& T, const IndexMask& omega0,
                               double rho0, Index probes, Rng& rng) {
    if (probes < 1) throw std::invalid_argument("probes must be >= 1");
    RatioRange out;
    out.min_ratio = std::numeric_limits<double>::infinity();
    out.max_ratio = 0.0;
    for (Index k = 0; k < probes; ++k) {
        Mat H = tangent_probe(T, rng);
        double ratio = kernels::project_mask(H, omega0).squaredNorm() /
                       (rho0 * H.squaredNorm());
        out.min_ratio = std::min(out.min_ratio, ratio);
        out.max_ratio = std::max(out.max_ratio, ratio);
    }
    return out;
}

InjectivityReport check_injectivity(const TangentSpace& T,
                                    const IndexMask& omega_obs,
                                    const IndexMask& omega_star, double p,
                                    Index probes, Rng& rng) {
    if (probes < 1) throw std::invalid_argument("probes must be >= 1");
    InjectivityReport out;
    out.c_lower = std::numeric_limits<double>::infinity();
    out.c_upper = 0.0;
    for (Index k = 0; k < probes; ++k) {
        Mat H = tangent_probe(T, rng);
        double h2 = H.squaredNorm();
        double lo = kernels::project_mask(H, omega_obs).squaredNorm() / (p * h2);
        double hi = kernels::project_mask(H, omega_star).squaredNorm() / (p * h2);
        out.c_lower = std::min(out.c_lower, lo);
        out.c_upper = std::max(out.c_upper, hi);
    }
    return out;
}

double check_operator_concentration(const Mat& A, const Mat& B,
                                    const IndexMask& omega0, double rho0) {
    double a2i = norm(A, NormKind::two_inf);
    double b2i = norm(B, NormKind::two_inf);
    if (a2i == 0.0 || b2i == 0.0) return 0.0;
    Mat P = A * B.transpose();
    Mat dev = kernels::project_mask(P, omega0) - rho0 * P;
    double n = static_cast<double>(std::max(A.rows(), B.rows()));
    return norm(dev, NormKind::spectral) / (std::sqrt(n * rho0) * a2i * b2i);
}

NoiseBoundReport check_noise_bound(const Mat& E, const IndexMask& omega_obs,
                                   double sigma, double p) {
    NoiseBoundReport out;
    if (sigma == 0.0) return out;
    Mat PE = kernels::project_mask(E, omega_obs);
    double n = static_cast<double>(std::max(E.rows(), E.cols()));
    out.op_ratio = norm(PE, NormKind::spectral) / (sigma * std::sqrt(n * p));
    out.fro_ratio = PE.norm() / (sigma * n * std::sqrt(p));
    return out;
}

CvxNcvxDistance cvx_ncvx_distance(const ConvexSolution& cvx,
                                  const NcvxResult& ncvx) {
    CvxNcvxDistance out;
    Mat Lncvx = ncvx.best_state.X * ncvx.best_state.Y.transpose();
    out.dL_fro = (Lncvx - cvx.L).norm();
    out.dS_fro = (ncvx.best_state.S - cvx.S).norm();
    return out;
}

SupportDecomposition support_decomposition(const Mat& L, const Mat& S,
                                           const ObservationSet& obs,
                                           const GroundTruth& gt, double tau,
                                           const Mat& dL, const Mat& dS) {
    SupportDecomposition out;
    const Index n1 = obs.M.rows(), n2 = obs.M.cols();
    out.omega = IndexMask(n1, n2);
    out.omega1 = IndexMask(n1, n2);
    out.omega2 = IndexMask(n1, n2);

    double inf_level =
        norm(kernels::project_mask(dL + dS, obs.omega_obs), NormKind::linf);

    Mat fit = obs.M - L;  // (M - X Y^T) on the mask is what the sets compare
    for (const auto& [i, j] : obs.omega_obs.entries()) {
        if (S(i, j) != 0.0) out.omega.push(i, j);
        if (std::abs(dS(i, j)) <= inf_level) out.omega1.push(i, j);
        double m = std::abs(fit(i, j));
        if (tau - inf_level <= m && m <= tau) out.omega2.push(i, j);
    }

    out.omega2_disjoint_omega = true;
    for (const auto& [i, j] : out.omega2.entries())
        if (out.omega.contains(i, j)) out.omega2_disjoint_omega = false;

    out.obs_minus_omega_covered = true;
    for (const auto& [i, j] : obs.omega_obs.entries())
        if (!out.omega.contains(i, j) && !out.omega1.contains(i, j) &&
            !out.omega2.contains(i, j))
            out.obs_minus_omega_covered = false;

    out.omega_union_omega2_in_star = true;
    for (const auto& [i, j] : out.omega.entries())
        if (!gt.omega_star.contains(i, j)) out.omega_union_omega2_in_star = false;
    for (const auto& [i, j] : out.omega2.entries())
        if (!gt.omega_star.contains(i, j)) out.omega_union_omega2_in_star = false;

    return out;
}

}  // namespace rpca
