#pragma once

#include "rpca/convex.hpp"
#include "rpca/model.hpp"
#include "rpca/nonconvex.hpp"

namespace rpca {

struct ErrorReport {
    double fro = 0.0, spectral = 0.0, linf = 0.0, two_inf = 0.0;
    double rel_fro = 0.0, rel_spectral = 0.0, rel_linf = 0.0;
    double s_fro = 0.0, s_spectral = 0.0;
};

ErrorReport error_report(const Mat& Lhat, const Mat& Shat,
                         const GroundTruth& gt);

struct RatioRange {
    double min_ratio = 0.0;
    double max_ratio = 0.0;
};

// Samples H = U A^T + B V^T with Gaussian A, B and returns extremes of
// (1/rho0) ||P_Omega0(H)||_F^2 / ||H||_F^2.
RatioRange check_near_isometry(const TangentSpace& T, const IndexMask& omega0,
                               double rho0, Index probes, Rng& rng);

struct InjectivityReport {
    double c_lower = 0.0;  // min over probes of p^{-1}||P_obs(H)||^2/||H||^2
    double c_upper = 0.0;  // max over probes of p^{-1}||P_star(H)||^2/||H||^2
};

InjectivityReport check_injectivity(const TangentSpace& T,
                                    const IndexMask& omega_obs,
                                    const IndexMask& omega_star, double p,
                                    Index probes, Rng& rng);

// ||P_Omega0(AB^T) - rho0 AB^T|| / (sqrt(n rho0) ||A||_{2,inf} ||B||_{2,inf})
double check_operator_concentration(const Mat& A, const Mat& B,
                                    const IndexMask& omega0, double rho0);

struct NoiseBoundReport {
    double op_ratio = 0.0;   // ||P_Omega(E)|| / (sigma sqrt(n p))
    double fro_ratio = 0.0;  // ||P_Omega(E)||_F / (sigma n sqrt(p))
};

NoiseBoundReport check_noise_bound(const Mat& E, const IndexMask& omega_obs,
                                   double sigma, double p);

struct CvxNcvxDistance {
    double dL_fro = 0.0;
    double dS_fro = 0.0;
};

CvxNcvxDistance cvx_ncvx_distance(const ConvexSolution& cvx,
                                  const NcvxResult& ncvx);

// The auxiliary index sets of the convex-nonconvex comparison argument and
// the three inclusions among them.
struct SupportDecomposition {
    IndexMask omega;   // support of S
    IndexMask omega1;  // |(dS)_ij| <= ||P_obs(dL + dS)||_inf
    IndexMask omega2;  // tau - ||P_obs(dL + dS)||_inf <= |(M - XY^T)_ij| <= tau
    bool omega2_disjoint_omega = false;  // Omega2 and Omega disjoint
    bool obs_minus_omega_covered = false;  // obs \ Omega in Omega1 u Omega2
    bool omega_union_omega2_in_star = false;  // Omega u Omega2 in Omega_star
};

SupportDecomposition support_decomposition(const Mat& L, const Mat& S,
                                           const ObservationSet& obs,
                                           const GroundTruth& gt, double tau,
                                           const Mat& dL, const Mat& dS);

}  // namespace rpca
