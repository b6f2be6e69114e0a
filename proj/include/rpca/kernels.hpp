#pragma once

#include "rpca/matrix.hpp"

// Entrywise kernels on masked matrices. Each kernel has a serial reference
// implementation and an OpenMP variant; the dispatching wrapper picks the
// OpenMP path. tools/rpca_bench compares the two.

namespace rpca::kernels {

// P_Omega(A): A on the mask, zero elsewhere.
Mat project_mask_serial(const Mat& A, const IndexMask& omega);
Mat project_mask_omp(const Mat& A, const IndexMask& omega);

// P_Omega(X Y^T + S - M), evaluated entry by entry on the mask so that the
// full X Y^T product is never formed.
Mat masked_residual_serial(const Mat& X, const Mat& Y, const Mat& S,
                           const Mat& M, const IndexMask& omega);
Mat masked_residual_omp(const Mat& X, const Mat& Y, const Mat& S,
                        const Mat& M, const IndexMask& omega);

// Entrywise soft threshold sign(a) * max(|a| - tau, 0).
Mat soft_threshold_serial(const Mat& A, double tau);
Mat soft_threshold_omp(const Mat& A, double tau);

// Dispatchers used by the solvers.
Mat project_mask(const Mat& A, const IndexMask& omega);
Mat masked_residual(const Mat& X, const Mat& Y, const Mat& S, const Mat& M,
                    const IndexMask& omega);
Mat soft_threshold(const Mat& A, double tau);

}  // namespace rpca::kernels
