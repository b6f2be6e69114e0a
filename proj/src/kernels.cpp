#include "rpca/kernels.hpp"

#include <cmath>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace rpca::kernels {

static void check_dims(const Mat& A, const IndexMask& omega) {
    if (A.rows() != omega.rows() || A.cols() != omega.cols())
        throw std::invalid_argument("mask dimensions do not match matrix");
}

Mat project_mask_serial(const Mat& A, const IndexMask& omega) {
    check_dims(A, omega);
    Mat out = Mat::Zero(A.rows(), A.cols());
    for (const auto& [i, j] : omega.entries()) out(i, j) = A(i, j);
    return out;
}

Mat project_mask_omp(const Mat& A, const IndexMask& omega) {
    check_dims(A, omega);
    Mat out = Mat::Zero(A.rows(), A.cols());
    const auto& list = omega.entries();
    const Index k = omega.size();
#pragma omp parallel for schedule(static)
    for (Index t = 0; t < k; ++t) {
        const auto& [i, j] = list[t];
        out(i, j) = A(i, j);
    }
    return out;
}

Mat masked_residual_serial(const Mat& X, const Mat& Y, const Mat& S,
                           const Mat& M, const IndexMask& omega) {
    check_dims(M, omega);
    Mat out = Mat::Zero(M.rows(), M.cols());
    const Index r = X.cols();
    for (const auto& [i, j] : omega.entries()) {
        double v = 0.0;
        for (Index k = 0; k < r; ++k) v += X(i, k) * Y(j, k);
        out(i, j) = v + S(i, j) - M(i, j);
    }
    return out;
}

Mat masked_residual_omp(const Mat& X, const Mat& Y, const Mat& S, const Mat& M,
                        const IndexMask& omega) {
    check_dims(M, omega);
    Mat out = Mat::Zero(M.rows(), M.cols());
    const auto& list = omega.entries();
    const Index n = omega.size();
    const Index r = X.cols();
#pragma omp parallel for schedule(static)
    for (Index t = 0; t < n; ++t) {
        const auto& [i, j] = list[t];
        double v = 0.0;
        for (Index k = 0; k < r; ++k) v += X(i, k) * Y(j, k);
        out(i, j) = v + S(i, j) - M(i, j);
    }
    return out;
}

Mat soft_threshold_serial(const Mat& A, double tau) {
    Mat out(A.rows(), A.cols());
    const Index n = A.size();
    const double* a = A.data();
    double* o = out.data();
    for (Index t = 0; t < n; ++t) {
        double m = std::abs(a[t]) - tau;
        o[t] = m > 0.0 ? std::copysign(m, a[t]) : 0.0;
    }
    return out;
}

Mat soft_threshold_omp(const Mat& A, double tau) {
    Mat out(A.rows(), A.cols());
    const Index n = A.size();
    const double* a = A.data();
    double* o = out.data();
#pragma omp parallel for schedule(static)
    for (Index t = 0; t < n; ++t) {
        double m = std::abs(a[t]) - tau;
        o[t] = m > 0.0 ? std::copysign(m, a[t]) : 0.0;
    }
    return out;
}

Mat project_mask(const Mat& A, const IndexMask& omega) {
    return project_mask_omp(A, omega);
}

Mat masked_residual(const Mat& X, const Mat& Y, const Mat& S, const Mat& M,
                    const IndexMask& omega) {
    return masked_residual_omp(X, Y, S, M, omega);
}

Mat soft_threshold(const Mat& A, double tau) {
    return soft_threshold_omp(A, tau);
}

}  // namespace rpca::kernels
