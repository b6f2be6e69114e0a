#include "rpca/prox.hpp"

#include <cmath>

#include "rpca/kernels.hpp"
#include "rpca/linalg.hpp"

namespace rpca {

double soft_threshold_scalar(double x, double tau) {
    if (tau < 0.0) throw std::invalid_argument("soft_threshold: tau < 0");
    double m = std::abs(x) - tau;
    return m > 0.0 ? std::copysign(m, x) : 0.0;
}

Mat soft_threshold_matrix(const Mat& A, double tau,
                          const std::optional<IndexMask>& mask) {
    if (tau < 0.0) throw std::invalid_argument("soft_threshold: tau < 0");
    if (!mask) return kernels::soft_threshold(A, tau);
    if (mask->rows() != A.rows() || mask->cols() != A.cols())
        throw std::invalid_argument("soft_threshold: mask dimension mismatch");
    Mat out = Mat::Zero(A.rows(), A.cols());
    for (const auto& [i, j] : mask->entries())
        out(i, j) = soft_threshold_scalar(A(i, j), tau);
    return out;
}

Mat singular_value_threshold(const Mat& A, double lambda) {
    if (lambda < 0.0) throw std::invalid_argument("svt: lambda < 0");
    if (lambda == 0.0) return A;
    TruncatedSvd s = full_svd(A);
    Vec shrunk = (s.singular_values.array() - lambda).max(0.0);
    // keep only the surviving part for the product
    Index k = 0;
    while (k < shrunk.size() && shrunk(k) > 0.0) ++k;
    if (k == 0) return Mat::Zero(A.rows(), A.cols());
    return s.U.leftCols(k) * shrunk.head(k).asDiagonal() *
           s.V.leftCols(k).transpose();
}

}  // namespace rpca
