#include "rpca/linalg.hpp"

#include <Eigen/SVD>
#include <cmath>

namespace rpca {

static void fix_signs(Mat& U, Mat& V) {
    for (Index k = 0; k < U.cols(); ++k) {
        Index imax = 0;
        U.col(k).cwiseAbs().maxCoeff(&imax);
        if (U(imax, k) < 0.0) {
            U.col(k) = -U.col(k);
            V.col(k) = -V.col(k);
        }
    }
}

TruncatedSvd full_svd(const Mat& A) {
    Eigen::BDCSVD<Mat> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
    TruncatedSvd out{svd.matrixU(), svd.singularValues(), svd.matrixV()};
    fix_signs(out.U, out.V);
    return out;
}

TruncatedSvd truncated_svd(const Mat& A, Index r) {
    if (r < 1 || r > std::min(A.rows(), A.cols()))
        throw std::invalid_argument("truncated_svd: rank out of range");
    TruncatedSvd s = full_svd(A);
    return {s.U.leftCols(r), s.singular_values.head(r), s.V.leftCols(r)};
}

Mat project_tangent(const Mat& A, const TangentSpace& T) {
    if (A.rows() != T.U.rows() || A.cols() != T.V.rows())
        throw std::invalid_argument("project_tangent: dimension mismatch");
    Mat UtA = T.U.transpose() * A;            // r x n2
    Mat AV = A * T.V;                         // n1 x r
    return T.U * UtA + AV * T.V.transpose() - T.U * (UtA * T.V) * T.V.transpose();
}

Mat project_tangent_perp(const Mat& A, const TangentSpace& T) {
    return A - project_tangent(A, T);
}

ProcrustesResult procrustes_align(const Mat& F, const Mat& Fstar) {
    if (F.rows() != Fstar.rows() || F.cols() != Fstar.cols())
        throw std::invalid_argument("procrustes_align: shape mismatch");
    Mat C = F.transpose() * Fstar;  // r x r
    Eigen::BDCSVD<Mat> svd(C, Eigen::ComputeFullU | Eigen::ComputeFullV);
    Mat U = svd.matrixU(), V = svd.matrixV();
    fix_signs(U, V);
    const Vec& s = svd.singularValues();
    bool unique = true;
    if (s.size() > 0) {
        double tol = 1e-12 * std::max(1.0, s(0));
        if (s(s.size() - 1) <= tol) unique = false;
    }
    return {U * V.transpose(), unique};
}

double norm(const Mat& A, NormKind kind) {
    switch (kind) {
        case NormKind::fro:
            return A.norm();
        case NormKind::spectral: {
            if (A.size() == 0) return 0.0;
            Eigen::BDCSVD<Mat> svd(A);
            return svd.singularValues()(0);
        }
        case NormKind::nuclear: {
            if (A.size() == 0) return 0.0;
            Eigen::BDCSVD<Mat> svd(A);
            return svd.singularValues().sum();
        }
        case NormKind::l1:
            return A.cwiseAbs().sum();
        case NormKind::linf:
            return A.size() == 0 ? 0.0 : A.cwiseAbs().maxCoeff();
        case NormKind::two_inf:
            return A.size() == 0 ? 0.0 : A.rowwise().norm().maxCoeff();
    }
    return 0.0;
}

}  // namespace rpca
