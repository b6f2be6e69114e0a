#pragma once

#include "rpca/matrix.hpp"

namespace rpca {

// Thin SVD truncated to the leading r triples.
struct TruncatedSvd {
    Mat U;                // n1 x r, column-orthonormal
    Vec singular_values;  // r, nonincreasing
    Mat V;                // n2 x r, column-orthonormal

    Mat reconstruct() const {
        return U * singular_values.asDiagonal() * V.transpose();
    }
};

// Tangent space of the rank-r manifold at U diag(s) V^T: {U A^T + B V^T}.
struct TangentSpace {
    Mat U;  // n1 x r orthonormal
    Mat V;  // n2 x r orthonormal
};

// Full thin SVD with a deterministic sign convention: the largest-magnitude
// entry of each left singular vector is made positive.
TruncatedSvd full_svd(const Mat& A);

// Best rank-r approximation factors (Eckart-Young).
TruncatedSvd truncated_svd(const Mat& A, Index r);

Mat project_tangent(const Mat& A, const TangentSpace& T);
Mat project_tangent_perp(const Mat& A, const TangentSpace& T);

struct ProcrustesResult {
    Mat H;        // r x r orthonormal minimizer of ||F H - Fstar||_F
    bool unique;  // false when F^T Fstar is numerically rank-deficient
};

ProcrustesResult procrustes_align(const Mat& F, const Mat& Fstar);

enum class NormKind { fro, spectral, nuclear, l1, linf, two_inf };

double norm(const Mat& A, NormKind kind);

}  // namespace rpca
