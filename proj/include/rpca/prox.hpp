#pragma once

#include <optional>

#include "rpca/matrix.hpp"

namespace rpca {

// sign(x) * max(|x| - tau, 0); |x| = tau maps exactly to 0.
double soft_threshold_scalar(double x, double tau);

// Entrywise soft threshold, then zero off-mask when a mask is supplied.
Mat soft_threshold_matrix(const Mat& A, double tau,
                          const std::optional<IndexMask>& mask = std::nullopt);

// prox of lambda ||.||_*: U S_lambda(Sigma) V^T from a full SVD.
Mat singular_value_threshold(const Mat& A, double lambda);

}  // namespace rpca
