#include <doctest.h>

#include <cmath>
#include <random>

#include "rpca/linalg.hpp"
#include "rpca/prox.hpp"

using namespace rpca;

namespace {

Mat gaussian(Index rows, Index cols, std::mt19937_64& rng) {
    std::normal_distribution<double> g(0.0, 1.0);
    Mat A(rows, cols);
    for (Index i = 0; i < rows; ++i)
        for (Index j = 0; j < cols; ++j) A(i, j) = g(rng);
    return A;
}

Mat orthonormal(Index n, std::mt19937_64& rng) {
    Eigen::HouseholderQR<Mat> qr(gaussian(n, n, rng));
    return qr.householderQ() * Mat::Identity(n, n);
}

}  // namespace

TEST_CASE("soft_threshold_scalar reference values") {
    CHECK(soft_threshold_scalar(3.0, 1.0) == doctest::Approx(2.0));
    CHECK(soft_threshold_scalar(-3.0, 1.0) == doctest::Approx(-2.0));
    CHECK(soft_threshold_scalar(0.5, 1.0) == 0.0);
    CHECK(soft_threshold_scalar(-0.5, 1.0) == 0.0);
    CHECK(soft_threshold_scalar(1.0, 1.0) == 0.0);  // boundary hits zero exactly
    CHECK(soft_threshold_scalar(-1.0, 1.0) == 0.0);
    CHECK(soft_threshold_scalar(2.0, 0.0) == doctest::Approx(2.0));
}

TEST_CASE("scalar soft threshold minimizes the 1-D proximal objective on a grid") {
    const double tau = 0.7;
    for (double x : {-2.3, -0.71, -0.69, 0.0, 0.42, 0.7, 1.9}) {
        double s = soft_threshold_scalar(x, tau);
        auto obj = [&](double y) { return 0.5 * (y - x) * (y - x) + tau * std::abs(y); };
        double best_y = -3.0, best = obj(-3.0);
        for (double y = -3.0; y <= 3.0; y += 1e-6) {
            double v = obj(y);
            if (v < best) {
                best = v;
                best_y = y;
            }
        }
        CHECK(std::abs(s - best_y) < 2e-6);
        CHECK(obj(s) <= best + 1e-12);
    }
}

TEST_CASE("soft threshold proximal inequality over random pairs") {
    std::mt19937_64 rng(55);
    std::uniform_real_distribution<double> ux(-5.0, 5.0);
    std::uniform_real_distribution<double> ut(0.0, 2.0);
    for (int k = 0; k < 100000; ++k) {
        double x = ux(rng), tau = ut(rng), y = ux(rng);
        double s = soft_threshold_scalar(x, tau);
        double fs = 0.5 * (s - x) * (s - x) + tau * std::abs(s);
        double fy = 0.5 * (y - x) * (y - x) + tau * std::abs(y);
        CHECK(fs <= fy + 1e-12);
        // firm properties
        double s2 = soft_threshold_scalar(y, tau);
        CHECK(std::abs(s - s2) <= std::abs(x - y) + 1e-12);
        CHECK(std::abs(s - x) <= tau + 1e-12);
    }
}

TEST_CASE("matrix soft threshold applies the mask after shrinking") {
    Mat A(2, 2);
    A << 3, -3, 0.5, 2;
    Mat S = soft_threshold_matrix(A, 1.0);
    CHECK(S(0, 0) == doctest::Approx(2.0));
    CHECK(S(0, 1) == doctest::Approx(-2.0));
    CHECK(S(1, 0) == 0.0);
    CHECK(S(1, 1) == doctest::Approx(1.0));

    IndexMask m = IndexMask::from_pairs(2, 2, {{0, 0}, {1, 1}});
    Mat Sm = soft_threshold_matrix(A, 1.0, m);
    CHECK(Sm(0, 0) == doctest::Approx(2.0));
    CHECK(Sm(0, 1) == 0.0);
    CHECK(Sm(1, 1) == doctest::Approx(1.0));
}

TEST_CASE("singular_value_threshold on a diagonal matrix") {
    Mat A = Mat::Zero(3, 3);
    A(0, 0) = 5;
    A(1, 1) = 2;
    A(2, 2) = 0.5;
    Mat B = singular_value_threshold(A, 1.0);
    Mat expected = Mat::Zero(3, 3);
    expected(0, 0) = 4;
    expected(1, 1) = 1;
    CHECK((B - expected).norm() < 1e-10);

    CHECK((singular_value_threshold(A, 0.0) - A).norm() < 1e-12);
    CHECK(singular_value_threshold(A, 10.0).norm() == 0.0);
}

TEST_CASE("singular_value_threshold commutes with orthogonal conjugation") {
    std::mt19937_64 rng(57);
    Mat A = gaussian(6, 6, rng);
    Mat Q1 = orthonormal(6, rng), Q2 = orthonormal(6, rng);
    double lam = 0.8;
    Mat lhs = singular_value_threshold(Q1 * A * Q2.transpose(), lam);
    Mat rhs = Q1 * singular_value_threshold(A, lam) * Q2.transpose();
    CHECK((lhs - rhs).norm() < 1e-9);
}

TEST_CASE("singular_value_threshold is a local minimum of the proximal objective") {
    std::mt19937_64 rng(59);
    Mat A = gaussian(5, 4, rng);
    double lam = 1.2;
    Mat B = singular_value_threshold(A, lam);
    auto obj = [&](const Mat& Z) {
        return 0.5 * (Z - A).squaredNorm() + lam * norm(Z, NormKind::nuclear);
    };
    double f0 = obj(B);
    for (int k = 0; k < 10000; ++k) {
        Mat D = gaussian(5, 4, rng);
        D /= D.norm();
        double eps = 1e-4;
        CHECK(obj(B + eps * D) >= f0 - 1e-12);
    }
}
