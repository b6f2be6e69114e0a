#pragma once

#include <optional>
#include <string>

#include "rpca/linalg.hpp"
#include "rpca/matrix.hpp"
#include "rpca/rng.hpp"

namespace rpca {

enum class SignMode { random, fixed_positive };

struct OutlierMagnitude {
    enum class Kind { gaussian, constant } kind = Kind::gaussian;
    double value = 1.0;  // variance for gaussian, amplitude for constant

    static OutlierMagnitude gaussian(double variance) {
        return {Kind::gaussian, variance};
    }
    static OutlierMagnitude constant(double c) { return {Kind::constant, c}; }
};

struct ModelParams {
    Index n1 = 100;
    Index n2 = 100;
    Index r = 5;
    double p = 1.0;        // observation probability
    double rho_s = 0.0;    // outlier probability
    double sigma = 0.0;    // noise scale
    OutlierMagnitude outlier_magnitude = OutlierMagnitude::gaussian(1.0);
    SignMode sign_mode = SignMode::random;
    uint64_t seed = 0;
    std::optional<Vec> spectrum;  // singular values of Lstar; identity if unset

    void validate() const;
};

struct GroundTruth {
    Mat Xstar, Ystar;  // balanced factors, Lstar = Xstar * Ystar^T
    Mat Lstar, Sstar, E;
    IndexMask omega_obs, omega_star;
    double mu = 0.0;     // measured incoherence
    double kappa = 1.0;  // measured condition number
    double sigma_min = 0.0, sigma_max = 0.0;
    ModelParams params;
};

struct ObservationSet {
    Mat M;  // zero off-mask
    IndexMask omega_obs;
};

// RNG substream ids, one per source of randomness so that e.g. changing
// sigma does not perturb the mask draw.
namespace stream {
constexpr uint64_t factors = 1;
constexpr uint64_t mask = 2;
constexpr uint64_t outliers = 3;
constexpr uint64_t noise = 4;
constexpr uint64_t augmented = 5;
}  // namespace stream

// Balanced rank-r truth: U, V are orientations of Gaussian matrices
// orthonormalized by QR, Xstar = U sqrt(Sigma), Ystar = V sqrt(Sigma).
void gen_low_rank(const ModelParams& params, Rng& rng, Mat& Xstar, Mat& Ystar,
                  Mat& Lstar);

// i.i.d. Bernoulli(p) membership.
IndexMask gen_mask(Index n1, Index n2, double p, Rng& rng);

// Each observed entry joins the outlier support independently with
// probability rho_s; magnitude and sign drawn per the configured modes.
void gen_outliers(const IndexMask& omega_obs, double rho_s,
                  const OutlierMagnitude& magnitude, SignMode sign_mode,
                  Rng& rng, Mat& Sstar, IndexMask& omega_star);

Mat gen_noise(Index n1, Index n2, double sigma, Rng& rng);

ObservationSet assemble(const GroundTruth& gt);

// Over-sampling / rejection construction: omega_obs ~ Bern(p),
// omega_aug within omega_obs at rate rho_aug, omega_star within omega_aug at
// rate rho_s / rho_aug. Marginally equivalent to the plain model.
void gen_mask_augmented(Index n1, Index n2, double p, double rho_aug,
                        double rho_s, Rng& rng, IndexMask& omega_obs,
                        IndexMask& omega_aug, IndexMask& omega_star);

// mu = max(n1 ||U||_{2,inf}^2, n2 ||V||_{2,inf}^2) / r; kappa = s_max/s_min
// (infinity when s_min = 0).
void measure_incoherence(const TruncatedSvd& svd, double& mu, double& kappa);

// Full instance from one master seed.
GroundTruth generate(const ModelParams& params);

// GroundTruth <-> directory of matrix/mask files plus a metadata file.
void save_ground_truth(const std::string& dir, const GroundTruth& gt);
GroundTruth load_ground_truth(const std::string& dir);

void save_observation_set(const std::string& dir, const ObservationSet& obs);
ObservationSet load_observation_set(const std::string& dir);

}  // namespace rpca
