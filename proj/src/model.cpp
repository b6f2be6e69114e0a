#include "rpca/model.hpp"

#include <Eigen/QR>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>

#include "rpca/kernels.hpp"

namespace rpca {

void ModelParams::validate() const {
    if (n1 < 1 || n2 < 1) throw std::invalid_argument("dimensions must be positive");
    if (r < 1 || r > std::min(n1, n2))
        throw std::invalid_argument("rank out of range");
    if (!(p > 0.0 && p <= 1.0))
        throw std::invalid_argument("observation probability out of (0,1]");
    if (!(rho_s >= 0.0 && rho_s < 1.0))
        throw std::invalid_argument("outlier probability out of [0,1)");
    if (sigma < 0.0) throw std::invalid_argument("sigma must be nonnegative");
    if (spectrum && spectrum->size() != r)
        throw std::invalid_argument("spectrum length must equal r");
}

// Orientation of a Gaussian matrix: thin QR with the R diagonal made
// positive, so the draw is deterministic in the seed.
static Mat random_orthonormal(Index n, Index r, Rng& rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    Mat G(n, r);
    for (Index i = 0; i < n; ++i)
        for (Index j = 0; j < r; ++j) G(i, j) = gauss(rng);
    Eigen::HouseholderQR<Mat> qr(G);
    Mat Q = qr.householderQ() * Mat::Identity(n, r);
    Mat R = qr.matrixQR().topRows(r).triangularView<Eigen::Upper>();
    for (Index j = 0; j < r; ++j)
        if (R(j, j) < 0.0) Q.col(j) = -Q.col(j);
    return Q;
}

void gen_low_rank(const ModelParams& params, Rng& rng, Mat& Xstar, Mat& Ystar,
                  Mat& Lstar) {
    params.validate();
    Mat U = random_orthonormal(params.n1, params.r, rng);
    Mat V = random_orthonormal(params.n2, params.r, rng);
    Vec spectrum = params.spectrum ? *params.spectrum : Vec::Ones(params.r);
    Vec root = spectrum.cwiseSqrt();
    Xstar = U * root.asDiagonal();
    Ystar = V * root.asDiagonal();
    Lstar = Xstar * Ystar.transpose();
}

IndexMask gen_mask(Index n1, Index n2, double p, Rng& rng) {
    if (!(p > 0.0 && p <= 1.0))
        throw std::invalid_argument("gen_mask: p out of (0,1]");
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    IndexMask m(n1, n2);
    for (Index i = 0; i < n1; ++i)
        for (Index j = 0; j < n2; ++j)
            if (unif(rng) < p) m.push(i, j);
    return m;
}

void gen_outliers(const IndexMask& omega_obs, double rho_s,
                  const OutlierMagnitude& magnitude, SignMode sign_mode,
                  Rng& rng, Mat& Sstar, IndexMask& omega_star) {
    if (!(rho_s >= 0.0 && rho_s < 1.0))
        throw std::invalid_argument("gen_outliers: rho_s out of [0,1)");
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::normal_distribution<double> gauss(0.0, 1.0);
    Sstar = Mat::Zero(omega_obs.rows(), omega_obs.cols());
    omega_star = IndexMask(omega_obs.rows(), omega_obs.cols());
    const double sd = magnitude.kind == OutlierMagnitude::Kind::gaussian
                          ? std::sqrt(magnitude.value)
                          : 0.0;
    for (const auto& [i, j] : omega_obs.entries()) {
        if (unif(rng) >= rho_s) continue;
        double mag = magnitude.kind == OutlierMagnitude::Kind::gaussian
                         ? std::abs(sd * gauss(rng))
                         : magnitude.value;
        // sign draw happens in both modes so fixed/random runs with the same
        // seed see identical supports and magnitudes (paired comparisons)
        double coin = unif(rng);
        double sign = 1.0;
        if (sign_mode == SignMode::random) sign = coin < 0.5 ? -1.0 : 1.0;
        Sstar(i, j) = sign * mag;
        omega_star.push(i, j);
    }
}

Mat gen_noise(Index n1, Index n2, double sigma, Rng& rng) {
    if (sigma < 0.0) throw std::invalid_argument("gen_noise: sigma < 0");
    std::normal_distribution<double> gauss(0.0, 1.0);
    Mat E(n1, n2);
    for (Index i = 0; i < n1; ++i)
        for (Index j = 0; j < n2; ++j) E(i, j) = sigma * gauss(rng);
    return E;
}

ObservationSet assemble(const GroundTruth& gt) {
    Mat sum = gt.Lstar + gt.Sstar + gt.E;
    return {kernels::project_mask(sum, gt.omega_obs), gt.omega_obs};
}

void gen_mask_augmented(Index n1, Index n2, double p, double rho_aug,
                        double rho_s, Rng& rng, IndexMask& omega_obs,
                        IndexMask& omega_aug, IndexMask& omega_star) {
    if (!(rho_s <= rho_aug && rho_aug <= 1.0))
        throw std::invalid_argument("gen_mask_augmented: need rho_s <= rho_aug <= 1");
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    omega_obs = IndexMask(n1, n2);
    omega_aug = IndexMask(n1, n2);
    omega_star = IndexMask(n1, n2);
    const double accept = rho_aug > 0.0 ? rho_s / rho_aug : 0.0;
    for (Index i = 0; i < n1; ++i)
        for (Index j = 0; j < n2; ++j) {
            if (unif(rng) >= p) continue;
            omega_obs.push(i, j);
            if (unif(rng) >= rho_aug) continue;
            omega_aug.push(i, j);
            if (unif(rng) < accept) omega_star.push(i, j);
        }
}

void measure_incoherence(const TruncatedSvd& svd, double& mu, double& kappa) {
    const Index n1 = svd.U.rows(), n2 = svd.V.rows();
    const Index r = svd.U.cols();
    double u2i = norm(svd.U, NormKind::two_inf);
    double v2i = norm(svd.V, NormKind::two_inf);
    mu = std::max(n1 * u2i * u2i, n2 * v2i * v2i) / static_cast<double>(r);
    const Vec& s = svd.singular_values;
    double smin = s(s.size() - 1), smax = s(0);
    kappa = smin > 0.0 ? smax / smin : std::numeric_limits<double>::infinity();
}

GroundTruth generate(const ModelParams& params) {
    params.validate();
    GroundTruth gt;
    gt.params = params;

    Rng rng_f = make_rng(params.seed, stream::factors);
    gen_low_rank(params, rng_f, gt.Xstar, gt.Ystar, gt.Lstar);

    Rng rng_m = make_rng(params.seed, stream::mask);
    gt.omega_obs = gen_mask(params.n1, params.n2, params.p, rng_m);

    Rng rng_o = make_rng(params.seed, stream::outliers);
    gen_outliers(gt.omega_obs, params.rho_s, params.outlier_magnitude,
                 params.sign_mode, rng_o, gt.Sstar, gt.omega_star);

    Rng rng_n = make_rng(params.seed, stream::noise);
    gt.E = gen_noise(params.n1, params.n2, params.sigma, rng_n);

    TruncatedSvd svd = truncated_svd(gt.Lstar, params.r);
    measure_incoherence(svd, gt.mu, gt.kappa);
    gt.sigma_min = svd.singular_values(params.r - 1);
    gt.sigma_max = svd.singular_values(0);
    return gt;
}

namespace fs = std::filesystem;

void save_ground_truth(const std::string& dir, const GroundTruth& gt) {
    fs::create_directories(dir);
    save_matrix(dir + "/Xstar.txt", gt.Xstar);
    save_matrix(dir + "/Ystar.txt", gt.Ystar);
    save_matrix(dir + "/Lstar.txt", gt.Lstar);
    save_matrix(dir + "/Sstar.txt", gt.Sstar);
    save_matrix(dir + "/E.txt", gt.E);
    save_mask(dir + "/omega_obs.txt", gt.omega_obs);
    save_mask(dir + "/omega_star.txt", gt.omega_star);
    std::ofstream meta(dir + "/meta.txt");
    const ModelParams& pr = gt.params;
    meta << "n1 = " << pr.n1 << "\nn2 = " << pr.n2 << "\nr = " << pr.r
         << "\np = " << pr.p << "\nrho_s = " << pr.rho_s
         << "\nsigma = " << pr.sigma << "\nseed = " << pr.seed
         << "\nsign_mode = "
         << (pr.sign_mode == SignMode::random ? "random" : "fixed_positive")
         << "\noutlier_kind = "
         << (pr.outlier_magnitude.kind == OutlierMagnitude::Kind::gaussian
                 ? "gaussian"
                 : "constant")
         << "\noutlier_value = " << pr.outlier_magnitude.value << "\nmu = " << gt.mu
         << "\nkappa = " << gt.kappa << "\n";
}

static std::map<std::string, std::string> read_kv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::map<std::string, std::string> kv;
    std::string line;
    while (std::getline(in, line)) {
        auto eq = line.find('=');
        if (eq == std::string::npos) continue;
        std::string key = line.substr(0, eq);
        std::string val = line.substr(eq + 1);
        auto trim = [](std::string& s) {
            s.erase(0, s.find_first_not_of(" \t"));
            auto e = s.find_last_not_of(" \t\r");
            s.erase(e == std::string::npos ? 0 : e + 1);
        };
        trim(key);
        trim(val);
        kv[key] = val;
    }
    return kv;
}

GroundTruth load_ground_truth(const std::string& dir) {
    GroundTruth gt;
    gt.Xstar = load_matrix(dir + "/Xstar.txt");
    gt.Ystar = load_matrix(dir + "/Ystar.txt");
    gt.Lstar = load_matrix(dir + "/Lstar.txt");
    gt.Sstar = load_matrix(dir + "/Sstar.txt");
    gt.E = load_matrix(dir + "/E.txt");
    gt.omega_obs = load_mask(dir + "/omega_obs.txt");
    gt.omega_star = load_mask(dir + "/omega_star.txt");
    auto kv = read_kv(dir + "/meta.txt");
    ModelParams& pr = gt.params;
    pr.n1 = std::stoll(kv.at("n1"));
    pr.n2 = std::stoll(kv.at("n2"));
    pr.r = std::stoll(kv.at("r"));
    pr.p = std::stod(kv.at("p"));
    pr.rho_s = std::stod(kv.at("rho_s"));
    pr.sigma = std::stod(kv.at("sigma"));
    pr.seed = std::stoull(kv.at("seed"));
    pr.sign_mode = kv.at("sign_mode") == "random" ? SignMode::random
                                                  : SignMode::fixed_positive;
    pr.outlier_magnitude.kind = kv.at("outlier_kind") == "gaussian"
                                    ? OutlierMagnitude::Kind::gaussian
                                    : OutlierMagnitude::Kind::constant;
    pr.outlier_magnitude.value = std::stod(kv.at("outlier_value"));
    gt.mu = std::stod(kv.at("mu"));
    gt.kappa = std::stod(kv.at("kappa"));
    TruncatedSvd svd = truncated_svd(gt.Lstar, pr.r);
    gt.sigma_min = svd.singular_values(pr.r - 1);
    gt.sigma_max = svd.singular_values(0);
    return gt;
}

void save_observation_set(const std::string& dir, const ObservationSet& obs) {
    fs::create_directories(dir);
    save_matrix(dir + "/M.txt", obs.M);
    save_mask(dir + "/omega_obs.txt", obs.omega_obs);
}

ObservationSet load_observation_set(const std::string& dir) {
    ObservationSet obs;
    obs.M = load_matrix(dir + "/M.txt");
    obs.omega_obs = load_mask(dir + "/omega_obs.txt");
    if (obs.M.rows() != obs.omega_obs.rows() ||
        obs.M.cols() != obs.omega_obs.cols())
        throw std::runtime_error("observation set shape mismatch");
    obs.M = kernels::project_mask(obs.M, obs.omega_obs);
    return obs;
}

}  // namespace rpca
