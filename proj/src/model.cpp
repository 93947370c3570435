#include "permreg/model.hpp"

#include <cmath>
#include <string>

#include "permreg/errors.hpp"

namespace permreg {

Eigen::MatrixXd generate_design(int n, int d, std::uint64_t seed) {
    if (n < 1 || d < 1)
        throw DimensionError("design dimensions must be positive, got n=" + std::to_string(n) +
                             " d=" + std::to_string(d));
    RngStream rng(seed);
    Eigen::MatrixXd X(n, d);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < d; ++j) X(i, j) = rng.normal();
    return X;
}

Eigen::VectorXd sample_unit_sphere(int d, RngStream& rng) {
    if (d < 1) throw DimensionError("dimension must be positive");
    Eigen::VectorXd g(d);
    double norm2 = 0.0;
    do {
        for (int j = 0; j < d; ++j) g[j] = rng.normal();
        norm2 = g.squaredNorm();
    } while (norm2 == 0.0);
    return g / std::sqrt(norm2);
}

ObservationSet synthesize(int n, int d, int k, double sigma, std::uint64_t seed) {
    if (sigma < 0.0) throw ParameterError("sigma must be nonnegative");

    // Fixed substream layout: 0 design, 1 coefficients, 2 permutation, 3 noise.
    Eigen::MatrixXd X = generate_design(n, d, derive_seed(seed, 0));

    RngStream beta_rng(derive_seed(seed, 1));
    Eigen::VectorXd beta_star = sample_unit_sphere(d, beta_rng);

    SparsePermutation pi_star = sample_sparse_permutation(n, k, derive_seed(seed, 2));

    RngStream noise_rng(derive_seed(seed, 3));
    Eigen::VectorXd y = pi_star.apply(X * beta_star);
    for (int i = 0; i < n; ++i) y[i] += sigma * noise_rng.normal();

    return ObservationSet{std::move(X), std::move(y), GroundTruth{std::move(beta_star), std::move(pi_star), sigma}};
}

double snr(const Eigen::VectorXd& beta_star, double sigma) {
    if (sigma <= 0.0) throw ParameterError("snr undefined: sigma must be positive, got " + std::to_string(sigma));
    return beta_star.squaredNorm() / (sigma * sigma);
}

int k_from_fraction(double fraction, int n, bool* bumped) {
    if (fraction < 0.0 || fraction > 1.0) throw RangeError("k fraction must lie in [0, 1]");
    int k = static_cast<int>(std::lround(fraction * n));
    if (bumped) *bumped = false;
    if (k == 1) {
        k = 2;
        if (bumped) *bumped = true;
    }
    if (k > n) k = n;
    return k;
}

}  // namespace permreg
