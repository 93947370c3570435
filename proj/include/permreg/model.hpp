#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <vector>

#include "permreg/permutation.hpp"

namespace permreg {

/// Generative parameters behind a synthesized data set: coefficients,
/// mismatch permutation, and noise level of y = Pi X beta + sigma eps.
struct GroundTruth {
    Eigen::VectorXd beta_star;
    SparsePermutation pi_star;
    double sigma = 0.0;
};

/// A regression data set (X, y), optionally carrying the truth it was
/// synthesized from. Immutable after construction.
struct ObservationSet {
    Eigen::MatrixXd X;
    Eigen::VectorXd y;
    std::optional<GroundTruth> truth;

    int n() const { return static_cast<int>(X.rows()); }
    int d() const { return static_cast<int>(X.cols()); }
};

/// Grid description for a Monte-Carlo run: (sigma, k/n) cells, replication
/// count, and the base seed that every replication stream derives from.
struct SimulationSpec {
    int n = 200;
    int d = 10;
    std::vector<double> k_fractions = {.01, .02, .05, .1, .15, .2, .25, .3, .35, .4, .45, .5};
    std::vector<double> sigmas = {.01, .02, .05, .1, .2, .5, 1.0};
    int replications = 100;
    std::uint64_t base_seed = 1;
};

/// n x d matrix of independent standard-normal entries, filled row-major;
/// identical output for identical seeds.
Eigen::MatrixXd generate_design(int n, int d, std::uint64_t seed);

/// Uniform draw from the unit sphere in R^d (normalized Gaussian vector).
Eigen::VectorXd sample_unit_sphere(int d, RngStream& rng);

/// Draws a full instance of the mismatched-data model: beta* uniform on the
/// unit sphere, Pi* with exactly k non-fixed points, y = Pi* X beta* + sigma eps.
ObservationSet synthesize(int n, int d, int k, double sigma, std::uint64_t seed);

/// Signal-to-noise ratio ||beta*||^2 / sigma^2; sigma must be positive.
double snr(const Eigen::VectorXd& beta_star, double sigma);

/// Mismatch count from a grid fraction: round(f * n), with the infeasible
/// value 1 bumped to 2.
int k_from_fraction(double fraction, int n, bool* bumped = nullptr);

}  // namespace permreg
