#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "permreg/model.hpp"
#include "permreg/recovery.hpp"

namespace permreg {

/// Per-replication estimator errors and recovery diagnostics.
struct TrialMetrics {
    double l2_error_naive = 0.0;
    double l2_error_robust = 0.0;
    double l2_error_refit = 0.0;
    double l2_error_oracle = 0.0;
    double support_precision = 0.0;
    double support_recall = 0.0;
    bool permutation_exact = false;
    int permutation_hamming_error = 0;
    double wall_time_ms = 0.0;
};

struct EstimatorStats {
    double mean_log2_error = 0.0;
    double std_error = 0.0;  // standard error of the mean log2 error
    double mean_error = 0.0;  // raw scale
};

/// Aggregate of one (sigma, k/n) grid cell across replications, one entry
/// per estimator, in a fixed order.
struct GridCellSummary {
    double sigma = 0.0;
    double k_fraction = 0.0;
    int replications = 0;
    bool skipped = false;
    std::string skip_reason;
    std::vector<std::pair<std::string, EstimatorStats>> estimators;
};

/// Runs the full (sigma, k/n) grid with estimators: naive least squares,
/// the robust fit at the 0.2 sigma sqrt(log n / n) penalty, its thresholded
/// refit, and the known-permutation oracle. Deterministic for a fixed
/// base_seed regardless of thread count.
std::vector<GridCellSummary> run_grid(const SimulationSpec& spec, int threads = 1);

/// d = 1 comparison: the exact estimators (sorting always; exhaustive search
/// when n <= 12) against the robust fit, the naive fit, and the oracle.
std::vector<GridCellSummary> run_d1_comparison(const SimulationSpec& spec, int threads = 1);

struct Prop1Report {
    int n = 0;
    double sigma = 0.0;
    int reps = 0;
    double bound = 0.0;
    double mean_beta_sq = 0.0;
    double fraction_exceeding = 0.0;
};

/// Pure-noise overfitting demonstration for the unconstrained d = 1
/// estimator: beta* = 0, y = sigma eps, slope estimated by sorted matching.
Prop1Report prop1_demo(int n, double sigma, int reps, std::uint64_t seed);

/// Exact-recovery flag (under the y ~ pi(X theta) convention) and Hamming
/// distance between the estimate and the truth.
std::pair<bool, int> evaluate_permutation(const SparsePermutation& pi_est,
                                          const GroundTruth& truth);

struct SnrCurvePoint {
    double snr = 0.0;
    double recovery_rate = 0.0;
    int reps = 0;
};

/// Empirical probability of exact permutation recovery by sorted matching
/// with theta = beta*, ||beta*||^2 = snr, sigma = 1, fully scrambled rows.
std::vector<SnrCurvePoint> snr_recovery_curve(int n, int d, const std::vector<double>& snr_values,
                                              int reps, std::uint64_t seed);

/// Writes one CSV row per (cell, estimator):
/// sigma,k_fraction,estimator,mean_log2_l2_error,std_error,reps,mean_l2_error
/// and a tab-separated plot file (one block per estimator, x = k/n, one
/// column per sigma). Skipped cells are omitted.
void emit_results(const std::vector<GridCellSummary>& summaries, const std::string& csv_path,
                  const std::string& plot_path = "");

/// Parses a file written by emit_results back into summaries.
std::vector<GridCellSummary> parse_results(const std::string& csv_path);

}  // namespace permreg
