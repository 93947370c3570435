#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "permreg/csv.hpp"
#include "permreg/recovery.hpp"

namespace permreg::cli {

/// Robust scale of a sample: 1.4826 * median(|v - median(v)|).
double mad_sigma(const Eigen::VectorXd& v);

/// Everything the fit/recover commands compute on one dataset.
struct FitOutput {
    std::vector<std::string> coefficient_names;
    Eigen::VectorXd naive_beta;
    Eigen::VectorXd robust_beta;
    Eigen::VectorXd refit_beta;
    double lambda = 0.0;
    SupportEstimate support;
    std::optional<SparsePermutation> matching;
    bool converged = false;
};

struct FitOptions {
    std::string response;
    bool intercept = true;
    // Support size: fixed k when >= 0, otherwise the 3-MAD threshold rule.
    int k = -1;
    bool auto_k = false;
    // Penalty rule: "huber" (scale estimated from the data), "simulation",
    // "theorem" (both need sigma), or "fixed".
    std::string rule = "huber";
    double sigma = 0.0;
    double M = 1.0;
    double fixed_lambda = 0.0;
    bool with_matching = false;
};

FitOutput fit_dataset(const TabularDataset& data, const FitOptions& opts);

struct RelinkOptions {
    std::string response;
    std::string block;
    bool intercept = true;
    std::uint64_t seed = 1;
    int holdouts = 20;
};

struct HoldoutStats {
    double mean = 0.0;
    double std_error = 0.0;
};

/// Clean fit vs. fits on block-wise relinked responses, with coefficient
/// distances and hold-out prediction errors.
struct RelinkReport {
    std::vector<std::string> coefficient_names;
    Eigen::VectorXd clean_beta;
    Eigen::VectorXd naive_beta;
    Eigen::VectorXd robust_beta;
    double rmse_clean = 0.0;
    double rmse_naive = 0.0;
    double rmse_robust = 0.0;
    double l2_naive = 0.0;   // distance of the naive fit to the clean fit
    double l2_robust = 0.0;  // distance of the robust fit to the clean fit
    HoldoutStats holdout_clean, holdout_naive, holdout_robust;
    int blocks = 0;
    int multi_row_blocks = 0;
    bool singleton_warning = false;  // every block has one row; nothing can move
};

RelinkReport run_relink_demo(const TabularDataset& data, const RelinkOptions& opts);

/// Permutes responses uniformly at random within each block.
Eigen::VectorXd relink_within_blocks(const Eigen::VectorXd& y,
                                     const std::vector<std::string>& block_labels,
                                     RngStream& rng);

/// Entry point; args exclude the program name. Exit codes: 0 success,
/// 1 I/O, 2 configuration, 3 numerical infeasibility.
int run(std::vector<std::string> args);

}  // namespace permreg::cli
