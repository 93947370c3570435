#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <utility>
#include <variant>
#include <vector>

#include "permreg/permutation.hpp"

namespace permreg {

/// Ordinary least squares solution with residual diagnostics.
struct OlsFit {
    Eigen::VectorXd beta;
    Eigen::VectorXd residuals;  // y - X beta
    double rss = 0.0;
};

/// Minimizer of (1/n) ||y - X b - sqrt(n) e||^2 + lambda ||e||_1 together
/// with its convergence trace. e absorbs per-observation gross errors.
struct RobustFit {
    Eigen::VectorXd beta;
    Eigen::VectorXd e;
    double lambda = 0.0;
    int iterations = 0;
    bool converged = false;
    std::vector<double> objective_trace;
};

/// Global optimum of the mismatch-constrained least-squares problem found by
/// enumeration; pi is the permutation with y ~ pi(X beta).
struct ExactFit {
    SparsePermutation pi;
    Eigen::VectorXd beta;
    double objective = 0.0;
    std::int64_t candidates_evaluated = 0;
};

// Penalty-level rules. TheoremRule: 4 (1+M) sigma sqrt(2 log n / n).
// SimulationRule: 0.2 sigma sqrt(log n / n). HuberRule: 2 * 1.345 * sigma_hat / sqrt(n).
struct TheoremRule {
    double M;
    double sigma;
};
struct SimulationRule {
    double sigma;
};
struct HuberRule {
    double sigma_hat;
};
struct FixedLambda {
    double value;
};
using LambdaRule = std::variant<TheoremRule, SimulationRule, HuberRule, FixedLambda>;

double lambda_value(const LambdaRule& rule, int n);

/// Proximal map of tau |.|: sign(z) * max(|z| - tau, 0).
inline double soft_threshold(double z, double tau) {
    const double mag = std::abs(z) - tau;
    return mag > 0.0 ? (z > 0.0 ? mag : -mag) : 0.0;
}

/// Least squares via column-pivoted QR; rank deficiency is an error.
OlsFit fit_ols(const Eigen::MatrixXd& X, const Eigen::VectorXd& y);

/// Block coordinate descent on the robust objective: exact beta-step from a
/// factorization computed once, soft-threshold e-step. Stops when the
/// relative objective change drops below tol or max_iter is reached. The
/// defaults keep the stationarity certificate below 1e-6 on converged fits;
/// the iteration budget is generous because at very small lambda the l1
/// geometry drains misplaced residual mass at a rate of lambda/2 per pass.
RobustFit fit_robust(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, double lambda,
                     double tol = 1e-12, int max_iter = 100000);

/// Optimality certificate for a RobustFit: max of the scaled normal-equation
/// residual and the worst per-coordinate subgradient violation for e.
double kkt_residual(const RobustFit& fit, const Eigen::MatrixXd& X, const Eigen::VectorXd& y);

/// Least absolute deviations via iteratively reweighted least squares with
/// weights 1 / max(|r_i|, smoothing).
Eigen::VectorXd fit_lad(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, double smoothing = 1e-8);

/// Exhaustive search over permutations with at most k non-fixed points
/// (n <= 12). The permutation-only profile ||Porth pi^{-1} y||^2 is scanned,
/// the coefficient back-substituted. Ties broken by lexicographically
/// smallest permutation map.
ExactFit fit_exact_bruteforce(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, int k,
                              std::int64_t budget = 2'000'000);

/// Number of permutations of [n] moving at most k points (m = 1 impossible);
/// the candidate count fit_exact_bruteforce checks against its budget.
std::int64_t sparse_permutation_count(int n, int k);

/// d = 1, unconstrained case: both sort orientations of the matching problem
/// are evaluated and the one with smaller residual sum of squares wins.
/// Returns the matching permutation and the slope estimate.
std::pair<SparsePermutation, double> fit_exact_d1_sorting(const Eigen::VectorXd& x,
                                                          const Eigen::VectorXd& y);

}  // namespace permreg
