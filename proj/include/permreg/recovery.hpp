#pragma once

#include <Eigen/Dense>
#include <vector>

#include "permreg/permutation.hpp"
#include "permreg/solvers.hpp"

namespace permreg {

enum class SupportMethod { TopK, PiDiagonal };

/// Indices suspected of being mismatched, with the magnitude threshold that
/// selected them.
struct SupportEstimate {
    std::vector<int> indices;  // ascending
    double threshold = 0.0;
    SupportMethod method = SupportMethod::TopK;

    int size() const { return static_cast<int>(indices.size()); }
    bool contains(int i) const;
};

/// Output of the full pipeline: robust fit, estimated support, refitted
/// coefficients, and the recovered matching (identity off the support).
struct TwoStageResult {
    RobustFit robust;
    SupportEstimate support;
    Eigen::VectorXd refit_beta;
    SparsePermutation pi_tilde;
};

/// Indices of the k largest |e_i| among nonzero entries, ties broken by the
/// smaller index; threshold is the k-th largest magnitude (0 for k = 0).
SupportEstimate estimate_support_topk(const Eigen::VectorXd& e, int k);

/// The non-fixed points of a permutation as a support estimate.
SupportEstimate support_from_permutation(const SparsePermutation& pi);

/// OLS with the supported rows left out.
OlsFit refit_excluding(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                       const SupportEstimate& support);

/// Matches fitted values X theta to responses by rank: the permutation pi
/// with y ~ pi(X theta), the maximizer of <pi(X theta), y>. Ties keep
/// original index order.
SparsePermutation recover_permutation_sorted(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                                             const Eigen::VectorXd& theta_hat);

/// Same matching restricted to the supported rows; identity elsewhere.
SparsePermutation recover_permutation_on_support(const Eigen::MatrixXd& X,
                                                 const Eigen::VectorXd& y,
                                                 const SupportEstimate& support,
                                                 const Eigen::VectorXd& theta_hat);

/// Robust fit -> top-k support -> OLS refit -> matching on the support,
/// using the refitted coefficients for the matching step.
TwoStageResult two_stage(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, int k,
                         const LambdaRule& rule);

}  // namespace permreg
