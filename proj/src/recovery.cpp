#include "permreg/recovery.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "permreg/errors.hpp"

namespace permreg {

bool SupportEstimate::contains(int i) const {
    return std::binary_search(indices.begin(), indices.end(), i);
}

SupportEstimate estimate_support_topk(const Eigen::VectorXd& e, int k) {
    const int n = static_cast<int>(e.size());
    if (k < 0 || k > n) throw RangeError("k = " + std::to_string(k) + " outside [0, " + std::to_string(n) + "]");

    std::vector<int> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return std::abs(e[a]) > std::abs(e[b]); });

    SupportEstimate s;
    s.method = SupportMethod::TopK;
    s.threshold = k > 0 ? std::abs(e[order[static_cast<std::size_t>(k - 1)]]) : 0.0;
    for (int r = 0; r < k; ++r) {
        const int i = order[static_cast<std::size_t>(r)];
        if (e[i] == 0.0) break;  // zero entries carry no mismatch evidence
        s.indices.push_back(i);
    }
    std::sort(s.indices.begin(), s.indices.end());
    return s;
}

SupportEstimate support_from_permutation(const SparsePermutation& pi) {
    SupportEstimate s;
    s.method = SupportMethod::PiDiagonal;
    s.indices = pi.support();
    s.threshold = 0.0;
    return s;
}

OlsFit refit_excluding(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                       const SupportEstimate& support) {
    const int n = static_cast<int>(X.rows());
    const int d = static_cast<int>(X.cols());
    const int kept = n - support.size();
    if (kept <= d)
        throw InsufficientDataError("refit keeps " + std::to_string(kept) +
                                    " rows but needs more than " + std::to_string(d));
    if (support.size() == 0) return fit_ols(X, y);

    Eigen::MatrixXd Xk(kept, d);
    Eigen::VectorXd yk(kept);
    int r = 0;
    for (int i = 0; i < n; ++i) {
        if (support.contains(i)) continue;
        Xk.row(r) = X.row(i);
        yk[r] = y[i];
        ++r;
    }
    return fit_ols(Xk, yk);
}

namespace {

std::vector<int> sorted_order(const Eigen::VectorXd& v, const std::vector<int>& ids) {
    std::vector<int> order = ids;
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return v[a] < v[b]; });
    return order;
}

}  // namespace

SparsePermutation recover_permutation_sorted(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                                             const Eigen::VectorXd& theta_hat) {
    const int n = static_cast<int>(X.rows());
    if (n < 1) throw DimensionError("empty data");
    if (y.size() != n) throw DimensionError("X and y sizes differ");
    if (theta_hat.size() != X.cols()) throw DimensionError("theta length != number of columns");

    std::vector<int> all(static_cast<std::size_t>(n));
    std::iota(all.begin(), all.end(), 0);
    const Eigen::VectorXd fitted = X * theta_hat;
    const std::vector<int> by_fitted = sorted_order(fitted, all);
    const std::vector<int> by_response = sorted_order(y, all);

    std::vector<int> map(static_cast<std::size_t>(n));
    for (int r = 0; r < n; ++r) map[static_cast<std::size_t>(by_response[static_cast<std::size_t>(r)])] = by_fitted[static_cast<std::size_t>(r)];
    return SparsePermutation(std::move(map));
}

SparsePermutation recover_permutation_on_support(const Eigen::MatrixXd& X,
                                                 const Eigen::VectorXd& y,
                                                 const SupportEstimate& support,
                                                 const Eigen::VectorXd& theta_hat) {
    const int n = static_cast<int>(X.rows());
    if (y.size() != n) throw DimensionError("X and y sizes differ");
    if (theta_hat.size() != X.cols()) throw DimensionError("theta length != number of columns");

    const Eigen::VectorXd fitted = X * theta_hat;
    const std::vector<int> by_fitted = sorted_order(fitted, support.indices);
    const std::vector<int> by_response = sorted_order(y, support.indices);

    SparsePermutation identity(n);
    std::vector<int> map = identity.map();
    for (std::size_t r = 0; r < by_response.size(); ++r) map[static_cast<std::size_t>(by_response[r])] = by_fitted[r];
    return SparsePermutation(std::move(map));
}

TwoStageResult two_stage(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, int k,
                         const LambdaRule& rule) {
    const int n = static_cast<int>(X.rows());
    const int d = static_cast<int>(X.cols());
    if (n - k <= d)
        throw InsufficientDataError("two-stage needs n - k > d, got n=" + std::to_string(n) +
                                    " k=" + std::to_string(k) + " d=" + std::to_string(d));

    TwoStageResult result;
    result.robust = fit_robust(X, y, lambda_value(rule, n));
    result.support = estimate_support_topk(result.robust.e, k);
    result.refit_beta = refit_excluding(X, y, result.support).beta;
    result.pi_tilde = recover_permutation_on_support(X, y, result.support, result.refit_beta);
    return result;
}

}  // namespace permreg
