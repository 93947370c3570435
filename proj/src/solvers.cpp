#include "permreg/solvers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "permreg/errors.hpp"

namespace permreg {

double lambda_value(const LambdaRule& rule, int n) {
    if (n < 2) throw ParameterError("lambda rules require n >= 2");
    const double logn = std::log(static_cast<double>(n));
    return std::visit(
        [&](const auto& r) -> double {
            using T = std::decay_t<decltype(r)>;
            if constexpr (std::is_same_v<T, TheoremRule>) {
                if (r.sigma <= 0.0) throw ParameterError("TheoremRule: sigma must be positive");
                if (r.M <= 0.0) throw ParameterError("TheoremRule: M must be positive");
                return 4.0 * (1.0 + r.M) * r.sigma * std::sqrt(2.0 * logn / n);
            } else if constexpr (std::is_same_v<T, SimulationRule>) {
                if (r.sigma <= 0.0) throw ParameterError("SimulationRule: sigma must be positive");
                return 0.2 * r.sigma * std::sqrt(logn / n);
            } else if constexpr (std::is_same_v<T, HuberRule>) {
                if (r.sigma_hat <= 0.0) throw ParameterError("HuberRule: sigma_hat must be positive");
                return 2.0 * 1.345 * r.sigma_hat / std::sqrt(static_cast<double>(n));
            } else {
                if (r.value <= 0.0) throw ParameterError("Fixed lambda must be positive");
                return r.value;
            }
        },
        rule);
}

namespace {

void check_shapes(const Eigen::MatrixXd& X, const Eigen::VectorXd& y) {
    if (X.rows() != y.size())
        throw DimensionError("X has " + std::to_string(X.rows()) + " rows but y has " +
                             std::to_string(y.size()) + " entries");
    if (X.rows() < 1 || X.cols() < 1) throw DimensionError("empty design");
}

Eigen::ColPivHouseholderQR<Eigen::MatrixXd> full_rank_qr(const Eigen::MatrixXd& X) {
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(X);
    if (qr.rank() < X.cols())
        throw SingularDesignError("design matrix is rank deficient (rank " +
                                  std::to_string(qr.rank()) + " < " + std::to_string(X.cols()) + ")");
    return qr;
}

}  // namespace

OlsFit fit_ols(const Eigen::MatrixXd& X, const Eigen::VectorXd& y) {
    check_shapes(X, y);
    if (X.rows() < X.cols())
        throw SingularDesignError("fewer observations than coefficients (n < d)");
    auto qr = full_rank_qr(X);
    OlsFit fit;
    fit.beta = qr.solve(y);
    fit.residuals = y - X * fit.beta;
    fit.rss = fit.residuals.squaredNorm();
    return fit;
}

RobustFit fit_robust(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, double lambda,
                     double tol, int max_iter) {
    check_shapes(X, y);
    const int n = static_cast<int>(X.rows());
    const int d = static_cast<int>(X.cols());
    if (n <= d) throw SingularDesignError("robust fit requires n > d");
    if (lambda <= 0.0) throw ParameterError("lambda must be positive");
    if (max_iter < 1) throw ParameterError("max_iter must be positive");

    auto qr = full_rank_qr(X);
    const double sqrt_n = std::sqrt(static_cast<double>(n));

    RobustFit fit;
    fit.lambda = lambda;
    fit.e = Eigen::VectorXd::Zero(n);

    auto objective = [&](const Eigen::VectorXd& beta, const Eigen::VectorXd& e) {
        return (y - X * beta - sqrt_n * e).squaredNorm() / n + lambda * e.lpNorm<1>();
    };

    double prev = std::numeric_limits<double>::infinity();
    for (int it = 0; it < max_iter; ++it) {
        fit.beta = qr.solve(y - sqrt_n * fit.e);
        const Eigen::VectorXd r = y - X * fit.beta;
        for (int i = 0; i < n; ++i) fit.e[i] = soft_threshold(r[i] / sqrt_n, lambda / 2.0);

        const double obj = objective(fit.beta, fit.e);
        fit.objective_trace.push_back(obj);
        fit.iterations = it + 1;

        const double denom = std::max(std::abs(prev), 1e-300);
        if (std::isfinite(prev) && (prev - obj) / denom < tol) {
            fit.converged = true;
            break;
        }
        prev = obj;
    }
    return fit;
}

double kkt_residual(const RobustFit& fit, const Eigen::MatrixXd& X, const Eigen::VectorXd& y) {
    check_shapes(X, y);
    const int n = static_cast<int>(X.rows());
    if (fit.beta.size() != X.cols() || fit.e.size() != n)
        throw DimensionError("fit dimensions do not match (X, y)");
    const double sqrt_n = std::sqrt(static_cast<double>(n));

    const Eigen::VectorXd r = y - X * fit.beta - sqrt_n * fit.e;
    double worst = (2.0 / n) * (X.transpose() * r).lpNorm<Eigen::Infinity>();

    for (int i = 0; i < n; ++i) {
        const double g = 2.0 / sqrt_n * r[i];
        double violation;
        if (fit.e[i] > 0.0)
            violation = std::abs(g - fit.lambda);
        else if (fit.e[i] < 0.0)
            violation = std::abs(g + fit.lambda);
        else
            violation = std::max(std::abs(g) - fit.lambda, 0.0);
        worst = std::max(worst, violation);
    }
    return worst;
}

Eigen::VectorXd fit_lad(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, double smoothing) {
    check_shapes(X, y);
    const int n = static_cast<int>(X.rows());
    const int d = static_cast<int>(X.cols());
    if (n <= d) throw SingularDesignError("LAD requires n > d");
    if (smoothing <= 0.0) throw ParameterError("smoothing must be positive");

    Eigen::VectorXd beta = fit_ols(X, y).beta;
    for (int it = 0; it < 500; ++it) {
        const Eigen::VectorXd r = y - X * beta;
        Eigen::VectorXd w(n);
        for (int i = 0; i < n; ++i) w[i] = 1.0 / std::max(std::abs(r[i]), smoothing);

        const Eigen::MatrixXd Xw = w.asDiagonal() * X;
        Eigen::MatrixXd gram = X.transpose() * Xw;
        Eigen::LDLT<Eigen::MatrixXd> ldlt(gram);
        if (ldlt.info() != Eigen::Success)
            throw SingularDesignError("weighted system is singular in LAD iteration");
        const Eigen::VectorXd next = ldlt.solve(X.transpose() * (w.asDiagonal() * y));

        const double change = (next - beta).norm() / std::max(next.norm(), 1e-300);
        beta = next;
        if (change < 1e-10) break;
    }
    return beta;
}

std::int64_t sparse_permutation_count(int n, int k) {
    // derangement counts D(0..n)
    std::vector<double> der(static_cast<std::size_t>(n) + 1);
    der[0] = 1.0;
    if (n >= 1) der[1] = 0.0;
    for (int m = 2; m <= n; ++m) der[static_cast<std::size_t>(m)] = (m - 1) * (der[static_cast<std::size_t>(m - 1)] + der[static_cast<std::size_t>(m - 2)]);

    double total = 0.0;
    for (int m = 0; m <= k; ++m) {
        if (m == 1) continue;
        double binom = 1.0;
        for (int j = 0; j < m; ++j) binom = binom * (n - j) / (j + 1);
        total += binom * der[static_cast<std::size_t>(m)];
    }
    return static_cast<std::int64_t>(std::llround(total));
}

namespace {

// Enumerates all size-m subsets of [n] in lexicographic order.
class CombinationIter {
  public:
    CombinationIter(int n, int m) : n_(n), idx_(static_cast<std::size_t>(m)) {
        std::iota(idx_.begin(), idx_.end(), 0);
        done_ = m > n;
    }
    bool done() const { return done_; }
    const std::vector<int>& current() const { return idx_; }
    void advance() {
        const int m = static_cast<int>(idx_.size());
        if (m == 0) {
            done_ = true;
            return;
        }
        int i = m - 1;
        while (i >= 0 && idx_[static_cast<std::size_t>(i)] == n_ - m + i) --i;
        if (i < 0) {
            done_ = true;
            return;
        }
        ++idx_[static_cast<std::size_t>(i)];
        for (int j = i + 1; j < m; ++j) idx_[static_cast<std::size_t>(j)] = idx_[static_cast<std::size_t>(j - 1)] + 1;
    }

  private:
    int n_;
    std::vector<int> idx_;
    bool done_ = false;
};

bool is_derangement(const std::vector<int>& support, const std::vector<int>& image) {
    for (std::size_t i = 0; i < support.size(); ++i)
        if (support[i] == image[i]) return false;
    return true;
}

}  // namespace

ExactFit fit_exact_bruteforce(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, int k,
                              std::int64_t budget) {
    check_shapes(X, y);
    const int n = static_cast<int>(X.rows());
    if (n > 12) throw ParameterError("exhaustive search supports n <= 12, got n = " + std::to_string(n));
    if (k < 0 || k > n) throw RangeError("k = " + std::to_string(k) + " outside [0, " + std::to_string(n) + "]");
    if (X.rows() < X.cols()) throw SingularDesignError("fewer observations than coefficients");

    const std::int64_t count = sparse_permutation_count(n, k);
    if (count > budget)
        throw BudgetError("candidate count " + std::to_string(count) + " exceeds budget " +
                          std::to_string(budget));

    auto qr = full_rank_qr(X);
    // Thin Q of X; the profile objective is ||z||^2 - ||Q^T z||^2 for z = pi^{-1} y.
    const Eigen::MatrixXd Q =
        qr.householderQ() * Eigen::MatrixXd::Identity(n, static_cast<int>(X.cols()));
    const double y_sq = y.squaredNorm();

    double best_obj = std::numeric_limits<double>::infinity();
    std::vector<int> best_map;
    std::int64_t evaluated = 0;

    Eigen::VectorXd z(n);
    std::vector<int> map(static_cast<std::size_t>(n));

    auto consider = [&](const std::vector<int>& candidate_map) {
        // candidate_map holds phi for the model permutation pi; the profile
        // applies pi^{-1}: z[phi(i)] = y[i].
        for (int i = 0; i < n; ++i) z[candidate_map[static_cast<std::size_t>(i)]] = y[i];
        const double obj = y_sq - (Q.transpose() * z).squaredNorm();
        ++evaluated;
        if (obj < best_obj || (obj == best_obj && candidate_map < best_map)) {
            best_obj = obj;
            best_map = candidate_map;
        }
    };

    std::iota(map.begin(), map.end(), 0);
    consider(map);  // identity (m = 0)

    for (int m = 2; m <= k; ++m) {
        for (CombinationIter comb(n, m); !comb.done(); comb.advance()) {
            const std::vector<int>& support = comb.current();
            std::vector<int> image = support;
            std::sort(image.begin(), image.end());
            do {
                if (!is_derangement(support, image)) continue;
                std::iota(map.begin(), map.end(), 0);
                for (int i = 0; i < m; ++i) map[static_cast<std::size_t>(support[static_cast<std::size_t>(i)])] = image[static_cast<std::size_t>(i)];
                consider(map);
            } while (std::next_permutation(image.begin(), image.end()));
        }
    }

    ExactFit fit{SparsePermutation(best_map), Eigen::VectorXd(), std::max(best_obj, 0.0), evaluated};
    const Eigen::VectorXd z_best = fit.pi.inverse().apply(y);
    fit.beta = qr.solve(z_best);
    return fit;
}

std::pair<SparsePermutation, double> fit_exact_d1_sorting(const Eigen::VectorXd& x,
                                                          const Eigen::VectorXd& y) {
    const int n = static_cast<int>(x.size());
    if (n == 0) throw DimensionError("empty data");
    if (y.size() != n) throw DimensionError("x and y lengths differ");

    auto order_of = [n](const Eigen::VectorXd& v, bool ascending) {
        std::vector<int> idx(static_cast<std::size_t>(n));
        std::iota(idx.begin(), idx.end(), 0);
        std::stable_sort(idx.begin(), idx.end(), [&](int a, int b) {
            return ascending ? v[a] < v[b] : v[a] > v[b];
        });
        return idx;
    };

    const std::vector<int> x_asc = order_of(x, true);
    const std::vector<int> y_asc = order_of(y, true);
    const std::vector<int> y_desc = order_of(y, false);
    const double x_sq = x.squaredNorm();

    auto build = [&](const std::vector<int>& y_order) {
        std::vector<int> map(static_cast<std::size_t>(n));
        for (int r = 0; r < n; ++r) map[static_cast<std::size_t>(y_order[static_cast<std::size_t>(r)])] = x_asc[static_cast<std::size_t>(r)];
        SparsePermutation pi{std::move(map)};
        double inner = 0.0;
        for (int i = 0; i < n; ++i) inner += x[pi(i)] * y[i];
        const double beta = x_sq > 0.0 ? inner / x_sq : 0.0;
        const double rss = y.squaredNorm() - beta * inner;
        return std::tuple<SparsePermutation, double, double>(std::move(pi), beta, rss);
    };

    auto [pi_up, beta_up, rss_up] = build(y_asc);
    auto [pi_down, beta_down, rss_down] = build(y_desc);
    if (rss_up <= rss_down) return {std::move(pi_up), beta_up};
    return {std::move(pi_down), beta_down};
}

}  // namespace permreg
