#include "permreg/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

#include "permreg/errors.hpp"

namespace permreg::oracles {

double exact_bruteforce_objective(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, int k) {
    const int n = static_cast<int>(X.rows());
    if (n > 12) throw ParameterError("naive enumeration is limited to n <= 12");
    const Eigen::MatrixXd gram_inv = (X.transpose() * X).inverse();

    std::vector<int> phi(static_cast<std::size_t>(n));
    std::iota(phi.begin(), phi.end(), 0);

    double best = std::numeric_limits<double>::infinity();
    do {
        int moved = 0;
        for (int i = 0; i < n; ++i)
            if (phi[static_cast<std::size_t>(i)] != i) ++moved;
        if (moved > k) continue;
        // z = pi^{-1} y for the model y ~ pi(X beta): z[phi(i)] = y[i].
        Eigen::VectorXd z(n);
        for (int i = 0; i < n; ++i) z[phi[static_cast<std::size_t>(i)]] = y[i];
        const Eigen::VectorXd beta = gram_inv * (X.transpose() * z);
        best = std::min(best, (z - X * beta).squaredNorm());
    } while (std::next_permutation(phi.begin(), phi.end()));
    return best;
}

namespace {

double robust_objective(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                        const Eigen::VectorXd& beta, const Eigen::VectorXd& e, double lambda) {
    const double n = static_cast<double>(X.rows());
    return (y - X * beta - std::sqrt(n) * e).squaredNorm() / n + lambda * e.lpNorm<1>();
}

double soft(double z, double tau) {
    const double mag = std::abs(z) - tau;
    return mag > 0.0 ? (z > 0.0 ? mag : -mag) : 0.0;
}

// KKT residual of a candidate point, computed from first principles.
double kkt_of(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, const Eigen::VectorXd& beta,
              const Eigen::VectorXd& e, double lambda) {
    const int n = static_cast<int>(X.rows());
    const double sqrt_n = std::sqrt(static_cast<double>(n));
    const Eigen::VectorXd r = y - X * beta - sqrt_n * e;
    double worst = (2.0 / n) * (X.transpose() * r).lpNorm<Eigen::Infinity>();
    for (int i = 0; i < n; ++i) {
        const double g = 2.0 / sqrt_n * r[i];
        if (e[i] > 0.0)
            worst = std::max(worst, std::abs(g - lambda));
        else if (e[i] < 0.0)
            worst = std::max(worst, std::abs(g + lambda));
        else
            worst = std::max(worst, std::max(std::abs(g) - lambda, 0.0));
    }
    return worst;
}

}  // namespace

RobustOracleResult robust_fit_oracle(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                                     double lambda, int max_iter, double certify_tol) {
    const int n = static_cast<int>(X.rows());
    const int d = static_cast<int>(X.cols());
    const double sqrt_n = std::sqrt(static_cast<double>(n));

    // Lipschitz constant of the smooth part: (2/n) * smax([X, sqrt(n) I])^2.
    Eigen::MatrixXd A(n, d + n);
    A.leftCols(d) = X;
    A.rightCols(n) = sqrt_n * Eigen::MatrixXd::Identity(n, n);
    const double smax = A.jacobiSvd().singularValues()[0];
    const double lip = 2.0 / n * smax * smax;
    const double step = 1.0 / lip;

    Eigen::VectorXd beta = Eigen::VectorXd::Zero(d), e = Eigen::VectorXd::Zero(n);
    Eigen::VectorXd beta_prev = beta, e_prev = e;
    double t_accel = 1.0;
    double prev_obj = std::numeric_limits<double>::infinity();

    for (int it = 0; it < max_iter; ++it) {
        // Momentum point.
        const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t_accel * t_accel));
        const double gamma = (t_accel - 1.0) / t_next;
        const Eigen::VectorXd beta_m = beta + gamma * (beta - beta_prev);
        const Eigen::VectorXd e_m = e + gamma * (e - e_prev);
        t_accel = t_next;

        const Eigen::VectorXd r = y - X * beta_m - sqrt_n * e_m;
        const Eigen::VectorXd g_beta = -2.0 / n * (X.transpose() * r);
        const Eigen::VectorXd g_e = -2.0 / sqrt_n * r;

        beta_prev = beta;
        e_prev = e;
        beta = beta_m - step * g_beta;
        const Eigen::VectorXd e_raw = e_m - step * g_e;
        e.resize(n);
        for (int i = 0; i < n; ++i) e[i] = soft(e_raw[i], step * lambda);

        if ((it + 1) % 50 == 0) {
            const double obj = robust_objective(X, y, beta, e, lambda);
            if (std::abs(prev_obj - obj) <= 1e-15 * std::max(1.0, std::abs(obj))) break;
            prev_obj = obj;
        }
    }

    // Polish: solve the stationarity system exactly on the detected sign
    // pattern, then certify. Grow the activity cutoff if certification fails.
    RobustOracleResult best;
    best.beta = beta;
    best.e = e;
    best.objective = robust_objective(X, y, beta, e, lambda);
    best.kkt = kkt_of(X, y, beta, e, lambda);

    for (double cutoff : {0.0, 1e-12, 1e-10, 1e-8, 1e-6}) {
        std::vector<int> active;
        for (int i = 0; i < n; ++i)
            if (std::abs(e[i]) > cutoff) active.push_back(i);
        if (static_cast<int>(active.size()) >= n - d) continue;

        // Stationarity given signs s on the active set A:
        //   e_A = r_A / sqrt(n) - (lambda/2) s,   r = y - X beta,
        //   X_{A^c}' (y - X beta)_{A^c} = -(sqrt(n) lambda / 2) X_A' s.
        std::vector<int> inactive;
        Eigen::VectorXd s(static_cast<Eigen::Index>(active.size()));
        for (int i = 0, a = 0; i < n; ++i) {
            if (a < static_cast<int>(active.size()) && active[static_cast<std::size_t>(a)] == i) {
                s[a] = e[i] > 0.0 ? 1.0 : -1.0;
                ++a;
            } else {
                inactive.push_back(i);
            }
        }
        Eigen::MatrixXd Xi(static_cast<Eigen::Index>(inactive.size()), d);
        Eigen::VectorXd yi(static_cast<Eigen::Index>(inactive.size()));
        for (std::size_t r2 = 0; r2 < inactive.size(); ++r2) {
            Xi.row(static_cast<Eigen::Index>(r2)) = X.row(inactive[r2]);
            yi[static_cast<Eigen::Index>(r2)] = y[inactive[r2]];
        }
        Eigen::MatrixXd Xa(static_cast<Eigen::Index>(active.size()), d);
        for (std::size_t r2 = 0; r2 < active.size(); ++r2) Xa.row(static_cast<Eigen::Index>(r2)) = X.row(active[r2]);

        const Eigen::MatrixXd gram = Xi.transpose() * Xi;
        Eigen::FullPivLU<Eigen::MatrixXd> lu(gram);
        if (!lu.isInvertible()) continue;
        const Eigen::VectorXd rhs =
            Xi.transpose() * yi + (sqrt_n * lambda / 2.0) * (Xa.transpose() * s);
        const Eigen::VectorXd beta_polish = lu.solve(rhs);

        Eigen::VectorXd e_polish = Eigen::VectorXd::Zero(n);
        const Eigen::VectorXd resid = y - X * beta_polish;
        for (std::size_t a = 0; a < active.size(); ++a) {
            const int i = active[a];
            e_polish[i] = resid[i] / sqrt_n - lambda / 2.0 * s[static_cast<Eigen::Index>(a)];
        }
        const double kkt = kkt_of(X, y, beta_polish, e_polish, lambda);
        if (kkt < best.kkt) {
            best.beta = beta_polish;
            best.e = e_polish;
            best.objective = robust_objective(X, y, beta_polish, e_polish, lambda);
            best.kkt = kkt;
        }
        if (best.kkt <= certify_tol) break;
    }
    best.certified = best.kkt <= certify_tol;
    return best;
}

double robust_subgradient_objective(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                                    double lambda, int iters) {
    const int n = static_cast<int>(X.rows());
    const int d = static_cast<int>(X.cols());
    const double sqrt_n = std::sqrt(static_cast<double>(n));

    Eigen::VectorXd beta = Eigen::VectorXd::Zero(d), e = Eigen::VectorXd::Zero(n);
    double best = robust_objective(X, y, beta, e, lambda);
    for (int it = 1; it <= iters; ++it) {
        const Eigen::VectorXd r = y - X * beta - sqrt_n * e;
        Eigen::VectorXd g_beta = -2.0 / n * (X.transpose() * r);
        Eigen::VectorXd g_e = -2.0 / sqrt_n * r;
        for (int i = 0; i < n; ++i) g_e[i] += lambda * (e[i] > 0.0 ? 1.0 : (e[i] < 0.0 ? -1.0 : 0.0));
        const double norm = std::sqrt(g_beta.squaredNorm() + g_e.squaredNorm());
        if (norm == 0.0) break;
        const double step = 0.5 / (std::sqrt(static_cast<double>(it)) * norm);
        beta -= step * g_beta;
        e -= step * g_e;
        best = std::min(best, robust_objective(X, y, beta, e, lambda));
    }
    return best;
}

double lad_basic_solution_objective(const Eigen::MatrixXd& X, const Eigen::VectorXd& y) {
    const int n = static_cast<int>(X.rows());
    const int d = static_cast<int>(X.cols());
    std::vector<int> pick(static_cast<std::size_t>(d));
    std::iota(pick.begin(), pick.end(), 0);

    double best = std::numeric_limits<double>::infinity();
    for (;;) {
        Eigen::MatrixXd Xs(d, d);
        Eigen::VectorXd ys(d);
        for (int r = 0; r < d; ++r) {
            Xs.row(r) = X.row(pick[static_cast<std::size_t>(r)]);
            ys[r] = y[pick[static_cast<std::size_t>(r)]];
        }
        Eigen::FullPivLU<Eigen::MatrixXd> lu(Xs);
        if (lu.isInvertible()) {
            const Eigen::VectorXd beta = lu.solve(ys);
            best = std::min(best, (y - X * beta).lpNorm<1>());
        }
        // next combination
        int i = d - 1;
        while (i >= 0 && pick[static_cast<std::size_t>(i)] == n - d + i) --i;
        if (i < 0) break;
        ++pick[static_cast<std::size_t>(i)];
        for (int j = i + 1; j < d; ++j) pick[static_cast<std::size_t>(j)] = pick[static_cast<std::size_t>(j - 1)] + 1;
    }
    return best;
}

}  // namespace permreg::oracles
