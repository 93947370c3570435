#include "permreg/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <fstream>
#include <functional>
#include <mutex>
#include <thread>

#include "permreg/csv.hpp"
#include "permreg/errors.hpp"
#include "permreg/theory.hpp"

namespace permreg {

namespace {

// Runs fn(i) for i in [0, count) on the requested number of threads; results
// must be written to preallocated slots so the merge is order-independent.
void parallel_for(int count, int threads, const std::function<void(int)>& fn) {
    threads = std::max(1, std::min(threads, count));
    if (threads == 1) {
        for (int i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<int> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto worker = [&] {
        for (;;) {
            const int i = next.fetch_add(1);
            if (i >= count) return;
            try {
                fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!error) error = std::current_exception();
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(threads));
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
    if (error) std::rethrow_exception(error);
}

struct Cell {
    double sigma;
    double k_fraction;
    int k;
    bool feasible;
    std::string reason;
};

std::vector<Cell> build_cells(const SimulationSpec& spec, bool constrain_exact) {
    std::vector<Cell> cells;
    for (double sigma : spec.sigmas) {
        for (double kf : spec.k_fractions) {
            Cell c{sigma, kf, 0, true, ""};
            c.k = k_from_fraction(kf, spec.n);
            if (spec.n - c.k <= spec.d) {
                c.feasible = false;
                c.reason = "n - k <= d";
            }
            if (sigma <= 0.0) {
                c.feasible = false;
                c.reason = "sigma must be positive";
            }
            (void)constrain_exact;
            cells.push_back(c);
        }
    }
    return cells;
}

EstimatorStats aggregate(const std::vector<double>& errors) {
    EstimatorStats s;
    const int n = static_cast<int>(errors.size());
    if (n == 0) return s;
    double sum = 0.0, log_sum = 0.0;
    for (double e : errors) {
        sum += e;
        log_sum += std::log2(std::max(e, 1e-300));
    }
    s.mean_error = sum / n;
    s.mean_log2_error = log_sum / n;
    if (n > 1) {
        double sq = 0.0;
        for (double e : errors) {
            const double dlt = std::log2(std::max(e, 1e-300)) - s.mean_log2_error;
            sq += dlt * dlt;
        }
        s.std_error = std::sqrt(sq / (n - 1) / n);
    }
    return s;
}

GridCellSummary summarize(const Cell& cell, int reps,
                          const std::vector<std::string>& names,
                          const std::vector<std::vector<double>>& errors_by_estimator) {
    GridCellSummary summary;
    summary.sigma = cell.sigma;
    summary.k_fraction = cell.k_fraction;
    summary.replications = reps;
    for (std::size_t e = 0; e < names.size(); ++e)
        summary.estimators.emplace_back(names[e], aggregate(errors_by_estimator[e]));
    return summary;
}

GridCellSummary skipped_cell(const Cell& cell) {
    GridCellSummary summary;
    summary.sigma = cell.sigma;
    summary.k_fraction = cell.k_fraction;
    summary.skipped = true;
    summary.skip_reason = cell.reason;
    return summary;
}

double support_overlap(const SupportEstimate& est, const std::vector<int>& truth,
                       bool precision) {
    int hits = 0;
    for (int i : est.indices)
        if (std::binary_search(truth.begin(), truth.end(), i)) ++hits;
    const int denom = precision ? est.size() : static_cast<int>(truth.size());
    return denom == 0 ? 1.0 : static_cast<double>(hits) / denom;
}

}  // namespace

std::pair<bool, int> evaluate_permutation(const SparsePermutation& pi_est,
                                          const GroundTruth& truth) {
    const int dist = hamming_distance(pi_est, truth.pi_star);
    return {dist == 0, dist};
}

std::vector<GridCellSummary> run_grid(const SimulationSpec& spec, int threads) {
    if (spec.n < 2 || spec.d < 1 || spec.replications < 1)
        throw ParameterError("invalid simulation spec");
    const std::vector<Cell> cells = build_cells(spec, false);
    const std::vector<std::string> names = {"naive", "robust", "refit", "oracle"};
    const int reps = spec.replications;

    std::vector<GridCellSummary> out(cells.size());
    for (std::size_t ci = 0; ci < cells.size(); ++ci) {
        const Cell& cell = cells[ci];
        if (!cell.feasible) {
            out[ci] = skipped_cell(cell);
            continue;
        }
        std::vector<TrialMetrics> metrics(static_cast<std::size_t>(reps));
        parallel_for(reps, threads, [&](int rep) {
            const auto start = std::chrono::steady_clock::now();
            const std::uint64_t trial_seed =
                derive_seed(spec.base_seed ^ static_cast<std::uint64_t>(rep), ci);
            const ObservationSet data = synthesize(spec.n, spec.d, cell.k, cell.sigma, trial_seed);
            const GroundTruth& truth = *data.truth;

            TrialMetrics& m = metrics[static_cast<std::size_t>(rep)];
            const OlsFit naive = fit_ols(data.X, data.y);
            m.l2_error_naive = (naive.beta - truth.beta_star).norm();

            const LambdaRule rule = SimulationRule{cell.sigma};
            const RobustFit robust = fit_robust(data.X, data.y, lambda_value(rule, spec.n));
            m.l2_error_robust = (robust.beta - truth.beta_star).norm();

            const SupportEstimate support = estimate_support_topk(robust.e, cell.k);
            const OlsFit refit = refit_excluding(data.X, data.y, support);
            m.l2_error_refit = (refit.beta - truth.beta_star).norm();

            const OlsFit oracle = fit_ols(data.X, truth.pi_star.inverse().apply(data.y));
            m.l2_error_oracle = (oracle.beta - truth.beta_star).norm();

            const std::vector<int> true_support = truth.pi_star.support();
            m.support_precision = support_overlap(support, true_support, true);
            m.support_recall = support_overlap(support, true_support, false);

            const SparsePermutation pi_tilde =
                recover_permutation_on_support(data.X, data.y, support, refit.beta);
            std::tie(m.permutation_exact, m.permutation_hamming_error) =
                evaluate_permutation(pi_tilde, truth);
            m.wall_time_ms =
                std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
                    .count();
        });

        std::vector<std::vector<double>> errors(names.size(), std::vector<double>(static_cast<std::size_t>(reps)));
        for (int rep = 0; rep < reps; ++rep) {
            const TrialMetrics& m = metrics[static_cast<std::size_t>(rep)];
            errors[0][static_cast<std::size_t>(rep)] = m.l2_error_naive;
            errors[1][static_cast<std::size_t>(rep)] = m.l2_error_robust;
            errors[2][static_cast<std::size_t>(rep)] = m.l2_error_refit;
            errors[3][static_cast<std::size_t>(rep)] = m.l2_error_oracle;
        }
        out[ci] = summarize(cell, reps, names, errors);
    }
    return out;
}

std::vector<GridCellSummary> run_d1_comparison(const SimulationSpec& spec, int threads) {
    if (spec.d != 1) throw ParameterError("d = 1 comparison requires a single-predictor setup");
    if (spec.n < 2 || spec.replications < 1) throw ParameterError("invalid simulation spec");
    const bool with_bruteforce = spec.n <= 12;
    std::vector<std::string> names = {"naive", "robust", "exact_sorting"};
    if (with_bruteforce) names.push_back("exact_bruteforce");
    names.push_back("oracle");

    const std::vector<Cell> cells = build_cells(spec, true);
    const int reps = spec.replications;

    std::vector<GridCellSummary> out(cells.size());
    for (std::size_t ci = 0; ci < cells.size(); ++ci) {
        const Cell& cell = cells[ci];
        if (!cell.feasible) {
            out[ci] = skipped_cell(cell);
            continue;
        }
        std::vector<std::vector<double>> errors(names.size(), std::vector<double>(static_cast<std::size_t>(reps)));
        parallel_for(reps, threads, [&](int rep) {
            const std::uint64_t trial_seed =
                derive_seed(spec.base_seed ^ static_cast<std::uint64_t>(rep), ci);
            const ObservationSet data = synthesize(spec.n, 1, cell.k, cell.sigma, trial_seed);
            const GroundTruth& truth = *data.truth;
            const double beta_star = truth.beta_star[0];
            std::size_t e = 0;

            const OlsFit naive = fit_ols(data.X, data.y);
            errors[e++][static_cast<std::size_t>(rep)] = std::abs(naive.beta[0] - beta_star);

            const RobustFit robust =
                fit_robust(data.X, data.y, lambda_value(SimulationRule{cell.sigma}, spec.n));
            errors[e++][static_cast<std::size_t>(rep)] = std::abs(robust.beta[0] - beta_star);

            const auto [pi_sorted, beta_sorted] = fit_exact_d1_sorting(data.X.col(0), data.y);
            errors[e++][static_cast<std::size_t>(rep)] = std::abs(beta_sorted - beta_star);

            if (with_bruteforce) {
                const ExactFit exact = fit_exact_bruteforce(data.X, data.y, cell.k);
                errors[e++][static_cast<std::size_t>(rep)] = std::abs(exact.beta[0] - beta_star);
            }

            const OlsFit oracle = fit_ols(data.X, truth.pi_star.inverse().apply(data.y));
            errors[e++][static_cast<std::size_t>(rep)] = std::abs(oracle.beta[0] - beta_star);
        });
        out[ci] = summarize(cell, reps, names, errors);
    }
    return out;
}

Prop1Report prop1_demo(int n, double sigma, int reps, std::uint64_t seed) {
    if (n < 1 || reps < 1) throw ParameterError("need n >= 1 and reps >= 1");
    if (sigma < 0.0) throw ParameterError("sigma must be nonnegative");

    Prop1Report report;
    report.n = n;
    report.sigma = sigma;
    report.reps = reps;
    report.bound = prop1_lower_bound(n, 1, sigma);

    double sum = 0.0;
    int exceed = 0;
    for (int rep = 0; rep < reps; ++rep) {
        RngStream rng(derive_seed(seed, static_cast<std::uint64_t>(rep)));
        Eigen::VectorXd x(n), y(n);
        for (int i = 0; i < n; ++i) x[i] = rng.normal();
        for (int i = 0; i < n; ++i) y[i] = sigma * rng.normal();
        const auto [pi, beta] = fit_exact_d1_sorting(x, y);
        const double beta_sq = beta * beta;
        sum += beta_sq;
        if (beta_sq >= report.bound) ++exceed;
    }
    report.mean_beta_sq = sum / reps;
    report.fraction_exceeding = static_cast<double>(exceed) / reps;
    return report;
}

std::vector<SnrCurvePoint> snr_recovery_curve(int n, int d, const std::vector<double>& snr_values,
                                              int reps, std::uint64_t seed) {
    if (n < 2 || d < 1 || reps < 1) throw ParameterError("invalid recovery-curve grid");
    std::vector<SnrCurvePoint> curve;
    for (std::size_t si = 0; si < snr_values.size(); ++si) {
        const double target = snr_values[si];
        if (target <= 0.0) throw ParameterError("SNR values must be positive");
        int hits = 0;
        for (int rep = 0; rep < reps; ++rep) {
            RngStream rng(derive_seed(seed ^ static_cast<std::uint64_t>(rep), si));
            Eigen::MatrixXd X(n, d);
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < d; ++j) X(i, j) = rng.normal();
            const Eigen::VectorXd beta_star = std::sqrt(target) * sample_unit_sphere(d, rng);
            const SparsePermutation pi_star = sample_sparse_permutation(n, n, rng);
            Eigen::VectorXd y = pi_star.apply(X * beta_star);
            for (int i = 0; i < n; ++i) y[i] += rng.normal();  // sigma = 1
            if (recover_permutation_sorted(X, y, beta_star) == pi_star) ++hits;
        }
        curve.push_back({target, static_cast<double>(hits) / reps, reps});
    }
    return curve;
}

void emit_results(const std::vector<GridCellSummary>& summaries, const std::string& csv_path,
                  const std::string& plot_path) {
    std::ofstream out(csv_path);
    if (!out) throw IoError("cannot open '" + csv_path + "' for writing");
    out << "sigma,k_fraction,estimator,mean_log2_l2_error,std_error,reps,mean_l2_error\n";
    for (const auto& cell : summaries) {
        if (cell.skipped) continue;
        for (const auto& [name, stats] : cell.estimators) {
            out << format_double(cell.sigma) << ',' << format_double(cell.k_fraction) << ','
                << name << ',' << format_double(stats.mean_log2_error) << ','
                << format_double(stats.std_error) << ',' << cell.replications << ','
                << format_double(stats.mean_error) << '\n';
        }
    }
    if (!out) throw IoError("write to '" + csv_path + "' failed");
    if (plot_path.empty()) return;

    // Plot layout: one block per estimator, rows indexed by k/n, one column
    // of mean log2 errors per sigma.
    std::vector<std::string> estimators;
    std::vector<double> sigmas, fractions;
    for (const auto& cell : summaries) {
        if (cell.skipped) continue;
        for (const auto& [name, stats] : cell.estimators)
            if (std::find(estimators.begin(), estimators.end(), name) == estimators.end())
                estimators.push_back(name);
        if (std::find(sigmas.begin(), sigmas.end(), cell.sigma) == sigmas.end())
            sigmas.push_back(cell.sigma);
        if (std::find(fractions.begin(), fractions.end(), cell.k_fraction) == fractions.end())
            fractions.push_back(cell.k_fraction);
    }
    std::sort(sigmas.begin(), sigmas.end());
    std::sort(fractions.begin(), fractions.end());

    auto find_cell = [&](double sigma, double kf) -> const GridCellSummary* {
        for (const auto& cell : summaries)
            if (!cell.skipped && cell.sigma == sigma && cell.k_fraction == kf) return &cell;
        return nullptr;
    };

    std::ofstream plot(plot_path);
    if (!plot) throw IoError("cannot open '" + plot_path + "' for writing");
    for (const auto& name : estimators) {
        plot << "# estimator: " << name << '\n';
        plot << "k_fraction";
        for (double s : sigmas) plot << "\tsigma=" << format_double(s);
        plot << '\n';
        for (double kf : fractions) {
            plot << format_double(kf);
            for (double s : sigmas) {
                plot << '\t';
                const GridCellSummary* cell = find_cell(s, kf);
                if (!cell) {
                    plot << "nan";
                    continue;
                }
                bool found = false;
                for (const auto& [ename, stats] : cell->estimators) {
                    if (ename == name) {
                        plot << format_double(stats.mean_log2_error);
                        found = true;
                        break;
                    }
                }
                if (!found) plot << "nan";
            }
            plot << '\n';
        }
        plot << '\n';
    }
    if (!plot) throw IoError("write to '" + plot_path + "' failed");
}

std::vector<GridCellSummary> parse_results(const std::string& csv_path) {
    const TabularDataset table = load_csv(csv_path, "estimator");
    std::vector<GridCellSummary> summaries;
    const Eigen::VectorXd sigma = table.numeric_column("sigma");
    const Eigen::VectorXd kf = table.numeric_column("k_fraction");
    const Eigen::VectorXd mean_log2 = table.numeric_column("mean_log2_l2_error");
    const Eigen::VectorXd std_err = table.numeric_column("std_error");
    const Eigen::VectorXd reps = table.numeric_column("reps");
    const Eigen::VectorXd mean_raw = table.numeric_column("mean_l2_error");

    for (int r = 0; r < table.n_rows(); ++r) {
        if (summaries.empty() || summaries.back().sigma != sigma[r] ||
            summaries.back().k_fraction != kf[r]) {
            GridCellSummary cell;
            cell.sigma = sigma[r];
            cell.k_fraction = kf[r];
            cell.replications = static_cast<int>(reps[r]);
            summaries.push_back(cell);
        }
        EstimatorStats stats;
        stats.mean_log2_error = mean_log2[r];
        stats.std_error = std_err[r];
        stats.mean_error = mean_raw[r];
        summaries.back().estimators.emplace_back(table.block_labels[static_cast<std::size_t>(r)], stats);
    }
    return summaries;
}

}  // namespace permreg
