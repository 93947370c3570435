#include "permreg/cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <cstdlib>
#include <iostream>
#include <numeric>
#include <thread>
#include <unordered_map>

#include "permreg/errors.hpp"
#include "permreg/harness.hpp"
#include "permreg/model.hpp"
#include "permreg/oracles.hpp"
#include "permreg/theory.hpp"

namespace permreg::cli {

double mad_sigma(const Eigen::VectorXd& v) {
    const int n = static_cast<int>(v.size());
    if (n == 0) throw DimensionError("mad_sigma of an empty vector");
    std::vector<double> work(v.data(), v.data() + n);
    auto median_of = [](std::vector<double>& w) {
        const std::size_t mid = w.size() / 2;
        std::nth_element(w.begin(), w.begin() + static_cast<std::ptrdiff_t>(mid), w.end());
        double m = w[mid];
        if (w.size() % 2 == 0) {
            const double lower = *std::max_element(w.begin(), w.begin() + static_cast<std::ptrdiff_t>(mid));
            m = 0.5 * (m + lower);
        }
        return m;
    };
    const double med = median_of(work);
    for (double& x : work) x = std::abs(x - med);
    return 1.4826 * median_of(work);
}

namespace {

Eigen::MatrixXd build_design(const TabularDataset& data, const std::string& response,
                             bool intercept, std::vector<std::string>* names) {
    const Eigen::MatrixXd predictors = data.numeric_matrix_excluding({response});
    const std::vector<std::string> pred_names = data.numeric_names_excluding({response});
    const int n = static_cast<int>(predictors.rows());
    const int p = static_cast<int>(predictors.cols());
    Eigen::MatrixXd X(n, p + (intercept ? 1 : 0));
    names->clear();
    int col = 0;
    if (intercept) {
        X.col(0).setOnes();
        names->push_back("intercept");
        col = 1;
    }
    for (int j = 0; j < p; ++j) {
        X.col(col + j) = predictors.col(j);
        names->push_back(pred_names[static_cast<std::size_t>(j)]);
    }
    return X;
}

LambdaRule make_rule(const FitOptions& opts, const Eigen::VectorXd& ols_residuals) {
    if (opts.rule == "huber") {
        const double scale = mad_sigma(ols_residuals);
        if (scale <= 0.0) throw ParameterError("robust residual scale is zero; pass an explicit rule");
        return HuberRule{scale};
    }
    if (opts.rule == "simulation") return SimulationRule{opts.sigma};
    if (opts.rule == "theorem") return TheoremRule{opts.M, opts.sigma};
    if (opts.rule == "fixed") return FixedLambda{opts.fixed_lambda};
    throw ParameterError("unknown lambda rule '" + opts.rule + "'");
}

}  // namespace

FitOutput fit_dataset(const TabularDataset& data, const FitOptions& opts) {
    if (opts.response.empty()) throw ParameterError("response column is required");
    const Eigen::VectorXd y = data.numeric_column(opts.response);
    FitOutput out;
    const Eigen::MatrixXd X = build_design(data, opts.response, opts.intercept, &out.coefficient_names);

    const OlsFit naive = fit_ols(X, y);
    out.naive_beta = naive.beta;

    const LambdaRule rule = make_rule(opts, naive.residuals);
    out.lambda = lambda_value(rule, static_cast<int>(X.rows()));
    const RobustFit robust = fit_robust(X, y, out.lambda);
    out.robust_beta = robust.beta;
    out.converged = robust.converged;

    int k = std::max(opts.k, 0);
    if (opts.auto_k) {
        const double threshold = 3.0 * mad_sigma(robust.e);
        k = 0;
        for (int i = 0; i < robust.e.size(); ++i)
            if (std::abs(robust.e[i]) > threshold) ++k;
    }
    out.support = estimate_support_topk(robust.e, k);
    out.refit_beta = refit_excluding(X, y, out.support).beta;
    if (opts.with_matching)
        out.matching = recover_permutation_on_support(X, y, out.support, out.refit_beta);
    return out;
}

Eigen::VectorXd relink_within_blocks(const Eigen::VectorXd& y,
                                     const std::vector<std::string>& block_labels,
                                     RngStream& rng) {
    const int n = static_cast<int>(y.size());
    if (static_cast<int>(block_labels.size()) != n)
        throw DimensionError("block labels and responses differ in length");

    // Group indices by label, blocks ordered by first appearance.
    std::unordered_map<std::string, int> position;
    std::vector<std::vector<int>> groups;
    for (int i = 0; i < n; ++i) {
        auto [it, inserted] = position.try_emplace(block_labels[static_cast<std::size_t>(i)],
                                                   static_cast<int>(groups.size()));
        if (inserted) groups.emplace_back();
        groups[static_cast<std::size_t>(it->second)].push_back(i);
    }

    Eigen::VectorXd out = y;
    for (const auto& group : groups) {
        const int m = static_cast<int>(group.size());
        for (int i = m - 1; i > 0; --i) {
            const int j = static_cast<int>(rng.uniform_below(static_cast<std::uint64_t>(i) + 1));
            std::swap(out[group[static_cast<std::size_t>(i)]], out[group[static_cast<std::size_t>(j)]]);
        }
    }
    return out;
}

namespace {

HoldoutStats holdout_stats(const std::vector<double>& values) {
    HoldoutStats s;
    const int n = static_cast<int>(values.size());
    if (n == 0) return s;
    for (double v : values) s.mean += v;
    s.mean /= n;
    if (n > 1) {
        double sq = 0.0;
        for (double v : values) sq += (v - s.mean) * (v - s.mean);
        s.std_error = std::sqrt(sq / (n - 1) / n);
    }
    return s;
}

}  // namespace

RelinkReport run_relink_demo(const TabularDataset& data, const RelinkOptions& opts) {
    if (data.block_column.empty())
        throw ParameterError("relink demo requires a block column (pass --block)");
    if (opts.response.empty()) throw ParameterError("response column is required");
    if (opts.holdouts < 0) throw ParameterError("holdouts must be nonnegative");

    const Eigen::VectorXd y = data.numeric_column(opts.response);
    RelinkReport report;
    const Eigen::MatrixXd X =
        build_design(data, opts.response, opts.intercept, &report.coefficient_names);
    const int n = static_cast<int>(X.rows());

    {
        std::unordered_map<std::string, int> sizes;
        for (const auto& label : data.block_labels) ++sizes[label];
        report.blocks = static_cast<int>(sizes.size());
        for (const auto& [label, count] : sizes)
            if (count > 1) ++report.multi_row_blocks;
        report.singleton_warning = report.multi_row_blocks == 0;
    }

    const OlsFit clean = fit_ols(X, y);
    report.clean_beta = clean.beta;
    report.rmse_clean = std::sqrt(clean.rss / n);

    RngStream rng(derive_seed(opts.seed, 0));
    const Eigen::VectorXd y_rel = relink_within_blocks(y, data.block_labels, rng);

    const OlsFit naive = fit_ols(X, y_rel);
    report.naive_beta = naive.beta;
    report.rmse_naive = std::sqrt(naive.rss / n);
    report.l2_naive = (naive.beta - clean.beta).norm();

    const double scale = mad_sigma(naive.residuals);
    if (scale <= 0.0) throw ParameterError("robust residual scale is zero");
    const RobustFit robust = fit_robust(X, y_rel, lambda_value(HuberRule{scale}, n));
    report.robust_beta = robust.beta;
    report.rmse_robust = std::sqrt((y_rel - X * robust.beta).squaredNorm() / n);
    report.l2_robust = (robust.beta - clean.beta).norm();

    // Hold-out protocol: on each split the 90% hold-in part is relinked the
    // same way, fits are computed there, and prediction error is measured on
    // the untouched 10%.
    std::vector<double> mspe_clean, mspe_naive, mspe_robust;
    for (int h = 0; h < opts.holdouts; ++h) {
        RngStream hrng(derive_seed(opts.seed, 1 + static_cast<std::uint64_t>(h)));
        std::vector<int> order(static_cast<std::size_t>(n));
        std::iota(order.begin(), order.end(), 0);
        for (int i = n - 1; i > 0; --i) {
            const int j = static_cast<int>(hrng.uniform_below(static_cast<std::uint64_t>(i) + 1));
            std::swap(order[static_cast<std::size_t>(i)], order[static_cast<std::size_t>(j)]);
        }
        const int held = std::max(1, n / 10);
        std::vector<int> hold(order.begin(), order.begin() + held);
        std::vector<int> keep(order.begin() + held, order.end());
        std::sort(hold.begin(), hold.end());
        std::sort(keep.begin(), keep.end());

        const int m = static_cast<int>(keep.size());
        Eigen::MatrixXd Xin(m, X.cols());
        Eigen::VectorXd yin(m);
        std::vector<std::string> labels_in(static_cast<std::size_t>(m));
        for (int r = 0; r < m; ++r) {
            Xin.row(r) = X.row(keep[static_cast<std::size_t>(r)]);
            yin[r] = y[keep[static_cast<std::size_t>(r)]];
            labels_in[static_cast<std::size_t>(r)] = data.block_labels[static_cast<std::size_t>(keep[static_cast<std::size_t>(r)])];
        }
        Eigen::MatrixXd Xout(held, X.cols());
        Eigen::VectorXd yout(held);
        for (int r = 0; r < held; ++r) {
            Xout.row(r) = X.row(hold[static_cast<std::size_t>(r)]);
            yout[r] = y[hold[static_cast<std::size_t>(r)]];
        }

        const Eigen::VectorXd yin_rel = relink_within_blocks(yin, labels_in, hrng);
        const OlsFit fit_clean = fit_ols(Xin, yin);
        const OlsFit fit_naive = fit_ols(Xin, yin_rel);
        const double s = mad_sigma(fit_naive.residuals);
        const RobustFit fit_rob =
            fit_robust(Xin, yin_rel, lambda_value(HuberRule{std::max(s, 1e-12)}, m));

        auto mspe = [&](const Eigen::VectorXd& beta) {
            return (yout - Xout * beta).squaredNorm() / held;
        };
        mspe_clean.push_back(mspe(fit_clean.beta));
        mspe_naive.push_back(mspe(fit_naive.beta));
        mspe_robust.push_back(mspe(fit_rob.beta));
    }
    report.holdout_clean = holdout_stats(mspe_clean);
    report.holdout_naive = holdout_stats(mspe_naive);
    report.holdout_robust = holdout_stats(mspe_robust);
    return report;
}

namespace {

int resolve_threads(int flag_value) {
    if (flag_value > 0) return flag_value;
    if (const char* env = std::getenv("PERMREG_THREADS")) {
        const int v = std::atoi(env);
        if (v > 0) return v;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

struct SimulateArgs {
    SimulationSpec spec;
    bool d1 = false;
    std::string out = "results.csv";
    std::string plot_out = "plot.tsv";
    int threads = 0;
    bool d_given = false;
};

int cmd_simulate(SimulateArgs& a) {
    if (a.d1 && !a.d_given) a.spec.d = 1;
    if (a.d1 && a.spec.d != 1) throw ParameterError("--d1 requires d = 1");
    for (double s : a.spec.sigmas)
        if (s <= 0.0) throw ParameterError("sigmas must be positive");
    for (double f : a.spec.k_fractions)
        if (f < 0.0 || f > 1.0) throw ParameterError("k fractions must lie in [0, 1]");

    const int threads = resolve_threads(a.threads);
    const auto summaries =
        a.d1 ? run_d1_comparison(a.spec, threads) : run_grid(a.spec, threads);
    for (const auto& cell : summaries)
        if (cell.skipped)
            std::cerr << "skipped cell sigma=" << cell.sigma << " k/n=" << cell.k_fraction << ": "
                      << cell.skip_reason << "\n";
    emit_results(summaries, a.out, a.plot_out);
    std::cout << "wrote " << a.out << " and " << a.plot_out << "\n";
    return 0;
}

struct FitArgs {
    std::string input;
    std::string block;
    FitOptions opts;
    std::string format = "text";
};

void print_fit(const FitOutput& out, const std::string& format) {
    if (format == "csv") {
        std::cout << "section,key,value\n";
        std::cout << "lambda,," << format_double(out.lambda) << "\n";
        std::cout << "converged,," << (out.converged ? 1 : 0) << "\n";
        for (std::size_t j = 0; j < out.coefficient_names.size(); ++j) {
            std::cout << "naive," << out.coefficient_names[j] << ','
                      << format_double(out.naive_beta[static_cast<Eigen::Index>(j)]) << "\n";
        }
        for (std::size_t j = 0; j < out.coefficient_names.size(); ++j) {
            std::cout << "robust," << out.coefficient_names[j] << ','
                      << format_double(out.robust_beta[static_cast<Eigen::Index>(j)]) << "\n";
        }
        for (std::size_t j = 0; j < out.coefficient_names.size(); ++j) {
            std::cout << "refit," << out.coefficient_names[j] << ','
                      << format_double(out.refit_beta[static_cast<Eigen::Index>(j)]) << "\n";
        }
        for (std::size_t r = 0; r < out.support.indices.size(); ++r)
            std::cout << "support," << r << ',' << out.support.indices[r] << "\n";
        if (out.matching) {
            for (int i : out.support.indices)
                std::cout << "matching," << i << ',' << (*out.matching)(i) << "\n";
        }
        return;
    }
    std::cout << "lambda = " << format_double(out.lambda)
              << (out.converged ? "" : "  (robust fit did NOT converge)") << "\n";
    std::cout << "coefficient        naive            robust           refit\n";
    for (std::size_t j = 0; j < out.coefficient_names.size(); ++j) {
        const auto idx = static_cast<Eigen::Index>(j);
        std::printf("%-18s %-16.8g %-16.8g %-16.8g\n", out.coefficient_names[j].c_str(),
                    out.naive_beta[idx], out.robust_beta[idx], out.refit_beta[idx]);
    }
    std::cout << "suspected mismatched rows (0-based):";
    if (out.support.indices.empty()) std::cout << " none";
    for (int i : out.support.indices) std::cout << ' ' << i;
    std::cout << "\n";
    if (out.matching) {
        std::cout << "matching on the support (row i takes the fitted value of row phi(i)):\n";
        for (int i : out.support.indices) std::cout << "  " << i << " <- " << (*out.matching)(i) << "\n";
    }
}

int cmd_fit(FitArgs& a, bool recover) {
    const TabularDataset data = load_csv(a.input, a.block);
    if (recover) {
        a.opts.with_matching = true;
        if (a.opts.k < 0 && !a.opts.auto_k)
            throw ParameterError("recover needs --k or --auto-k");
    }
    const FitOutput out = fit_dataset(data, a.opts);
    print_fit(out, a.format);
    return 0;
}

struct BoundsArgs {
    BoundInputs inp;
    std::string format = "text";
};

int cmd_bounds(const BoundsArgs& a) {
    const BoundReport rep = compute_bounds(a.inp);
    const std::vector<std::pair<std::string, double>> rows = {
        {"width_bound", rep.width_bound},
        {"nu_n", rep.nu_n},
        {"nu_n_minus_d", rep.nu_n_minus_d},
        {"thm1_condition_ok", rep.thm1_condition_ok ? 1.0 : 0.0},
        {"thm1_error_bound", rep.thm1_error_bound},
        {"thm2_condition_ok", rep.thm2_condition_ok ? 1.0 : 0.0},
        {"thm2_error_bound", rep.thm2_error_bound},
        {"corollary_snr_threshold", rep.corollary_snr_threshold},
        {"thm3a_snr_threshold", rep.thm3a_snr_threshold},
        {"thm3b_snr_scale", rep.thm3b_snr_scale},
        {"prop1_lower_bound", rep.prop1_lower_bound},
    };
    if (a.format == "csv") {
        std::cout << "quantity,value\n";
        for (const auto& [name, value] : rows) std::cout << name << ',' << format_double(value) << "\n";
    } else {
        for (const auto& [name, value] : rows)
            std::cout << name << " = " << format_double(value) << "\n";
    }
    return 0;
}

struct OracleCheckArgs {
    int n = 6;
    int d = 1;
    int k = 2;
    std::uint64_t seed = 0;
    int instances = 5;
};

int cmd_oracle_check(const OracleCheckArgs& a) {
    if (a.n > 12) throw ParameterError("oracle check supports n <= 12");
    if (a.n > 8)
        std::cerr << "note: naive enumeration at n = " << a.n << " scans all n! permutations\n";
    if (a.instances < 1) throw ParameterError("instances must be positive");

    const double sigma = 0.1;
    bool all_ok = true;
    for (int t = 0; t < a.instances; ++t) {
        const std::uint64_t seed_t = derive_seed(a.seed, static_cast<std::uint64_t>(t));
        const ObservationSet data = synthesize(a.n, a.d, a.k, sigma, seed_t);

        const ExactFit exact = fit_exact_bruteforce(data.X, data.y, a.k);
        const double naive_obj = oracles::exact_bruteforce_objective(data.X, data.y, a.k);
        const bool exact_ok = std::abs(exact.objective - naive_obj) <= 1e-9 * std::max(1.0, naive_obj);

        const double lambda = lambda_value(SimulationRule{sigma}, a.n);
        const RobustFit robust = fit_robust(data.X, data.y, lambda);
        const auto oracle = oracles::robust_fit_oracle(data.X, data.y, lambda);
        const double rob_gap = std::abs(robust.objective_trace.back() - oracle.objective);
        const bool robust_ok = rob_gap <= 1e-6 && kkt_residual(robust, data.X, data.y) <= 1e-6;

        std::cout << "instance seed=" << seed_t << " exact " << (exact_ok ? "ok" : "MISMATCH")
                  << " robust " << (robust_ok ? "ok" : "MISMATCH") << "\n";
        if (!exact_ok || !robust_ok) {
            std::cerr << "FAIL at instance seed=" << seed_t << "\n";
            all_ok = false;
        }
    }
    if (!all_ok) throw InfeasibleError("oracle comparison failed; seeds listed above");
    std::cout << "all oracle checks passed\n";
    return 0;
}

struct RelinkArgs {
    std::string input;
    RelinkOptions opts;
    std::string format = "text";
};

void print_relink(const RelinkReport& rep, const std::string& format) {
    if (format == "csv") {
        std::cout << "section,key,value\n";
        std::cout << "blocks,," << rep.blocks << "\n";
        std::cout << "multi_row_blocks,," << rep.multi_row_blocks << "\n";
        auto coef = [&](const char* name, const Eigen::VectorXd& beta) {
            for (std::size_t j = 0; j < rep.coefficient_names.size(); ++j)
                std::cout << name << ',' << rep.coefficient_names[j] << ','
                          << format_double(beta[static_cast<Eigen::Index>(j)]) << "\n";
        };
        coef("clean", rep.clean_beta);
        coef("naive", rep.naive_beta);
        coef("robust", rep.robust_beta);
        std::cout << "rmse,clean," << format_double(rep.rmse_clean) << "\n";
        std::cout << "rmse,naive," << format_double(rep.rmse_naive) << "\n";
        std::cout << "rmse,robust," << format_double(rep.rmse_robust) << "\n";
        std::cout << "l2_dist,naive," << format_double(rep.l2_naive) << "\n";
        std::cout << "l2_dist,robust," << format_double(rep.l2_robust) << "\n";
        std::cout << "holdout_mspe,clean," << format_double(rep.holdout_clean.mean) << "\n";
        std::cout << "holdout_mspe,naive," << format_double(rep.holdout_naive.mean) << "\n";
        std::cout << "holdout_mspe,robust," << format_double(rep.holdout_robust.mean) << "\n";
        return;
    }
    std::cout << rep.blocks << " blocks, " << rep.multi_row_blocks << " with more than one row\n";
    if (rep.singleton_warning)
        std::cout << "warning: every block is a single row; relinking cannot move anything\n";
    std::printf("%-8s %-12s %-18s %-24s\n", "fit", "rmse", "l2 dist to clean", "holdout mspe (stderr)");
    std::printf("%-8s %-12.6g %-18.6g %.6g (%.2g)\n", "clean", rep.rmse_clean, 0.0,
                rep.holdout_clean.mean, rep.holdout_clean.std_error);
    std::printf("%-8s %-12.6g %-18.6g %.6g (%.2g)\n", "naive", rep.rmse_naive, rep.l2_naive,
                rep.holdout_naive.mean, rep.holdout_naive.std_error);
    std::printf("%-8s %-12.6g %-18.6g %.6g (%.2g)\n", "robust", rep.rmse_robust, rep.l2_robust,
                rep.holdout_robust.mean, rep.holdout_robust.std_error);
}

int cmd_relink(const RelinkArgs& a) {
    const TabularDataset data = load_csv(a.input, a.opts.block);
    const RelinkReport rep = run_relink_demo(data, a.opts);
    print_relink(rep, a.format);
    return 0;
}

}  // namespace

int run(std::vector<std::string> args) {
    CLI::App app{"linear regression when some response-predictor pairs are mismatched"};
    app.require_subcommand(1);
    app.set_config("--config", "", "config file: key=value lines, one [section] per subcommand");
    app.allow_config_extras(false);  // unknown keys are rejected

    SimulateArgs sim;
    auto* simulate = app.add_subcommand("simulate", "Monte-Carlo estimator comparison on a (sigma, k/n) grid");
    simulate->add_option("--n", sim.spec.n, "observations per instance");
    auto* d_opt = simulate->add_option("--d", sim.spec.d, "number of predictors");
    simulate->add_option("--sigmas", sim.spec.sigmas, "noise grid")->delimiter(',');
    simulate->add_option("--k-fractions", sim.spec.k_fractions, "mismatch fraction grid")->delimiter(',');
    simulate->add_option("--reps", sim.spec.replications, "replications per cell");
    simulate->add_option("--seed", sim.spec.base_seed, "base seed");
    simulate->add_flag("--d1", sim.d1, "compare the exact d=1 estimators instead of the refit pipeline");
    simulate->add_option("--out", sim.out, "output CSV path");
    simulate->add_option("--plot-out", sim.plot_out, "plot data (TSV) path");
    simulate->add_option("--threads", sim.threads, "worker threads (default: PERMREG_THREADS or all cores)");

    FitArgs fit_args;
    auto add_fit_options = [&](CLI::App* cmd) {
        cmd->add_option("input", fit_args.input, "input CSV file")->required();
        cmd->add_option("--response", fit_args.opts.response, "response column name")->required();
        cmd->add_option("--block", fit_args.block, "text column to ignore as predictor");
        cmd->add_option("--k", fit_args.opts.k, "number of suspected mismatches");
        cmd->add_flag("--auto-k", fit_args.opts.auto_k,
                      "pick the support size by the 3-MAD threshold rule (extension)");
        cmd->add_option("--rule", fit_args.opts.rule, "lambda rule: huber|simulation|theorem|fixed");
        cmd->add_option("--sigma", fit_args.opts.sigma, "noise level for simulation/theorem rules");
        cmd->add_option("--M", fit_args.opts.M, "M constant of the theorem rule");
        cmd->add_option("--lambda", fit_args.opts.fixed_lambda, "penalty for --rule fixed");
        cmd->add_flag("!--no-intercept", fit_args.opts.intercept, "drop the intercept column");
        cmd->add_option("--format", fit_args.format, "text|csv");
    };
    auto* fit_cmd = app.add_subcommand("fit", "naive, robust, and refit coefficients for a CSV");
    add_fit_options(fit_cmd);
    fit_cmd->add_flag("--matching", fit_args.opts.with_matching, "also print the recovered matching");
    auto* recover_cmd = app.add_subcommand("recover", "fit and recover the row matching on the support");
    add_fit_options(recover_cmd);

    BoundsArgs bounds_args;
    auto* bounds_cmd = app.add_subcommand("bounds", "evaluate the theoretical bound calculators");
    bounds_cmd->add_option("--n", bounds_args.inp.n, "observations")->required();
    bounds_cmd->add_option("--d", bounds_args.inp.d, "predictors")->required();
    bounds_cmd->add_option("--k", bounds_args.inp.k, "mismatch budget")->required();
    bounds_cmd->add_option("--sigma", bounds_args.inp.sigma, "noise level");
    bounds_cmd->add_option("--eps", bounds_args.inp.eps, "slack in (0, 1/2)");
    bounds_cmd->add_option("--M", bounds_args.inp.M, "penalty-rule constant");
    bounds_cmd->add_option("--delta", bounds_args.inp.delta, "failure probability in (0, 1)");
    bounds_cmd->add_option("--Delta", bounds_args.inp.Delta, "fitted-value error level");
    bounds_cmd->add_option("--c1", bounds_args.inp.c1, "sparsity-condition constant");
    bounds_cmd->add_option("--thm2-eps", bounds_args.inp.thm2_eps, "relaxed-bound constant");
    bounds_cmd->add_option("--format", bounds_args.format, "text|csv");

    OracleCheckArgs oracle_args;
    auto* oracle_cmd = app.add_subcommand("oracle-check", "cross-check solvers against naive oracles");
    oracle_cmd->add_option("--n", oracle_args.n, "observations (<= 12)");
    oracle_cmd->add_option("--d", oracle_args.d, "predictors");
    oracle_cmd->add_option("--k", oracle_args.k, "mismatch budget");
    oracle_cmd->add_option("--seed", oracle_args.seed, "base seed");
    oracle_cmd->add_option("--instances", oracle_args.instances, "instances to check");

    RelinkArgs relink_args;
    auto* relink_cmd = app.add_subcommand("relink-demo", "scramble responses within blocks and compare fits");
    relink_cmd->add_option("input", relink_args.input, "input CSV file")->required();
    relink_cmd->add_option("--response", relink_args.opts.response, "response column")->required();
    relink_cmd->add_option("--block", relink_args.opts.block, "block (quasi-identifier) column")->required();
    relink_cmd->add_option("--seed", relink_args.opts.seed, "seed for the relinking draw");
    relink_cmd->add_option("--holdouts", relink_args.opts.holdouts, "number of 90/10 hold-out splits");
    relink_cmd->add_flag("!--no-intercept", relink_args.opts.intercept, "drop the intercept column");
    relink_cmd->add_option("--format", relink_args.format, "text|csv");

    // let `permreg <cmd> --config file` reach the top-level --config option
    for (auto* sub : app.get_subcommands(nullptr)) sub->fallthrough();

    std::reverse(args.begin(), args.end());
    try {
        app.parse(args);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        sim.d_given = d_opt->count() > 0;
        if (simulate->parsed()) return cmd_simulate(sim);
        if (fit_cmd->parsed()) return cmd_fit(fit_args, false);
        if (recover_cmd->parsed()) return cmd_fit(fit_args, true);
        if (bounds_cmd->parsed()) return cmd_bounds(bounds_args);
        if (oracle_cmd->parsed()) return cmd_oracle_check(oracle_args);
        if (relink_cmd->parsed()) return cmd_relink(relink_args);
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const ParameterError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const RangeError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const InfeasibleSparsityError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const DimensionError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const SingularDesignError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const InsufficientDataError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const BudgetError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const InfeasibleError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}

}  // namespace permreg::cli
