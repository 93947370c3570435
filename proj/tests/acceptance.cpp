// Acceptance suite: one check per release criterion, each printed as a
// single PASS/FAIL line with its runtime. Exit code is the failure count.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "permreg/cli.hpp"
#include "permreg/errors.hpp"
#include "permreg/harness.hpp"
#include "permreg/model.hpp"
#include "permreg/oracles.hpp"
#include "permreg/recovery.hpp"
#include "permreg/solvers.hpp"
#include "permreg/theory.hpp"

using namespace permreg;

namespace {

struct CheckContext {
    bool ok = true;
    std::string detail;

    void require(bool condition, const std::string& message) {
        if (!condition && ok) {
            ok = false;
            detail = message;
        }
    }
};

int hw_threads() {
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

std::string temp_path(const std::string& name) {
    return (std::filesystem::temp_directory_path() / name).string();
}

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

double mean_error_of(const GridCellSummary& cell, const std::string& name) {
    for (const auto& [ename, stats] : cell.estimators)
        if (ename == name) return stats.mean_error;
    throw std::runtime_error("missing estimator " + name);
}

// 1. Exhaustive solver equals fully naive enumeration on 50 small instances.
void criterion_exact_oracle(CheckContext& ctx) {
    const int ns[] = {4, 5, 6, 7};
    const int ds[] = {1, 2};
    const int ks[] = {0, 2, 3};
    const double sigmas[] = {0.05, 0.5};
    for (int i = 0; i < 50; ++i) {
        const int n = ns[i % 4];
        const int d = ds[(i / 4) % 2];
        const int k = ks[(i / 8) % 3];
        const double sigma = sigmas[i % 2];
        const ObservationSet data = synthesize(n, d, k, sigma, derive_seed(1234, static_cast<std::uint64_t>(i)));
        const ExactFit fit = fit_exact_bruteforce(data.X, data.y, k);
        const double naive = oracles::exact_bruteforce_objective(data.X, data.y, k);
        ctx.require(std::abs(fit.objective - naive) <= 1e-9 * std::max(1.0, std::abs(naive)),
                    "objective mismatch at instance " + std::to_string(i));
    }
}

// 2. Robust solver: convergence certificate and agreement with the
// independent first-order oracle.
void criterion_convex_certificate(CheckContext& ctx) {
    for (int i = 0; i < 100; ++i) {
        const double sigma = i % 2 == 0 ? 0.01 : 0.1;
        const ObservationSet data =
            synthesize(50, 5, 5, sigma, derive_seed(777, static_cast<std::uint64_t>(i)));
        const double lambda = lambda_value(SimulationRule{sigma}, 50);
        const RobustFit fit = fit_robust(data.X, data.y, lambda);
        ctx.require(fit.converged, "no convergence at instance " + std::to_string(i));
        const double kkt = kkt_residual(fit, data.X, data.y);
        ctx.require(kkt <= 1e-6,
                    "kkt residual " + std::to_string(kkt) + " at instance " + std::to_string(i));
        const auto oracle = oracles::robust_fit_oracle(data.X, data.y, lambda);
        ctx.require(oracle.certified, "oracle not certified at instance " + std::to_string(i));
        const double gap = std::abs(fit.objective_trace.back() - oracle.objective);
        ctx.require(gap <= 1e-6,
                    "objective gap " + std::to_string(gap) + " at instance " + std::to_string(i));
    }
}

// 3. Penalty above the collapse threshold reproduces least squares exactly.
void criterion_homotopy(CheckContext& ctx) {
    for (int i = 0; i < 100; ++i) {
        const ObservationSet data =
            synthesize(30, 3, 4, 0.2, derive_seed(4242, static_cast<std::uint64_t>(i)));
        const OlsFit ols = fit_ols(data.X, data.y);
        const double lambda =
            2.0 * ols.residuals.lpNorm<Eigen::Infinity>() / std::sqrt(30.0) * 1.0000001;
        const RobustFit fit = fit_robust(data.X, data.y, lambda);
        ctx.require(fit.e.lpNorm<Eigen::Infinity>() == 0.0, "e not exactly zero at " + std::to_string(i));
        ctx.require((fit.beta - ols.beta).lpNorm<Eigen::Infinity>() <= 1e-10,
                    "beta differs from least squares at " + std::to_string(i));
    }
}

// 4. Noiseless two-stage recovery at 20% mismatch.
void criterion_noiseless_two_stage(CheckContext& ctx) {
    int good = 0;
    for (int rep = 0; rep < 100; ++rep) {
        const ObservationSet data =
            synthesize(200, 10, 40, 0.0, derive_seed(9001, static_cast<std::uint64_t>(rep)));
        const TwoStageResult r = two_stage(data.X, data.y, 40, FixedLambda{1e-5});
        const bool support_ok = r.support.indices == data.truth->pi_star.support();
        const double rel = (r.refit_beta - data.truth->beta_star).norm() / data.truth->beta_star.norm();
        if (support_ok && rel <= 1e-6) ++good;
    }
    ctx.require(good >= 95, "only " + std::to_string(good) + "/100 replications recovered");
}

// 5. Grid ordering at high SNR: robust crushes naive at half mismatch, the
// refit does not lose to the plain robust fit at moderate mismatch.
void criterion_grid_ordering(CheckContext& ctx) {
    SimulationSpec spec;
    spec.n = 200;
    spec.d = 10;
    spec.sigmas = {0.01};
    spec.k_fractions = {0.1, 0.2, 0.5};
    spec.replications = 100;
    spec.base_seed = 31337;
    const auto summaries = run_grid(spec, hw_threads());
    for (const auto& cell : summaries) {
        ctx.require(!cell.skipped, "unexpected skipped cell");
        if (cell.k_fraction == 0.5) {
            const double naive = mean_error_of(cell, "naive");
            const double robust = mean_error_of(cell, "robust");
            ctx.require(robust < 0.1 * naive,
                        "robust/naive = " + std::to_string(robust / naive) + " at k/n = 0.5");
        } else {
            ctx.require(mean_error_of(cell, "refit") <= mean_error_of(cell, "robust"),
                        "refit worse than robust at k/n = " + std::to_string(cell.k_fraction));
        }
    }
}

// 6. d = 1: the exact estimator beats the relaxation on most replications.
// Sized at the top of the grid (k/n = 0.5) where the relaxation pays its
// full price; n = 12 keeps the exhaustive branch exact.
void criterion_d1_ordering(CheckContext& ctx) {
    const int n = 12, k = 6;
    const double sigma = 0.01;
    int exact_wins = 0;
    for (int rep = 0; rep < 100; ++rep) {
        const ObservationSet data =
            synthesize(n, 1, k, sigma, derive_seed(555, static_cast<std::uint64_t>(rep)));
        const double beta_star = data.truth->beta_star[0];
        const ExactFit exact = fit_exact_bruteforce(data.X, data.y, k);
        const RobustFit robust =
            fit_robust(data.X, data.y, lambda_value(SimulationRule{sigma}, n));
        if (std::abs(exact.beta[0] - beta_star) <= std::abs(robust.beta[0] - beta_star))
            ++exact_wins;
    }
    ctx.require(exact_wins >= 80, "exact estimator won only " + std::to_string(exact_wins) + "/100");
}

// 7. Pure-noise overfitting: the unconstrained estimator stays above the
// theoretical floor.
void criterion_prop1(CheckContext& ctx) {
    const Prop1Report rep = prop1_demo(500, 1.0, 100, 2024);
    ctx.require(std::abs(rep.bound - 1.5816e-3) <= 1e-7,
                "bound value " + std::to_string(rep.bound) + " off the pinned constant");
    ctx.require(rep.fraction_exceeding >= 0.95,
                "fraction above the floor = " + std::to_string(rep.fraction_exceeding));
}

// 8. Matching recovery across the SNR threshold.
void criterion_snr_curve(CheckContext& ctx) {
    const int n = 50, d = 5, reps = 200;
    const double high = 1.01 * thm3a_snr_threshold(n, 0.05, 0.0);
    const auto curve = snr_recovery_curve(n, d, {high, 1.0}, reps, 4096);
    ctx.require(curve[0].recovery_rate >= 0.9,
                "recovery rate " + std::to_string(curve[0].recovery_rate) + " above threshold");
    ctx.require(1.0 - curve[1].recovery_rate >= 0.2,
                "failure rate " + std::to_string(1.0 - curve[1].recovery_rate) + " at SNR = 1");
}

// 9. Closed-form calculators against a long-double recomputation.
void criterion_theory_oracle(CheckContext& ctx) {
    RngStream rng(20240101);
    auto close = [](double a, long double b) {
        return std::abs(a - static_cast<double>(b)) <= 1e-9 * std::max<long double>(1.0L, std::abs(b));
    };
    int evaluated_thm1 = 0, evaluated_thm2 = 0;
    for (int i = 0; i < 20; ++i) {
        BoundInputs inp;
        inp.n = 100 + static_cast<int>(rng.uniform_below(20000));
        inp.d = 1 + static_cast<int>(rng.uniform_below(static_cast<std::uint64_t>(inp.n / 8)));
        // Half the draws stay in the sparse, small-eps corner where the
        // constrained-bound condition can actually hold.
        if (i % 2 == 0) {
            inp.k = static_cast<int>(rng.uniform_below(static_cast<std::uint64_t>(std::max(2, inp.n / 512))));
            inp.d = 1 + static_cast<int>(rng.uniform_below(static_cast<std::uint64_t>(std::max(2, inp.n / 64))));
            inp.eps = 0.05 + 0.1 * rng.uniform01();
        } else {
            inp.k = static_cast<int>(rng.uniform_below(static_cast<std::uint64_t>(inp.n / 4)));
            inp.eps = 0.05 + 0.4 * rng.uniform01();
        }
        inp.sigma = 0.1 + 1.9 * rng.uniform01();
        inp.M = 0.5 + 2.0 * rng.uniform01();
        inp.delta = 0.01 + 0.9 * rng.uniform01();
        inp.Delta = 5.0 * rng.uniform01();

        const long double n = inp.n, d = inp.d, k = inp.k, sigma = inp.sigma;
        const long double logn = std::log(n);
        const long double dl = std::max(d, logn);
        const long double width =
            inp.k == 0 ? 0.0L : 3.5L * std::sqrt(2.0L * k * std::log(expl(1.0L) * n / (2.0L * k)));

        ctx.require(close(gaussian_width_bound(inp.n, inp.k), width), "width mismatch");

        const long double nu_n = std::sqrt(2.0L) * std::exp(std::lgamma((n + 1.0L) / 2.0L) - std::lgamma(n / 2.0L));
        ctx.require(close(nu(inp.n), nu_n), "nu mismatch");

        const long double denom = 1.0L - std::sqrt(4.0L * dl / n);
        const long double base = sigma / denom * std::sqrt(5.0L * dl / n);
        try {
            const double b1 = thm1_error_bound(inp);
            const long double excess = 2.0L * (1.0L + std::sqrt(2.0L)) / (static_cast<long double>(inp.eps) * inp.eps) *
                                       std::max(width, logn) / std::sqrt(n);
            ctx.require(close(b1, base + sigma / denom * excess), "thm1 bound mismatch");
            ++evaluated_thm1;
        } catch (const InfeasibleError&) {
        }
        try {
            const double b2 = thm2_error_bound(inp);
            const long double excess = 48.0L * (1.0L + static_cast<long double>(inp.M)) * (n / (n - d)) /
                                       static_cast<long double>(inp.thm2_eps) *
                                       std::sqrt(2.0L * k * logn / n);
            ctx.require(close(b2, base + sigma / denom * excess), "thm2 bound mismatch");
            ++evaluated_thm2;
        } catch (const InfeasibleError&) {
        }
        if (2 * inp.k <= inp.n) {
            const long double c = 1.0L + std::sqrt(2.0L);
            const long double eps = inp.eps, delta = inp.delta;
            const long double wl = std::max(width, logn);
            const long double corr = inp.k == 0 ? 0.0L
                                                : 2.0L * c * c / (eps * eps * eps * eps) / (delta * delta) *
                                                      k * k * wl * wl / n;
            ctx.require(close(corollary_snr_threshold(inp), corr), "corollary threshold mismatch");
        }
        const long double pairs = n * (n - 1.0L);
        const long double t3 = n * n * (n - 1.0L) * (n - 1.0L) / (4.0L * static_cast<long double>(inp.delta) * inp.delta * M_PIl) *
                               std::pow(static_cast<long double>(inp.Delta) + 2.0L * std::log(pairs / inp.delta), 2.0L);
        ctx.require(close(thm3a_snr_threshold(inp.n, inp.delta, inp.Delta), t3), "thm3a mismatch");

        const long double p1 = n / (2.0L * n + d) * sigma * sigma / (32.0L * M_PIl * M_PIl);
        ctx.require(close(prop1_lower_bound(inp.n, inp.d, inp.sigma), p1), "prop1 mismatch");
    }
    ctx.require(evaluated_thm1 > 0, "thm1 bound never feasible in the sample");
    ctx.require(evaluated_thm2 > 0, "thm2 bound never feasible in the sample");

    for (int m = 1; m <= 10000; ++m) {
        const double v = nu(m);
        ctx.require(v >= m / std::sqrt(m + 1.0) && v <= std::sqrt(static_cast<double>(m)),
                    "nu bracket violated at m = " + std::to_string(m));
    }
}

// 10. Byte-identical simulation output across runs and thread counts.
void criterion_determinism(CheckContext& ctx) {
    const std::string base = temp_path("permreg_acceptance_run");
    std::vector<std::string> files;
    for (int variant = 0; variant < 3; ++variant) {
        const std::string out = base + std::to_string(variant) + ".csv";
        const std::string plot = base + std::to_string(variant) + ".tsv";
        const int threads = variant == 2 ? 8 : 1;
        const int code = cli::run({"simulate", "--n", "100", "--d", "5", "--sigmas", "0.1,0.5",
                                   "--k-fractions", "0,0.1,0.3", "--reps", "6", "--seed", "42",
                                   "--threads", std::to_string(threads), "--out", out,
                                   "--plot-out", plot});
        ctx.require(code == 0, "simulate exited with " + std::to_string(code));
        files.push_back(out);
    }
    const std::string reference = slurp(files[0]);
    ctx.require(!reference.empty(), "empty output");
    ctx.require(slurp(files[1]) == reference, "two serial runs differ");
    ctx.require(slurp(files[2]) == reference, "parallel run differs from serial");
    for (int variant = 0; variant < 3; ++variant) {
        std::remove((base + std::to_string(variant) + ".csv").c_str());
        std::remove((base + std::to_string(variant) + ".tsv").c_str());
    }
}

struct Criterion {
    std::string name;
    std::function<void(CheckContext&)> body;
    double time_limit_s;
};

}  // namespace

int main() {
    std::cout.setf(std::ios::unitbuf);
    const std::vector<Criterion> criteria = {
        {"exact solver equals naive enumeration (50 instances)", criterion_exact_oracle, 10.0},
        {"robust solver certificate and oracle agreement (100 instances)", criterion_convex_certificate, 600.0},
        {"homotopy: large lambda reproduces least squares (100 instances)", criterion_homotopy, 600.0},
        {"noiseless two-stage recovery (100 replications)", criterion_noiseless_two_stage, 60.0},
        {"grid error ordering at sigma = 0.01 (100 replications)", criterion_grid_ordering, 600.0},
        {"d=1 exact-vs-relaxed ordering (100 replications)", criterion_d1_ordering, 300.0},
        {"pure-noise floor (100 replications)", criterion_prop1, 600.0},
        {"matching recovery across the SNR threshold (200 replications)", criterion_snr_curve, 120.0},
        {"theory calculators vs high-precision recomputation", criterion_theory_oracle, 600.0},
        {"byte-identical simulation output, serial vs parallel", criterion_determinism, 600.0},
    };

    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        CheckContext ctx;
        const auto start = std::chrono::steady_clock::now();
        try {
            criteria[i].body(ctx);
        } catch (const std::exception& e) {
            ctx.ok = false;
            ctx.detail = std::string("exception: ") + e.what();
        }
        const double seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (seconds > criteria[i].time_limit_s) {
            ctx.ok = false;
            ctx.detail = "time limit exceeded (" + std::to_string(seconds) + " s)";
        }
        std::printf("[%s] criterion %zu: %s (%.2f s)%s%s\n", ctx.ok ? "PASS" : "FAIL", i + 1,
                    criteria[i].name.c_str(), seconds, ctx.ok ? "" : " -- ",
                    ctx.ok ? "" : ctx.detail.c_str());
        if (!ctx.ok) ++failures;
    }
    return failures;
}
