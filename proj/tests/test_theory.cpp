#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "permreg/errors.hpp"
#include "permreg/rng.hpp"
#include "permreg/theory.hpp"

using namespace permreg;

TEST_CASE("gaussian width bound") {
    CHECK(gaussian_width_bound(100, 2) ==
          doctest::Approx(3.5 * std::sqrt(4.0 * std::log(25.0 * M_E))).epsilon(1e-12));
    CHECK(gaussian_width_bound(100, 2) == doctest::Approx(14.378).epsilon(1e-3));
    CHECK(gaussian_width_bound(100, 50) == doctest::Approx(3.5 * std::sqrt(100.0)).epsilon(1e-12));
    CHECK(gaussian_width_bound(123, 0) == 0.0);
    CHECK_THROWS_AS(gaussian_width_bound(10, 6), InfeasibleError);

    for (int k = 1; k < 500; ++k)
        CHECK(gaussian_width_bound(1000, k + 1) > gaussian_width_bound(1000, k));
}

TEST_CASE("nu: exact values and the bracket") {
    CHECK(nu(1) == doctest::Approx(std::sqrt(2.0 / M_PI)).epsilon(1e-12));
    CHECK(nu(3) == doctest::Approx(2.0 * std::sqrt(2.0) / std::sqrt(M_PI)).epsilon(1e-12));
    CHECK(nu(3) == doctest::Approx(1.5958).epsilon(1e-4));
    CHECK_THROWS_AS(nu(0), ParameterError);

    for (int m = 1; m <= 10000; ++m) {
        const double v = nu(m);
        CHECK(v >= m / std::sqrt(m + 1.0));
        CHECK(v <= std::sqrt(static_cast<double>(m)));
    }
}

TEST_CASE("feasibility condition of the constrained bound") {
    // Small eps leaves room; large eps eats the whole budget.
    BoundInputs ok{10000, 10, 5, 1.0, 0.1, 1.0, 0.05, 0.0, 1.0, 0.1};
    CHECK(check_thm1_condition(ok));
    BoundInputs bad{20, 10, 9, 1.0, 0.45, 1.0, 0.05, 0.0, 1.0, 0.1};
    CHECK_FALSE(check_thm1_condition(bad));

    BoundInputs degenerate = ok;
    degenerate.d = degenerate.n;
    CHECK_THROWS_AS(check_thm1_condition(degenerate), InfeasibleError);
}

TEST_CASE("constrained-estimator error bound") {
    BoundInputs inp{10000, 10, 5, 1.0, 0.25, 1.0, 0.05, 0.0, 1.0, 0.1};
    inp.eps = 0.1;
    REQUIRE(check_thm1_condition(inp));

    // Hand recomputation with independent expressions.
    const double n = inp.n, logn = std::log(n);
    const double dl = std::max(static_cast<double>(inp.d), logn);
    const double w = 3.5 * std::sqrt(2.0 * inp.k * std::log(M_E * n / (2.0 * inp.k)));
    const double expected = inp.sigma / (1.0 - std::sqrt(4.0 * dl / n)) *
                            (std::sqrt(5.0 * dl / n) +
                             2.0 * (1.0 + std::sqrt(2.0)) / (inp.eps * inp.eps) *
                                 std::max(w, logn) / std::sqrt(n));
    CHECK(thm1_error_bound(inp) == doctest::Approx(expected).epsilon(1e-12));
    CHECK(std::isfinite(expected));
    CHECK(expected > 0.0);

    BoundInputs noiseless = inp;
    noiseless.sigma = 0.0;
    CHECK(thm1_error_bound(noiseless) == 0.0);

    BoundInputs infeasible = inp;
    infeasible.eps = 0.49;
    infeasible.k = 4999;
    CHECK_THROWS_AS(thm1_error_bound(infeasible), InfeasibleError);
}

TEST_CASE("relaxed-estimator error bound") {
    BoundInputs inp{10000, 10, 5, 1.0, 0.25, 1.0, 0.05, 0.0, 1.0, 0.1};
    const double n = inp.n, logn = std::log(n);
    const double dl = std::max(static_cast<double>(inp.d), logn);
    const double expected = inp.sigma / (1.0 - std::sqrt(4.0 * dl / n)) *
                            (std::sqrt(5.0 * dl / n) +
                             48.0 * 2.0 * (n / (n - 10.0)) / 0.1 * std::sqrt(2.0 * 5.0 * logn / n));
    CHECK(thm2_error_bound(inp) == doctest::Approx(expected).epsilon(1e-12));

    BoundInputs zero_k = inp;
    zero_k.k = 0;
    const double first_only = inp.sigma / (1.0 - std::sqrt(4.0 * dl / n)) * std::sqrt(5.0 * dl / n);
    CHECK(thm2_error_bound(zero_k) == doctest::Approx(first_only).epsilon(1e-12));

    BoundInputs noiseless = inp;
    noiseless.sigma = 0.0;
    CHECK(thm2_error_bound(noiseless) == 0.0);

    BoundInputs too_sparse = inp;
    too_sparse.n = 30;
    too_sparse.d = 20;
    too_sparse.k = 15;
    CHECK_THROWS_AS(thm2_error_bound(too_sparse), InfeasibleError);
}

TEST_CASE("both error bounds share the known-permutation first summand") {
    BoundInputs inp{5000, 8, 0, 0.7, 0.2, 1.0, 0.05, 0.0, 1.0, 0.1};
    const double n = inp.n, logn = std::log(n);
    const double dl = std::max(static_cast<double>(inp.d), logn);
    const double base = inp.sigma / (1.0 - std::sqrt(4.0 * dl / n)) * std::sqrt(5.0 * dl / n);
    // At k = 0 the relaxed bound collapses to the first summand; the
    // constrained bound keeps its log n excess term.
    CHECK(thm2_error_bound(inp) == doctest::Approx(base).epsilon(1e-12));
    const double excess = inp.sigma / (1.0 - std::sqrt(4.0 * dl / n)) * 2.0 *
                          (1.0 + std::sqrt(2.0)) / (inp.eps * inp.eps) * logn / std::sqrt(n);
    CHECK(thm1_error_bound(inp) == doctest::Approx(base + excess).epsilon(1e-12));
}

TEST_CASE("support-identification SNR threshold") {
    BoundInputs inp{10000, 10, 5, 1.0, 0.25, 1.0, 0.05, 0.0, 1.0, 0.1};
    const double logn = std::log(10000.0);
    const double w = 3.5 * std::sqrt(10.0 * std::log(M_E * 1000.0));
    const double c = 1.0 + std::sqrt(2.0);
    const double expected =
        2.0 * c * c / std::pow(0.25, 4) / (0.05 * 0.05) * 25.0 * std::pow(std::max(w, logn), 2) / 10000.0;
    CHECK(corollary_snr_threshold(inp) == doctest::Approx(expected).epsilon(1e-12));

    BoundInputs zero_k = inp;
    zero_k.k = 0;
    CHECK(corollary_snr_threshold(zero_k) == 0.0);

    // k^2 (width-term)^2 scaling.
    BoundInputs doubled = inp;
    doubled.k = 10;
    const double w2 = 3.5 * std::sqrt(20.0 * std::log(M_E * 500.0));
    const double ratio = corollary_snr_threshold(doubled) / corollary_snr_threshold(inp);
    CHECK(ratio == doctest::Approx(4.0 * (w2 * w2) / (w * w)).epsilon(1e-9));
}

TEST_CASE("matching-recovery SNR threshold") {
    const double expected = 25.0 * 16.0 / (4.0 * 0.01 * M_PI) * std::pow(2.0 * std::log(200.0), 2);
    CHECK(thm3a_snr_threshold(5, 0.1, 0.0) == doctest::Approx(expected).epsilon(1e-12));
    CHECK(thm3a_snr_threshold(5, 0.1, 0.0) == doctest::Approx(3.574e5).epsilon(1e-3));

    CHECK(thm3a_snr_threshold(5, 0.1, std::sqrt(5.0)) > thm3a_snr_threshold(5, 0.1, 0.0));

    // Near-n^4 growth, up to logarithmic drift.
    const double ratio = thm3a_snr_threshold(200, 0.05, 0.0) / thm3a_snr_threshold(100, 0.05, 0.0);
    CHECK(ratio > 16.0);
    CHECK(ratio < 16.0 * 1.5);
}

TEST_CASE("pure-noise lower bound") {
    CHECK(prop1_lower_bound(500, 1, 0.0) == 0.0);
    CHECK(prop1_lower_bound(500, 1, 1.0) == doctest::Approx(1.5816e-3).epsilon(1e-4));
    CHECK(prop1_lower_bound(500, 1, 1.0) ==
          doctest::Approx(500.0 / 1001.0 / (32.0 * M_PI * M_PI)).epsilon(1e-12));
    // Limit n -> infinity at fixed d.
    CHECK(prop1_lower_bound(100000000, 1, 1.0) ==
          doctest::Approx(1.0 / (64.0 * M_PI * M_PI)).epsilon(1e-6));
}

TEST_CASE("error bounds are homogeneous of degree 1 in sigma, thresholds of degree 0") {
    BoundInputs inp{20000, 5, 2, 0.3, 0.1, 1.5, 0.1, 0.0, 1.0, 0.1};
    BoundInputs scaled = inp;
    scaled.sigma = 3.0 * inp.sigma;
    CHECK(thm1_error_bound(scaled) == doctest::Approx(3.0 * thm1_error_bound(inp)).epsilon(1e-12));
    CHECK(thm2_error_bound(scaled) == doctest::Approx(3.0 * thm2_error_bound(inp)).epsilon(1e-12));
    CHECK(corollary_snr_threshold(scaled) == doctest::Approx(corollary_snr_threshold(inp)).epsilon(1e-12));
}

TEST_CASE("combined report marks infeasible entries as NaN") {
    BoundInputs inp{20, 4, 9, 1.0, 0.25, 1.0, 0.05, 0.0, 1.0, 0.1};
    const BoundReport rep = compute_bounds(inp);
    CHECK_FALSE(rep.thm1_condition_ok);
    CHECK(std::isnan(rep.thm1_error_bound));
    CHECK(std::isfinite(rep.width_bound));
    CHECK(rep.thm3b_snr_scale == 400.0);
    CHECK(std::isfinite(rep.prop1_lower_bound));
}
