#include "permreg/theory.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "permreg/errors.hpp"

namespace permreg {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double dlog_max(int n, int d) {
    return std::max(static_cast<double>(d), std::log(static_cast<double>(n)));
}

// Shared first summand of both error bounds: the known-permutation rate.
double base_rate(int n, int d, double sigma) {
    const double dl = dlog_max(n, d);
    const double denom = 1.0 - std::sqrt(4.0 * dl / n);
    if (denom <= 0.0)
        throw InfeasibleError("error bound undefined: 4 max(d, log n) >= n (n=" + std::to_string(n) +
                              ", d=" + std::to_string(d) + ")");
    return sigma / denom * std::sqrt(5.0 * dl / n);
}

double denom_factor(int n, int d) {
    const double denom = 1.0 - std::sqrt(4.0 * dlog_max(n, d) / n);
    if (denom <= 0.0)
        throw InfeasibleError("error bound undefined: 4 max(d, log n) >= n");
    return denom;
}

void check_common(const BoundInputs& inp) {
    if (inp.n <= inp.d || inp.d < 1) throw InfeasibleError("need n > d >= 1");
    if (inp.k < 0 || inp.k > inp.n) throw RangeError("k outside [0, n]");
    if (inp.sigma < 0.0) throw ParameterError("sigma must be nonnegative");
}

}  // namespace

double gaussian_width_bound(int n, int k) {
    if (k == 0) return 0.0;  // no permutation freedom, empty difference set
    if (k < 0 || n < 1) throw ParameterError("need n >= 1 and k >= 0");
    if (2 * k > n) throw InfeasibleError("width bound requires 2k <= n, got k=" + std::to_string(k) +
                                         ", n=" + std::to_string(n));
    const double kk = static_cast<double>(k);
    return 3.5 * std::sqrt(2.0 * kk * std::log(M_E * n / (2.0 * kk)));
}

double nu(int m) {
    if (m < 1) throw ParameterError("nu requires m >= 1");
    const double half_m = 0.5 * m;
    return std::sqrt(2.0) * std::exp(std::lgamma(half_m + 0.5) - std::lgamma(half_m));
}

bool check_thm1_condition(const BoundInputs& inp) {
    check_common(inp);
    if (inp.eps <= 0.0 || inp.eps >= 0.5) throw ParameterError("eps must lie in (0, 1/2)");
    if (2 * inp.k > inp.n) return false;
    if (!(inp.n > std::max(9, 4 * inp.d))) return false;
    const double w = gaussian_width_bound(inp.n, inp.k);
    const double lhs = nu(inp.n - inp.d) - inp.eps / (1.0 - inp.eps) * nu(inp.n);
    const double rhs = 2.0 / (1.0 - inp.eps) * w;
    return lhs >= rhs;
}

double thm1_error_bound(const BoundInputs& inp) {
    if (!check_thm1_condition(inp))
        throw InfeasibleError("feasibility condition fails: nu_{n-d} - eps/(1-eps) nu_n < 2/(1-eps) w(T) or n <= max(9, 4d)");
    const double logn = std::log(static_cast<double>(inp.n));
    const double w = gaussian_width_bound(inp.n, inp.k);
    const double excess = 2.0 * (1.0 + std::sqrt(2.0)) / (inp.eps * inp.eps) *
                          std::max(w, logn) / std::sqrt(static_cast<double>(inp.n));
    return base_rate(inp.n, inp.d, inp.sigma) + inp.sigma / denom_factor(inp.n, inp.d) * excess;
}

double thm2_error_bound(const BoundInputs& inp) {
    check_common(inp);
    if (inp.M <= 0.0) throw ParameterError("M must be positive");
    if (inp.thm2_eps <= 0.0) throw ParameterError("thm2_eps must be positive");
    const double n = inp.n;
    const double k = inp.k;
    // k log(n/k) <= c1 (n - d), written multiplicatively to stay defined at k = 0.
    if (k > 0.0 && k * std::log(n / k) > inp.c1 * (n - inp.d))
        throw InfeasibleError("sparsity condition fails: k log(n/k) > c1 (n - d)");
    const double logn = std::log(n);
    const double excess = 48.0 * (1.0 + inp.M) * (n / (n - inp.d)) / inp.thm2_eps *
                          std::sqrt(2.0 * k * logn / n);
    return base_rate(inp.n, inp.d, inp.sigma) + inp.sigma / denom_factor(inp.n, inp.d) * excess;
}

double corollary_snr_threshold(const BoundInputs& inp) {
    check_common(inp);
    if (inp.eps <= 0.0 || inp.eps >= 0.5) throw ParameterError("eps must lie in (0, 1/2)");
    if (inp.delta <= 0.0 || inp.delta >= 1.0) throw ParameterError("delta must lie in (0, 1)");
    if (inp.k == 0) return 0.0;
    const double logn = std::log(static_cast<double>(inp.n));
    const double w_or_log = std::max(gaussian_width_bound(inp.n, inp.k), logn);
    const double c = 1.0 + std::sqrt(2.0);
    const double k = inp.k;
    return 2.0 * c * c / std::pow(inp.eps, 4) / (inp.delta * inp.delta) * k * k * w_or_log *
           w_or_log / inp.n;
}

double thm3a_snr_threshold(int n, double delta, double Delta) {
    if (n < 2) throw ParameterError("need n >= 2");
    if (delta <= 0.0 || delta >= 1.0) throw ParameterError("delta must lie in (0, 1)");
    if (Delta < 0.0) throw ParameterError("Delta must be nonnegative");
    const double nn = n;
    const double pairs = nn * (nn - 1.0);
    const double log_term = Delta + 2.0 * std::log(pairs / delta);
    return nn * nn * (nn - 1.0) * (nn - 1.0) / (4.0 * delta * delta * M_PI) * log_term * log_term;
}

double prop1_lower_bound(int n, int d, double sigma) {
    if (n < 1 || d < 1) throw ParameterError("need n >= 1 and d >= 1");
    if (sigma < 0.0) throw ParameterError("sigma must be nonnegative");
    const double nn = n;
    return nn / (2.0 * nn + d) * sigma * sigma / (32.0 * M_PI * M_PI);
}

BoundReport compute_bounds(const BoundInputs& inp) {
    check_common(inp);
    BoundReport rep;
    rep.nu_n = nu(inp.n);
    rep.nu_n_minus_d = nu(inp.n - inp.d);
    rep.width_bound = 2 * inp.k <= inp.n ? gaussian_width_bound(inp.n, inp.k) : kNaN;

    rep.thm1_condition_ok = 2 * inp.k <= inp.n && check_thm1_condition(inp);
    try {
        rep.thm1_error_bound = rep.thm1_condition_ok ? thm1_error_bound(inp) : kNaN;
    } catch (const InfeasibleError&) {
        rep.thm1_error_bound = kNaN;
    }

    try {
        rep.thm2_error_bound = thm2_error_bound(inp);
        rep.thm2_condition_ok = true;
    } catch (const InfeasibleError&) {
        rep.thm2_error_bound = kNaN;
        rep.thm2_condition_ok = false;
    }

    try {
        rep.corollary_snr_threshold =
            2 * inp.k <= inp.n ? corollary_snr_threshold(inp) : kNaN;
    } catch (const InfeasibleError&) {
        rep.corollary_snr_threshold = kNaN;
    }

    rep.thm3a_snr_threshold = thm3a_snr_threshold(inp.n, inp.delta, inp.Delta);
    rep.thm3b_snr_scale = static_cast<double>(inp.n) * inp.n;
    rep.prop1_lower_bound = prop1_lower_bound(inp.n, inp.d, inp.sigma);
    return rep;
}

}  // namespace permreg
