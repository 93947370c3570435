#pragma once

namespace permreg {

/// Inputs to the bound calculators. eps and delta are the slack parameters of
/// the respective statements; M enters the penalty-level rule; Delta bounds
/// the fitted-value error in the matching-recovery threshold. c1 and thm2_eps
/// are the unnamed constants of the relaxed bound; the defaults make the
/// outputs order-of-magnitude diagnostics rather than certified constants.
struct BoundInputs {
    int n = 0;
    int d = 0;
    int k = 0;
    double sigma = 1.0;
    double eps = 0.25;
    double M = 1.0;
    double delta = 0.05;
    double Delta = 0.0;
    double c1 = 1.0;
    double thm2_eps = 0.1;
};

/// Every theoretical quantity evaluated at one set of inputs. Entries whose
/// precondition fails are NaN and the corresponding flag is false.
struct BoundReport {
    double width_bound = 0.0;
    double nu_n = 0.0;
    double nu_n_minus_d = 0.0;
    bool thm1_condition_ok = false;
    double thm1_error_bound = 0.0;
    bool thm2_condition_ok = false;
    double thm2_error_bound = 0.0;
    double corollary_snr_threshold = 0.0;
    double thm3a_snr_threshold = 0.0;
    double thm3b_snr_scale = 0.0;
    double prop1_lower_bound = 0.0;
};

/// Width bound for the set of k-sparse permutation differences:
/// 3.5 sqrt(2k log(e n / 2k)); defined as 0 at k = 0.
double gaussian_width_bound(int n, int k);

/// Expected norm of a standard m-dimensional Gaussian, exactly via log-gamma:
/// sqrt(2) Gamma((m+1)/2) / Gamma(m/2). Lies in [m / sqrt(m+1), sqrt(m)].
double nu(int m);

/// Feasibility of the constrained-estimator bound:
/// nu_{n-d} - eps/(1-eps) nu_n >= 2/(1-eps) w(T), plus n > max(9, 4d).
bool check_thm1_condition(const BoundInputs& inp);

/// Error bound for the mismatch-constrained least-squares estimator.
double thm1_error_bound(const BoundInputs& inp);

/// Error bound for the convex-relaxation estimator.
double thm2_error_bound(const BoundInputs& inp);

/// SNR above which the constrained estimator identifies the mismatched rows.
double corollary_snr_threshold(const BoundInputs& inp);

/// SNR above which rank matching with a Delta-accurate coefficient estimate
/// recovers the permutation with probability >= 1 - 2 delta - eta.
double thm3a_snr_threshold(int n, double delta, double Delta);

/// Lower bound on ||beta_hat||^2 for the unconstrained estimator in a pure
/// noise setting: n / (2n + d) * sigma^2 / (32 pi^2).
double prop1_lower_bound(int n, int d, double sigma);

/// Evaluates everything; structurally invalid inputs throw, failed bound
/// preconditions yield NaN fields.
BoundReport compute_bounds(const BoundInputs& inp);

}  // namespace permreg
