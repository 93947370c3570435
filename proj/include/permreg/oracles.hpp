#pragma once

#include <Eigen/Dense>

namespace permreg::oracles {

/// Global optimum of the mismatch-constrained least-squares problem by fully
/// naive enumeration: every permutation of [n], filtered by Hamming radius,
/// coefficients from explicit normal equations. Independent of the library
/// solver; scans all n! permutations, so n <= 12 and anything past 9 is slow.
double exact_bruteforce_objective(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, int k);

struct RobustOracleResult {
    Eigen::VectorXd beta;
    Eigen::VectorXd e;
    double objective = 0.0;
    double kkt = 0.0;      // certificate of the polished point
    bool certified = false;  // kkt below the certification tolerance
};

/// Independent solver for the robust objective: accelerated proximal
/// gradient on (beta, e) to locate the active set, then a closed-form solve
/// of the stationarity system on that set, then a KKT certificate check.
/// No block minimization and no shared code with the library solver.
RobustOracleResult robust_fit_oracle(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                                     double lambda, int max_iter = 200000,
                                     double certify_tol = 1e-9);

/// Plain subgradient descent on the robust objective with a decaying step;
/// slow, used to triangulate the oracle itself on tiny instances. Returns
/// the best objective seen.
double robust_subgradient_objective(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                                    double lambda, int iters);

/// Best l1 objective over all basic solutions (coefficients interpolating d
/// observations); the LAD optimum for generic data.
double lad_basic_solution_objective(const Eigen::MatrixXd& X, const Eigen::VectorXd& y);

}  // namespace permreg::oracles
