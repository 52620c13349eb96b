#ifndef NETDETECT_FEASIBILITY_HPP
#define NETDETECT_FEASIBILITY_HPP

#include <Eigen/Core>

#include "netdetect/engine.hpp"
#include "netdetect/gaussian.hpp"

namespace netdetect {

struct FeasibilityReport {
    double bhattacharyya = 1.0;  // B in (0, 1]
    double kappa = 0.0;          // -ln B
    double lower_bound = 0.0;    // probability the band is exited before t = n, clamped to [0,1]
};

/// Probabilistic feasibility certificate:
/// lower_bound = max(0, 1 - B * (prior0 / sqrt(beta) + prior1 / sqrt(alpha))).
FeasibilityReport feasibility_lower_bound(const HypothesisPair& pair,
                                          const DetectionConfig& config);

/// Certified upper bound (1+xi)^(-n/8) on the Bhattacharyya coefficient of a
/// unit-diagonal Gaussian against independence. Requires at least half of
/// sigma's eigenvalues to lie outside
/// [(sqrt(1+xi)-sqrt(xi))^2, (sqrt(1+xi)+sqrt(xi))^2]; verified, not assumed.
double gaussian_eigen_bound(const Eigen::MatrixXd& sigma, double xi);

/// Largest xi for which the half-outside eigenvalue condition of
/// gaussian_eigen_bound holds (search helper; throws if no xi > 0 works).
double find_max_xi(const Eigen::MatrixXd& sigma);

/// Almost-sure asymptotic feasibility of exponentially shrinking budgets
/// alpha ~ e^(-n a), beta ~ e^(-n b): true iff max{a, b} < 2 kappa.
bool asymptotic_feasible(double alpha_exp, double beta_exp, double kappa);

}  // namespace netdetect

#endif
