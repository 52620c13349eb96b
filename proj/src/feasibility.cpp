#include "netdetect/feasibility.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>

namespace netdetect {

FeasibilityReport feasibility_lower_bound(const HypothesisPair& pair,
                                          const DetectionConfig& config) {
    BhattacharyyaResult b = bhattacharyya(pair);
    double raw = 1.0 - b.coefficient * (pair.prior0() / std::sqrt(config.beta) +
                                        pair.prior1() / std::sqrt(config.alpha));
    return {b.coefficient, b.kappa_n, std::clamp(raw, 0.0, 1.0)};
}

namespace {

Eigen::VectorXd unit_diagonal_eigenvalues(const Eigen::MatrixXd& sigma) {
    const Eigen::Index n = sigma.rows();
    if (n == 0 || sigma.cols() != n)
        throw std::invalid_argument("gaussian_eigen_bound: sigma must be square and nonempty");
    for (Eigen::Index i = 0; i < n; ++i)
        if (std::abs(sigma(i, i) - 1.0) > 1e-9)
            throw std::invalid_argument("gaussian_eigen_bound: sigma must have unit diagonal");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(sigma, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success)
        throw std::runtime_error("gaussian_eigen_bound: eigenvalue computation failed");
    Eigen::VectorXd lambda = solver.eigenvalues();
    if (lambda.minCoeff() <= 0.0)
        throw std::invalid_argument("gaussian_eigen_bound: sigma must be positive-definite");
    return lambda;
}

/// lambda lies outside [(sqrt(1+xi)-sqrt(xi))^2, (sqrt(1+xi)+sqrt(xi))^2]
/// exactly when (1+lambda)^2 / (4 lambda) > 1 + xi; the left side is the
/// per-eigenvalue cap on admissible xi shifted by one.
double xi_cap(double lambda) { return (1.0 - lambda) * (1.0 - lambda) / (4.0 * lambda); }

}  // namespace

double gaussian_eigen_bound(const Eigen::MatrixXd& sigma, double xi) {
    if (xi <= 0.0) throw std::invalid_argument("gaussian_eigen_bound: xi must be > 0");
    Eigen::VectorXd lambda = unit_diagonal_eigenvalues(sigma);
    const Eigen::Index n = lambda.size();
    Eigen::Index outside = 0;
    for (Eigen::Index i = 0; i < n; ++i)
        if (xi_cap(lambda(i)) > xi) ++outside;
    if (2 * outside < n)
        throw std::invalid_argument(
            "gaussian_eigen_bound: " + std::to_string(n - outside) + " of " + std::to_string(n) +
            " eigenvalues fall inside the xi interval; at least half must lie outside");
    return std::pow(1.0 + xi, -static_cast<double>(n) / 8.0);
}

double find_max_xi(const Eigen::MatrixXd& sigma) {
    Eigen::VectorXd lambda = unit_diagonal_eigenvalues(sigma);
    std::vector<double> caps(lambda.data(), lambda.data() + lambda.size());
    for (double& c : caps) c = xi_cap(c);
    std::sort(caps.begin(), caps.end(), std::greater<>());
    // Need strictly more information than xi at the ceil(n/2)-th eigenvalue.
    size_t need = (caps.size() + 1) / 2;
    double sup = caps[need - 1];
    double xi = sup * (1.0 - 1e-9);
    if (!(xi > 0.0))
        throw std::invalid_argument(
            "find_max_xi: no xi > 0 leaves half of the spectrum outside the interval");
    return xi;
}

bool asymptotic_feasible(double alpha_exp, double beta_exp, double kappa) {
    if (!(std::isfinite(alpha_exp) && std::isfinite(beta_exp) && std::isfinite(kappa)))
        throw std::invalid_argument("asymptotic_feasible: inputs must be finite");
    if (kappa < 0.0) throw std::invalid_argument("asymptotic_feasible: kappa must be >= 0");
    return std::max(alpha_exp, beta_exp) < 2.0 * kappa;
}

}  // namespace netdetect
