#pragma once

#include <utility>

#include <Eigen/Dense>

#include "netglm/estimator.hpp"

namespace netglm {

struct ChiSqResult {
    double statistic = 0.0;
    int df = 0;
    double p_value = 1.0;
};

struct WaldResult {
    double estimate = 0.0;
    double se = 0.0;
    double z = 0.0;
    double p_value = 1.0;
    std::pair<double, double> ci95{0.0, 0.0};
    double condition_value = 0.0;
};

enum class CoefBlock { Beta, Theta };

/// Upper tail of chi-square with df degrees of freedom.
double chisq_upper_tail(double statistic, int df);
/// Two-sided normal p-value 2 Phi(-|z|).
double normal_two_sided(double z);

/// n^{-1}(kappa - kappa Z (Z^T kappa Z)^{-1} Z^T kappa), formed densely (n x n).
Eigen::MatrixXd o_tilde(const Eigen::VectorXd& kappa, const Eigen::MatrixXd& Z);

/// statistic = n alpha^T O alpha with df = K - r.
ChiSqResult network_effect_test(const Eigen::VectorXd& alpha, const Eigen::MatrixXd& O, int K,
                                int r);

/// Same statistic evaluated without forming the n x n matrix:
/// alpha^T kappa alpha - (Z^T kappa alpha)^T (Z^T kappa Z)^{-1} (Z^T kappa alpha).
ChiSqResult network_effect_test(const Eigen::VectorXd& alpha, const Eigen::VectorXd& kappa,
                                const Eigen::MatrixXd& Z, int K, int r);

/// Network-effect test for a fitted model; Z is the covariate block of the design.
ChiSqResult network_effect_test(const FittedModel& fit, const EffectiveDesign& design);

/// Wald test and 95% interval for u^T beta (or u^T theta) against `null_value`.
/// Throws DegenerateFunctionalError when n^{-1} ||Z_block^T X G u|| < 1e-8.
WaldResult coef_test(const FittedModel& fit, const Eigen::VectorXd& u, CoefBlock which,
                     double null_value = 0.0);

/// Diagonal block of F~^{-1} for the given half-open index range.
Eigen::MatrixXd inverse_information_block(const FittedModel& fit, Eigen::Index begin,
                                          Eigen::Index end);

}  // namespace netglm
