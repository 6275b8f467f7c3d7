#pragma once

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "netglm/errors.hpp"
#include "netglm/families.hpp"
#include "netglm/subspace.hpp"

namespace netglm {

/// Rows g_i of [Z | W_{(r+1):K}].
struct EffectiveDesign {
    Eigen::MatrixXd matrix;
    Eigen::Index n = 0;
    Eigen::Index p = 0;
    Eigen::Index K = 0;
    int r = 0;

    Eigen::Index dim() const { return matrix.cols(); }
};

EffectiveDesign build_design(const AlignedBases& bases);

/// (1/n) sum_i g_i h'(g_i^T gamma) / v(g_i^T gamma) (y_i - h(g_i^T gamma)).
/// Throws OverflowError naming the first row with a non-finite contribution.
Eigen::VectorXd score(const Eigen::VectorXd& gamma, const Eigen::MatrixXd& design,
                      const Eigen::VectorXd& y, const GlmFamily& family);

/// (1/n) sum_i h'(g_i^T gamma)^2 / v(g_i^T gamma) g_i g_i^T.
Eigen::MatrixXd information(const Eigen::VectorXd& gamma, const Eigen::MatrixXd& design,
                            const GlmFamily& family);

/// kappa_i = h'(eta_i)^2 / v(eta_i).
Eigen::VectorXd information_weights(const Eigen::VectorXd& eta, const GlmFamily& family);

struct IrlsOptions {
    double step_tol = 1e-10;
    double score_tol = 1e-8;
    int max_iter = 100;
    bool step_halving = true;
    int max_halvings = 10;
    double weight_floor = 1e-10;
    /// Start from weighted least squares on the link-transformed response instead of zero.
    bool data_init = false;
    std::optional<Eigen::VectorXd> init;
    bool keep_history = false;
};

struct ConvergenceReport {
    int iterations = 0;
    double score_norm = 0.0;
    bool converged = false;
    bool quasi_separation = false;
    /// The link is not natural, so the root found need not be the unique MLE.
    bool potentially_non_unique = false;
    std::vector<IterateRecord> history;
};

struct GlmSolution {
    Eigen::VectorXd gamma;
    ConvergenceReport convergence;
};

/// Fisher scoring for a GLM with the given design. Throws ConvergenceError
/// (carrying the iterate history) when max_iter is exhausted.
GlmSolution irls_solve(const Eigen::MatrixXd& design, const Eigen::VectorXd& y,
                       const GlmFamily& family, const IrlsOptions& opts = {});

struct CoefficientBlocks {
    Eigen::VectorXd theta;  // X theta is the intersection component
    Eigen::VectorXd beta;   // X beta is the covariate-only component
    Eigen::VectorXd alpha;  // network individual effect
};

CoefficientBlocks back_transform(const Eigen::VectorXd& gamma, const Eigen::MatrixXd& X,
                                 const AlignedBases& bases);

/// h(g_i^T gamma) for every row.
Eigen::VectorXd predict(const Eigen::VectorXd& gamma, const Eigen::MatrixXd& design,
                        const GlmFamily& family);

struct FittedModel {
    GlmFamily family;
    Eigen::Index n = 0;
    Eigen::Index p = 0;
    Eigen::Index K = 0;
    int r = 0;
    Eigen::VectorXd gamma;
    Eigen::VectorXd theta;
    Eigen::VectorXd beta;
    Eigen::VectorXd alpha;
    Eigen::MatrixXd information;  // F~(gamma_hat)
    Eigen::VectorXd kappa;
    Eigen::MatrixXd G;            // (X^T X / n)^{-1}
    Eigen::MatrixXd ZtX;          // Z~^T X, p x p
    Eigen::VectorXd eta;
    Eigen::VectorXd mu;
    ConvergenceReport convergence;
};

/// IRLS on the effective design followed by back-transformation and the
/// quantities needed for inference.
FittedModel fit_model(const Eigen::MatrixXd& X, const AlignedBases& bases,
                      const EffectiveDesign& design, const Eigen::VectorXd& y,
                      const GlmFamily& family, const IrlsOptions& opts = {});

struct FitConfig {
    Eigen::Index K = 3;
    std::optional<int> r;  // nullopt: select_r
    SpectralMode mode = SpectralMode::AdjacencyLeading;
    IrlsOptions irls;
};

struct SubspaceFit {
    SpectralBasis spectral;
    AlignedBases bases;
    EffectiveDesign design;
    FittedModel model;
    double dhat = 0.0;
    double r_threshold = 0.0;
    bool r_selected = false;
};

/// Full pipeline from covariates, relational matrix and response.
SubspaceFit fit_subspace_glm(const Eigen::MatrixXd& X, const Eigen::MatrixXd& P,
                             const Eigen::VectorXd& y, const GlmFamily& family,
                             const FitConfig& config);

/// Same pipeline starting from already-computed orthonormal bases.
SubspaceFit fit_from_bases(const Eigen::MatrixXd& X, const Eigen::MatrixXd& Zbar,
                           const Eigen::MatrixXd& Wbreve, const Eigen::VectorXd& y,
                           const GlmFamily& family, int r, const IrlsOptions& opts = {});

}  // namespace netglm
