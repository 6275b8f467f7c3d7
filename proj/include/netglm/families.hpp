#pragma once

#include <string>
#include <string_view>

#include <Eigen/Dense>

namespace netglm {

enum class FamilyKind { BernoulliLogit, PoissonLog, GaussianIdentity };

/// Exponential family with link: f(y; psi, phi) = exp((y psi - b(psi)) / a(phi) + d(y, phi)),
/// with a(phi) = phi. The mean is h(eta) where h is the inverse link.
struct GlmFamily {
    FamilyKind kind = FamilyKind::BernoulliLogit;
    double dispersion = 1.0;
    bool natural_link = true;

    static GlmFamily bernoulli() { return {FamilyKind::BernoulliLogit, 1.0, true}; }
    static GlmFamily poisson() { return {FamilyKind::PoissonLog, 1.0, true}; }
    static GlmFamily gaussian(double dispersion = 1.0) {
        return {FamilyKind::GaussianIdentity, dispersion, true};
    }
};

/// Bernoulli means are clamped into [kMeanClamp, 1 - kMeanClamp].
inline constexpr double kMeanClamp = 1e-8;

struct LinkValue {
    double mean;
    double dmean;
    double var;
};

/// h(t), h'(t) and v(h(t)). Throws DomainError for non-finite t.
LinkValue eval_link(const GlmFamily& family, double t);

/// Vectorised eval_link; outputs are resized to eta.size().
void eval_link(const GlmFamily& family, const Eigen::VectorXd& eta, Eigen::ArrayXd& mean,
               Eigen::ArrayXd& dmean, Eigen::ArrayXd& var);

/// Inverse link only, without clamping at the Bernoulli boundary.
Eigen::VectorXd mean_of(const GlmFamily& family, const Eigen::VectorXd& eta);

/// Sum of per-observation log densities at linear predictor eta.
double log_likelihood(const GlmFamily& family, const Eigen::VectorXd& y,
                      const Eigen::VectorXd& eta);

/// Throws DomainError if some y_i lies outside the support of the family.
void check_support(const GlmFamily& family, const Eigen::VectorXd& y);

/// Accepts the CLI spellings "logit", "poisson", "gaussian" (and the long names).
GlmFamily parse_family(std::string_view name, double dispersion = 1.0);
std::string family_name(const GlmFamily& family);

}  // namespace netglm
