#include "netglm/families.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "netglm/errors.hpp"

namespace netglm {

namespace {

double logistic(double t) {
    if (t >= 0) {
        return 1.0 / (1.0 + std::exp(-t));
    }
    const double e = std::exp(t);
    return e / (1.0 + e);
}

// log(1 + exp(t)) without overflow.
double softplus(double t) {
    if (t > 0) {
        return t + std::log1p(std::exp(-t));
    }
    return std::log1p(std::exp(t));
}

}  // namespace

LinkValue eval_link(const GlmFamily& family, double t) {
    if (!std::isfinite(t)) {
        throw DomainError("eval_link: non-finite linear predictor");
    }
    switch (family.kind) {
        case FamilyKind::BernoulliLogit: {
            double mu = logistic(t);
            mu = std::clamp(mu, kMeanClamp, 1.0 - kMeanClamp);
            const double v = mu * (1.0 - mu);
            return {mu, v, family.dispersion * v};
        }
        case FamilyKind::PoissonLog: {
            const double mu = std::exp(t);
            return {mu, mu, family.dispersion * mu};
        }
        case FamilyKind::GaussianIdentity:
            return {t, 1.0, family.dispersion};
    }
    return {0, 0, 0};
}

void eval_link(const GlmFamily& family, const Eigen::VectorXd& eta, Eigen::ArrayXd& mean,
               Eigen::ArrayXd& dmean, Eigen::ArrayXd& var) {
    const Eigen::Index n = eta.size();
    mean.resize(n);
    dmean.resize(n);
    var.resize(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const LinkValue lv = eval_link(family, eta[i]);
        mean[i] = lv.mean;
        dmean[i] = lv.dmean;
        var[i] = lv.var;
    }
}

Eigen::VectorXd mean_of(const GlmFamily& family, const Eigen::VectorXd& eta) {
    Eigen::VectorXd mu(eta.size());
    for (Eigen::Index i = 0; i < eta.size(); ++i) {
        switch (family.kind) {
            case FamilyKind::BernoulliLogit: mu[i] = logistic(eta[i]); break;
            case FamilyKind::PoissonLog: mu[i] = std::exp(eta[i]); break;
            case FamilyKind::GaussianIdentity: mu[i] = eta[i]; break;
        }
    }
    return mu;
}

void check_support(const GlmFamily& family, const Eigen::VectorXd& y) {
    for (Eigen::Index i = 0; i < y.size(); ++i) {
        const double v = y[i];
        if (!std::isfinite(v)) {
            throw DomainError("response " + std::to_string(i) + " is not finite");
        }
        switch (family.kind) {
            case FamilyKind::BernoulliLogit:
                if (v < 0.0 || v > 1.0) {
                    throw DomainError("Bernoulli response " + std::to_string(i) +
                                      " outside [0, 1]");
                }
                break;
            case FamilyKind::PoissonLog:
                if (v < 0.0 || v != std::floor(v)) {
                    throw DomainError("Poisson response " + std::to_string(i) +
                                      " is not a non-negative integer");
                }
                break;
            case FamilyKind::GaussianIdentity: break;
        }
    }
}

double log_likelihood(const GlmFamily& family, const Eigen::VectorXd& y,
                      const Eigen::VectorXd& eta) {
    if (y.size() != eta.size()) {
        throw ConfigError("log_likelihood: y and eta differ in length");
    }
    check_support(family, y);
    const double a = family.dispersion;
    double total = 0.0;
    for (Eigen::Index i = 0; i < y.size(); ++i) {
        const double t = eta[i];
        if (!std::isfinite(t)) {
            throw DomainError("log_likelihood: non-finite linear predictor");
        }
        switch (family.kind) {
            case FamilyKind::BernoulliLogit:
                total += (y[i] * t - softplus(t)) / a;
                break;
            case FamilyKind::PoissonLog:
                total += (y[i] * t - std::exp(t)) / a - std::lgamma(y[i] + 1.0);
                break;
            case FamilyKind::GaussianIdentity:
                total += (y[i] * t - 0.5 * t * t) / a - 0.5 * y[i] * y[i] / a -
                         0.5 * std::log(2.0 * std::numbers::pi * a);
                break;
        }
    }
    return total;
}

GlmFamily parse_family(std::string_view name, double dispersion) {
    if (!(dispersion > 0.0) || !std::isfinite(dispersion)) {
        throw ConfigError("dispersion must be positive");
    }
    GlmFamily f;
    if (name == "logit" || name == "bernoulli" || name == "bernoulli-logit" ||
        name == "logistic") {
        f = GlmFamily::bernoulli();
    } else if (name == "poisson" || name == "poisson-log") {
        f = GlmFamily::poisson();
    } else if (name == "gaussian" || name == "gaussian-identity") {
        f = GlmFamily::gaussian();
    } else {
        throw ConfigError("unknown family '" + std::string(name) + "'");
    }
    f.dispersion = dispersion;
    return f;
}

std::string family_name(const GlmFamily& family) {
    switch (family.kind) {
        case FamilyKind::BernoulliLogit: return "logit";
        case FamilyKind::PoissonLog: return "poisson";
        case FamilyKind::GaussianIdentity: return "gaussian";
    }
    return "unknown";
}

}  // namespace netglm
