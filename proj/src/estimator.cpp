#include "netglm/estimator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace netglm {

namespace {

struct LinkArrays {
    Eigen::ArrayXd mean;
    Eigen::ArrayXd dmean;
    Eigen::ArrayXd var;
};

LinkArrays evaluate(const GlmFamily& family, const Eigen::VectorXd& eta) {
    LinkArrays a;
    eval_link(family, eta, a.mean, a.dmean, a.var);
    return a;
}

Eigen::VectorXd score_from(const Eigen::MatrixXd& design, const Eigen::VectorXd& y,
                           const LinkArrays& link) {
    const Eigen::Index n = design.rows();
    Eigen::ArrayXd resid = link.dmean / link.var * (y.array() - link.mean);
    for (Eigen::Index i = 0; i < n; ++i) {
        if (!std::isfinite(resid[i])) {
            throw OverflowError("non-finite score contribution at row " + std::to_string(i), i);
        }
    }
    return design.transpose() * resid.matrix() / static_cast<double>(n);
}

double safe_loglik(const GlmFamily& family, const Eigen::VectorXd& y, const Eigen::VectorXd& eta) {
    if (!eta.allFinite()) {
        return -std::numeric_limits<double>::infinity();
    }
    const double ll = log_likelihood(family, y, eta);
    return std::isfinite(ll) ? ll : -std::numeric_limits<double>::infinity();
}

Eigen::VectorXd initial_gamma(const Eigen::MatrixXd& design, const Eigen::VectorXd& y,
                              const GlmFamily& family) {
    Eigen::VectorXd z(y.size());
    for (Eigen::Index i = 0; i < y.size(); ++i) {
        switch (family.kind) {
            case FamilyKind::BernoulliLogit: {
                const double m = (y[i] + 0.5) / 2.0;
                z[i] = std::log(m / (1.0 - m));
                break;
            }
            case FamilyKind::PoissonLog: z[i] = std::log(y[i] + 0.5); break;
            case FamilyKind::GaussianIdentity: z[i] = y[i]; break;
        }
    }
    return design.colPivHouseholderQr().solve(z);
}

}  // namespace

EffectiveDesign build_design(const AlignedBases& bases) {
    if (!bases.has_r()) {
        throw ConfigError("build_design: r is not set");
    }
    const Eigen::Index r = bases.r;
    const Eigen::Index d = bases.p + bases.K - r;
    if (d <= 0) {
        throw DegenerateDesignError("effective design is empty");
    }
    // The Gram matrix of the design has eigenvalues 1 +- sigma_i for i > r.
    if (r < bases.K && bases.sigma(r) > 1.0 - 1e-10) {
        throw DegenerateDesignError(
            "effective design is rank deficient: sigma_{r+1} = 1, r is too small");
    }
    EffectiveDesign out;
    out.n = bases.n;
    out.p = bases.p;
    out.K = bases.K;
    out.r = bases.r;
    out.matrix.resize(bases.n, d);
    out.matrix.leftCols(bases.p) = bases.Z;
    out.matrix.rightCols(bases.K - r) = bases.W.rightCols(bases.K - r);
    return out;
}

Eigen::VectorXd score(const Eigen::VectorXd& gamma, const Eigen::MatrixXd& design,
                      const Eigen::VectorXd& y, const GlmFamily& family) {
    if (design.cols() != gamma.size() || design.rows() != y.size()) {
        throw ConfigError("score: dimensions do not agree");
    }
    const Eigen::VectorXd eta = design * gamma;
    for (Eigen::Index i = 0; i < eta.size(); ++i) {
        if (!std::isfinite(eta[i])) {
            throw OverflowError("non-finite linear predictor at row " + std::to_string(i), i);
        }
    }
    return score_from(design, y, evaluate(family, eta));
}

Eigen::VectorXd information_weights(const Eigen::VectorXd& eta, const GlmFamily& family) {
    const LinkArrays link = evaluate(family, eta);
    return (link.dmean.square() / link.var).matrix();
}

Eigen::MatrixXd information(const Eigen::VectorXd& gamma, const Eigen::MatrixXd& design,
                            const GlmFamily& family) {
    if (design.cols() != gamma.size()) {
        throw ConfigError("information: dimensions do not agree");
    }
    const Eigen::VectorXd kappa = information_weights(design * gamma, family);
    Eigen::MatrixXd F = design.transpose() * kappa.asDiagonal() * design;
    F /= static_cast<double>(design.rows());
    return 0.5 * (F + F.transpose());
}

GlmSolution irls_solve(const Eigen::MatrixXd& design, const Eigen::VectorXd& y,
                       const GlmFamily& family, const IrlsOptions& opts) {
    const Eigen::Index n = design.rows();
    const Eigen::Index d = design.cols();
    if (y.size() != n || d == 0) {
        throw ConfigError("irls_solve: dimensions do not agree");
    }
    check_support(family, y);

    GlmSolution sol;
    ConvergenceReport& rep = sol.convergence;
    rep.potentially_non_unique = !family.natural_link;
    const bool halving = opts.step_halving && family.natural_link;

    Eigen::VectorXd gamma;
    if (opts.init) {
        if (opts.init->size() != d) {
            throw ConfigError("irls_solve: initial value has wrong length");
        }
        gamma = *opts.init;
    } else if (opts.data_init) {
        gamma = initial_gamma(design, y, family);
    } else {
        gamma = Eigen::VectorXd::Zero(d);
    }
    Eigen::VectorXd eta = design * gamma;
    LinkArrays link = evaluate(family, eta);
    double ll = halving ? safe_loglik(family, y, eta) : 0.0;
    std::vector<IterateRecord> history;
    double sep_ll = ll;

    for (int it = 1; it <= opts.max_iter; ++it) {
        const Eigen::ArrayXd w =
            (link.dmean.square() / link.var).max(opts.weight_floor);
        const Eigen::ArrayXd sw = w.sqrt();
        const Eigen::VectorXd z =
            (eta.array() + (y.array() - link.mean) / link.dmean).matrix();
        const Eigen::MatrixXd A = sw.matrix().asDiagonal() * design;
        const Eigen::VectorXd b = (sw * z.array()).matrix();
        const Eigen::VectorXd target = A.colPivHouseholderQr().solve(b);
        Eigen::VectorXd step = target - gamma;
        if (!step.allFinite()) {
            throw NumericalError("IRLS produced a non-finite update");
        }

        Eigen::VectorXd next = gamma + step;
        Eigen::VectorXd next_eta = design * next;
        if (halving) {
            double next_ll = safe_loglik(family, y, next_eta);
            const double slack = 1e-12 * std::max(1.0, std::abs(ll));
            for (int h = 0; h < opts.max_halvings && !(next_ll >= ll - slack); ++h) {
                step *= 0.5;
                next = gamma + step;
                next_eta = design * next;
                next_ll = safe_loglik(family, y, next_eta);
            }
            ll = next_ll;
        }
        for (Eigen::Index i = 0; i < n; ++i) {
            if (!std::isfinite(next_eta[i])) {
                throw OverflowError("non-finite linear predictor at row " + std::to_string(i), i);
            }
        }
        const double rel_step =
            step.cwiseAbs().maxCoeff() / std::max(1.0, gamma.cwiseAbs().maxCoeff());
        gamma = std::move(next);
        eta = std::move(next_eta);
        link = evaluate(family, eta);
        const double snorm = score_from(design, y, link).cwiseAbs().maxCoeff();

        IterateRecord record{it, snorm, rel_step, halving ? ll : 0.0};
        history.push_back(record);
        rep.iterations = it;
        rep.score_norm = snorm;
        if (rel_step <= opts.step_tol && snorm <= opts.score_tol) {
            rep.converged = true;
            break;
        }
        // Separated Bernoulli data: the likelihood has flattened while some
        // coefficients drift to infinity. Stop and flag it.
        if (family.kind == FamilyKind::BernoulliLogit && eta.cwiseAbs().maxCoeff() > 30.0) {
            const double now = halving ? ll : safe_loglik(family, y, eta);
            if (it > 1 && std::abs(now - sep_ll) < 1e-10 * (std::abs(now) + 0.1)) {
                rep.converged = true;
                break;
            }
            sep_ll = now;
        }
    }
    if (!rep.converged) {
        throw ConvergenceError("IRLS did not converge in " + std::to_string(opts.max_iter) +
                                   " iterations (score norm " + std::to_string(rep.score_norm) +
                                   ")",
                               std::move(history));
    }
    if (family.kind == FamilyKind::BernoulliLogit && eta.cwiseAbs().maxCoeff() > 30.0) {
        rep.quasi_separation = true;
    }
    if (opts.keep_history) {
        rep.history = std::move(history);
    }
    sol.gamma = std::move(gamma);
    return sol;
}

CoefficientBlocks back_transform(const Eigen::VectorXd& gamma, const Eigen::MatrixXd& X,
                                 const AlignedBases& bases) {
    if (!bases.has_r()) {
        throw ConfigError("back_transform: r is not set");
    }
    const Eigen::Index r = bases.r;
    const Eigen::Index p = bases.p;
    const Eigen::Index K = bases.K;
    if (gamma.size() != p + K - r || X.cols() != p || X.rows() != bases.n) {
        throw ConfigError("back_transform: dimensions do not agree");
    }
    const Eigen::LDLT<Eigen::MatrixXd> gram(X.transpose() * X);
    CoefficientBlocks out;
    // An empty block gives a zero vector (Eigen treats 0-column products as zero).
    out.theta = gram.solve(X.transpose() * (bases.Z.leftCols(r) * gamma.head(r)));
    out.beta = gram.solve(X.transpose() * (bases.Z.rightCols(p - r) * gamma.segment(r, p - r)));
    out.alpha = bases.W.rightCols(K - r) * gamma.tail(K - r);
    return out;
}

Eigen::VectorXd predict(const Eigen::VectorXd& gamma, const Eigen::MatrixXd& design,
                        const GlmFamily& family) {
    return mean_of(family, design * gamma);
}

FittedModel fit_model(const Eigen::MatrixXd& X, const AlignedBases& bases,
                      const EffectiveDesign& design, const Eigen::VectorXd& y,
                      const GlmFamily& family, const IrlsOptions& opts) {
    GlmSolution sol = irls_solve(design.matrix, y, family, opts);
    const double n = static_cast<double>(bases.n);

    FittedModel fit;
    fit.family = family;
    fit.n = bases.n;
    fit.p = bases.p;
    fit.K = bases.K;
    fit.r = bases.r;
    fit.gamma = std::move(sol.gamma);
    fit.convergence = std::move(sol.convergence);
    CoefficientBlocks blocks = back_transform(fit.gamma, X, bases);
    fit.theta = std::move(blocks.theta);
    fit.beta = std::move(blocks.beta);
    fit.alpha = std::move(blocks.alpha);
    fit.eta = design.matrix * fit.gamma;
    fit.mu = mean_of(family, fit.eta);
    fit.kappa = information_weights(fit.eta, family);
    fit.information = design.matrix.transpose() * fit.kappa.asDiagonal() * design.matrix / n;
    fit.information = (0.5 * (fit.information + fit.information.transpose())).eval();
    const Eigen::MatrixXd gram = X.transpose() * X / n;
    fit.G = gram.ldlt().solve(Eigen::MatrixXd::Identity(bases.p, bases.p));
    fit.ZtX = bases.Z.transpose() * X;
    return fit;
}

SubspaceFit fit_subspace_glm(const Eigen::MatrixXd& X, const Eigen::MatrixXd& P,
                             const Eigen::VectorXd& y, const GlmFamily& family,
                             const FitConfig& config) {
    if (X.rows() != P.rows() || y.size() != X.rows()) {
        throw DataError("covariates, relational matrix and response disagree on n");
    }
    SubspaceFit out;
    const Eigen::MatrixXd Zbar = orthonormal_basis(X);
    out.spectral = spectral_basis(P, config.K, config.mode);
    AlignedBases bases = align_subspaces(Zbar, out.spectral.vectors);
    out.dhat = average_degree(P);
    int r = 0;
    if (config.r) {
        r = *config.r;
    } else {
        out.r_threshold = select_r_threshold(out.dhat, bases.p, bases.K, bases.n);
        r = select_r(bases.sigma, out.dhat, bases.p, bases.K, bases.n);
        out.r_selected = true;
    }
    out.bases = with_r(std::move(bases), r);
    out.design = build_design(out.bases);
    out.model = fit_model(X, out.bases, out.design, y, family, config.irls);
    return out;
}

SubspaceFit fit_from_bases(const Eigen::MatrixXd& X, const Eigen::MatrixXd& Zbar,
                           const Eigen::MatrixXd& Wbreve, const Eigen::VectorXd& y,
                           const GlmFamily& family, int r, const IrlsOptions& opts) {
    SubspaceFit out;
    out.spectral.vectors = Wbreve;
    out.bases = with_r(align_subspaces(Zbar, Wbreve), r);
    out.design = build_design(out.bases);
    out.model = fit_model(X, out.bases, out.design, y, family, opts);
    return out;
}

}  // namespace netglm
