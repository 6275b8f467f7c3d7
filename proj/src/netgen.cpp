#include "netglm/netgen.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "netglm/errors.hpp"

namespace netglm {

GeneratorKind parse_generator(const std::string& name) {
    if (name == "sbm") return GeneratorKind::Sbm;
    if (name == "dcbm") return GeneratorKind::Dcbm;
    if (name == "graphon" || name == "diag") return GeneratorKind::Graphon;
    throw ConfigError("unknown generator '" + name + "'");
}

std::string generator_name(GeneratorKind kind) {
    switch (kind) {
        case GeneratorKind::Sbm: return "sbm";
        case GeneratorKind::Dcbm: return "dcbm";
        case GeneratorKind::Graphon: return "graphon";
    }
    return "unknown";
}

DegreeRule parse_degree_rule(const std::string& name) {
    if (name == "2logn") return DegreeRule::TwoLogN;
    if (name == "sqrt_n") return DegreeRule::SqrtN;
    if (name == "n_two_thirds") return DegreeRule::NTwoThirds;
    throw ConfigError("unknown degree rule '" + name + "'");
}

std::string degree_rule_name(DegreeRule rule) {
    switch (rule) {
        case DegreeRule::TwoLogN: return "2logn";
        case DegreeRule::SqrtN: return "sqrt_n";
        case DegreeRule::NTwoThirds: return "n_two_thirds";
    }
    return "unknown";
}

double target_degree(DegreeRule rule, Eigen::Index n) {
    const double x = static_cast<double>(n);
    switch (rule) {
        case DegreeRule::TwoLogN: return 2.0 * std::log(x);
        case DegreeRule::SqrtN: return std::sqrt(x);
        case DegreeRule::NTwoThirds: return std::pow(x, 2.0 / 3.0);
    }
    return 0.0;
}

std::vector<int> block_membership(Eigen::Index n, int blocks) {
    if (blocks < 1 || n < blocks) {
        throw ConfigError("need 1 <= blocks <= n");
    }
    const Eigen::Index size = n / blocks;
    std::vector<int> label(static_cast<std::size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i) {
        label[static_cast<std::size_t>(i)] = static_cast<int>(std::min<Eigen::Index>(i / size, blocks - 1));
    }
    return label;
}

namespace {

void check_target(Eigen::Index n, double avg_deg) {
    if (!(avg_deg > 0.0) || avg_deg >= static_cast<double>(n - 1)) {
        throw InfeasibleDensityError("average degree must lie in (0, n - 1)");
    }
}

// Scales an unnormalised kernel K (zero diagonal) by c so that
// (1/n) sum_ij min(1, c K_ij) = avg_deg.
ProbMatrix scale_to_degree(const Eigen::MatrixXd& base, double avg_deg, GeneratorKind kind) {
    const Eigen::Index n = base.rows();
    check_target(n, avg_deg);
    const double nn = static_cast<double>(n);
    auto degree_at = [&](double c) { return (c * base).cwiseMin(1.0).sum() / nn; };

    const double raw = base.sum() / nn;
    if (!(raw > 0.0)) {
        throw InfeasibleDensityError("kernel has no mass");
    }
    double c = avg_deg / raw;
    if (c * base.maxCoeff() > 1.0) {
        // Capping binds; bisect on the monotone map c -> degree.
        double lo = 0.0;
        double hi = c;
        while (degree_at(hi) < avg_deg) {
            hi *= 2.0;
            if (hi > 1e12) {
                throw InfeasibleDensityError("average degree unreachable with probabilities <= 1");
            }
        }
        for (int it = 0; it < 400 && (hi - lo) > 1e-10 * hi; ++it) {
            const double mid = 0.5 * (lo + hi);
            (degree_at(mid) < avg_deg ? lo : hi) = mid;
        }
        c = 0.5 * (lo + hi);
    }
    ProbMatrix out;
    out.kind = kind;
    out.target_avg_degree = avg_deg;
    out.P = (c * base).cwiseMin(1.0);
    out.P.diagonal().setZero();
    out.capped_entries = ((c * base).array() > 1.0).count() / 2;
    return out;
}

Eigen::MatrixXd block_kernel(const std::vector<int>& label, double out_in,
                             const Eigen::VectorXd* degree) {
    const Eigen::Index n = static_cast<Eigen::Index>(label.size());
    Eigen::MatrixXd base(n, n);
    for (Eigen::Index j = 0; j < n; ++j) {
        for (Eigen::Index i = 0; i < n; ++i) {
            double v = label[static_cast<std::size_t>(i)] == label[static_cast<std::size_t>(j)] ? 1.0 : out_in;
            if (degree) {
                v *= (*degree)(i) * (*degree)(j);
            }
            base(i, j) = v;
        }
    }
    base.diagonal().setZero();
    return base;
}

}  // namespace

ProbMatrix sbm_matrix(Eigen::Index n, int blocks, double out_in, double avg_deg) {
    if (!(out_in >= 0.0)) {
        throw ConfigError("out-in ratio must be non-negative");
    }
    std::vector<int> label = block_membership(n, blocks);
    const Eigen::MatrixXd base = block_kernel(label, out_in, nullptr);
    check_target(n, avg_deg);
    const double w = avg_deg * static_cast<double>(n) / base.sum();
    if (w * base.maxCoeff() > 1.0) {
        throw InfeasibleDensityError("SBM density infeasible: within-block probability > 1");
    }
    ProbMatrix out;
    out.kind = GeneratorKind::Sbm;
    out.target_avg_degree = avg_deg;
    out.P = w * base;
    out.membership = std::move(label);
    return out;
}

ProbMatrix dcbm_matrix(Eigen::Index n, int blocks, double out_in,
                       const Eigen::VectorXd& degree_params, double avg_deg) {
    if (degree_params.size() != n || !(degree_params.array() > 0.0).all()) {
        throw ConfigError("degree parameters must be n positive values");
    }
    std::vector<int> label = block_membership(n, blocks);
    ProbMatrix out =
        scale_to_degree(block_kernel(label, out_in, &degree_params), avg_deg, GeneratorKind::Dcbm);
    out.membership = std::move(label);
    return out;
}

Eigen::VectorXd draw_degree_params(Eigen::Index n, CounterRng& rng, double lo, double hi) {
    Eigen::VectorXd psi(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        psi(i) = lo + (hi - lo) * rng.uniform();
    }
    return psi;
}

double graphon_kernel(double u, double v) {
    return 1.0 / (1.0 + std::exp(15.0 * std::pow(0.8 * std::abs(u - v), 0.8) - 0.1));
}

ProbMatrix graphon_matrix(Eigen::Index n, double avg_deg) {
    Eigen::MatrixXd base(n, n);
    const double nn = static_cast<double>(n);
    for (Eigen::Index j = 0; j < n; ++j) {
        for (Eigen::Index i = 0; i < n; ++i) {
            base(i, j) = graphon_kernel(static_cast<double>(i + 1) / nn,
                                        static_cast<double>(j + 1) / nn);
        }
    }
    base.diagonal().setZero();
    return scale_to_degree(base, avg_deg, GeneratorKind::Graphon);
}

Eigen::MatrixXd sample_adjacency(const ProbMatrix& prob, CounterRng& rng) {
    const Eigen::Index n = prob.P.rows();
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index j = 1; j < n; ++j) {
        for (Eigen::Index i = 0; i < j; ++i) {
            if (rng.uniform() < prob.P(i, j)) {
                A(i, j) = 1.0;
                A(j, i) = 1.0;
            }
        }
    }
    return A;
}

SimTruth paper_design(const ProbMatrix& prob, const GlmFamily& family, CounterRng& rng,
                      bool null_alpha) {
    const Eigen::Index n = prob.P.rows();
    if (n < 5) {
        throw ConfigError("paper_design needs n >= 5");
    }
    SimTruth truth;
    truth.family = family;
    const SpectralBasis spec = spectral_basis(prob.P, 4, SpectralMode::AdjacencyLeading);
    Eigen::MatrixXd w = spec.vectors;

    // Gaps among the first four eigenvalues.
    const double scale = std::max(1.0, spec.eigenvalues.cwiseAbs().maxCoeff());
    for (int i = 0; i < 3; ++i) {
        if (std::abs(spec.eigenvalues(i) - spec.eigenvalues(i + 1)) <= 1e-8 * scale) {
            truth.warnings.push_back("degenerate eigengap between w" + std::to_string(i + 1) +
                                     " and w" + std::to_string(i + 2));
        }
    }
    if (prob.kind != GeneratorKind::Graphon) {
        std::normal_distribution<double> normal;
        Eigen::VectorXd g(n);
        for (Eigen::Index i = 0; i < n; ++i) {
            g(i) = normal(rng);
        }
        const Eigen::MatrixXd lead = w.leftCols(3);
        g -= lead * (lead.transpose() * g);
        g -= lead * (lead.transpose() * g);
        w.col(3) = g.normalized();
    }
    truth.eigvecs = w;

    const double root_n = std::sqrt(static_cast<double>(n));
    truth.X.resize(n, 2);
    truth.X.col(0) = root_n * w.col(0);
    truth.X.col(1) = root_n * (w.col(1) / 5.0 + 2.0 * std::sqrt(6.0) / 5.0 * w.col(3));

    const Eigen::MatrixXd Zbar = orthonormal_basis(truth.X);
    truth.oracle = with_r(align_subspaces(Zbar, w.leftCols(3)), 1);
    truth.r = 1;
    truth.s = 1;

    truth.beta = Eigen::Vector2d(0.0, 0.5);
    truth.theta = Eigen::Vector2d(0.5, 0.0);
    const AlignedBases& ob = truth.oracle;
    const double nn = static_cast<double>(n);
    truth.gamma.resize(4);
    truth.gamma(0) = ob.Z.col(0).dot(truth.X * truth.theta) / nn;
    truth.gamma(1) = ob.Z.col(1).dot(truth.X * truth.beta) / nn;
    truth.gamma(2) = null_alpha ? 0.0 : 0.5;
    truth.gamma(3) = null_alpha ? 0.0 : 0.5;
    truth.alpha = ob.W.rightCols(2) * truth.gamma.tail(2);
    truth.eta = truth.X * truth.beta + truth.X * truth.theta + truth.alpha;
    return truth;
}

Eigen::VectorXd sample_response(const GlmFamily& family, const Eigen::VectorXd& eta,
                                CounterRng& rng, bool zero_noise) {
    const Eigen::Index n = eta.size();
    const Eigen::VectorXd mu = mean_of(family, eta);
    Eigen::VectorXd y(n);
    switch (family.kind) {
        case FamilyKind::BernoulliLogit:
            for (Eigen::Index i = 0; i < n; ++i) {
                y(i) = rng.uniform() < mu(i) ? 1.0 : 0.0;
            }
            break;
        case FamilyKind::PoissonLog:
            for (Eigen::Index i = 0; i < n; ++i) {
                std::poisson_distribution<long> pois(mu(i));
                y(i) = static_cast<double>(pois(rng));
            }
            break;
        case FamilyKind::GaussianIdentity:
            if (zero_noise) {
                return eta;
            }
            {
                std::normal_distribution<double> normal(0.0, std::sqrt(family.dispersion));
                for (Eigen::Index i = 0; i < n; ++i) {
                    y(i) = mu(i) + normal(rng);
                }
            }
            break;
    }
    return y;
}

}  // namespace netglm
