#pragma once

// Independent reference computations used by the tests. None of these call
// into the library under test.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <random>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

inline double logistic(double t) { return 1.0 / (1.0 + std::exp(-t)); }

/// Bernoulli-logit, Poisson-log or Gaussian (unit variance) log-likelihood
/// written out directly.
enum class Fam { Logit, Poisson, Gauss };

inline double loglik(Fam fam, const Eigen::MatrixXd& G, const Eigen::VectorXd& y,
                     const Eigen::VectorXd& gamma) {
    const Eigen::VectorXd eta = G * gamma;
    double total = 0.0;
    for (Eigen::Index i = 0; i < y.size(); ++i) {
        const double t = eta[i];
        switch (fam) {
            case Fam::Logit:
                total += y[i] * t - (t > 0 ? t + std::log1p(std::exp(-t)) : std::log1p(std::exp(t)));
                break;
            case Fam::Poisson: total += y[i] * t - std::exp(t) - std::lgamma(y[i] + 1.0); break;
            case Fam::Gauss: total += -0.5 * (y[i] - t) * (y[i] - t); break;
        }
    }
    return total;
}

/// Nelder-Mead simplex minimiser.
inline Eigen::VectorXd nelder_mead(const std::function<double(const Eigen::VectorXd&)>& f,
                                   Eigen::VectorXd x0, double scale, int max_eval = 200000,
                                   double ftol = 1e-15) {
    const Eigen::Index d = x0.size();
    std::vector<Eigen::VectorXd> pts(d + 1, x0);
    std::vector<double> val(d + 1);
    for (Eigen::Index j = 0; j < d; ++j) {
        pts[j + 1][j] += scale;
    }
    for (Eigen::Index j = 0; j <= d; ++j) {
        val[j] = f(pts[j]);
    }
    int evals = static_cast<int>(d + 1);
    std::vector<Eigen::Index> order(d + 1);
    while (evals < max_eval) {
        for (Eigen::Index j = 0; j <= d; ++j) order[j] = j;
        std::sort(order.begin(), order.end(), [&](auto a, auto b) { return val[a] < val[b]; });
        const Eigen::Index best = order[0], worst = order[d], second = order[d - 1];
        double size = 0.0;
        for (Eigen::Index j = 0; j <= d; ++j) {
            size = std::max(size, (pts[j] - pts[best]).cwiseAbs().maxCoeff());
        }
        if (std::abs(val[worst] - val[best]) <= ftol * (1.0 + std::abs(val[best])) && size < 1e-10) {
            break;
        }
        Eigen::VectorXd centroid = Eigen::VectorXd::Zero(d);
        for (Eigen::Index j = 0; j <= d; ++j) {
            if (j != worst) centroid += pts[j];
        }
        centroid /= static_cast<double>(d);
        const Eigen::VectorXd xr = centroid + (centroid - pts[worst]);
        const double fr = f(xr);
        ++evals;
        if (fr < val[best]) {
            const Eigen::VectorXd xe = centroid + 2.0 * (centroid - pts[worst]);
            const double fe = f(xe);
            ++evals;
            if (fe < fr) {
                pts[worst] = xe;
                val[worst] = fe;
            } else {
                pts[worst] = xr;
                val[worst] = fr;
            }
        } else if (fr < val[second]) {
            pts[worst] = xr;
            val[worst] = fr;
        } else {
            const bool outside = fr < val[worst];
            const Eigen::VectorXd xc = outside ? Eigen::VectorXd(centroid + 0.5 * (xr - centroid))
                                               : Eigen::VectorXd(centroid + 0.5 * (pts[worst] - centroid));
            const double fc = f(xc);
            ++evals;
            if (fc < std::min(fr, val[worst])) {
                pts[worst] = xc;
                val[worst] = fc;
            } else {
                for (Eigen::Index j = 0; j <= d; ++j) {
                    if (j == best) continue;
                    pts[j] = pts[best] + 0.5 * (pts[j] - pts[best]);
                    val[j] = f(pts[j]);
                    ++evals;
                }
            }
        }
    }
    Eigen::Index best = 0;
    for (Eigen::Index j = 1; j <= d; ++j) {
        if (val[j] < val[best]) best = j;
    }
    return pts[best];
}

/// Global search: Nelder-Mead from `starts` random points, each polished by
/// restarting from its own optimum, returning the best maximiser of f.
inline Eigen::VectorXd global_maximise(const std::function<double(const Eigen::VectorXd&)>& f,
                                       Eigen::Index d, int starts, std::mt19937_64& gen) {
    std::uniform_real_distribution<double> unif(-2.0, 2.0);
    auto neg = [&](const Eigen::VectorXd& x) { return -f(x); };
    Eigen::VectorXd best;
    double best_val = -std::numeric_limits<double>::infinity();
    for (int s = 0; s < starts; ++s) {
        Eigen::VectorXd x(d);
        for (Eigen::Index j = 0; j < d; ++j) x[j] = unif(gen);
        for (int polish = 0; polish < 6; ++polish) {
            x = nelder_mead(neg, x, polish == 0 ? 0.5 : 1e-3);
        }
        const double v = f(x);
        if (v > best_val) {
            best_val = v;
            best = x;
        }
    }
    return best;
}

/// Asymptotic Kolmogorov-Smirnov p-value against the standard normal CDF.
inline double ks_normal_pvalue(std::vector<double> z) {
    std::sort(z.begin(), z.end());
    const double m = static_cast<double>(z.size());
    double d = 0.0;
    for (std::size_t i = 0; i < z.size(); ++i) {
        const double F = 0.5 * std::erfc(-z[i] / std::sqrt(2.0));
        d = std::max({d, (i + 1) / m - F, F - i / m});
    }
    const double lambda = (std::sqrt(m) + 0.12 + 0.11 / std::sqrt(m)) * d;
    double p = 0.0;
    for (int k = 1; k <= 100; ++k) {
        p += 2.0 * ((k % 2) ? 1.0 : -1.0) * std::exp(-2.0 * k * k * lambda * lambda);
    }
    return std::clamp(p, 0.0, 1.0);
}

/// Largest singular value through the eigenvalues of M^T M.
inline double spectral_norm(const Eigen::MatrixXd& M) {
    const Eigen::MatrixXd gram = M.transpose() * M;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(gram, Eigen::EigenvaluesOnly);
    return std::sqrt(std::max(0.0, es.eigenvalues().maxCoeff()));
}

/// Orthonormal basis from the left singular vectors (not QR).
inline Eigen::MatrixXd orth(const Eigen::MatrixXd& A) {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeThinU);
    return svd.matrixU();
}

/// Cosines of principal angles, descending, from the spectrum of Q_A^T P_B Q_A.
inline Eigen::VectorXd principal_cosines(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B) {
    const Eigen::MatrixXd QA = orth(A), QB = orth(B);
    const Eigen::MatrixXd M = QA.transpose() * QB * QB.transpose() * QA;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(M);
    Eigen::VectorXd c = es.eigenvalues().cwiseMax(0.0).cwiseSqrt().reverse();
    return c;
}

/// Pairwise Mann-Whitney count: positives beating negatives, ties one half.
inline double auc_pairs(const std::vector<double>& s, const std::vector<int>& y) {
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        for (std::size_t j = 0; j < s.size(); ++j) {
            if (y[i] == 1 && y[j] == 0) {
                den += 1.0;
                num += s[i] > s[j] ? 1.0 : (s[i] == s[j] ? 0.5 : 0.0);
            }
        }
    }
    return num / den;
}

/// Categorical assortativity from an explicit list of edge stubs: both
/// orientations of every edge are listed, then
/// r = (P[same level] - sum_k q_k^2) / (1 - sum_k q_k^2) with q_k the weight
/// share of stubs at level k. Returns NaN when undefined.
struct StubEdge {
    int u, v;
    double w;
};

inline double assortativity_stubs(const std::vector<StubEdge>& edges, const std::vector<int>& level,
                                  int levels) {
    std::vector<std::pair<int, int>> stubs;
    std::vector<double> weight;
    for (const auto& e : edges) {
        stubs.push_back({level[e.u], level[e.v]});
        weight.push_back(e.w);
        stubs.push_back({level[e.v], level[e.u]});
        weight.push_back(e.w);
    }
    double total = 0.0, same = 0.0;
    std::vector<double> q(levels, 0.0);
    for (std::size_t k = 0; k < stubs.size(); ++k) {
        total += weight[k];
        if (stubs[k].first == stubs[k].second) same += weight[k];
        q[stubs[k].first] += weight[k];
    }
    if (total <= 0.0) return std::numeric_limits<double>::quiet_NaN();
    double expected = 0.0;
    for (double& qk : q) {
        qk /= total;
        expected += qk * qk;
    }
    if (expected >= 1.0 - 1e-14) return std::numeric_limits<double>::quiet_NaN();
    return (same / total - expected) / (1.0 - expected);
}

}  // namespace oracle
