#include "netglm/subspace.hpp"

#include <algorithm>
#include <cmath>

#include "netglm/errors.hpp"
#include "netglm/linalg.hpp"

namespace netglm {

namespace {

// Flip each column so that its largest-magnitude entry (first one on ties) is positive.
void fix_signs(Eigen::MatrixXd& vectors) {
    for (Eigen::Index j = 0; j < vectors.cols(); ++j) {
        Eigen::Index arg = 0;
        double best = -1.0;
        for (Eigen::Index i = 0; i < vectors.rows(); ++i) {
            const double a = std::abs(vectors(i, j));
            if (a > best) {
                best = a;
                arg = i;
            }
        }
        if (vectors(arg, j) < 0.0) {
            vectors.col(j) = -vectors.col(j);
        }
    }
}

}  // namespace

SpectralMode parse_mode(const std::string& name) {
    if (name == "adjacency" || name == "adjacency-leading") {
        return SpectralMode::AdjacencyLeading;
    }
    if (name == "laplacian" || name == "laplacian-smallest") {
        return SpectralMode::LaplacianSmallest;
    }
    throw ConfigError("unknown spectral mode '" + name + "'");
}

std::string mode_name(SpectralMode mode) {
    return mode == SpectralMode::AdjacencyLeading ? "adjacency" : "laplacian";
}

Eigen::MatrixXd orthonormal_basis(const Eigen::MatrixXd& X) {
    const Eigen::Index n = X.rows();
    const Eigen::Index p = X.cols();
    if (p == 0 || n < p) {
        throw DegenerateDesignError("design needs at least one column and n >= p");
    }
    if (!X.allFinite()) {
        throw DegenerateDesignError("design contains non-finite entries");
    }
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(X);
    const Eigen::VectorXd& sv = svd.singularValues();
    if (!(sv(p - 1) >= 1e-10 * sv(0)) || sv(0) == 0.0) {
        throw DegenerateDesignError("design matrix is rank deficient");
    }
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(X);
    Eigen::MatrixXd Q = qr.householderQ() * Eigen::MatrixXd::Identity(n, p);
    const Eigen::MatrixXd& packed = qr.matrixQR();
    for (Eigen::Index j = 0; j < p; ++j) {
        if (packed(j, j) < 0.0) {
            Q.col(j) = -Q.col(j);
        }
    }
    return Q;
}

SpectralBasis spectral_basis(const Eigen::MatrixXd& P, Eigen::Index K, SpectralMode mode) {
    const Eigen::Index n = P.rows();
    if (P.cols() != n) {
        throw DataError("relational matrix must be square");
    }
    if (K < 1 || K >= n) {
        throw ConfigError("spectral_basis: need 1 <= K < n");
    }
    if (linalg::asymmetry(P) > 1e-8) {
        throw DataError("relational matrix is not symmetric");
    }

    SpectralBasis basis;
    basis.mode = mode;
    linalg::EigenPairs pairs;
    if (mode == SpectralMode::AdjacencyLeading) {
        pairs = linalg::symmetric_eigen_range(P, n - K - 1, K + 1);
        // Ascending on return; reverse to descending and drop the (K+1)-th.
        basis.eigenvalues = pairs.values.tail(K).reverse();
        basis.vectors = pairs.vectors.rightCols(K).rowwise().reverse();
    } else {
        Eigen::MatrixXd L = -P;
        L.diagonal() += P.rowwise().sum();
        pairs = linalg::symmetric_eigen_range(L, 0, K + 1);
        basis.eigenvalues = pairs.values.head(K);
        basis.vectors = pairs.vectors.leftCols(K);
    }
    const double next =
        mode == SpectralMode::AdjacencyLeading ? pairs.values(0) : pairs.values(K);
    const double scale = std::max(1.0, pairs.values.cwiseAbs().maxCoeff());
    if (std::abs(basis.eigenvalues(K - 1) - next) <= 1e-10 * scale) {
        basis.degenerate_gap = true;
        basis.warnings.push_back("eigenvalues K and K+1 coincide; S_K is not unique");
    }
    fix_signs(basis.vectors);
    return basis;
}

AlignedBases align_subspaces(const Eigen::MatrixXd& Zbar, const Eigen::MatrixXd& Wbreve) {
    const Eigen::Index n = Zbar.rows();
    if (Wbreve.rows() != n || Zbar.cols() < 1 || Wbreve.cols() < 1) {
        throw ConfigError("align_subspaces: basis shapes do not conform");
    }
    const Eigen::Index p = Zbar.cols();
    const Eigen::Index K = Wbreve.cols();
    const Eigen::MatrixXd cross = Zbar.transpose() * Wbreve;
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(cross, Eigen::ComputeFullU | Eigen::ComputeFullV);

    AlignedBases out;
    out.n = n;
    out.p = p;
    out.K = K;
    out.U = svd.matrixU();
    out.V = svd.matrixV();
    out.sigma = Eigen::VectorXd::Zero(K);
    const Eigen::VectorXd& sv = svd.singularValues();
    for (Eigen::Index i = 0; i < sv.size(); ++i) {
        out.sigma(i) = std::clamp(sv(i), 0.0, 1.0);
    }
    const double root_n = std::sqrt(static_cast<double>(n));
    out.Z = root_n * (Zbar * out.U);
    out.W = root_n * (Wbreve * out.V);
    return out;
}

double average_degree(const Eigen::MatrixXd& P) {
    return P.sum() / static_cast<double>(P.rows());
}

double select_r_threshold(double dhat, Eigen::Index p, Eigen::Index K, Eigen::Index n) {
    if (!(dhat > 0.0)) {
        throw EmptyNetworkError("average degree must be positive to select r");
    }
    const double pk_log_n =
        static_cast<double>(p) * static_cast<double>(K) * std::log(static_cast<double>(n));
    return 1.0 - 4.0 * std::sqrt(pk_log_n) / dhat;
}

int select_r(const Eigen::VectorXd& sigma, double dhat, Eigen::Index p, Eigen::Index K,
             Eigen::Index n) {
    const double threshold = select_r_threshold(dhat, p, K, n);
    int r = 0;
    for (Eigen::Index i = 0; i < sigma.size(); ++i) {
        if (sigma(i) >= threshold) {
            r = static_cast<int>(i + 1);
        }
    }
    return std::min<int>(r, static_cast<int>(std::min(p, K)));
}

AlignedBases with_r(AlignedBases bases, int r) {
    if (r < 0 || r > std::min(bases.p, bases.K)) {
        throw ConfigError("r must lie in [0, min(p, K)]");
    }
    bases.r = r;
    return bases;
}

Projections projection_matrices(const AlignedBases& bases) {
    if (!bases.has_r()) {
        throw ConfigError("projection_matrices: r is not set");
    }
    const Eigen::Index r = bases.r;
    const double n = static_cast<double>(bases.n);
    auto outer = [n](const Eigen::MatrixXd& block) -> Eigen::MatrixXd {
        if (block.cols() == 0) {
            return Eigen::MatrixXd::Zero(block.rows(), block.rows());
        }
        return block * block.transpose() / n;
    };
    Projections out;
    out.R = outer(bases.Z.leftCols(r));
    out.C = outer(bases.Z.rightCols(bases.p - r));
    out.N = outer(bases.W.rightCols(bases.K - r));
    return out;
}

TauDiagnostic tau_diagnostic(const Eigen::MatrixXd& W_est, const Eigen::MatrixXd& W_true,
                             const Eigen::MatrixXd& Z_true, const Eigen::VectorXd& sigma_true,
                             int r, int s) {
    const Eigen::Index n = W_true.rows();
    if (W_est.rows() != n || Z_true.rows() != n || W_est.cols() != W_true.cols()) {
        throw ConfigError("tau_diagnostic: shapes do not conform");
    }
    if (r < 0 || s < 0 || r + s > sigma_true.size()) {
        throw ConfigError("tau_diagnostic: r and s out of range");
    }
    const Eigen::MatrixXd diff =
        W_est * (W_est.transpose() * Z_true) - W_true * (W_true.transpose() * Z_true);
    TauDiagnostic out;
    out.numerator = linalg::spectral_norm(diff) / std::pow(static_cast<double>(n), 1.5);
    const double sigma_next = r < sigma_true.size() ? sigma_true(r) : 0.0;
    double denom = std::pow(1.0 - sigma_next, 3);
    if (s == 0) {
        out.s_term_dropped = true;
    } else {
        denom = std::min(denom, std::pow(sigma_true(r + s - 1), 3));
    }
    out.denominator = denom;
    out.tau = out.numerator / denom;
    return out;
}

}  // namespace netglm
