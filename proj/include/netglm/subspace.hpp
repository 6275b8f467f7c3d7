#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

namespace netglm {

enum class SpectralMode { AdjacencyLeading, LaplacianSmallest };

SpectralMode parse_mode(const std::string& name);
std::string mode_name(SpectralMode mode);

/// K eigenvectors of a relational matrix (or of its Laplacian D - P).
/// Eigenvalues are descending for AdjacencyLeading, ascending for LaplacianSmallest.
struct SpectralBasis {
    Eigen::MatrixXd vectors;
    Eigen::VectorXd eigenvalues;
    SpectralMode mode = SpectralMode::AdjacencyLeading;
    /// Set when eigenvalue K and K+1 coincide, so the span is not unique.
    bool degenerate_gap = false;
    std::vector<std::string> warnings;
};

/// Rotated covariate and network bases.
///
/// With Zbar^T Wbreve = U S V^T, Z = sqrt(n) Zbar U and W = sqrt(n) Wbreve V. The
/// first r columns of Z and W both span the estimated intersection subspace.
struct AlignedBases {
    Eigen::MatrixXd Z;      // n x p
    Eigen::MatrixXd W;      // n x K
    Eigen::VectorXd sigma;  // K singular values in [0, 1], nonincreasing, zero padded
    Eigen::MatrixXd U;      // p x p
    Eigen::MatrixXd V;      // K x K
    int r = -1;             // unset until select_r or the caller fixes it
    Eigen::Index n = 0;
    Eigen::Index p = 0;
    Eigen::Index K = 0;

    bool has_r() const { return r >= 0; }
};

/// Orthonormal basis of col(X) by Householder QR with positive R diagonal
/// (identical to Gram-Schmidt). Throws DegenerateDesignError when
/// sigma_min(X) < 1e-10 sigma_max(X).
Eigen::MatrixXd orthonormal_basis(const Eigen::MatrixXd& X);

SpectralBasis spectral_basis(const Eigen::MatrixXd& P, Eigen::Index K,
                             SpectralMode mode = SpectralMode::AdjacencyLeading);

AlignedBases align_subspaces(const Eigen::MatrixXd& Zbar, const Eigen::MatrixXd& Wbreve);

/// (1/n) sum_ij P_ij.
double average_degree(const Eigen::MatrixXd& P);

double select_r_threshold(double dhat, Eigen::Index p, Eigen::Index K, Eigen::Index n);

/// Largest i with sigma_i >= 1 - 4 sqrt(p K log n) / dhat, 0 if none, capped at min(p, K).
int select_r(const Eigen::VectorXd& sigma, double dhat, Eigen::Index p, Eigen::Index K,
             Eigen::Index n);

/// Returns a copy with r set; throws ConfigError if r is outside [0, min(p, K)].
AlignedBases with_r(AlignedBases bases, int r);

struct Projections {
    Eigen::MatrixXd R;  // onto the intersection estimate
    Eigen::MatrixXd C;  // covariate complement
    Eigen::MatrixXd N;  // network complement
};

Projections projection_matrices(const AlignedBases& bases);

struct TauDiagnostic {
    double tau = 0.0;
    double numerator = 0.0;    // n^{-3/2} ||(W~W~^T - WW^T) Z||
    double denominator = 0.0;  // min{(1 - sigma_{r+1})^3, sigma_{r+s}^3}
    bool s_term_dropped = false;
};

/// Perturbation diagnostic comparing the estimated network basis against the
/// oracle one. Only meaningful in simulation, where W, Z and sigma are known.
TauDiagnostic tau_diagnostic(const Eigen::MatrixXd& W_est, const Eigen::MatrixXd& W_true,
                             const Eigen::MatrixXd& Z_true, const Eigen::VectorXd& sigma_true,
                             int r, int s);

}  // namespace netglm
