#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "netglm/families.hpp"
#include "netglm/rng.hpp"
#include "netglm/subspace.hpp"

namespace netglm {

enum class GeneratorKind { Sbm, Dcbm, Graphon };

GeneratorKind parse_generator(const std::string& name);
std::string generator_name(GeneratorKind kind);

enum class DegreeRule { TwoLogN, SqrtN, NTwoThirds };

DegreeRule parse_degree_rule(const std::string& name);
std::string degree_rule_name(DegreeRule rule);
double target_degree(DegreeRule rule, Eigen::Index n);

/// Symmetric edge-probability matrix with zero diagonal.
struct ProbMatrix {
    Eigen::MatrixXd P;
    double target_avg_degree = 0.0;
    GeneratorKind kind = GeneratorKind::Sbm;
    std::vector<int> membership;  // block labels (empty for the graphon)
    long capped_entries = 0;      // off-diagonal pairs clipped at probability 1
};

/// Contiguous equal-size blocks; the remainder goes to the last one.
std::vector<int> block_membership(Eigen::Index n, int blocks);

/// Within-block probability w and between-block out_in * w.
ProbMatrix sbm_matrix(Eigen::Index n, int blocks, double out_in, double avg_deg);

/// P_ij = c psi_i psi_j B_{c(i) c(j)}, capped at 1, c fitted to avg_deg.
ProbMatrix dcbm_matrix(Eigen::Index n, int blocks, double out_in,
                       const Eigen::VectorXd& degree_params, double avg_deg);

/// Degree propensities drawn uniformly on [lo, hi].
Eigen::VectorXd draw_degree_params(Eigen::Index n, CounterRng& rng, double lo = 0.2,
                                   double hi = 1.0);

/// g(u, v) = c / (1 + exp(15 (0.8 |u - v|)^{4/5} - 0.1)) on the grid u_i = i / n.
ProbMatrix graphon_matrix(Eigen::Index n, double avg_deg);

/// Unscaled graphon kernel (c = 1).
double graphon_kernel(double u, double v);

/// A_ij = A_ji ~ Bernoulli(P_ij) for i < j; zero diagonal.
Eigen::MatrixXd sample_adjacency(const ProbMatrix& prob, CounterRng& rng);

/// Ground truth for the two-covariate simulation design.
struct SimTruth {
    GlmFamily family;
    Eigen::MatrixXd X;  // n x 2, columns of norm sqrt(n)
    Eigen::VectorXd beta;
    Eigen::VectorXd theta;
    Eigen::VectorXd gamma;
    Eigen::VectorXd alpha;
    Eigen::VectorXd eta;
    AlignedBases oracle;        // alignment of col(X) with the exact K = 3 eigenspace
    Eigen::MatrixXd eigvecs;    // w_1, ..., w_4 actually used
    int r = 1;
    int s = 1;
    std::vector<std::string> warnings;

    Eigen::VectorXd mean() const { return mean_of(family, eta); }
};

/// X_1 = sqrt(n) w_1, X_2 = sqrt(n)(w_2 / 5 + 2 sqrt(6) w_4 / 5), beta = (0, 0.5),
/// theta = (0.5, 0), network coefficients (0.5, 0.5) (or zero when null_alpha).
///
/// w_4 must be orthogonal to w_1..w_3. For the graphon the fourth eigenvector is
/// used. Block models have a (near-)degenerate eigenspace beyond the third
/// eigenvalue, so a delocalised Gaussian direction from `rng`, projected off
/// w_1..w_3, is used instead.
SimTruth paper_design(const ProbMatrix& prob, const GlmFamily& family, CounterRng& rng,
                      bool null_alpha = false);

/// Independent draws with mean h(eta_i). Gaussian noise has variance equal to
/// the dispersion; zero_noise returns eta itself for the Gaussian family.
Eigen::VectorXd sample_response(const GlmFamily& family, const Eigen::VectorXd& eta,
                                CounterRng& rng, bool zero_noise = false);

}  // namespace netglm
