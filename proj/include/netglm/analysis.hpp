#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "netglm/errors.hpp"
#include "netglm/estimator.hpp"

namespace netglm {

struct Edge {
    Eigen::Index u = 0;
    Eigen::Index v = 0;
    double weight = 1.0;
};

class UndefinedAssortativityError : public DataError {
public:
    using DataError::DataError;
};

/// Node-level data set with one or two edge waves over the node list `ids`.
struct NetworkDataset {
    std::vector<std::string> ids;
    std::vector<std::vector<Edge>> waves;
    Eigen::MatrixXd covariates;
    std::vector<std::string> covariate_names;
    Eigen::VectorXd response;
    std::vector<std::string> group;  // empty: a single group
};

struct PrepareOptions {
    bool average_waves = true;
    bool per_group_lcc = true;
    bool dummy_groups = true;
    bool intercept = true;
};

struct PreparedData {
    NetworkDataset data;        // restricted to the retained nodes, with re-indexed edges
    std::vector<Edge> edges;    // merged (averaged) undirected edges, u < v
    Eigen::MatrixXd P;          // weighted adjacency of `edges`
    Eigen::MatrixXd X;          // [intercept | covariates | group dummies]
    std::vector<std::string> column_names;
    std::vector<Eigen::Index> kept;  // original node indices
    std::vector<std::string> warnings;
};

/// Averages waves, keeps the largest connected component (per group or
/// overall) and appends group dummies with the lexicographically first group as
/// the reference. Ties between largest components go to the one with the
/// lowest minimum node index.
PreparedData prepare(const NetworkDataset& raw, const PrepareOptions& opts = {});

/// Connected components, each sorted ascending, ordered by their minimum node.
std::vector<std::vector<Eigen::Index>> connected_components(Eigen::Index n,
                                                            const std::vector<Edge>& edges);

/// Merges duplicate undirected pairs (weights summed), drops self-loops and
/// non-positive weights, and orders each pair so that u < v.
std::vector<Edge> canonical_edges(const std::vector<Edge>& edges);

/// Entrywise average of several waves over the same node set.
std::vector<Edge> average_waves(const std::vector<std::vector<Edge>>& waves);

struct AssortativityResult {
    double r = 0.0;
    double se = 0.0;
    int skipped = 0;  // leave-one-out replicates with undefined r
};

/// (sum_i e_ii - sum_i a_i b_i) / (1 - sum_i a_i b_i) on the weighted,
/// symmetric mixing matrix of categorical levels.
double assortativity_coefficient(const std::vector<Edge>& edges, const std::vector<int>& level);

/// Coefficient plus jackknife se^2 = sum_e (r_(-e) - r)^2 over single-edge deletions.
AssortativityResult assortativity(const std::vector<Edge>& edges, const std::vector<int>& level);

/// Integer codes for string labels (sorted lexicographically).
std::vector<int> encode_levels(const std::vector<std::string>& labels,
                               std::vector<std::string>* levels = nullptr);

struct CovariateTest {
    std::string name;
    double estimate = 0.0;
    double se = 0.0;
    double p_value = 1.0;
    bool theta_block = false;  // tested through theta because beta was degenerate
};

/// Wald tests of every column of X in a fitted model (u = e_j).
std::vector<CovariateTest> covariate_tests(const SubspaceFit& fit,
                                           const std::vector<std::string>& names);

struct EliminationStep {
    std::string dropped;
    double p_value = 1.0;
    double adjusted = 1.0;
    int candidates = 0;
};

struct EliminationResult {
    std::vector<std::string> names;
    std::vector<Eigen::Index> columns;  // indices into the original X
    SubspaceFit fit;
    std::vector<CovariateTest> tests;
    std::vector<EliminationStep> trace;
    bool intercept_only = false;
};

/// Network basis computed once and reused across refits with column subsets.
struct NetworkBasis {
    SpectralBasis spectral;
    double dhat = 0.0;
};

NetworkBasis network_basis(const Eigen::MatrixXd& P, const FitConfig& config);

/// Fits on the rows `rows` (all rows when empty) with the network basis held fixed.
SubspaceFit fit_with_basis(const Eigen::MatrixXd& X, const NetworkBasis& net,
                           const Eigen::VectorXd& y, const GlmFamily& family,
                           const FitConfig& config, const std::vector<Eigen::Index>& rows = {});

/// Repeatedly drops the column with the largest Bonferroni-adjusted p-value
/// above `level` (divisor: number of droppable columns in the current model).
/// Columns flagged in `keep` (the intercept) are never dropped.
EliminationResult backward_eliminate(const Eigen::MatrixXd& X,
                                     const std::vector<std::string>& names,
                                     const NetworkBasis& net, const Eigen::VectorXd& y,
                                     const GlmFamily& family, const FitConfig& config,
                                     double level = 0.05, const std::vector<bool>& keep = {},
                                     const std::vector<Eigen::Index>& rows = {});

struct RocPoint {
    double fpr = 0.0;
    double tpr = 0.0;
    double threshold = 0.0;
};

/// Mann-Whitney AUC; ties between a positive and a negative count one half.
double auc(const Eigen::VectorXd& scores, const Eigen::VectorXd& labels);

/// ROC points from the highest threshold down, starting at (0, 0).
std::vector<RocPoint> roc_curve(const Eigen::VectorXd& scores, const Eigen::VectorXd& labels);

/// Seeded random partition of n rows into `folds` nearly equal folds.
std::vector<int> fold_assignment(Eigen::Index n, int folds, std::uint64_t seed);

struct CvOptions {
    int folds = 200;
    std::uint64_t seed = 1;
    bool reselect = false;  // rerun backward elimination inside each fold
    double level = 0.05;
};

struct CvResult {
    std::vector<RocPoint> roc;
    double auc = 0.5;
    Eigen::VectorXd scores;  // pooled held-out predictions (NaN for skipped rows)
    int skipped_folds = 0;
    std::vector<std::string> warnings;
};

/// Transductive cross-validation: the network basis uses the full graph, the
/// coefficients are fitted on the training rows and held-out nodes are scored
/// with h(g_i^T gamma_hat).
CvResult cv_auc(const Eigen::MatrixXd& X, const std::vector<std::string>& names,
                const NetworkBasis& net, const Eigen::VectorXd& y, const FitConfig& config,
                const CvOptions& opts, const std::vector<bool>& keep = {});

struct Centralities {
    Eigen::VectorXd degree;
    Eigen::VectorXd eigenvector;  // leading eigenvector of A, max entry 1
    Eigen::VectorXd betweenness;  // unnormalised, each unordered pair counted once
    Eigen::VectorXd closeness;    // (size - 1) / sum of distances within the component
};

Centralities centralities(Eigen::Index n, const std::vector<Edge>& edges);

struct GroupStrength {
    std::string group;
    double t = 0.0;
    bool infinite = false;
};

/// t_j = sum_{i in j} |alpha_i| / sum_{i in j} |x_i^T beta|, sorted descending.
std::vector<GroupStrength> effect_strength(const Eigen::VectorXd& alpha, const Eigen::MatrixXd& X,
                                           const Eigen::VectorXd& beta,
                                           const std::vector<std::string>& group);

std::vector<GroupStrength> effect_strength(const FittedModel& fit, const Eigen::MatrixXd& X,
                                           const std::vector<std::string>& group);

double pearson(const Eigen::VectorXd& a, const Eigen::VectorXd& b);

}  // namespace netglm
