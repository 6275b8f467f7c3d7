#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "netglm/estimator.hpp"
#include "netglm/families.hpp"
#include "netglm/inference.hpp"
#include "netglm/netgen.hpp"

namespace netglm {

struct ScenarioConfig {
    GeneratorKind generator = GeneratorKind::Sbm;
    GlmFamily family = GlmFamily::bernoulli();
    Eigen::Index n = 1000;
    DegreeRule degree_rule = DegreeRule::SqrtN;
    int outer_reps = 50;
    int inner_reps = 500;
    Eigen::Index K_fit = 3;
    std::optional<int> r_fit;  // nullopt: the true r of the design
    bool estimate_r = false;   // select_r on each adjacency draw instead
    bool null_alpha = false;
    std::uint64_t seed = 1;
    int threads = 1;
    int blocks = 3;
    double out_in = 0.3;
    bool baseline = true;

    /// Throws ConfigError for invalid settings.
    void validate() const;
};

struct ReplicateMetrics {
    bool valid = false;
    double mse_beta2 = 0.0;
    double mspe = 0.0;
    bool covered = false;
    bool rejected = false;
};

/// Metrics of one fitted replicate against the truth. A null `wald` means
/// beta_2 is not estimable under the fitted r (counted as not covered, estimate 0);
/// a null `chisq` means no network block was fitted (never rejected).
ReplicateMetrics replicate_metrics(const FittedModel& fit, const SimTruth& truth,
                                   const WaldResult* wald, const ChiSqResult* chisq);

/// Inner-replicate means for one adjacency draw.
struct OuterSummary {
    int outer_index = 0;
    int r_used = 0;
    int valid = 0;
    int invalid = 0;
    bool unstable = false;
    double mse_beta2 = 0.0;
    double coverage = 0.0;
    double mspe = 0.0;
    double baseline_mspe = 0.0;
    double rejection = 0.0;
    double tau = 0.0;  // NaN when K_fit differs from the truth
};

struct ScenarioReport {
    ScenarioConfig config;
    double median_mse_beta2 = 0.0;
    double coverage_beta2 = 0.0;
    double median_mspe = 0.0;
    double median_baseline_mspe = 0.0;
    double rejection_rate = 0.0;
    double median_tau = 0.0;
    int invalid_total = 0;
    bool unstable = false;
    double target_avg_degree = 0.0;
    std::vector<std::string> warnings;
    std::vector<OuterSummary> outer;
    double runtime_seconds = 0.0;
};

/// Fixed probability matrix for a scenario (DCBM degree parameters come from the seed).
ProbMatrix scenario_matrix(const ScenarioConfig& cfg);

/// Outer loop over adjacency draws, inner loop over responses; medians across
/// outer draws. Results do not depend on cfg.threads.
ScenarioReport run_scenario(const ScenarioConfig& cfg);

/// Median of a non-empty sample (mean of the two middle values for even size).
double median(std::vector<double> values);

}  // namespace netglm
