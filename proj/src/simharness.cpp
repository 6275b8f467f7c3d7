#include "netglm/simharness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <limits>
#include <thread>

#include "netglm/errors.hpp"
#include "netglm/rng.hpp"
#include "netglm/subspace.hpp"

namespace netglm {

void ScenarioConfig::validate() const {
    if (outer_reps < 1 || inner_reps < 1) {
        throw ConfigError("replicate counts must be >= 1");
    }
    if (K_fit < 1) {
        throw ConfigError("K_fit must be >= 1");
    }
    if (n < 5) {
        throw ConfigError("n must be >= 5");
    }
    if (K_fit + 1 >= n) {
        throw ConfigError("K_fit must be smaller than n - 1");
    }
    if (r_fit && (*r_fit < 0 || *r_fit > std::min<Eigen::Index>(2, K_fit))) {
        throw ConfigError("r_fit must lie in [0, min(p, K_fit)]");
    }
    if (family.kind == FamilyKind::GaussianIdentity) {
        throw ConfigError("scenarios support the logit and poisson families");
    }
    if (estimate_r && r_fit) {
        throw ConfigError("estimate_r and r_fit are mutually exclusive");
    }
    if (threads < 1) {
        throw ConfigError("threads must be >= 1");
    }
}

double median(std::vector<double> values) {
    if (values.empty()) {
        throw ConfigError("median of an empty sample");
    }
    const std::size_t mid = values.size() / 2;
    std::nth_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid), values.end());
    const double hi = values[mid];
    if (values.size() % 2 == 1) {
        return hi;
    }
    const double lo = *std::max_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid));
    return 0.5 * (lo + hi);
}

ReplicateMetrics replicate_metrics(const FittedModel& fit, const SimTruth& truth,
                                   const WaldResult* wald, const ChiSqResult* chisq) {
    ReplicateMetrics out;
    if (!fit.convergence.converged) {
        return out;
    }
    out.valid = true;
    const double beta2 = truth.beta(1);
    const double est = wald ? wald->estimate : 0.0;
    out.mse_beta2 = (est - beta2) * (est - beta2);
    out.covered = wald && wald->ci95.first <= beta2 && beta2 <= wald->ci95.second;
    const Eigen::VectorXd target = truth.mean();
    out.mspe = (fit.mu - target).squaredNorm() / static_cast<double>(fit.n);
    out.rejected = chisq && chisq->p_value < 0.05;
    return out;
}

ProbMatrix scenario_matrix(const ScenarioConfig& cfg) {
    const double deg = target_degree(cfg.degree_rule, cfg.n);
    switch (cfg.generator) {
        case GeneratorKind::Sbm:
            return sbm_matrix(cfg.n, cfg.blocks, cfg.out_in, deg);
        case GeneratorKind::Dcbm: {
            CounterRng rng = make_stream(cfg.seed, 0, "degree-params");
            return dcbm_matrix(cfg.n, cfg.blocks, cfg.out_in, draw_degree_params(cfg.n, rng), deg);
        }
        case GeneratorKind::Graphon:
            return graphon_matrix(cfg.n, deg);
    }
    throw ConfigError("unknown generator");
}

namespace {

double mean_or_nan(double sum, int count) {
    return count > 0 ? sum / count : std::numeric_limits<double>::quiet_NaN();
}

OuterSummary run_outer(const ScenarioConfig& cfg, const ProbMatrix& prob, const SimTruth& truth,
                       int outer) {
    OuterSummary out;
    out.outer_index = outer;
    out.tau = std::numeric_limits<double>::quiet_NaN();

    CounterRng arng = make_stream(cfg.seed, static_cast<std::uint64_t>(outer), "adjacency");
    const Eigen::MatrixXd A = sample_adjacency(prob, arng);

    AlignedBases bases;
    try {
        const SpectralBasis spec = spectral_basis(A, cfg.K_fit, SpectralMode::AdjacencyLeading);
        bases = align_subspaces(orthonormal_basis(truth.X), spec.vectors);
        int r = cfg.r_fit ? *cfg.r_fit : truth.r;
        if (cfg.estimate_r) {
            r = select_r(bases.sigma, average_degree(A), bases.p, bases.K, bases.n);
        }
        bases = with_r(std::move(bases), r);
    } catch (const Error&) {
        out.invalid = cfg.inner_reps;
        out.unstable = true;
        return out;
    }
    out.r_used = bases.r;
    if (cfg.K_fit == truth.oracle.K) {
        out.tau = tau_diagnostic(bases.W, truth.oracle.W, truth.oracle.Z, truth.oracle.sigma,
                                 truth.r, truth.s)
                      .tau;
    }

    const EffectiveDesign design = build_design(bases);
    const bool beta_testable = bases.r < bases.p;
    const bool network_block = bases.K > bases.r;
    Eigen::VectorXd u = Eigen::Vector2d(0.0, 1.0);

    double mse = 0.0, mspe = 0.0, base_mspe = 0.0;
    int covered = 0, rejected = 0, base_count = 0;
    const Eigen::VectorXd target = truth.mean();
    for (int j = 0; j < cfg.inner_reps; ++j) {
        CounterRng yrng = make_stream(cfg.seed, static_cast<std::uint64_t>(outer), "response",
                                      static_cast<std::uint64_t>(j));
        const Eigen::VectorXd y = sample_response(cfg.family, truth.eta, yrng);
        ReplicateMetrics m;
        try {
            const FittedModel fit = fit_model(truth.X, bases, design, y, cfg.family);
            std::optional<WaldResult> wald;
            std::optional<ChiSqResult> chisq;
            if (beta_testable) {
                wald = coef_test(fit, u, CoefBlock::Beta);
            }
            if (network_block) {
                chisq = network_effect_test(fit, design);
            }
            m = replicate_metrics(fit, truth, wald ? &*wald : nullptr, chisq ? &*chisq : nullptr);
        } catch (const Error&) {
            m.valid = false;
        }
        if (!m.valid) {
            ++out.invalid;
            continue;
        }
        ++out.valid;
        mse += m.mse_beta2;
        mspe += m.mspe;
        covered += m.covered ? 1 : 0;
        rejected += m.rejected ? 1 : 0;

        if (cfg.baseline) {
            try {
                const GlmSolution glm = irls_solve(truth.X, y, cfg.family);
                base_mspe += (mean_of(cfg.family, truth.X * glm.gamma) - target).squaredNorm() /
                             static_cast<double>(cfg.n);
                ++base_count;
            } catch (const Error&) {
            }
        }
    }
    out.mse_beta2 = mean_or_nan(mse, out.valid);
    out.mspe = mean_or_nan(mspe, out.valid);
    out.coverage = mean_or_nan(covered, out.valid);
    out.rejection = mean_or_nan(rejected, out.valid);
    out.baseline_mspe = mean_or_nan(base_mspe, base_count);
    out.unstable = out.invalid * 10 > cfg.inner_reps;
    return out;
}

double median_of(const std::vector<OuterSummary>& rows, double OuterSummary::*field) {
    std::vector<double> v;
    for (const auto& row : rows) {
        if (std::isfinite(row.*field)) {
            v.push_back(row.*field);
        }
    }
    return v.empty() ? std::numeric_limits<double>::quiet_NaN() : median(std::move(v));
}

}  // namespace

ScenarioReport run_scenario(const ScenarioConfig& cfg) {
    cfg.validate();
    const auto start = std::chrono::steady_clock::now();

    ScenarioReport report;
    report.config = cfg;
    const ProbMatrix prob = scenario_matrix(cfg);
    report.target_avg_degree = prob.target_avg_degree;
    if (prob.capped_entries > 0) {
        report.warnings.push_back(std::to_string(prob.capped_entries) +
                                  " probabilities capped at 1");
    }
    CounterRng drng = make_stream(cfg.seed, 0, "design");
    const SimTruth truth = paper_design(prob, cfg.family, drng, cfg.null_alpha);
    report.warnings.insert(report.warnings.end(), truth.warnings.begin(), truth.warnings.end());

    report.outer.resize(static_cast<std::size_t>(cfg.outer_reps));
    std::atomic<int> next{0};
    auto worker = [&] {
        for (int i = next++; i < cfg.outer_reps; i = next++) {
            report.outer[static_cast<std::size_t>(i)] = run_outer(cfg, prob, truth, i);
        }
    };
    const int nthreads = std::min(cfg.threads, cfg.outer_reps);
    if (nthreads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < nthreads; ++t) {
            pool.emplace_back(worker);
        }
        for (auto& th : pool) {
            th.join();
        }
    }

    for (const auto& row : report.outer) {
        report.invalid_total += row.invalid;
        report.unstable = report.unstable || row.unstable;
    }
    report.median_mse_beta2 = median_of(report.outer, &OuterSummary::mse_beta2);
    report.coverage_beta2 = median_of(report.outer, &OuterSummary::coverage);
    report.median_mspe = median_of(report.outer, &OuterSummary::mspe);
    report.median_baseline_mspe = median_of(report.outer, &OuterSummary::baseline_mspe);
    report.rejection_rate = median_of(report.outer, &OuterSummary::rejection);
    report.median_tau = median_of(report.outer, &OuterSummary::tau);
    report.runtime_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return report;
}

}  // namespace netglm
