// netglm: command-line front end for network-subspace GLMs.

#include <cmath>
#include <cstdint>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "netglm/analysis.hpp"
#include "netglm/errors.hpp"
#include "netglm/estimator.hpp"
#include "netglm/inference.hpp"
#include "netglm/io.hpp"
#include "netglm/netgen.hpp"
#include "netglm/rng.hpp"
#include "netglm/simharness.hpp"
#include "netglm/subspace.hpp"

namespace fs = std::filesystem;
using netglm::io::json;

namespace {

struct Globals {
    std::uint64_t seed = 1;
    std::string out = ".";
    int threads = 1;
    bool json_logs = false;
    int verbosity = 1;
};

Globals g;

void log(const std::string& level, const std::string& msg) {
    if (level == "debug" && g.verbosity < 2) {
        return;
    }
    if (level == "info" && g.verbosity < 1) {
        return;
    }
    if (g.json_logs) {
        json j;
        j["ts"] = static_cast<long long>(std::time(nullptr));
        j["level"] = level;
        j["msg"] = msg;
        std::cerr << j.dump() << '\n';
    } else {
        std::cerr << "[" << level << "] " << msg << '\n';
    }
}

void log_all(const std::vector<std::string>& warnings) {
    for (const auto& w : warnings) {
        log("warn", w);
    }
}

std::string out_path(const std::string& name) {
    fs::create_directories(g.out);
    return (fs::path(g.out) / name).string();
}

json vec_json(const Eigen::VectorXd& v) {
    json a = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        a.push_back(v(i));
    }
    return a;
}

json mat_json(const Eigen::MatrixXd& m) {
    json a = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        a.push_back(vec_json(m.row(i).transpose()));
    }
    return a;
}

// ---------------------------------------------------------------------------
// Shared model inputs for fit / test / select-r.

struct ModelInputs {
    std::vector<std::string> network;
    std::string embedding;
    std::string format = "edgelist";
    std::string covariates;
    std::string response;
    std::vector<std::string> columns;
    std::vector<std::string> categorical;
    std::string family = "logit";
    double dispersion = 1.0;
    int K = 3;
    int r = -1;
    std::string mode = "adjacency";
    bool no_intercept = false;
    int max_iter = 100;

    void add_options(CLI::App* app, bool need_response) {
        app->add_option("--network", network, "Relational matrix file(s); two files are averaged")
            ->expected(1, 2);
        app->add_option("--embedding", embedding,
                        "n x k embedding CSV; the relational matrix is F F^T");
        app->add_option("--format", format,
                        "Relational format: edgelist (0-based 'i j [w]') or dense_csv")
            ->check(CLI::IsMember({"edgelist", "dense_csv"}));
        app->add_option("--covariates", covariates, "Covariate CSV with an 'id' column")
            ->required();
        auto* resp = app->add_option("--response", response, "Response column");
        if (need_response) {
            resp->required();
        }
        app->add_option("--columns", columns, "Covariate columns (default: all others)");
        app->add_option("--categorical", categorical, "Columns to treat as categorical");
        app->add_option("--family", family, "logit | poisson | gaussian")
            ->check(CLI::IsMember({"logit", "poisson", "gaussian"}));
        app->add_option("--dispersion", dispersion, "Gaussian dispersion");
        app->add_option("--K", K, "Network subspace dimension")->check(CLI::PositiveNumber);
        app->add_option("--r", r, "Intersection dimension (default: estimated)");
        app->add_option("--mode", mode, "adjacency | laplacian")
            ->check(CLI::IsMember({"adjacency", "laplacian"}));
        app->add_flag("--no-intercept", no_intercept, "Do not add an intercept column");
        app->add_option("--max-iter", max_iter, "IRLS iteration limit");
    }

    json to_json() const {
        json j;
        j["network"] = network;
        j["embedding"] = embedding;
        j["format"] = format;
        j["covariates"] = covariates;
        j["response"] = response;
        j["columns"] = columns;
        j["categorical"] = categorical;
        j["family"] = family;
        j["dispersion"] = dispersion;
        j["K"] = K;
        j["r"] = r;
        j["mode"] = mode;
        j["intercept"] = !no_intercept;
        j["max_iter"] = max_iter;
        return j;
    }

    netglm::FitConfig fit_config() const {
        netglm::FitConfig cfg;
        cfg.K = K;
        if (r >= 0) {
            cfg.r = r;
        }
        cfg.mode = netglm::parse_mode(mode);
        cfg.irls.max_iter = max_iter;
        return cfg;
    }
};

struct LoadedModel {
    Eigen::MatrixXd P;
    Eigen::MatrixXd X;
    std::vector<std::string> names;
    Eigen::VectorXd y;
    std::vector<std::string> ids;
};

LoadedModel load_model(const ModelInputs& in) {
    if (in.network.empty() == in.embedding.empty()) {
        throw netglm::ConfigError("give exactly one of --network or --embedding");
    }
    std::vector<std::string> warnings;
    Eigen::MatrixXd P =
        in.embedding.empty()
            ? netglm::io::load_relational(in.network, netglm::io::parse_rel_format(in.format),
                                          std::nullopt, &warnings)
            : netglm::io::load_embedding_similarity(in.embedding);
    log_all(warnings);
    const Eigen::Index n = P.rows();
    std::vector<std::string> order;
    for (Eigen::Index i = 0; i < n; ++i) {
        order.push_back(std::to_string(i));
    }
    netglm::io::TabularOptions topts;
    if (!in.response.empty()) {
        topts.response = in.response;
    }
    topts.covariates = in.columns;
    topts.categorical = in.categorical;
    netglm::io::TabularData tab = netglm::io::load_tabular(in.covariates, topts, &order);
    log_all(tab.warnings);

    // Restrict the network to nodes that have a complete covariate row.
    std::vector<Eigen::Index> keep;
    for (const auto& id : tab.ids) {
        keep.push_back(std::stol(id));
    }
    if (!tab.unmatched_ids.empty()) {
        log("warn", std::to_string(tab.unmatched_ids.size()) +
                        " network nodes have no usable covariate row and are removed");
    }
    LoadedModel out;
    out.ids = tab.ids;
    out.P.resize(static_cast<Eigen::Index>(keep.size()), static_cast<Eigen::Index>(keep.size()));
    for (std::size_t a = 0; a < keep.size(); ++a) {
        for (std::size_t b = 0; b < keep.size(); ++b) {
            out.P(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) = P(keep[a], keep[b]);
        }
    }
    const Eigen::Index m = out.P.rows();
    const Eigen::Index icpt = in.no_intercept ? 0 : 1;
    out.X.resize(m, icpt + tab.covariates.cols());
    if (icpt) {
        out.X.col(0).setOnes();
        out.names.push_back("(Intercept)");
    }
    out.X.rightCols(tab.covariates.cols()) = tab.covariates;
    out.names.insert(out.names.end(), tab.names.begin(), tab.names.end());
    out.y = tab.response;
    return out;
}

json fit_json(const netglm::SubspaceFit& fit, const std::vector<std::string>& names) {
    const netglm::FittedModel& m = fit.model;
    json j;
    j["n"] = m.n;
    j["p"] = m.p;
    j["K"] = m.K;
    j["r"] = m.r;
    j["r_selected"] = fit.r_selected;
    j["dhat"] = fit.dhat;
    if (fit.r_selected) {
        j["r_threshold"] = fit.r_threshold;
    }
    j["sigma"] = vec_json(fit.bases.sigma);
    j["columns"] = names;
    j["gamma"] = vec_json(m.gamma);
    j["theta"] = vec_json(m.theta);
    j["beta"] = vec_json(m.beta);
    j["convergence"] = {{"iterations", m.convergence.iterations},
                        {"score_norm", m.convergence.score_norm},
                        {"converged", m.convergence.converged},
                        {"quasi_separation", m.convergence.quasi_separation},
                        {"potentially_non_unique", m.convergence.potentially_non_unique}};
    j["spectral_warnings"] = fit.spectral.warnings;
    return j;
}

// ---------------------------------------------------------------------------

int cmd_generate(const std::string& generator, Eigen::Index n, const std::string& degree,
                 double avg_degree, int blocks, double out_in, const std::string& family,
                 bool null_alpha, const std::string& format, bool write_p) {
    json cfg{{"generator", generator}, {"n", n},          {"degree_rule", degree},
             {"avg_degree", avg_degree}, {"blocks", blocks}, {"out_in", out_in},
             {"family", family},         {"null_alpha", null_alpha}, {"format", format},
             {"write_p", write_p}};
    const double deg = avg_degree > 0.0
                           ? avg_degree
                           : netglm::target_degree(netglm::parse_degree_rule(degree), n);
    netglm::ProbMatrix prob;
    switch (netglm::parse_generator(generator)) {
        case netglm::GeneratorKind::Sbm:
            prob = netglm::sbm_matrix(n, blocks, out_in, deg);
            break;
        case netglm::GeneratorKind::Dcbm: {
            auto rng = netglm::make_stream(g.seed, 0, "degree-params");
            prob = netglm::dcbm_matrix(n, blocks, out_in, netglm::draw_degree_params(n, rng), deg);
            break;
        }
        case netglm::GeneratorKind::Graphon:
            prob = netglm::graphon_matrix(n, deg);
            break;
    }
    if (prob.capped_entries > 0) {
        log("warn", std::to_string(prob.capped_entries) + " probabilities capped at 1");
    }
    const netglm::GlmFamily fam = netglm::parse_family(family);
    auto drng = netglm::make_stream(g.seed, 0, "design");
    const netglm::SimTruth truth = netglm::paper_design(prob, fam, drng, null_alpha);
    log_all(truth.warnings);
    auto arng = netglm::make_stream(g.seed, 0, "adjacency");
    const Eigen::MatrixXd A = netglm::sample_adjacency(prob, arng);
    auto yrng = netglm::make_stream(g.seed, 0, "response");
    const Eigen::VectorXd y = netglm::sample_response(fam, truth.eta, yrng);

    const bool edges = format == "edgelist";
    if (write_p) {
        netglm::io::write_dense_csv(out_path("P.csv"), prob.P);
    }
    if (edges) {
        netglm::io::write_edgelist(out_path("A.txt"), A);
    } else {
        netglm::io::write_dense_csv(out_path("A.csv"), A);
    }
    std::vector<std::vector<netglm::io::Cell>> rows;
    for (Eigen::Index i = 0; i < n; ++i) {
        rows.push_back({std::to_string(i), truth.X(i, 0), truth.X(i, 1), y(i)});
    }
    netglm::io::write_csv(out_path("covariates.csv"), {"id", "x1", "x2", "y"}, rows);

    json t;
    t["family"] = netglm::family_name(fam);
    t["target_avg_degree"] = prob.target_avg_degree;
    t["realized_avg_degree"] = netglm::average_degree(A);
    t["r"] = truth.r;
    t["s"] = truth.s;
    t["sigma"] = vec_json(truth.oracle.sigma);
    t["beta"] = vec_json(truth.beta);
    t["theta"] = vec_json(truth.theta);
    t["gamma"] = vec_json(truth.gamma);
    t["alpha"] = vec_json(truth.alpha);
    t["eta"] = vec_json(truth.eta);
    t["X"] = mat_json(truth.X);
    t["warnings"] = truth.warnings;
    t["provenance"] = netglm::io::provenance(g.seed, cfg);
    netglm::io::write_json(out_path("truth.json"), t);
    log("info", "wrote " + std::string(edges ? "A.txt" : "A.csv") + ", covariates.csv, truth.json to " + g.out);
    return 0;
}

int cmd_fit(const ModelInputs& in) {
    const LoadedModel data = load_model(in);
    const netglm::GlmFamily fam = netglm::parse_family(in.family, in.dispersion);
    const netglm::SubspaceFit fit =
        netglm::fit_subspace_glm(data.X, data.P, data.y, fam, in.fit_config());
    log_all(fit.spectral.warnings);
    const auto tests = netglm::covariate_tests(fit, data.names);

    std::vector<std::vector<netglm::io::Cell>> rows;
    for (std::size_t j = 0; j < data.names.size(); ++j) {
        rows.push_back({data.names[j], fit.model.theta(static_cast<Eigen::Index>(j)),
                        fit.model.beta(static_cast<Eigen::Index>(j)), tests[j].se,
                        tests[j].p_value, std::string(tests[j].theta_block ? "theta" : "beta")});
    }
    netglm::io::write_csv(out_path("coefficients.csv"),
                          {"column", "theta", "beta", "se", "p_value", "tested_block"}, rows);
    std::vector<std::vector<netglm::io::Cell>> nodes;
    for (Eigen::Index i = 0; i < fit.model.n; ++i) {
        nodes.push_back({data.ids[static_cast<std::size_t>(i)], fit.model.alpha(i),
                         fit.model.eta(i), fit.model.mu(i)});
    }
    netglm::io::write_csv(out_path("nodes.csv"), {"id", "alpha", "eta", "mu"}, nodes);

    json j = fit_json(fit, data.names);
    j["provenance"] = netglm::io::provenance(g.seed, in.to_json());
    netglm::io::write_json(out_path("fit.json"), j);
    std::cout << netglm::io::dump_json(j) << '\n';
    return 0;
}

int cmd_test(const ModelInputs& in, double null_value, const std::string& block) {
    const LoadedModel data = load_model(in);
    const netglm::GlmFamily fam = netglm::parse_family(in.family, in.dispersion);
    const netglm::SubspaceFit fit =
        netglm::fit_subspace_glm(data.X, data.P, data.y, fam, in.fit_config());
    const netglm::FittedModel& m = fit.model;

    json j;
    if (m.K > m.r) {
        const netglm::ChiSqResult chi = netglm::network_effect_test(m, fit.design);
        j["network_effect"] = {{"statistic", chi.statistic}, {"df", chi.df}, {"p_value", chi.p_value}};
    } else {
        j["network_effect"] = nullptr;
        log("warn", "K = r: no network component to test");
    }
    const netglm::CoefBlock which =
        block == "theta" ? netglm::CoefBlock::Theta : netglm::CoefBlock::Beta;
    json coefs = json::array();
    std::vector<std::vector<netglm::io::Cell>> rows;
    for (Eigen::Index c = 0; c < m.p; ++c) {
        json row{{"column", data.names[static_cast<std::size_t>(c)]}};
        try {
            const auto w = netglm::coef_test(m, Eigen::VectorXd::Unit(m.p, c), which, null_value);
            row["estimate"] = w.estimate;
            row["se"] = w.se;
            row["z"] = w.z;
            row["p_value"] = w.p_value;
            row["ci95"] = {w.ci95.first, w.ci95.second};
            row["condition_value"] = w.condition_value;
            rows.push_back({data.names[static_cast<std::size_t>(c)], w.estimate, w.se, w.z,
                            w.p_value, w.ci95.first, w.ci95.second, w.condition_value});
        } catch (const netglm::Error& e) {
            row["error"] = e.what();
            log("warn", data.names[static_cast<std::size_t>(c)] + ": " + e.what());
        }
        coefs.push_back(row);
    }
    j["block"] = block;
    j["null_value"] = null_value;
    j["coefficients"] = coefs;
    j["fit"] = fit_json(fit, data.names);
    json cfg = in.to_json();
    cfg["block"] = block;
    cfg["null_value"] = null_value;
    j["provenance"] = netglm::io::provenance(g.seed, cfg);
    netglm::io::write_csv(out_path("wald.csv"),
                          {"column", "estimate", "se", "z", "p_value", "ci_low", "ci_high",
                           "condition_value"},
                          rows);
    netglm::io::write_json(out_path("test.json"), j);
    std::cout << netglm::io::dump_json(j) << '\n';
    return 0;
}

int cmd_select_r(const ModelInputs& in) {
    const LoadedModel data = load_model(in);
    const netglm::FitConfig cfg = in.fit_config();
    const netglm::SpectralBasis spec = netglm::spectral_basis(data.P, cfg.K, cfg.mode);
    log_all(spec.warnings);
    const netglm::AlignedBases bases =
        netglm::align_subspaces(netglm::orthonormal_basis(data.X), spec.vectors);
    const double dhat = netglm::average_degree(data.P);
    json j;
    j["sigma"] = vec_json(bases.sigma);
    j["dhat"] = dhat;
    j["threshold"] = netglm::select_r_threshold(dhat, bases.p, bases.K, bases.n);
    j["r"] = netglm::select_r(bases.sigma, dhat, bases.p, bases.K, bases.n);
    j["provenance"] = netglm::io::provenance(g.seed, in.to_json());
    netglm::io::write_json(out_path("select_r.json"), j);
    std::cout << netglm::io::dump_json(j) << '\n';
    return 0;
}

int cmd_simulate(const std::string& config_path, bool full_scale) {
    std::ifstream in(config_path);
    if (!in) {
        throw netglm::IoError("cannot open '" + config_path + "'");
    }
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::exception& e) {
        throw netglm::ConfigError(std::string("invalid JSON: ") + e.what());
    }
    std::vector<json> items;
    if (doc.is_object() && doc.contains("scenarios")) {
        for (const auto& s : doc["scenarios"]) {
            items.push_back(s);
        }
    } else {
        items.push_back(doc);
    }
    std::vector<std::vector<netglm::io::Cell>> rows;
    json reports = json::array();
    for (const auto& item : items) {
        json cfg_json = item;
        if (!cfg_json.contains("seed")) {
            cfg_json["seed"] = g.seed;
        }
        if (full_scale) {
            cfg_json["outer_reps"] = 100;
            cfg_json["inner_reps"] = 1000;
        }
        netglm::ScenarioConfig cfg = netglm::io::scenario_from_json(cfg_json);
        cfg.threads = g.threads;
        log("info", "scenario " + netglm::io::dump_json(netglm::io::scenario_to_json(cfg), -1));
        const netglm::ScenarioReport rep = netglm::run_scenario(cfg);
        log_all(rep.warnings);
        if (rep.unstable) {
            log("warn", "scenario flagged unstable (more than 10% invalid replicates in a draw)");
        }
        rows.push_back(netglm::io::scenario_csv_row(rep));
        json r = netglm::io::report_to_json(rep);
        r["provenance"] = netglm::io::provenance(cfg.seed, netglm::io::scenario_to_json(cfg));
        reports.push_back(r);
    }
    netglm::io::write_csv(out_path("results.csv"), netglm::io::scenario_csv_header(), rows);
    json prov;
    prov["tool_version"] = netglm::io::kToolVersion;
    prov["config_file"] = config_path;
    prov["master_seed"] = g.seed;
    prov["reports"] = reports;
    netglm::io::write_json(out_path("provenance.json"), prov);
    log("info", "wrote results.csv and provenance.json to " + g.out);
    return 0;
}

struct AnalyzeOptions {
    std::vector<std::string> edges;
    std::string covariates;
    std::string response;
    std::string group;
    std::vector<std::string> columns;
    std::vector<std::string> categorical;
    std::vector<std::string> assort;
    std::vector<std::string> extra;
    int folds = 200;
    int K = 3;
    int r = -1;
    double level = 0.05;
    int top = 5;
    bool reselect = false;
    bool no_lcc = false;

    json to_json() const {
        return json{{"edges", edges},       {"covariates", covariates}, {"response", response},
                    {"group", group},       {"columns", columns},       {"categorical", categorical},
                    {"assort", assort},     {"extra", extra},           {"folds", folds},
                    {"K", K},               {"r", r},                   {"level", level},
                    {"top", top},           {"reselect", reselect},     {"no_lcc", no_lcc}};
    }
};

int cmd_analyze(const AnalyzeOptions& o) {
    netglm::io::TabularOptions topts;
    topts.response = o.response;
    if (!o.group.empty()) {
        topts.group = o.group;
    }
    topts.covariates = o.columns;
    topts.categorical = o.categorical;
    netglm::io::TabularData tab = netglm::io::load_tabular(o.covariates, topts);
    log_all(tab.warnings);

    netglm::NetworkDataset raw;
    raw.ids = tab.ids;
    raw.covariates = tab.covariates;
    raw.covariate_names = tab.names;
    raw.response = tab.response;
    raw.group = tab.group;
    for (const auto& path : o.edges) {
        long skipped = 0;
        raw.waves.push_back(netglm::io::load_edges_by_id(path, raw.ids, &skipped));
        if (skipped > 0) {
            log("warn", path + ": " + std::to_string(skipped) + " edges touch unknown ids; skipped");
        }
    }
    netglm::PrepareOptions popts;
    popts.per_group_lcc = !o.no_lcc;
    const netglm::PreparedData data = netglm::prepare(raw, popts);
    log_all(data.warnings);
    const Eigen::Index n = data.X.rows();
    log("info", "analysis sample: " + std::to_string(n) + " nodes, " +
                    std::to_string(data.edges.size()) + " edges");

    netglm::FitConfig cfg;
    cfg.K = o.K;
    if (o.r >= 0) {
        cfg.r = o.r;
    }
    const netglm::GlmFamily fam = netglm::GlmFamily::bernoulli();
    const netglm::NetworkBasis net = netglm::network_basis(data.P, cfg);
    std::vector<bool> keep(data.column_names.size(), false);
    keep[0] = true;
    const netglm::EliminationResult sel = netglm::backward_eliminate(
        data.X, data.column_names, net, data.data.response, fam, cfg, o.level, keep);

    std::vector<std::vector<netglm::io::Cell>> coef_rows;
    for (const auto& t : sel.tests) {
        coef_rows.push_back({t.name, t.estimate, t.se, t.p_value,
                             std::string(t.theta_block ? "theta" : "beta")});
    }
    netglm::io::write_csv(out_path("coefficients.csv"),
                          {"column", "estimate", "se", "p_value", "tested_block"}, coef_rows);
    std::vector<std::vector<netglm::io::Cell>> trace_rows;
    for (std::size_t k = 0; k < sel.trace.size(); ++k) {
        const auto& s = sel.trace[k];
        trace_rows.push_back({static_cast<long long>(k + 1), s.dropped, s.p_value, s.adjusted,
                              static_cast<long long>(s.candidates)});
    }
    netglm::io::write_csv(out_path("elimination.csv"),
                          {"step", "dropped", "p_value", "bonferroni_p", "candidates"}, trace_rows);

    const netglm::FittedModel& m = sel.fit.model;
    json report;
    if (m.K > m.r) {
        const auto chi = netglm::network_effect_test(m, sel.fit.design);
        report["network_effect"] = {{"statistic", chi.statistic}, {"df", chi.df}, {"p_value", chi.p_value}};
    }

    // Assortativity per requested attribute, overall and per group.
    std::vector<std::vector<netglm::io::Cell>> assort_rows;
    netglm::io::CsvTable table = netglm::io::read_csv(o.covariates);
    std::map<std::string, std::size_t> row_of;
    const std::size_t id_col = table.column("id");
    for (std::size_t i = 0; i < table.rows.size(); ++i) {
        row_of[table.rows[i][id_col]] = i;
    }
    for (const auto& attr : o.assort) {
        const std::size_t col = table.column(attr);
        std::vector<std::string> labels;
        for (const auto& id : data.data.ids) {
            labels.push_back(table.rows[row_of[id]][col]);
        }
        const std::vector<int> code = netglm::encode_levels(labels);
        std::map<std::string, std::vector<netglm::Edge>> by_group;
        for (const auto& e : data.edges) {
            const std::string gu = data.data.group.empty() ? "" : data.data.group[static_cast<std::size_t>(e.u)];
            const std::string gv = data.data.group.empty() ? "" : data.data.group[static_cast<std::size_t>(e.v)];
            by_group["(all)"].push_back(e);
            if (!data.data.group.empty() && gu == gv) {
                by_group[gu].push_back(e);
            }
        }
        for (const auto& [grp, edges] : by_group) {
            try {
                const auto a = netglm::assortativity(edges, code);
                assort_rows.push_back({attr, grp, a.r, a.se, static_cast<long long>(edges.size())});
            } catch (const netglm::UndefinedAssortativityError& e) {
                log("warn", attr + " in " + grp + ": " + e.what());
            }
        }
    }
    netglm::io::write_csv(out_path("assortativity.csv"), {"attribute", "group", "r", "se", "edges"},
                          assort_rows);

    // Correlation of |alpha| with centralities and user-supplied columns.
    const netglm::Centralities cen = netglm::centralities(n, data.edges);
    const Eigen::VectorXd abs_alpha = m.alpha.cwiseAbs();
    std::vector<std::pair<std::string, Eigen::VectorXd>> cols{{"degree", cen.degree},
                                                              {"eigenvector", cen.eigenvector},
                                                              {"betweenness", cen.betweenness},
                                                              {"closeness", cen.closeness}};
    for (const auto& name : o.extra) {
        const std::size_t col = table.column(name);
        Eigen::VectorXd v(n);
        for (Eigen::Index i = 0; i < n; ++i) {
            const std::string& cell = table.rows[row_of[data.data.ids[static_cast<std::size_t>(i)]]][col];
            v(i) = netglm::io::is_missing(cell) ? std::nan("") : std::stod(cell);
        }
        cols.emplace_back(name, v);
    }
    std::vector<std::vector<netglm::io::Cell>> corr_rows;
    for (const auto& [name, v] : cols) {
        corr_rows.push_back({name, netglm::pearson(abs_alpha, v)});
    }
    netglm::io::write_csv(out_path("centrality_correlation.csv"), {"measure", "pearson_abs_alpha"},
                          corr_rows);

    // Cross-validated ROC, pooled and per group.
    netglm::CvOptions cv;
    cv.folds = std::min<int>(o.folds, static_cast<int>(n));
    cv.seed = g.seed;
    cv.reselect = o.reselect;
    cv.level = o.level;
    const netglm::CvResult res =
        netglm::cv_auc(data.X, data.column_names, net, data.data.response, cfg, cv, keep);
    log_all(res.warnings);
    std::vector<std::vector<netglm::io::Cell>> roc_rows;
    for (const auto& p : res.roc) {
        roc_rows.push_back({p.fpr, p.tpr, p.threshold});
    }
    netglm::io::write_csv(out_path("roc.csv"), {"fpr", "tpr", "threshold"}, roc_rows);
    std::vector<std::vector<netglm::io::Cell>> auc_rows{{std::string("(all)"), res.auc}};
    if (!data.data.group.empty()) {
        std::map<std::string, std::vector<Eigen::Index>> members;
        for (Eigen::Index i = 0; i < n; ++i) {
            if (std::isfinite(res.scores(i))) {
                members[data.data.group[static_cast<std::size_t>(i)]].push_back(i);
            }
        }
        for (const auto& [grp, idx] : members) {
            Eigen::VectorXd s(static_cast<Eigen::Index>(idx.size())), l(s.size());
            for (std::size_t k = 0; k < idx.size(); ++k) {
                s(static_cast<Eigen::Index>(k)) = res.scores(idx[k]);
                l(static_cast<Eigen::Index>(k)) = data.data.response(idx[k]);
            }
            try {
                auc_rows.push_back({grp, netglm::auc(s, l)});
            } catch (const netglm::DataError&) {
                log("debug", "group " + grp + " has a single response class; AUC skipped");
            }
        }
    }
    netglm::io::write_csv(out_path("auc_by_group.csv"), {"group", "auc"}, auc_rows);

    if (!data.data.group.empty()) {
        Eigen::MatrixXd Xs(n, static_cast<Eigen::Index>(sel.columns.size()));
        for (std::size_t c = 0; c < sel.columns.size(); ++c) {
            Xs.col(static_cast<Eigen::Index>(c)) = data.X.col(sel.columns[c]);
        }
        const auto strength = netglm::effect_strength(m, Xs, data.data.group);
        std::vector<std::vector<netglm::io::Cell>> srows;
        for (std::size_t k = 0; k < strength.size(); ++k) {
            srows.push_back({static_cast<long long>(k + 1), strength[k].group, strength[k].t,
                             std::string(k < static_cast<std::size_t>(o.top) ? "true" : "false")});
            if (strength[k].infinite) {
                log("warn", "group " + strength[k].group + " has zero covariate effect; t = inf");
            }
        }
        netglm::io::write_csv(out_path("effect_strength.csv"), {"rank", "group", "t", "top"}, srows);
    }

    report["n"] = n;
    report["edges"] = data.edges.size();
    report["selected_columns"] = sel.names;
    report["intercept_only"] = sel.intercept_only;
    report["fit"] = fit_json(sel.fit, sel.names);
    report["auc"] = res.auc;
    report["skipped_folds"] = res.skipped_folds;
    report["warnings"] = data.warnings;
    report["provenance"] = netglm::io::provenance(g.seed, o.to_json());
    netglm::io::write_json(out_path("analysis.json"), report);
    std::cout << netglm::io::dump_json(report) << '\n';
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Network-subspace generalized linear models"};
    app.require_subcommand(1);
    app.add_option("--seed", g.seed, "Master seed (64-bit unsigned)");
    app.add_option("--out", g.out, "Output directory");
    app.add_option("--threads", g.threads, "Worker threads for simulation")->check(CLI::PositiveNumber);
    app.add_flag("--json-logs", g.json_logs, "Log to stderr as JSON lines");
    app.add_option("-v,--verbosity", g.verbosity, "0 quiet, 1 info, 2 debug");

    // generate
    auto* gen = app.add_subcommand("generate", "Sample a network, covariates and response");
    std::string generator = "sbm", degree = "sqrt_n", gfamily = "logit", gformat = "edgelist";
    Eigen::Index gn = 1000;
    double avg_degree = 0.0, out_in = 0.3;
    int blocks = 3;
    bool null_alpha = false, write_p = false;
    gen->add_option("--generator", generator, "sbm | dcbm | graphon")
        ->check(CLI::IsMember({"sbm", "dcbm", "graphon"}));
    gen->add_option("--n", gn, "Number of nodes")->check(CLI::PositiveNumber);
    gen->add_option("--degree", degree, "2logn | sqrt_n | n_two_thirds")
        ->check(CLI::IsMember({"2logn", "sqrt_n", "n_two_thirds"}));
    gen->add_option("--avg-degree", avg_degree, "Explicit expected average degree");
    gen->add_option("--blocks", blocks, "Number of blocks");
    gen->add_option("--out-in", out_in, "Between/within block probability ratio");
    gen->add_option("--family", gfamily, "logit | poisson | gaussian")
        ->check(CLI::IsMember({"logit", "poisson", "gaussian"}));
    gen->add_flag("--null-alpha", null_alpha, "Set the network effect to zero");
    gen->add_option("--format", gformat, "edgelist (0-based ids) | dense_csv")
        ->check(CLI::IsMember({"edgelist", "dense_csv"}));
    gen->add_flag("--write-p", write_p, "Also write the probability matrix P.csv");

    ModelInputs fit_in, test_in, sel_in;
    auto* fit = app.add_subcommand("fit", "Fit the network-subspace GLM");
    fit_in.add_options(fit, true);

    auto* test = app.add_subcommand("test", "Network-effect chi-square and per-column Wald tests");
    test_in.add_options(test, true);
    double null_value = 0.0;
    std::string block = "beta";
    test->add_option("--null", null_value, "Null value for the Wald tests");
    test->add_option("--block", block, "beta | theta")->check(CLI::IsMember({"beta", "theta"}));

    auto* sel = app.add_subcommand("select-r", "Estimate the intersection dimension r");
    sel_in.add_options(sel, false);

    auto* sim = app.add_subcommand("simulate", "Run Monte Carlo scenarios");
    std::string config_path;
    bool full_scale = false;
    sim->add_option("--config", config_path, "Scenario JSON (object or {\"scenarios\": [...]})")
        ->required()
        ->check(CLI::ExistingFile);
    sim->add_flag("--full-scale", full_scale, "Use 100 outer x 1000 inner replicates");

    auto* ana = app.add_subcommand("analyze", "Applied analysis of a node-level data set");
    AnalyzeOptions ao;
    ana->add_option("--edges", ao.edges, "Edge file(s) over covariate ids; two waves are averaged")
        ->required()
        ->expected(1, 2);
    ana->add_option("--covariates", ao.covariates, "Covariate CSV with an 'id' column")->required();
    ana->add_option("--response", ao.response, "Binary response column")->required();
    ana->add_option("--group", ao.group, "Group column (fixed effects, per-group components)");
    ana->add_option("--columns", ao.columns, "Covariate columns (default: all others)");
    ana->add_option("--categorical", ao.categorical, "Columns to treat as categorical");
    ana->add_option("--assort", ao.assort, "Attributes for assortativity");
    ana->add_option("--extra", ao.extra, "Extra numeric columns correlated with |alpha|");
    ana->add_option("--folds", ao.folds, "Cross-validation folds");
    ana->add_option("--K", ao.K, "Network subspace dimension");
    ana->add_option("--r", ao.r, "Intersection dimension (default: estimated)");
    ana->add_option("--level", ao.level, "Backward-elimination level");
    ana->add_option("--top", ao.top, "Number of top groups to flag by network-effect strength");
    ana->add_flag("--reselect", ao.reselect, "Rerun variable selection inside each fold");
    ana->add_flag("--no-lcc", ao.no_lcc, "Use the overall largest component instead of per group");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*gen) {
            return cmd_generate(generator, gn, degree, avg_degree, blocks, out_in, gfamily,
                                null_alpha, gformat, write_p);
        }
        if (*fit) return cmd_fit(fit_in);
        if (*test) return cmd_test(test_in, null_value, block);
        if (*sel) return cmd_select_r(sel_in);
        if (*sim) return cmd_simulate(config_path, full_scale);
        if (*ana) return cmd_analyze(ao);
    } catch (const netglm::Error& e) {
        log("error", e.what());
        switch (e.kind()) {
            case netglm::ErrorKind::Config: return 2;
            case netglm::ErrorKind::Numerical: return 3;
            case netglm::ErrorKind::Data: return 4;
        }
    } catch (const fs::filesystem_error& e) {
        log("error", e.what());
        return 4;
    } catch (const std::exception& e) {
        log("error", e.what());
        return 3;
    }
    return 0;
}
