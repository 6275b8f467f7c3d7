#include "netglm/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <map>
#include <numeric>
#include <set>
#include <utility>

#include "netglm/inference.hpp"
#include "netglm/linalg.hpp"
#include "netglm/rng.hpp"

namespace netglm {

namespace {

std::vector<std::vector<Eigen::Index>> adjacency_lists(Eigen::Index n,
                                                       const std::vector<Edge>& edges) {
    std::vector<std::vector<Eigen::Index>> adj(static_cast<std::size_t>(n));
    for (const Edge& e : edges) {
        if (e.u == e.v || !(e.weight > 0.0)) {
            continue;
        }
        adj[static_cast<std::size_t>(e.u)].push_back(e.v);
        adj[static_cast<std::size_t>(e.v)].push_back(e.u);
    }
    for (auto& row : adj) {
        std::sort(row.begin(), row.end());
        row.erase(std::unique(row.begin(), row.end()), row.end());
    }
    return adj;
}

void check_edges(Eigen::Index n, const std::vector<Edge>& edges) {
    for (const Edge& e : edges) {
        if (e.u < 0 || e.v < 0 || e.u >= n || e.v >= n) {
            throw DataError("edge endpoint out of range");
        }
    }
}

// Largest component; ties go to the lowest minimum node (components are
// already ordered by their minimum).
const std::vector<Eigen::Index>* largest(const std::vector<std::vector<Eigen::Index>>& comps) {
    const std::vector<Eigen::Index>* best = nullptr;
    for (const auto& c : comps) {
        if (!best || c.size() > best->size()) {
            best = &c;
        }
    }
    return best;
}

}  // namespace

std::vector<Edge> canonical_edges(const std::vector<Edge>& edges) {
    std::map<std::pair<Eigen::Index, Eigen::Index>, double> merged;
    for (const Edge& e : edges) {
        if (e.u == e.v) {
            continue;
        }
        merged[{std::min(e.u, e.v), std::max(e.u, e.v)}] += e.weight;
    }
    std::vector<Edge> out;
    out.reserve(merged.size());
    for (const auto& [key, w] : merged) {
        if (w > 0.0) {
            out.push_back({key.first, key.second, w});
        }
    }
    return out;
}

std::vector<Edge> average_waves(const std::vector<std::vector<Edge>>& waves) {
    if (waves.empty()) {
        throw DataError("at least one edge set is required");
    }
    std::vector<Edge> all;
    for (const auto& wave : waves) {
        for (Edge e : canonical_edges(wave)) {
            e.weight /= static_cast<double>(waves.size());
            all.push_back(e);
        }
    }
    return canonical_edges(all);
}

std::vector<std::vector<Eigen::Index>> connected_components(Eigen::Index n,
                                                            const std::vector<Edge>& edges) {
    check_edges(n, edges);
    const auto adj = adjacency_lists(n, edges);
    std::vector<char> seen(static_cast<std::size_t>(n), 0);
    std::vector<std::vector<Eigen::Index>> comps;
    for (Eigen::Index s = 0; s < n; ++s) {
        if (seen[static_cast<std::size_t>(s)]) {
            continue;
        }
        std::vector<Eigen::Index> comp;
        std::deque<Eigen::Index> queue{s};
        seen[static_cast<std::size_t>(s)] = 1;
        while (!queue.empty()) {
            const Eigen::Index v = queue.front();
            queue.pop_front();
            comp.push_back(v);
            for (Eigen::Index w : adj[static_cast<std::size_t>(v)]) {
                if (!seen[static_cast<std::size_t>(w)]) {
                    seen[static_cast<std::size_t>(w)] = 1;
                    queue.push_back(w);
                }
            }
        }
        std::sort(comp.begin(), comp.end());
        comps.push_back(std::move(comp));
    }
    return comps;
}

std::vector<int> encode_levels(const std::vector<std::string>& labels,
                               std::vector<std::string>* levels) {
    std::set<std::string> uniq(labels.begin(), labels.end());
    std::vector<std::string> sorted(uniq.begin(), uniq.end());
    std::vector<int> out;
    out.reserve(labels.size());
    for (const auto& l : labels) {
        out.push_back(static_cast<int>(std::lower_bound(sorted.begin(), sorted.end(), l) -
                                       sorted.begin()));
    }
    if (levels) {
        *levels = std::move(sorted);
    }
    return out;
}

PreparedData prepare(const NetworkDataset& raw, const PrepareOptions& opts) {
    const Eigen::Index n = static_cast<Eigen::Index>(raw.ids.size());
    if (raw.waves.empty()) {
        throw DataError("at least one edge set is required");
    }
    if (raw.covariates.rows() != n || raw.response.size() != n ||
        (!raw.group.empty() && static_cast<Eigen::Index>(raw.group.size()) != n)) {
        throw DataError("node, covariate, response and group counts disagree");
    }
    if (static_cast<Eigen::Index>(raw.covariate_names.size()) != raw.covariates.cols()) {
        throw DataError("covariate names do not match the covariate columns");
    }
    for (const auto& wave : raw.waves) {
        check_edges(n, wave);
    }

    PreparedData out;
    std::vector<Edge> merged;
    if (raw.waves.size() == 1) {
        merged = canonical_edges(raw.waves.front());
    } else if (opts.average_waves) {
        merged = average_waves(raw.waves);
    } else {
        merged = canonical_edges(raw.waves.front());
        out.warnings.push_back("only the first of several edge waves is used");
    }

    std::vector<Eigen::Index> kept;
    if (opts.per_group_lcc && !raw.group.empty()) {
        std::vector<std::string> levels;
        const std::vector<int> code = encode_levels(raw.group, &levels);
        for (int g = 0; g < static_cast<int>(levels.size()); ++g) {
            std::vector<Eigen::Index> members;
            std::vector<Eigen::Index> local(static_cast<std::size_t>(n), -1);
            for (Eigen::Index i = 0; i < n; ++i) {
                if (code[static_cast<std::size_t>(i)] == g) {
                    local[static_cast<std::size_t>(i)] = static_cast<Eigen::Index>(members.size());
                    members.push_back(i);
                }
            }
            std::vector<Edge> inner;
            for (const Edge& e : merged) {
                const Eigen::Index a = local[static_cast<std::size_t>(e.u)];
                const Eigen::Index b = local[static_cast<std::size_t>(e.v)];
                if (a >= 0 && b >= 0) {
                    inner.push_back({a, b, e.weight});
                }
            }
            const auto comps =
                connected_components(static_cast<Eigen::Index>(members.size()), inner);
            const auto* best = largest(comps);
            if (!best || best->size() < 2) {
                out.warnings.push_back("group '" + levels[static_cast<std::size_t>(g)] +
                                       "' has no connected component with an edge; dropped");
                continue;
            }
            for (Eigen::Index j : *best) {
                kept.push_back(members[static_cast<std::size_t>(j)]);
            }
        }
        std::sort(kept.begin(), kept.end());
    } else {
        const auto comps = connected_components(n, merged);
        const auto* best = largest(comps);
        if (best && best->size() >= 2) {
            kept = *best;
        }
    }
    if (kept.empty()) {
        throw EmptyNetworkError("no connected component with an edge remains");
    }

    const Eigen::Index m = static_cast<Eigen::Index>(kept.size());
    std::vector<Eigen::Index> index(static_cast<std::size_t>(n), -1);
    for (Eigen::Index i = 0; i < m; ++i) {
        index[static_cast<std::size_t>(kept[static_cast<std::size_t>(i)])] = i;
    }
    auto reindex = [&](const std::vector<Edge>& edges) {
        std::vector<Edge> res;
        for (const Edge& e : edges) {
            const Eigen::Index a = index[static_cast<std::size_t>(e.u)];
            const Eigen::Index b = index[static_cast<std::size_t>(e.v)];
            if (a >= 0 && b >= 0) {
                res.push_back({a, b, e.weight});
            }
        }
        return res;
    };
    out.kept = kept;
    out.edges = reindex(merged);
    out.data.covariate_names = raw.covariate_names;
    out.data.covariates.resize(m, raw.covariates.cols());
    out.data.response.resize(m);
    for (Eigen::Index i = 0; i < m; ++i) {
        const Eigen::Index src = kept[static_cast<std::size_t>(i)];
        out.data.ids.push_back(raw.ids[static_cast<std::size_t>(src)]);
        out.data.covariates.row(i) = raw.covariates.row(src);
        out.data.response(i) = raw.response(src);
        if (!raw.group.empty()) {
            out.data.group.push_back(raw.group[static_cast<std::size_t>(src)]);
        }
    }
    for (const auto& wave : raw.waves) {
        out.data.waves.push_back(reindex(canonical_edges(wave)));
    }

    out.P = Eigen::MatrixXd::Zero(m, m);
    for (const Edge& e : out.edges) {
        out.P(e.u, e.v) = e.weight;
        out.P(e.v, e.u) = e.weight;
    }

    std::vector<std::string> levels;
    std::vector<int> code;
    if (opts.dummy_groups && !out.data.group.empty()) {
        code = encode_levels(out.data.group, &levels);
    }
    const Eigen::Index dummies = levels.size() > 1 ? static_cast<Eigen::Index>(levels.size()) - 1 : 0;
    const Eigen::Index q = raw.covariates.cols();
    const Eigen::Index icpt = opts.intercept ? 1 : 0;
    out.X = Eigen::MatrixXd::Zero(m, icpt + q + dummies);
    if (opts.intercept) {
        out.X.col(0).setOnes();
        out.column_names.push_back("(Intercept)");
    }
    out.X.middleCols(icpt, q) = out.data.covariates;
    out.column_names.insert(out.column_names.end(), raw.covariate_names.begin(),
                            raw.covariate_names.end());
    for (Eigen::Index g = 1; g <= dummies; ++g) {
        for (Eigen::Index i = 0; i < m; ++i) {
            out.X(i, icpt + q + g - 1) = code[static_cast<std::size_t>(i)] == g ? 1.0 : 0.0;
        }
        out.column_names.push_back("group[" + levels[static_cast<std::size_t>(g)] + "]");
    }
    return out;
}

double assortativity_coefficient(const std::vector<Edge>& edges, const std::vector<int>& level) {
    int levels = 0;
    for (int l : level) {
        if (l < 0) {
            throw DataError("attribute levels must be non-negative codes");
        }
        levels = std::max(levels, l + 1);
    }
    Eigen::MatrixXd e = Eigen::MatrixXd::Zero(levels, levels);
    double total = 0.0;
    for (const Edge& edge : edges) {
        if (edge.u == edge.v) {
            continue;
        }
        if (edge.u < 0 || edge.v < 0 || edge.u >= static_cast<Eigen::Index>(level.size()) ||
            edge.v >= static_cast<Eigen::Index>(level.size())) {
            throw DataError("edge endpoint without an attribute value");
        }
        const int a = level[static_cast<std::size_t>(edge.u)];
        const int b = level[static_cast<std::size_t>(edge.v)];
        e(a, b) += edge.weight;
        e(b, a) += edge.weight;
        total += 2.0 * edge.weight;
    }
    if (!(total > 0.0)) {
        throw UndefinedAssortativityError("assortativity needs at least one edge");
    }
    e /= total;
    const Eigen::VectorXd a = e.rowwise().sum();
    const Eigen::VectorXd b = e.colwise().sum().transpose();
    const double ab = a.dot(b);
    if (1.0 - ab <= 1e-14) {
        throw UndefinedAssortativityError(
            "assortativity is undefined when all edge endpoints share one level");
    }
    return (e.trace() - ab) / (1.0 - ab);
}

AssortativityResult assortativity(const std::vector<Edge>& edges, const std::vector<int>& level) {
    const std::vector<Edge> list = canonical_edges(edges);
    AssortativityResult out;
    out.r = assortativity_coefficient(list, level);
    double ss = 0.0;
    std::vector<Edge> rest;
    rest.reserve(list.size());
    for (std::size_t k = 0; k < list.size(); ++k) {
        rest.clear();
        for (std::size_t j = 0; j < list.size(); ++j) {
            if (j != k) {
                rest.push_back(list[j]);
            }
        }
        try {
            const double rk = assortativity_coefficient(rest, level);
            ss += (rk - out.r) * (rk - out.r);
        } catch (const UndefinedAssortativityError&) {
            ++out.skipped;
        }
    }
    out.se = std::sqrt(ss);
    return out;
}

NetworkBasis network_basis(const Eigen::MatrixXd& P, const FitConfig& config) {
    NetworkBasis net;
    net.spectral = spectral_basis(P, config.K, config.mode);
    net.dhat = average_degree(P);
    return net;
}

namespace {

AlignedBases full_bases(const Eigen::MatrixXd& X, const NetworkBasis& net,
                        const FitConfig& config, double* threshold) {
    AlignedBases bases = align_subspaces(orthonormal_basis(X), net.spectral.vectors);
    int r = 0;
    if (config.r) {
        r = *config.r;
    } else {
        r = select_r(bases.sigma, net.dhat, bases.p, bases.K, bases.n);
        if (threshold) {
            *threshold = select_r_threshold(net.dhat, bases.p, bases.K, bases.n);
        }
    }
    return with_r(std::move(bases), r);
}

Eigen::MatrixXd take_rows(const Eigen::MatrixXd& M, const std::vector<Eigen::Index>& rows) {
    Eigen::MatrixXd out(static_cast<Eigen::Index>(rows.size()), M.cols());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        out.row(static_cast<Eigen::Index>(i)) = M.row(rows[i]);
    }
    return out;
}

Eigen::VectorXd take_rows(const Eigen::VectorXd& v, const std::vector<Eigen::Index>& rows) {
    Eigen::VectorXd out(static_cast<Eigen::Index>(rows.size()));
    for (std::size_t i = 0; i < rows.size(); ++i) {
        out(static_cast<Eigen::Index>(i)) = v(rows[i]);
    }
    return out;
}

Eigen::MatrixXd take_cols(const Eigen::MatrixXd& M, const std::vector<Eigen::Index>& cols) {
    Eigen::MatrixXd out(M.rows(), static_cast<Eigen::Index>(cols.size()));
    for (std::size_t j = 0; j < cols.size(); ++j) {
        out.col(static_cast<Eigen::Index>(j)) = M.col(cols[j]);
    }
    return out;
}

bool full_column_rank(const Eigen::MatrixXd& M) {
    if (M.rows() < M.cols()) {
        return false;
    }
    const Eigen::JacobiSVD<Eigen::MatrixXd> svd(M);
    const Eigen::VectorXd s = svd.singularValues();
    return s.size() == 0 || s(s.size() - 1) > 1e-10 * s(0);
}

}  // namespace

SubspaceFit fit_with_basis(const Eigen::MatrixXd& X, const NetworkBasis& net,
                           const Eigen::VectorXd& y, const GlmFamily& family,
                           const FitConfig& config, const std::vector<Eigen::Index>& rows) {
    if (X.rows() != net.spectral.vectors.rows() || y.size() != X.rows()) {
        throw DataError("covariates, network and response disagree on n");
    }
    SubspaceFit out;
    out.spectral = net.spectral;
    out.dhat = net.dhat;
    out.r_selected = !config.r.has_value();
    AlignedBases bases = full_bases(X, net, config, &out.r_threshold);
    if (rows.empty()) {
        out.bases = std::move(bases);
        out.design = build_design(out.bases);
        out.model = fit_model(X, out.bases, out.design, y, family, config.irls);
        return out;
    }
    bases.Z = take_rows(bases.Z, rows);
    bases.W = take_rows(bases.W, rows);
    bases.n = static_cast<Eigen::Index>(rows.size());
    out.bases = std::move(bases);
    out.design = build_design(out.bases);
    out.model = fit_model(take_rows(X, rows), out.bases, out.design, take_rows(y, rows), family,
                          config.irls);
    return out;
}

std::vector<CovariateTest> covariate_tests(const SubspaceFit& fit,
                                           const std::vector<std::string>& names) {
    const FittedModel& m = fit.model;
    if (static_cast<Eigen::Index>(names.size()) != m.p) {
        throw ConfigError("covariate_tests: one name per column is required");
    }
    std::vector<CovariateTest> out;
    for (Eigen::Index j = 0; j < m.p; ++j) {
        const Eigen::VectorXd u = Eigen::VectorXd::Unit(m.p, j);
        CovariateTest t;
        t.name = names[static_cast<std::size_t>(j)];
        bool done = false;
        if (m.r < m.p) {
            try {
                const WaldResult w = coef_test(m, u, CoefBlock::Beta);
                t.estimate = w.estimate;
                t.se = w.se;
                t.p_value = w.p_value;
                done = true;
            } catch (const DegenerateFunctionalError&) {
            }
        }
        if (!done && m.r >= 1) {
            try {
                const WaldResult w = coef_test(m, u, CoefBlock::Theta);
                t.estimate = w.estimate;
                t.se = w.se;
                t.p_value = w.p_value;
                t.theta_block = true;
                done = true;
            } catch (const DegenerateFunctionalError&) {
            }
        }
        if (!done) {
            t.estimate = std::numeric_limits<double>::quiet_NaN();
            t.se = std::numeric_limits<double>::quiet_NaN();
            t.p_value = 1.0;
        }
        out.push_back(t);
    }
    return out;
}

EliminationResult backward_eliminate(const Eigen::MatrixXd& X,
                                     const std::vector<std::string>& names,
                                     const NetworkBasis& net, const Eigen::VectorXd& y,
                                     const GlmFamily& family, const FitConfig& config,
                                     double level, const std::vector<bool>& keep,
                                     const std::vector<Eigen::Index>& rows) {
    if (static_cast<Eigen::Index>(names.size()) != X.cols()) {
        throw ConfigError("backward_eliminate: one name per column is required");
    }
    if (!keep.empty() && static_cast<Eigen::Index>(keep.size()) != X.cols()) {
        throw ConfigError("backward_eliminate: keep mask has the wrong length");
    }
    auto is_kept = [&](Eigen::Index j) { return !keep.empty() && keep[static_cast<std::size_t>(j)]; };

    EliminationResult out;
    out.columns.resize(static_cast<std::size_t>(X.cols()));
    std::iota(out.columns.begin(), out.columns.end(), Eigen::Index{0});
    for (;;) {
        out.names.clear();
        for (Eigen::Index j : out.columns) {
            out.names.push_back(names[static_cast<std::size_t>(j)]);
        }
        out.fit = fit_with_basis(take_cols(X, out.columns), net, y, family, config, rows);
        if (!out.fit.model.convergence.converged) {
            throw NumericalError("backward_eliminate: fit did not converge");
        }
        out.tests = covariate_tests(out.fit, out.names);

        int candidates = 0;
        for (Eigen::Index j : out.columns) {
            candidates += is_kept(j) ? 0 : 1;
        }
        if (candidates == 0 || out.columns.size() == 1) {
            break;
        }
        double worst = -1.0;
        std::size_t worst_pos = 0;
        for (std::size_t k = 0; k < out.columns.size(); ++k) {
            if (is_kept(out.columns[k])) {
                continue;
            }
            const double adj = std::min(1.0, out.tests[k].p_value * candidates);
            if (adj > worst) {
                worst = adj;
                worst_pos = k;
            }
        }
        if (!(worst > level)) {
            break;
        }
        out.trace.push_back({out.names[worst_pos], out.tests[worst_pos].p_value, worst, candidates});
        out.columns.erase(out.columns.begin() + static_cast<std::ptrdiff_t>(worst_pos));
    }
    out.intercept_only = std::all_of(out.columns.begin(), out.columns.end(), is_kept) &&
                         !out.trace.empty();
    return out;
}

double auc(const Eigen::VectorXd& scores, const Eigen::VectorXd& labels) {
    if (scores.size() != labels.size()) {
        throw ConfigError("auc: scores and labels differ in length");
    }
    const Eigen::Index n = scores.size();
    std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    std::sort(order.begin(), order.end(),
              [&](Eigen::Index a, Eigen::Index b) { return scores(a) < scores(b); });
    double rank_sum = 0.0;
    double pos = 0.0;
    for (Eigen::Index i = 0; i < n;) {
        Eigen::Index j = i;
        while (j + 1 < n && scores(order[static_cast<std::size_t>(j + 1)]) ==
                                scores(order[static_cast<std::size_t>(i)])) {
            ++j;
        }
        const double mid = 0.5 * static_cast<double>(i + j) + 1.0;
        for (Eigen::Index k = i; k <= j; ++k) {
            if (labels(order[static_cast<std::size_t>(k)]) > 0.5) {
                rank_sum += mid;
                pos += 1.0;
            }
        }
        i = j + 1;
    }
    const double neg = static_cast<double>(n) - pos;
    if (pos == 0.0 || neg == 0.0) {
        throw DataError("auc needs both classes");
    }
    return (rank_sum - pos * (pos + 1.0) / 2.0) / (pos * neg);
}

std::vector<RocPoint> roc_curve(const Eigen::VectorXd& scores, const Eigen::VectorXd& labels) {
    if (scores.size() != labels.size()) {
        throw ConfigError("roc_curve: scores and labels differ in length");
    }
    const Eigen::Index n = scores.size();
    std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    std::sort(order.begin(), order.end(),
              [&](Eigen::Index a, Eigen::Index b) { return scores(a) > scores(b); });
    double pos = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
        pos += labels(i) > 0.5 ? 1.0 : 0.0;
    }
    const double neg = static_cast<double>(n) - pos;
    if (pos == 0.0 || neg == 0.0) {
        throw DataError("roc_curve needs both classes");
    }
    std::vector<RocPoint> out{{0.0, 0.0, std::numeric_limits<double>::infinity()}};
    double tp = 0.0, fp = 0.0;
    for (Eigen::Index i = 0; i < n;) {
        const double t = scores(order[static_cast<std::size_t>(i)]);
        while (i < n && scores(order[static_cast<std::size_t>(i)]) == t) {
            (labels(order[static_cast<std::size_t>(i)]) > 0.5 ? tp : fp) += 1.0;
            ++i;
        }
        out.push_back({fp / neg, tp / pos, t});
    }
    return out;
}

std::vector<int> fold_assignment(Eigen::Index n, int folds, std::uint64_t seed) {
    if (folds < 1 || folds > n) {
        throw ConfigError("folds must lie in [1, n]");
    }
    std::vector<Eigen::Index> perm(static_cast<std::size_t>(n));
    std::iota(perm.begin(), perm.end(), Eigen::Index{0});
    CounterRng rng = make_stream(seed, 0, "cv-folds");
    for (Eigen::Index i = n - 1; i > 0; --i) {
        const auto j = static_cast<Eigen::Index>(rng.uniform() * static_cast<double>(i + 1));
        std::swap(perm[static_cast<std::size_t>(i)], perm[static_cast<std::size_t>(std::min(j, i))]);
    }
    std::vector<int> fold(static_cast<std::size_t>(n));
    for (Eigen::Index k = 0; k < n; ++k) {
        fold[static_cast<std::size_t>(perm[static_cast<std::size_t>(k)])] = static_cast<int>(k % folds);
    }
    return fold;
}

CvResult cv_auc(const Eigen::MatrixXd& X, const std::vector<std::string>& names,
                const NetworkBasis& net, const Eigen::VectorXd& y, const FitConfig& config,
                const CvOptions& opts, const std::vector<bool>& keep) {
    const Eigen::Index n = X.rows();
    const GlmFamily family = GlmFamily::bernoulli();
    check_support(family, y);
    const std::vector<int> fold = fold_assignment(n, opts.folds, opts.seed);

    CvResult out;
    out.scores = Eigen::VectorXd::Constant(n, std::numeric_limits<double>::quiet_NaN());
    for (int f = 0; f < opts.folds; ++f) {
        std::vector<Eigen::Index> train, test;
        for (Eigen::Index i = 0; i < n; ++i) {
            (fold[static_cast<std::size_t>(i)] == f ? test : train).push_back(i);
        }
        if (test.empty()) {
            continue;
        }
        try {
            std::vector<Eigen::Index> cols(static_cast<std::size_t>(X.cols()));
            std::iota(cols.begin(), cols.end(), Eigen::Index{0});
            if (!full_column_rank(take_rows(X, train))) {
                throw DataError("training rows lose a covariate level");
            }
            if (opts.reselect) {
                cols = backward_eliminate(X, names, net, y, family, config, opts.level, keep, train)
                           .columns;
            }
            const Eigen::MatrixXd Xs = take_cols(X, cols);
            const SubspaceFit fit = fit_with_basis(Xs, net, y, family, config, train);
            const EffectiveDesign full = build_design(full_bases(Xs, net, config, nullptr));
            for (Eigen::Index i : test) {
                out.scores(i) = eval_link(family, full.matrix.row(i).dot(fit.model.gamma)).mean;
            }
        } catch (const Error& e) {
            ++out.skipped_folds;
            out.warnings.push_back("fold " + std::to_string(f) + " skipped: " + e.what());
        }
    }
    std::vector<Eigen::Index> scored;
    for (Eigen::Index i = 0; i < n; ++i) {
        if (std::isfinite(out.scores(i))) {
            scored.push_back(i);
        }
    }
    const Eigen::VectorXd s = take_rows(out.scores, scored);
    const Eigen::VectorXd l = take_rows(y, scored);
    out.auc = auc(s, l);
    out.roc = roc_curve(s, l);
    return out;
}

Centralities centralities(Eigen::Index n, const std::vector<Edge>& edges) {
    check_edges(n, edges);
    Centralities out;
    out.degree = Eigen::VectorXd::Zero(n);
    out.eigenvector = Eigen::VectorXd::Zero(n);
    out.betweenness = Eigen::VectorXd::Zero(n);
    out.closeness = Eigen::VectorXd::Zero(n);
    if (n == 0) {
        return out;
    }
    const auto adj = adjacency_lists(n, edges);
    for (Eigen::Index v = 0; v < n; ++v) {
        out.degree(v) = static_cast<double>(adj[static_cast<std::size_t>(v)].size());
    }

    // Brandes accumulation from every source; undirected pairs are seen twice.
    std::vector<double> sigma(static_cast<std::size_t>(n)), delta(static_cast<std::size_t>(n));
    std::vector<long> dist(static_cast<std::size_t>(n));
    std::vector<std::vector<Eigen::Index>> pred(static_cast<std::size_t>(n));
    for (Eigen::Index s = 0; s < n; ++s) {
        std::fill(sigma.begin(), sigma.end(), 0.0);
        std::fill(delta.begin(), delta.end(), 0.0);
        std::fill(dist.begin(), dist.end(), -1L);
        for (auto& p : pred) {
            p.clear();
        }
        std::vector<Eigen::Index> stack;
        std::deque<Eigen::Index> queue{s};
        sigma[static_cast<std::size_t>(s)] = 1.0;
        dist[static_cast<std::size_t>(s)] = 0;
        while (!queue.empty()) {
            const Eigen::Index v = queue.front();
            queue.pop_front();
            stack.push_back(v);
            for (Eigen::Index w : adj[static_cast<std::size_t>(v)]) {
                auto& dw = dist[static_cast<std::size_t>(w)];
                if (dw < 0) {
                    dw = dist[static_cast<std::size_t>(v)] + 1;
                    queue.push_back(w);
                }
                if (dw == dist[static_cast<std::size_t>(v)] + 1) {
                    sigma[static_cast<std::size_t>(w)] += sigma[static_cast<std::size_t>(v)];
                    pred[static_cast<std::size_t>(w)].push_back(v);
                }
            }
        }
        double total = 0.0;
        for (Eigen::Index v : stack) {
            total += static_cast<double>(dist[static_cast<std::size_t>(v)]);
        }
        if (stack.size() > 1) {
            out.closeness(s) = static_cast<double>(stack.size() - 1) / total;
        }
        for (auto it = stack.rbegin(); it != stack.rend(); ++it) {
            const Eigen::Index w = *it;
            for (Eigen::Index v : pred[static_cast<std::size_t>(w)]) {
                delta[static_cast<std::size_t>(v)] += sigma[static_cast<std::size_t>(v)] /
                                                      sigma[static_cast<std::size_t>(w)] *
                                                      (1.0 + delta[static_cast<std::size_t>(w)]);
            }
            if (w != s) {
                out.betweenness(w) += delta[static_cast<std::size_t>(w)];
            }
        }
    }
    out.betweenness /= 2.0;

    if (out.degree.sum() > 0.0) {
        Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n, n);
        for (Eigen::Index v = 0; v < n; ++v) {
            for (Eigen::Index w : adj[static_cast<std::size_t>(v)]) {
                A(v, w) = 1.0;
            }
        }
        const linalg::EigenPairs top = linalg::symmetric_eigen_range(A, n - 1, 1);
        Eigen::VectorXd v = top.vectors.col(0).cwiseAbs();
        v /= v.maxCoeff();
        out.eigenvector = v;
    }
    return out;
}

std::vector<GroupStrength> effect_strength(const Eigen::VectorXd& alpha, const Eigen::MatrixXd& X,
                                           const Eigen::VectorXd& beta,
                                           const std::vector<std::string>& group) {
    const Eigen::Index n = alpha.size();
    if (X.rows() != n || X.cols() != beta.size() || static_cast<Eigen::Index>(group.size()) != n) {
        throw ConfigError("effect_strength: dimensions do not agree");
    }
    const Eigen::VectorXd xb = X * beta;
    std::map<std::string, std::pair<double, double>> sums;
    for (Eigen::Index i = 0; i < n; ++i) {
        auto& s = sums[group[static_cast<std::size_t>(i)]];
        s.first += std::abs(alpha(i));
        s.second += std::abs(xb(i));
    }
    std::vector<GroupStrength> out;
    for (const auto& [g, s] : sums) {
        GroupStrength gs;
        gs.group = g;
        if (s.second > 0.0) {
            gs.t = s.first / s.second;
        } else {
            gs.t = std::numeric_limits<double>::infinity();
            gs.infinite = true;
        }
        out.push_back(gs);
    }
    std::stable_sort(out.begin(), out.end(),
                     [](const GroupStrength& a, const GroupStrength& b) { return a.t > b.t; });
    return out;
}

std::vector<GroupStrength> effect_strength(const FittedModel& fit, const Eigen::MatrixXd& X,
                                           const std::vector<std::string>& group) {
    return effect_strength(fit.alpha, X, fit.beta, group);
}

double pearson(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
    if (a.size() != b.size() || a.size() < 2) {
        throw ConfigError("pearson needs two samples of equal length >= 2");
    }
    const Eigen::ArrayXd da = a.array() - a.mean();
    const Eigen::ArrayXd db = b.array() - b.mean();
    const double den = std::sqrt((da * da).sum() * (db * db).sum());
    if (!(den > 0.0)) {
        return std::numeric_limits<double>::quiet_NaN();
    }
    return (da * db).sum() / den;
}

}  // namespace netglm
