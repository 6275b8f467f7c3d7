#include "netglm/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "netglm/errors.hpp"
#include "netglm/linalg.hpp"
#include "netglm/rng.hpp"

namespace netglm::io {

namespace {

std::ifstream open_in(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open '" + path + "' for reading");
    }
    return in;
}

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) {
        throw IoError("cannot open '" + path + "' for writing");
    }
    return out;
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) {
        return "";
    }
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

bool parse_double(const std::string& text, double& value) {
    const std::string t = trim(text);
    if (t.empty()) {
        return false;
    }
    char* end = nullptr;
    value = std::strtod(t.c_str(), &end);
    return end == t.c_str() + t.size();
}

bool parse_index(const std::string& text, long long& value) {
    const char* b = text.data();
    const char* e = b + text.size();
    const auto res = std::from_chars(b, e, value);
    return res.ec == std::errc() && res.ptr == e;
}

std::vector<std::string> split_tokens(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == ' ' || c == '\t' || c == ',' || c == '\r') {
            if (!cur.empty()) {
                out.push_back(cur);
                cur.clear();
            }
        } else {
            cur.push_back(c);
        }
    }
    if (!cur.empty()) {
        out.push_back(cur);
    }
    return out;
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    cur.push_back('"');
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                cur.push_back(c);
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur.push_back(c);
        }
    }
    out.push_back(cur);
    return out;
}

Eigen::MatrixXd symmetrize(Eigen::MatrixXd M, std::vector<std::string>* warnings,
                           const std::string& path) {
    if (linalg::asymmetry(M) > 1e-8 && warnings) {
        warnings->push_back("'" + path + "' is not symmetric; using (M + M^T) / 2");
    }
    M = (0.5 * (M + M.transpose())).eval();
    M.diagonal().setZero();
    return M;
}

std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) {
        return s;
    }
    std::string out = "\"";
    for (char c : s) {
        out += c == '"' ? std::string("\"\"") : std::string(1, c);
    }
    return out + "\"";
}

}  // namespace

RelFormat parse_rel_format(const std::string& name) {
    if (name == "edgelist") return RelFormat::EdgeList;
    if (name == "dense_csv" || name == "dense") return RelFormat::DenseCsv;
    throw ConfigError("unknown relational format '" + name + "'");
}

Eigen::MatrixXd read_numeric_csv(const std::string& path) {
    std::ifstream in = open_in(path);
    std::vector<std::vector<double>> rows;
    std::string line;
    long lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (trim(line).empty() || trim(line)[0] == '#') {
            continue;
        }
        std::vector<double> row;
        for (const auto& cell : split_csv_line(line)) {
            double v = 0.0;
            if (!parse_double(cell, v)) {
                throw ParseError(path + ":" + std::to_string(lineno) + ": non-numeric cell '" +
                                     cell + "'",
                                 lineno);
            }
            row.push_back(v);
        }
        if (!rows.empty() && row.size() != rows.front().size()) {
            throw ParseError(path + ":" + std::to_string(lineno) + ": ragged row", lineno);
        }
        rows.push_back(std::move(row));
    }
    Eigen::MatrixXd M(static_cast<Eigen::Index>(rows.size()),
                      rows.empty() ? 0 : static_cast<Eigen::Index>(rows.front().size()));
    for (std::size_t i = 0; i < rows.size(); ++i) {
        for (std::size_t j = 0; j < rows[i].size(); ++j) {
            M(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
        }
    }
    return M;
}

Eigen::MatrixXd load_relational(const std::string& path, RelFormat format,
                                std::optional<Eigen::Index> n, std::vector<std::string>* warnings) {
    if (format == RelFormat::DenseCsv) {
        Eigen::MatrixXd M = read_numeric_csv(path);
        if (M.rows() != M.cols() || M.rows() == 0) {
            throw DataError("'" + path + "' is not a square matrix");
        }
        if (n && *n != M.rows()) {
            throw DataError("'" + path + "' has " + std::to_string(M.rows()) + " nodes, expected " +
                            std::to_string(*n));
        }
        return symmetrize(std::move(M), warnings, path);
    }

    struct Triple {
        long long i, j;
        double w;
    };
    std::vector<Triple> entries;
    std::ifstream in = open_in(path);
    std::string line;
    long lineno = 0;
    long long max_id = -1;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) {
            line.resize(hash);
        }
        const auto tok = split_tokens(line);
        if (tok.empty()) {
            continue;
        }
        const std::string where = path + ":" + std::to_string(lineno) + ": ";
        if (tok.size() != 2 && tok.size() != 3) {
            throw ParseError(where + "expected 'i j [w]'", lineno);
        }
        Triple t{0, 0, 1.0};
        if (!parse_index(tok[0], t.i) || !parse_index(tok[1], t.j)) {
            throw ParseError(where + "node ids must be integers", lineno);
        }
        if (tok.size() == 3 && !parse_double(tok[2], t.w)) {
            throw ParseError(where + "weight must be numeric", lineno);
        }
        if (t.i < 0 || t.j < 0 || (n && (t.i >= *n || t.j >= *n))) {
            throw ParseError(where + "node id out of range", lineno);
        }
        max_id = std::max({max_id, t.i, t.j});
        entries.push_back(t);
    }
    const Eigen::Index size = n ? *n : static_cast<Eigen::Index>(max_id + 1);
    if (size <= 0) {
        throw DataError("'" + path + "' contains no edges and no node count was given");
    }
    Eigen::MatrixXd M = Eigen::MatrixXd::Zero(size, size);
    for (const Triple& t : entries) {
        M(t.i, t.j) = t.w;
        M(t.j, t.i) = t.w;
    }
    M.diagonal().setZero();
    return M;
}

Eigen::MatrixXd load_relational(const std::vector<std::string>& paths, RelFormat format,
                                std::optional<Eigen::Index> n, std::vector<std::string>* warnings) {
    if (paths.empty()) {
        throw ConfigError("at least one relational file is required");
    }
    std::vector<Eigen::MatrixXd> mats;
    Eigen::Index size = n.value_or(0);
    for (const auto& p : paths) {
        mats.push_back(load_relational(p, format, n, warnings));
        size = std::max(size, mats.back().rows());
    }
    Eigen::MatrixXd sum = Eigen::MatrixXd::Zero(size, size);
    for (const auto& M : mats) {
        if (M.rows() != size && format == RelFormat::DenseCsv) {
            throw DataError("relational files disagree on the number of nodes");
        }
        sum.topLeftCorner(M.rows(), M.cols()) += M;
    }
    return sum / static_cast<double>(mats.size());
}

Eigen::MatrixXd load_embedding_similarity(const std::string& path) {
    const Eigen::MatrixXd F = read_numeric_csv(path);
    if (F.rows() == 0 || F.cols() == 0) {
        throw DataError("'" + path + "' holds an empty embedding");
    }
    return F * F.transpose();
}

std::string format_double(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

void write_dense_csv(const std::string& path, const Eigen::MatrixXd& M) {
    std::ofstream out = open_out(path);
    for (Eigen::Index i = 0; i < M.rows(); ++i) {
        for (Eigen::Index j = 0; j < M.cols(); ++j) {
            out << (j ? "," : "") << format_double(M(i, j));
        }
        out << '\n';
    }
    if (!out) {
        throw IoError("failed writing '" + path + "'");
    }
}

void write_edgelist(const std::string& path, const Eigen::MatrixXd& M) {
    std::ofstream out = open_out(path);
    out << "# nodes " << M.rows() << '\n';
    for (Eigen::Index j = 0; j < M.cols(); ++j) {
        for (Eigen::Index i = 0; i < j; ++i) {
            const double w = 0.5 * (M(i, j) + M(j, i));
            if (w != 0.0) {
                out << i << '\t' << j;
                if (w != 1.0) {
                    out << '\t' << format_double(w);
                }
                out << '\n';
            }
        }
    }
    if (!out) {
        throw IoError("failed writing '" + path + "'");
    }
}

std::size_t CsvTable::column(const std::string& name) const {
    const auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) {
        throw DataError("column '" + name + "' not found");
    }
    return static_cast<std::size_t>(it - header.begin());
}

CsvTable read_csv(const std::string& path) {
    std::ifstream in = open_in(path);
    CsvTable table;
    std::string line;
    long lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (trim(line).empty()) {
            continue;
        }
        auto cells = split_csv_line(line);
        for (auto& c : cells) {
            c = trim(c);
        }
        if (table.header.empty()) {
            table.header = std::move(cells);
            continue;
        }
        if (cells.size() != table.header.size()) {
            throw ParseError(path + ":" + std::to_string(lineno) + ": expected " +
                                 std::to_string(table.header.size()) + " fields",
                             lineno);
        }
        table.rows.push_back(std::move(cells));
    }
    if (table.header.empty()) {
        throw DataError("'" + path + "' has no header");
    }
    return table;
}

bool is_missing(const std::string& cell) {
    std::string c = trim(cell);
    std::transform(c.begin(), c.end(), c.begin(), [](unsigned char ch) { return std::tolower(ch); });
    return c.empty() || c == "na" || c == "nan" || c == "null" || c == ".";
}

TabularData load_tabular(const std::string& path, const TabularOptions& opts,
                         const std::vector<std::string>* order) {
    const CsvTable table = read_csv(path);
    const std::size_t id_col = table.column(opts.id_column);
    std::optional<std::size_t> resp_col, group_col;
    if (opts.response) resp_col = table.column(*opts.response);
    if (opts.group) group_col = table.column(*opts.group);

    std::vector<std::size_t> cov_cols;
    if (opts.covariates.empty()) {
        for (std::size_t j = 0; j < table.header.size(); ++j) {
            if (j != id_col && j != resp_col && j != group_col) {
                cov_cols.push_back(j);
            }
        }
    } else {
        for (const auto& name : opts.covariates) {
            cov_cols.push_back(table.column(name));
        }
    }

    TabularData out;
    // Listwise deletion over every column that is used.
    std::vector<std::size_t> used = cov_cols;
    if (resp_col) used.push_back(*resp_col);
    if (group_col) used.push_back(*group_col);
    std::vector<const std::vector<std::string>*> complete;
    std::set<std::string> seen;
    for (const auto& row : table.rows) {
        const std::string& id = row[id_col];
        if (id.empty()) {
            throw DataError("row with an empty id");
        }
        if (!seen.insert(id).second) {
            throw DataError("duplicate id '" + id + "'");
        }
        if (std::any_of(used.begin(), used.end(),
                        [&](std::size_t j) { return is_missing(row[j]); })) {
            ++out.deleted;
            continue;
        }
        complete.push_back(&row);
    }
    if (out.deleted > 0) {
        out.warnings.push_back(std::to_string(out.deleted) + " rows deleted for missing values");
    }

    // Row order: the network order when given, the file order otherwise.
    std::vector<const std::vector<std::string>*> rows;
    if (order) {
        std::map<std::string, const std::vector<std::string>*> by_id;
        for (const auto* r : complete) {
            by_id[(*r)[id_col]] = r;
        }
        const std::set<std::string> wanted(order->begin(), order->end());
        for (const auto& [id, r] : by_id) {
            if (!wanted.count(id)) {
                out.warnings.push_back("id '" + id + "' is not in the network; dropped");
            }
        }
        for (const auto& id : *order) {
            const auto it = by_id.find(id);
            if (it == by_id.end()) {
                out.unmatched_ids.push_back(id);
            } else {
                rows.push_back(it->second);
            }
        }
    } else {
        rows = complete;
    }

    const Eigen::Index m = static_cast<Eigen::Index>(rows.size());
    std::vector<Eigen::VectorXd> columns;
    for (std::size_t j : cov_cols) {
        const std::string& name = table.header[j];
        bool numeric = std::find(opts.categorical.begin(), opts.categorical.end(), name) ==
                       opts.categorical.end();
        Eigen::VectorXd values(m);
        for (Eigen::Index i = 0; numeric && i < m; ++i) {
            numeric = parse_double((*rows[static_cast<std::size_t>(i)])[j], values(i));
        }
        if (numeric) {
            columns.push_back(values);
            out.names.push_back(name);
            continue;
        }
        std::set<std::string> levels;
        for (const auto* r : rows) {
            levels.insert((*r)[j]);
        }
        for (auto it = std::next(levels.begin(), levels.empty() ? 0 : 1); it != levels.end(); ++it) {
            Eigen::VectorXd d(m);
            for (Eigen::Index i = 0; i < m; ++i) {
                d(i) = (*rows[static_cast<std::size_t>(i)])[j] == *it ? 1.0 : 0.0;
            }
            columns.push_back(d);
            out.names.push_back(name + "[" + *it + "]");
        }
    }
    out.covariates.resize(m, static_cast<Eigen::Index>(columns.size()));
    for (std::size_t c = 0; c < columns.size(); ++c) {
        out.covariates.col(static_cast<Eigen::Index>(c)) = columns[c];
    }
    out.response.resize(resp_col ? m : 0);
    for (Eigen::Index i = 0; i < m; ++i) {
        const auto& row = *rows[static_cast<std::size_t>(i)];
        out.ids.push_back(row[id_col]);
        if (resp_col && !parse_double(row[*resp_col], out.response(i))) {
            throw DataError("response for id '" + row[id_col] + "' is not numeric");
        }
        if (group_col) {
            out.group.push_back(row[*group_col]);
        }
    }
    return out;
}

namespace {

void dump_value(const json& v, int indent, int depth, std::string& out) {
    const std::string pad = indent > 0 ? std::string(static_cast<std::size_t>(indent * (depth + 1)), ' ') : "";
    const std::string close = indent > 0 ? std::string(static_cast<std::size_t>(indent * depth), ' ') : "";
    const char* nl = indent > 0 ? "\n" : "";
    const char* sep = indent > 0 ? ": " : ":";
    switch (v.type()) {
        case json::value_t::object: {
            if (v.empty()) {
                out += "{}";
                return;
            }
            out += "{";
            out += nl;
            bool first = true;
            for (auto it = v.begin(); it != v.end(); ++it) {
                if (!first) {
                    out += ",";
                    out += nl;
                }
                first = false;
                out += pad + json(it.key()).dump() + sep;
                dump_value(it.value(), indent, depth + 1, out);
            }
            out += nl + close + "}";
            return;
        }
        case json::value_t::array: {
            if (v.empty()) {
                out += "[]";
                return;
            }
            out += "[";
            out += nl;
            for (std::size_t i = 0; i < v.size(); ++i) {
                if (i) {
                    out += ",";
                    out += nl;
                }
                out += pad;
                dump_value(v[i], indent, depth + 1, out);
            }
            out += nl + close + "]";
            return;
        }
        case json::value_t::number_float: {
            const double x = v.get<double>();
            out += std::isfinite(x) ? format_double(x) : "null";
            return;
        }
        default:
            out += v.dump();
    }
}

}  // namespace

std::string dump_json(const json& value, int indent) {
    std::string out;
    dump_value(value, indent, 0, out);
    return out;
}

std::string config_hash(const json& config) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx",
                  static_cast<unsigned long long>(fnv1a64(dump_json(config, -1))));
    return buf;
}

json provenance(std::uint64_t seed, const json& config) {
    json p;
    p["seed"] = seed;
    p["config_hash"] = config_hash(config);
    p["tool_version"] = kToolVersion;
    return p;
}

void write_json(const std::string& path, const json& value) {
    std::ofstream out = open_out(path);
    out << dump_json(value) << '\n';
    if (!out) {
        throw IoError("failed writing '" + path + "'");
    }
}

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<Cell>>& rows) {
    std::ofstream out = open_out(path);
    for (std::size_t j = 0; j < header.size(); ++j) {
        out << (j ? "," : "") << csv_escape(header[j]);
    }
    out << '\n';
    for (const auto& row : rows) {
        if (row.size() != header.size()) {
            throw ConfigError("write_csv: row width does not match the header");
        }
        for (std::size_t j = 0; j < row.size(); ++j) {
            out << (j ? "," : "");
            std::visit(
                [&](const auto& c) {
                    using T = std::decay_t<decltype(c)>;
                    if constexpr (std::is_same_v<T, std::string>) {
                        out << csv_escape(c);
                    } else if constexpr (std::is_same_v<T, double>) {
                        out << format_double(c);
                    } else {
                        out << c;
                    }
                },
                row[j]);
        }
        out << '\n';
    }
    if (!out) {
        throw IoError("failed writing '" + path + "'");
    }
}

}  // namespace netglm::io

namespace netglm::io {

std::vector<Edge> load_edges_by_id(const std::string& path, const std::vector<std::string>& ids,
                                   long* skipped) {
    std::map<std::string, Eigen::Index> index;
    for (std::size_t i = 0; i < ids.size(); ++i) {
        index[ids[i]] = static_cast<Eigen::Index>(i);
    }
    std::ifstream in = open_in(path);
    std::vector<Edge> edges;
    std::string line;
    long lineno = 0;
    long dropped = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) {
            line.resize(hash);
        }
        const auto tok = split_tokens(line);
        if (tok.empty()) {
            continue;
        }
        if (tok.size() != 2 && tok.size() != 3) {
            throw ParseError(path + ":" + std::to_string(lineno) + ": expected 'a b [w]'", lineno);
        }
        double w = 1.0;
        if (tok.size() == 3 && !parse_double(tok[2], w)) {
            throw ParseError(path + ":" + std::to_string(lineno) + ": weight must be numeric",
                             lineno);
        }
        const auto a = index.find(tok[0]);
        const auto b = index.find(tok[1]);
        if (a == index.end() || b == index.end()) {
            ++dropped;
            continue;
        }
        edges.push_back({a->second, b->second, w});
    }
    if (skipped) {
        *skipped = dropped;
    }
    return edges;
}

ScenarioConfig scenario_from_json(const json& j) {
    if (!j.is_object()) {
        throw ConfigError("scenario config must be a JSON object");
    }
    static const std::set<std::string> known{
        "generator", "family",    "n",       "avg_deg_rule", "outer_reps", "inner_reps",
        "K_fit",     "r_fit",     "null_alpha", "seed",      "threads",    "blocks",
        "out_in",    "baseline"};
    for (auto it = j.begin(); it != j.end(); ++it) {
        if (!known.count(it.key())) {
            throw ConfigError("unknown scenario key '" + it.key() + "'");
        }
    }
    ScenarioConfig cfg;
    try {
        if (j.contains("generator")) cfg.generator = parse_generator(j["generator"].get<std::string>());
        if (j.contains("family")) cfg.family = parse_family(j["family"].get<std::string>());
        if (j.contains("n")) cfg.n = j["n"].get<Eigen::Index>();
        if (j.contains("avg_deg_rule")) cfg.degree_rule = parse_degree_rule(j["avg_deg_rule"].get<std::string>());
        if (j.contains("outer_reps")) cfg.outer_reps = j["outer_reps"].get<int>();
        if (j.contains("inner_reps")) cfg.inner_reps = j["inner_reps"].get<int>();
        if (j.contains("K_fit")) cfg.K_fit = j["K_fit"].get<Eigen::Index>();
        if (j.contains("r_fit")) {
            const json& r = j["r_fit"];
            if (r.is_number_integer()) {
                cfg.r_fit = r.get<int>();
            } else if (r.is_string() && r.get<std::string>() == "estimate") {
                cfg.estimate_r = true;
            } else if (!(r.is_string() && r.get<std::string>() == "true") && !(r.is_boolean() && r.get<bool>())) {
                throw ConfigError("r_fit must be \"true\", \"estimate\" or an integer");
            }
        }
        if (j.contains("null_alpha")) cfg.null_alpha = j["null_alpha"].get<bool>();
        if (j.contains("seed")) cfg.seed = j["seed"].get<std::uint64_t>();
        if (j.contains("threads")) cfg.threads = j["threads"].get<int>();
        if (j.contains("blocks")) cfg.blocks = j["blocks"].get<int>();
        if (j.contains("out_in")) cfg.out_in = j["out_in"].get<double>();
        if (j.contains("baseline")) cfg.baseline = j["baseline"].get<bool>();
    } catch (const json::exception& e) {
        throw ConfigError(std::string("invalid scenario config: ") + e.what());
    }
    cfg.validate();
    return cfg;
}

json scenario_to_json(const ScenarioConfig& cfg) {
    json j;
    j["generator"] = generator_name(cfg.generator);
    j["family"] = family_name(cfg.family);
    j["n"] = cfg.n;
    j["avg_deg_rule"] = degree_rule_name(cfg.degree_rule);
    j["outer_reps"] = cfg.outer_reps;
    j["inner_reps"] = cfg.inner_reps;
    j["K_fit"] = cfg.K_fit;
    if (cfg.r_fit) {
        j["r_fit"] = *cfg.r_fit;
    } else {
        j["r_fit"] = cfg.estimate_r ? "estimate" : "true";
    }
    j["null_alpha"] = cfg.null_alpha;
    j["seed"] = cfg.seed;
    j["blocks"] = cfg.blocks;
    j["out_in"] = cfg.out_in;
    j["baseline"] = cfg.baseline;
    return j;
}

json report_to_json(const ScenarioReport& report) {
    json j;
    j["config"] = scenario_to_json(report.config);
    j["median_mse_beta2"] = report.median_mse_beta2;
    j["coverage_beta2"] = report.coverage_beta2;
    j["median_mspe"] = report.median_mspe;
    j["median_baseline_mspe"] = report.median_baseline_mspe;
    j["rejection_rate"] = report.rejection_rate;
    j["median_tau"] = report.median_tau;
    j["invalid_total"] = report.invalid_total;
    j["unstable"] = report.unstable;
    j["target_avg_degree"] = report.target_avg_degree;
    j["warnings"] = report.warnings;
    j["runtime_seconds"] = report.runtime_seconds;
    json outer = json::array();
    for (const auto& o : report.outer) {
        json row;
        row["outer_index"] = o.outer_index;
        row["r_used"] = o.r_used;
        row["valid"] = o.valid;
        row["invalid"] = o.invalid;
        row["unstable"] = o.unstable;
        row["mse_beta2"] = o.mse_beta2;
        row["coverage"] = o.coverage;
        row["mspe"] = o.mspe;
        row["baseline_mspe"] = o.baseline_mspe;
        row["rejection"] = o.rejection;
        row["tau"] = o.tau;
        outer.push_back(row);
    }
    j["outer"] = outer;
    return j;
}

std::vector<std::string> scenario_csv_header() {
    return {"generator",      "family",         "n",
            "avg_deg_rule",   "K_fit",          "r_fit",
            "null_alpha",     "outer_reps",     "inner_reps",
            "mse_beta2_x100", "coverage_beta2", "mspe_x100",
            "baseline_mspe_x100", "rejection_rate", "median_tau",
            "invalid_total",  "unstable",       "runtime_seconds",
            "seed",           "config_hash",    "tool_version"};
}

std::vector<Cell> scenario_csv_row(const ScenarioReport& report) {
    const ScenarioConfig& c = report.config;
    const json cfg = scenario_to_json(c);
    return {generator_name(c.generator),
            family_name(c.family),
            static_cast<long long>(c.n),
            degree_rule_name(c.degree_rule),
            static_cast<long long>(c.K_fit),
            cfg["r_fit"].is_string() ? Cell(cfg["r_fit"].get<std::string>())
                                     : Cell(static_cast<long long>(*c.r_fit)),
            std::string(c.null_alpha ? "true" : "false"),
            static_cast<long long>(c.outer_reps),
            static_cast<long long>(c.inner_reps),
            100.0 * report.median_mse_beta2,
            report.coverage_beta2,
            100.0 * report.median_mspe,
            100.0 * report.median_baseline_mspe,
            report.rejection_rate,
            report.median_tau,
            static_cast<long long>(report.invalid_total),
            std::string(report.unstable ? "true" : "false"),
            report.runtime_seconds,
            std::to_string(c.seed),
            config_hash(cfg),
            std::string(kToolVersion)};
}

}  // namespace netglm::io
