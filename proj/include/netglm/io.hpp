#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "json.hpp"
#include "netglm/analysis.hpp"
#include "netglm/simharness.hpp"

namespace netglm::io {

using json = nlohmann::ordered_json;

inline constexpr const char* kToolVersion = NETGLM_VERSION;

enum class RelFormat { EdgeList, DenseCsv };

RelFormat parse_rel_format(const std::string& name);

/// Symmetric relational matrix from an edge list ("i j [w]", 0-based ids,
/// '#' comments, whitespace or comma separated) or a square dense CSV.
/// The result is (M + M^T) / 2 with a zero diagonal. For an edge list, n
/// defaults to 1 + the largest id.
Eigen::MatrixXd load_relational(const std::string& path, RelFormat format,
                                std::optional<Eigen::Index> n = std::nullopt,
                                std::vector<std::string>* warnings = nullptr);

/// Entrywise average of several relational files over the same nodes.
Eigen::MatrixXd load_relational(const std::vector<std::string>& paths, RelFormat format,
                                std::optional<Eigen::Index> n = std::nullopt,
                                std::vector<std::string>* warnings = nullptr);

/// Headerless numeric CSV.
Eigen::MatrixXd read_numeric_csv(const std::string& path);

/// n x k embedding F read from CSV; returns the similarity F F^T.
Eigen::MatrixXd load_embedding_similarity(const std::string& path);

void write_dense_csv(const std::string& path, const Eigen::MatrixXd& M);
/// Upper-triangle nonzero entries as "i j w".
void write_edgelist(const std::string& path, const Eigen::MatrixXd& M);

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    /// Throws DataError when the column is absent.
    std::size_t column(const std::string& name) const;
};

/// CSV with a header row; quoted fields may contain commas and doubled quotes.
CsvTable read_csv(const std::string& path);

struct TabularOptions {
    std::string id_column = "id";
    std::optional<std::string> response;
    std::optional<std::string> group;
    std::vector<std::string> covariates;   // empty: every other column
    std::vector<std::string> categorical;  // forced categorical; non-numeric columns are detected
};

struct TabularData {
    std::vector<std::string> ids;
    Eigen::MatrixXd covariates;
    std::vector<std::string> names;
    Eigen::VectorXd response;
    std::vector<std::string> group;
    int deleted = 0;                         // rows removed for missing values
    std::vector<std::string> unmatched_ids;  // network nodes without a usable row
    std::vector<std::string> warnings;
};

bool is_missing(const std::string& cell);

/// Covariate table with categorical columns expanded to dummies (the
/// lexicographically first level is the reference) and listwise deletion.
/// When `order` is given, rows follow that id order; table ids absent from
/// `order` are dropped with a warning and ids of `order` without a row are
/// reported in `unmatched_ids`.
TabularData load_tabular(const std::string& path, const TabularOptions& opts,
                         const std::vector<std::string>* order = nullptr);

/// JSON text with every floating-point number printed to 17 significant digits.
std::string dump_json(const json& value, int indent = 2);

/// FNV-1a 64 of the compact canonical dump, as 16 hex digits.
std::string config_hash(const json& config);

json provenance(std::uint64_t seed, const json& config);

void write_json(const std::string& path, const json& value);

using Cell = std::variant<std::string, double, long long>;

std::string format_double(double x);

/// Header line then rows; doubles use 17 significant digits.
void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<Cell>>& rows);

/// Edge list over string ids ("a b [w]", '#' comments). Edges touching an id
/// outside `ids` are skipped and counted.
std::vector<Edge> load_edges_by_id(const std::string& path, const std::vector<std::string>& ids,
                                   long* skipped = nullptr);

/// ScenarioConfig <-> JSON. Unknown keys raise ConfigError; "r_fit" is
/// "true" (the design's r), "estimate", or an integer.
ScenarioConfig scenario_from_json(const json& j);
json scenario_to_json(const ScenarioConfig& cfg);
json report_to_json(const ScenarioReport& report);

/// One CSV row per scenario.
std::vector<std::string> scenario_csv_header();
std::vector<Cell> scenario_csv_row(const ScenarioReport& report);

}  // namespace netglm::io
