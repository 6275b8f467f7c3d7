#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include <unistd.h>

#include "doctest.h"
#include "fixtures.hpp"
#include "netglm/errors.hpp"
#include "netglm/io.hpp"
#include "netglm/netgen.hpp"

using namespace netglm;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() / ("netglm_io_" + std::to_string(::getpid()));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string file(const std::string& name, const std::string& text = "") const {
        const auto p = (path / name).string();
        if (!text.empty()) std::ofstream(p) << text;
        return p;
    }
};

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST_CASE("edge list loading") {
    TempDir dir;
    auto m = io::load_relational(dir.file("a.txt", "0 1\n"), io::RelFormat::EdgeList, 3);
    Eigen::MatrixXd expected = Eigen::MatrixXd::Zero(3, 3);
    expected(0, 1) = expected(1, 0) = 1.0;
    CHECK(m == expected);

    auto w = io::load_relational(dir.file("w.txt", "# comment\n0,1,0.5\n\n1 2 2\n"), io::RelFormat::EdgeList);
    CHECK(w.rows() == 3);
    CHECK(w(0, 1) == 0.5);
    CHECK(w(1, 0) == 0.5);
    CHECK(w(2, 1) == 2.0);

    const auto a = dir.file("x.txt", "0 1\n1 2\n");
    const auto b = dir.file("y.txt", "0 1\n1 2\n");
    CHECK(io::load_relational(std::vector<std::string>{a, b}, io::RelFormat::EdgeList) ==
          io::load_relational(a, io::RelFormat::EdgeList));
}

TEST_CASE("edge list errors carry the line number") {
    TempDir dir;
    try {
        io::load_relational(dir.file("bad.txt", "0 1\n# x\n0 7\n"), io::RelFormat::EdgeList, 3);
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.line() == 3);
    }
    try {
        io::load_relational(dir.file("junk.txt", "0 1\nzero one\n"), io::RelFormat::EdgeList);
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.line() == 2);
    }
    CHECK_THROWS_AS(io::load_relational(dir.file("none.txt"), io::RelFormat::EdgeList), IoError);
}

TEST_CASE("dense CSV loading symmetrises with a warning") {
    TempDir dir;
    std::vector<std::string> warnings;
    auto m = io::load_relational(dir.file("d.csv", "5,1,0\n3,5,2\n0,2,5\n"), io::RelFormat::DenseCsv,
                                 std::nullopt, &warnings);
    CHECK(m(0, 1) == 2.0);
    CHECK(m(1, 0) == 2.0);
    CHECK(m.diagonal().norm() == 0.0);
    CHECK(warnings.size() == 1);
    CHECK_THROWS_AS(io::load_relational(dir.file("r.csv", "1,2\n3\n"), io::RelFormat::DenseCsv), ParseError);
}

TEST_CASE("generate, write and load round-trip") {
    TempDir dir;
    auto prob = sbm_matrix(40, 3, 0.3, 6.0);
    io::write_dense_csv(dir.file("P.csv"), prob.P);
    const Eigen::MatrixXd back = io::load_relational(dir.file("P.csv"), io::RelFormat::DenseCsv);
    CHECK((back - prob.P).cwiseAbs().maxCoeff() <= 1e-12);

    auto rng = make_stream(1, 0, "adjacency");
    Eigen::MatrixXd A = sample_adjacency(prob, rng);
    std::mt19937_64 gen(1);
    std::uniform_real_distribution<double> unif(0.1, 3.0);
    for (int i = 0; i < 40; ++i)
        for (int j = i + 1; j < 40; ++j)
            if (A(i, j) > 0) A(i, j) = A(j, i) = unif(gen);
    io::write_edgelist(dir.file("A.txt"), A);
    const Eigen::MatrixXd Ab = io::load_relational(dir.file("A.txt"), io::RelFormat::EdgeList);
    CHECK(Ab.rows() == 40);
    CHECK((Ab - A).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("embedding similarity") {
    TempDir dir;
    auto s = io::load_embedding_similarity(dir.file("e.csv", "1,0\n0,2\n1,1\n"));
    Eigen::MatrixXd F(3, 2);
    F << 1, 0, 0, 2, 1, 1;
    CHECK(s == F * F.transpose());
}

TEST_CASE("tabular loading") {
    TempDir dir;
    const auto path = dir.file("t.csv",
                               "id,x,sex,y\n"
                               "a,1.5,F,1\n"
                               "b,2.5,M,0\n"
                               "c,,F,1\n"
                               "d,4.0,\"M\",0\n");
    io::TabularOptions opts;
    opts.response = "y";
    auto t = io::load_tabular(path, opts);
    CHECK(t.deleted == 1);
    CHECK(t.ids == std::vector<std::string>{"a", "b", "d"});
    CHECK(t.names == std::vector<std::string>{"x", "sex[M]"});
    CHECK(t.covariates.cols() == 2);
    CHECK(t.covariates(1, 1) == 1.0);
    CHECK(t.covariates(0, 1) == 0.0);
    CHECK(t.response == Eigen::Vector3d(1, 0, 0));

    const std::vector<std::string> order{"d", "zz", "a", "b"};
    auto o = io::load_tabular(path, opts, &order);
    CHECK(o.ids == std::vector<std::string>{"d", "a", "b"});
    CHECK(o.unmatched_ids == std::vector<std::string>{"zz"});
    CHECK(o.covariates(0, 0) == 4.0);

    const std::vector<std::string> partial{"b", "a"};
    auto p = io::load_tabular(path, opts, &partial);
    CHECK_FALSE(p.warnings.empty());

    const auto dup = dir.file("dup.csv", "id,x\na,1\na,2\n");
    CHECK_THROWS_AS(io::load_tabular(dup, {}), DataError);
}

TEST_CASE("tabular rows follow a shuffled network order") {
    TempDir dir;
    std::ostringstream csv;
    csv << "id,x,y\n";
    for (int i = 0; i < 30; ++i) csv << "n" << i << "," << i * 0.5 << "," << (i % 2) << "\n";
    const auto path = dir.file("s.csv", csv.str());
    std::vector<std::string> order;
    for (int i = 0; i < 30; ++i) order.push_back("n" + std::to_string(i));
    std::mt19937_64 gen(2);
    std::shuffle(order.begin(), order.end(), gen);
    io::TabularOptions opts;
    opts.response = "y";
    auto t = io::load_tabular(path, opts, &order);
    REQUIRE(t.ids == order);
    for (int k = 0; k < 30; ++k) {
        const int i = std::stoi(order[k].substr(1));
        CHECK(t.covariates(k, 0) == i * 0.5);
        CHECK(t.response(k) == i % 2);
    }
}

TEST_CASE("JSON output round-trips and hashes stably") {
    TempDir dir;
    io::json j;
    j["pi"] = 3.141592653589793;
    j["tiny"] = 1e-300;
    j["third"] = 1.0 / 3.0;
    j["n"] = 42;
    j["nan"] = std::nan("");
    j["list"] = {1.5, 2.5};
    io::write_json(dir.file("o.json"), j);
    const auto back = io::json::parse(slurp(dir.file("o.json")));
    CHECK(back["pi"].get<double>() == 3.141592653589793);
    CHECK(back["tiny"].get<double>() == 1e-300);
    CHECK(back["third"].get<double>() == 1.0 / 3.0);
    CHECK(back["n"].get<int>() == 42);
    CHECK(back["nan"].is_null());
    CHECK(back["list"][1].get<double>() == 2.5);

    ScenarioConfig cfg;
    const auto h1 = io::config_hash(io::scenario_to_json(cfg));
    const auto h2 = io::config_hash(io::scenario_to_json(cfg));
    CHECK(h1 == h2);
    CHECK(h1.size() == 16);
    cfg.seed = 2;
    CHECK(io::config_hash(io::scenario_to_json(cfg)) != h1);
    cfg.seed = 1;
    cfg.threads = 8;  // not part of the result, so not part of the hash
    CHECK(io::config_hash(io::scenario_to_json(cfg)) == h1);

    auto prov = io::provenance(7, io::scenario_to_json(cfg));
    CHECK(prov["seed"].get<std::uint64_t>() == 7);
    CHECK(prov["config_hash"].get<std::string>() == h1);
    CHECK(prov["tool_version"].get<std::string>() == io::kToolVersion);
}

TEST_CASE("scenario configuration round-trip and validation") {
    ScenarioConfig cfg;
    cfg.generator = GeneratorKind::Graphon;
    cfg.family = GlmFamily::poisson();
    cfg.n = 500;
    cfg.degree_rule = DegreeRule::TwoLogN;
    cfg.r_fit = 2;
    cfg.K_fit = 4;
    cfg.null_alpha = true;
    cfg.seed = 99;
    auto back = io::scenario_from_json(io::scenario_to_json(cfg));
    CHECK(io::scenario_to_json(back) == io::scenario_to_json(cfg));

    auto est = io::scenario_from_json(io::json::parse(R"({"r_fit": "estimate"})"));
    CHECK(est.estimate_r);
    CHECK_FALSE(est.r_fit.has_value());
    CHECK_THROWS_AS(io::scenario_from_json(io::json::parse(R"({"colour": 1})")), ConfigError);
    CHECK_THROWS_AS(io::scenario_from_json(io::json::parse(R"({"n": "big"})")), ConfigError);
    CHECK_THROWS_AS(io::scenario_from_json(io::json::parse(R"({"outer_reps": 0})")), ConfigError);
}

TEST_CASE("CSV writer follows the documented schema") {
    TempDir dir;
    ScenarioReport report;
    report.median_mse_beta2 = 0.0057;
    report.coverage_beta2 = 0.949;
    const auto header = io::scenario_csv_header();
    io::write_csv(dir.file("r.csv"), header, {io::scenario_csv_row(report)});
    auto table = io::read_csv(dir.file("r.csv"));
    CHECK(table.header == header);
    REQUIRE(table.rows.size() == 1);
    CHECK(std::stod(table.rows[0][table.column("mse_beta2_x100")]) == doctest::Approx(0.57));
    CHECK(std::stod(table.rows[0][table.column("coverage_beta2")]) == 0.949);
    CHECK(table.rows[0][table.column("r_fit")] == "true");
    CHECK(table.rows[0][table.column("tool_version")] == io::kToolVersion);
    CHECK_THROWS_AS(io::write_csv(dir.file("bad.csv"), {"a"}, {{1.0, 2.0}}), ConfigError);
    CHECK_THROWS_AS(io::write_json((dir.path / "missing" / "x.json").string(), io::json::object()), IoError);
}

TEST_CASE("edges by id") {
    TempDir dir;
    long skipped = 0;
    auto edges = io::load_edges_by_id(dir.file("e.txt", "a b\nb c 2\na zz\n"), {"a", "b", "c"}, &skipped);
    REQUIRE(edges.size() == 2);
    CHECK(edges[1].u == 1);
    CHECK(edges[1].v == 2);
    CHECK(edges[1].weight == 2.0);
    CHECK(skipped == 1);
}

TEST_CASE("missing-value spellings") {
    for (const char* s : {"", "NA", "na", "nan", "NULL", "."}) CHECK(io::is_missing(s));
    CHECK_FALSE(io::is_missing("0"));
}
