#include <doctest.h>

#include "fixtures.hpp"

#include <gnarex/io.hpp>
#include <gnarex_cli/commands.hpp>

#include <unistd.h>

#include <filesystem>
#include <fstream>
#include <sstream>

namespace fs = std::filesystem;
using gnarex::cli::ExitCode;

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result gnarex_run(std::vector<std::string> args) {
    std::ostringstream out;
    std::ostringstream err;
    const int code = gnarex::cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

struct Scratch {
    fs::path root;
    Scratch() {
        static int counter = 0;
        root = fs::temp_directory_path() / ("gnarex_cli_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
        fs::create_directories(root);
    }
    ~Scratch() {
        std::error_code ec;
        fs::remove_all(root, ec);
    }
    [[nodiscard]] std::string operator/(const std::string& name) const { return (root / name).string(); }
    void write(const std::string& name, const std::string& text) const {
        fs::create_directories((root / name).parent_path());
        std::ofstream(root / name) << text;
    }
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

gnarex::io::CsvTable table(const fs::path& p) {
    return gnarex::io::read_csv(p);
}

// Writes a 3-node path panel with random values.
void write_path_panel(const Scratch& s, std::size_t len, bool duplicate_series = false) {
    s.write("nodes.csv", "node\nA\nB\nC\n");
    s.write("edges.csv", "source,target\nA,B\nB,C\n");
    const auto panel = fixture::random_panel(fixture::path3(), static_cast<Eigen::Index>(len), 3);
    const auto months = fixture::months(len);
    std::ostringstream nodes;
    std::ostringstream edges;
    nodes.precision(17);
    edges.precision(17);
    nodes << "date,node,value\n";
    edges << "date,source,target,value\n";
    const char* labels[] = {"A", "B", "C"};
    for (std::size_t t = 0; t < len; ++t) {
        const auto c = static_cast<Eigen::Index>(t);
        const double shared = panel.node_values()(0, c);
        for (Eigen::Index i = 0; i < 3; ++i) {
            nodes << months[t] << "," << labels[i] << "," << (duplicate_series ? shared : panel.node_values()(i, c)) << "\n";
        }
        edges << months[t] << ",A,B," << (duplicate_series ? shared : panel.edge_values()(0, c)) << "\n";
        edges << months[t] << ",B,C," << (duplicate_series ? shared : panel.edge_values()(1, c)) << "\n";
    }
    s.write("node_series.csv", nodes.str());
    s.write("edge_series.csv", edges.str());
}

std::vector<std::string> panel_args(const Scratch& s) {
    return {"--nodes", s / "nodes.csv", "--edges", s / "edges.csv", "--node-series", s / "node_series.csv",
            "--edge-series", s / "edge_series.csv"};
}

std::vector<std::string> concat(std::vector<std::string> a, const std::vector<std::string>& b) {
    a.insert(a.end(), b.begin(), b.end());
    return a;
}

void write_release(const Scratch& s, const std::string& name, const gnarex::ReleaseDataset& r,
                   const std::optional<std::map<std::string, double>>& actual) {
    std::ostringstream nodes;
    std::ostringstream edges;
    std::ostringstream node_levels;
    std::ostringstream edge_levels;
    node_levels.precision(17);
    edge_levels.precision(17);
    nodes << "node\n";
    for (const auto& label : r.network->node_labels()) {
        nodes << label << "\n";
    }
    edges << "source,target\n";
    for (const auto& e : r.network->edges()) {
        edges << r.network->node_label(e.source) << "," << r.network->node_label(e.target) << "\n";
    }
    node_levels << "date,node,value\n";
    edge_levels << "date,source,target,value\n";
    for (std::size_t t = 0; t < r.length(); ++t) {
        const auto c = static_cast<Eigen::Index>(t);
        for (gnarex::NodeId i = 0; i < r.network->node_count(); ++i) {
            node_levels << r.time_index[t] << "," << r.network->node_label(i) << ","
                        << r.node_levels(static_cast<Eigen::Index>(i), c) << "\n";
        }
        for (gnarex::EdgeId e = 0; e < r.network->edge_count(); ++e) {
            const auto [a, b] = r.network->edge(e);
            edge_levels << r.time_index[t] << "," << r.network->node_label(a) << "," << r.network->node_label(b) << ","
                        << r.edge_levels(static_cast<Eigen::Index>(e), c) << "\n";
        }
    }
    s.write(name + "/nodes.csv", nodes.str());
    s.write(name + "/edges.csv", edges.str());
    s.write(name + "/node_levels.csv", node_levels.str());
    s.write(name + "/edge_levels.csv", edge_levels.str());
    if (actual) {
        std::ostringstream a;
        a.precision(17);
        a << "node,value\n";
        for (const auto& [label, v] : *actual) {
            a << label << "," << v << "\n";
        }
        s.write(name + "/actuals.csv", a.str());
    }
}

double one_percent(std::size_t, std::size_t) {
    return 0.01;
}

}  // namespace

TEST_CASE("help and usage") {
    CHECK(gnarex_run({"--help"}).code == ExitCode::kOk);
    CHECK(gnarex_run({}).code == ExitCode::kUsage);
    CHECK(gnarex_run({"fit", "--bogus"}).code == ExitCode::kInputError);
}

TEST_CASE("fit writes one row per coefficient") {
    Scratch s;
    write_path_panel(s, 40);
    const auto r = gnarex_run(concat({"fit", "--lags", "2", "--stages", "1,2", "--out", s / "fit"}, panel_args(s)));
    REQUIRE_MESSAGE(r.code == ExitCode::kOk, r.err);
    const auto coef = table(s.root / "fit" / "coefficients.csv");
    CHECK(coef.rows.size() == 2 * 2 + 2 * (1 + 2));
    CHECK(coef.header == std::vector<std::string>{"name", "estimate", "std_error", "ci_lower", "ci_upper"});
    CHECK(coef.rows[0][0] == "alpha_1");
}

TEST_CASE("forecast with baselines") {
    Scratch s;
    write_path_panel(s, 40);
    const auto r =
        gnarex_run(concat({"forecast", "--horizon", "3", "--baselines", "--out", s / "fc"}, panel_args(s)));
    REQUIRE_MESSAGE(r.code == ExitCode::kOk, r.err);
    CHECK(table(s.root / "fc" / "forecast.csv").rows.size() == 3 * 5);
    CHECK(table(s.root / "fc" / "baselines.csv").rows.size() == 2 * 5);
    CHECK(fs::exists(s.root / "fc" / "forecast_notes.txt"));
}

TEST_CASE("input errors exit with code 2") {
    Scratch s;
    write_path_panel(s, 20);
    fs::remove(s.root / "edges.csv");
    const auto missing = gnarex_run(concat({"fit", "--out", s / "o"}, panel_args(s)));
    CHECK(missing.code == ExitCode::kInputError);
    CHECK(missing.err.find("edges.csv") != std::string::npos);

    s.write("edges.csv", "source,target\nA,B,extra\n");
    const auto malformed = gnarex_run(concat({"fit", "--out", s / "o"}, panel_args(s)));
    CHECK(malformed.code == ExitCode::kInputError);
    CHECK(malformed.err.find("edges.csv:2") != std::string::npos);

    s.write("edges.csv", "source,target\nA,B\nB,C\n");
    s.write("node_series.csv", "date,node,value\n2020-01,A,abc\n");
    CHECK(gnarex_run(concat({"fit", "--out", s / "o"}, panel_args(s))).code == ExitCode::kInputError);

    CHECK(gnarex_run({"replicate-sim", "--reps", "0", "--out", s / "rep"}).code == ExitCode::kInputError);
    CHECK(gnarex_run({"replicate-sim", "--regime", "4", "--out", s / "rep"}).code == ExitCode::kInputError);
    CHECK(gnarex_run({"nowcast", s / "no_such_release"}).code == ExitCode::kInputError);
}

TEST_CASE("rank deficiency exits with code 4 and names the columns") {
    Scratch s;
    write_path_panel(s, 30, true);
    const auto r = gnarex_run(concat({"fit", "--out", s / "o"}, panel_args(s)));
    CHECK(r.code == ExitCode::kRankDeficient);
    CHECK(r.err.find("dependent columns:") != std::string::npos);
}

TEST_CASE("replicate-sim tables and determinism") {
    Scratch s;
    auto rep = [&](const std::string& regime, const std::string& jobs, const std::string& out) {
        return gnarex_run({"replicate-sim", "--regime", regime, "--graph", "er", "--reps", "4", "--no-arima", "--seed",
                           "9", "--jobs", jobs, "--out", s / out});
    };
    REQUIRE(rep("1", "1", "r1").code == ExitCode::kOk);
    CHECK(table(s.root / "r1" / "coefficients_ER.csv").rows.size() == 4);
    REQUIRE(rep("3", "1", "r3").code == ExitCode::kOk);
    CHECK(table(s.root / "r3" / "coefficients_ER.csv").rows.size() == 12);

    REQUIRE(rep("3", "1", "again").code == ExitCode::kOk);
    REQUIRE(rep("3", "3", "threads").code == ExitCode::kOk);
    for (const char* name : {"coefficients_ER.csv", "predictions_ER.csv"}) {
        CHECK(slurp(s.root / "r3" / name) == slurp(s.root / "again" / name));
        CHECK(slurp(s.root / "r3" / name) == slurp(s.root / "threads" / name));
    }
}

TEST_CASE("replicate-sim with model averaging writes the inclusion distribution") {
    Scratch s;
    const auto r = gnarex_run({"replicate-sim", "--regime", "1", "--graph", "sbm", "--reps", "2", "--no-arima", "--ma",
                               "--out", s / "ma"});
    REQUIRE_MESSAGE(r.code == ExitCode::kOk, r.err);
    const auto dist = table(s.root / "ma" / "inclusion_distribution.csv");
    CHECK(dist.rows.size() == 1);
    CHECK(dist.rows[0][0] == "SBM");
}

TEST_CASE("simulate and gen-graph are seeded") {
    Scratch s;
    for (const char* out : {"a", "b"}) {
        REQUIRE(gnarex_run({"simulate", "--regime", "2", "--graph", "rdp", "--nodes", "6", "-T", "30", "--seed", "4",
                            "--out", s / out})
                    .code == ExitCode::kOk);
    }
    for (const char* name : {"nodes.csv", "edges.csv", "node_series.csv", "edge_series.csv"}) {
        CHECK(slurp(s.root / "a" / name) == slurp(s.root / "b" / name));
    }
    CHECK(table(s.root / "a" / "node_series.csv").rows.size() == 6 * 30);

    // The simulated panel feeds straight back into fit.
    const auto refit = gnarex_run({"fit", "--lags", "1", "--stages", "2", "--nodes", s / "a/nodes.csv", "--edges",
                                   s / "a/edges.csv", "--node-series", s / "a/node_series.csv", "--edge-series",
                                   s / "a/edge_series.csv", "--out", s / "refit"});
    CHECK_MESSAGE(refit.code == ExitCode::kOk, refit.err);

    REQUIRE(gnarex_run({"gen-graph", "--graph", "er", "--nodes", "10", "--seed", "3", "--out", s / "g1"}).code ==
            ExitCode::kOk);
    REQUIRE(gnarex_run({"gen-graph", "--graph", "er", "--nodes", "10", "--seed", "3", "--out", s / "g2"}).code ==
            ExitCode::kOk);
    CHECK(slurp(s.root / "g1" / "edges.csv") == slurp(s.root / "g2" / "edges.csv"));
}

TEST_CASE("nowcast on the one-percent fixture reports zero error") {
    Scratch s;
    const auto net = fixture::path3();
    const auto release = fixture::release_from_growth(net, 36, one_percent);
    write_release(s, "2020-12", release, fixture::next_levels(release, one_percent));

    const auto r = gnarex_run({"nowcast", s / "2020-12", "--lags", "2", "--stages", "0,1", "--out", s / "out"});
    REQUIRE_MESSAGE(r.code == ExitCode::kOk, r.err);
    const auto specs = table(s.root / "out" / "nowcast_specs.csv");
    const std::size_t err_col = specs.column("relative_error");
    std::size_t gnarex_rows = 0;
    for (const auto& row : specs.rows) {
        if (row[specs.column("model")].rfind("GNAR-ex", 0) == 0 || row[specs.column("model")] == "arima_010_growth") {
            CHECK(gnarex::io::parse_double(row[err_col], "x") <= 1e-12);
            gnarex_rows += row[specs.column("model")] != "arima_010_growth" ? 1 : 0;
        }
    }
    CHECK(gnarex_rows == 4);
    const auto best = table(s.root / "out" / "best_model.csv");
    REQUIRE(best.rows.size() == 1);
    CHECK(best.rows[0][0] == "2020-12");
    CHECK(fs::exists(s.root / "out" / "inclusion_2020-12.csv"));
}

TEST_CASE("nowcast model averaging, missing actuals and eval") {
    Scratch s;
    const auto net = fixture::network(4, {{0, 1}, {1, 2}, {2, 3}, {3, 0}});
    const auto release = fixture::release_from_growth(net, 40, fixture::seasonal_growth);
    write_release(s, "r1", release, fixture::next_levels(release, fixture::seasonal_growth));
    write_release(s, "r2", release, std::nullopt);
    s.write("cfg.conf", "corr_threshold = 1.0\n");

    const auto ma = gnarex_run({"nowcast", s / "r1", "--ma", "--lags", "3", "--config", s / "cfg.conf", "--out", s / "ma"});
    REQUIRE_MESSAGE(ma.code == ExitCode::kOk, ma.err);
    const auto avg = table(s.root / "ma" / "model_average.csv");
    REQUIRE(avg.rows.size() == 1);
    CHECK(avg.rows[0][avg.column("ma_error")] != "NA");
    CHECK(table(s.root / "ma" / "ma_inclusion.csv").rows.size() == 1);

    const auto blind = gnarex_run({"nowcast", s / "r2", "--lags", "1", "--stages", "1", "--config", s / "cfg.conf",
                                   "--out", s / "blind"});
    REQUIRE_MESSAGE(blind.code == ExitCode::kOk, blind.err);
    const auto specs = table(s.root / "blind" / "nowcast_specs.csv");
    for (const auto& row : specs.rows) {
        CHECK(row[specs.column("relative_error")] == "NA");
        CHECK(row[specs.column("total_actual")] == "NA");
    }

    const auto both = gnarex_run({"nowcast", s / "r1", s / "r2", "--ma", "--lags", "2", "--config", s / "cfg.conf",
                                  "--jobs", "2", "--out", s / "both"});
    REQUIRE_MESSAGE(both.code == ExitCode::kOk, both.err);
    CHECK(table(s.root / "both" / "model_average.csv").rows.size() == 2);

    const auto ev = gnarex_run({"eval", s / "ma", "--top-k", "2", "--out", s / "eval"});
    REQUIRE_MESSAGE(ev.code == ExitCode::kOk, ev.err);
    const auto summary = table(s.root / "eval" / "industry_summary.csv");
    CHECK(summary.rows.size() == 4);
    CHECK(summary.rows[0][summary.column("sd_undefined")] == "true");
    CHECK(table(s.root / "eval" / "top_industries.csv").rows.size() == 2);
}

TEST_CASE("nowcast outputs do not depend on the thread count") {
    Scratch s;
    const auto net = fixture::path3();
    for (const char* name : {"a", "b", "c"}) {
        const auto release = fixture::release_from_growth(net, 30, fixture::seasonal_growth);
        write_release(s, name, release, fixture::next_levels(release, fixture::seasonal_growth));
    }
    for (const char* jobs : {"1", "3"}) {
        const auto r = gnarex_run({"nowcast", s / "a", s / "b", s / "c", "--lags", "2", "--jobs", jobs, "--out",
                                   s / (std::string("j") + jobs)});
        REQUIRE_MESSAGE(r.code == ExitCode::kOk, r.err);
    }
    for (const char* name : {"nowcast_specs.csv", "nowcast_industries.csv", "best_model.csv", "flags.txt"}) {
        CHECK(slurp(s.root / "j1" / name) == slurp(s.root / "j3" / name));
    }
}
