/* End-to-end tests of the command-line tool: every subcommand is exercised
 * through std::system against the built binary (path in $NERVECLI), and the
 * files it writes are read back and checked. */

#include <sys/wait.h>

#include <catch2/catch_amalgamated.hpp>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "nerve/config.hpp"

namespace {

namespace fs = std::filesystem;
using namespace nerve;

std::string cli_path() {
    const char* p = std::getenv("NERVECLI");
    REQUIRE(p != nullptr);
    return p;
}

/* scratch directory, removed on destruction */
struct TempDir {
    fs::path dir;
    TempDir() {
        std::string tmpl = (fs::temp_directory_path() / "nervecli_XXXXXX").string();
        REQUIRE(mkdtemp(tmpl.data()) != nullptr);
        dir = tmpl;
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(dir, ec);
    }
    std::string path(const std::string& name) const { return (dir / name).string(); }
};

struct CliResult {
    int exit_code = -1;
    std::string out, err;
};

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    REQUIRE(in.good());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<std::string> lines_of(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) out.push_back(line);
    return out;
}

CliResult run_cli(const TempDir& td, const std::string& args) {
    const std::string out_file = td.path("cli_stdout.txt");
    const std::string err_file = td.path("cli_stderr.txt");
    const std::string cmd =
        "\"" + cli_path() + "\" " + args + " >\"" + out_file + "\" 2>\"" + err_file + "\"";
    const int status = std::system(cmd.c_str());
    CliResult r;
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.out = slurp(out_file);
    r.err = slurp(err_file);
    return r;
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    REQUIRE(out.good());
    out << text;
}

}  // namespace

TEST_CASE("nerve subcommand prints the demonstration factorizations", "[cli]") {
    TempDir td;
    const std::string pts = td.path("points.csv");
    write_points_csv(pts, nerve_demo_vertices());

    const CliResult alpha =
        run_cli(td, "nerve --points \"" + pts + "\" --class alpha --r 0.5 --out-dir \"" +
                        td.dir.string() + "\"");
    CHECK(alpha.exit_code == 0);
    REQUIRE_FALSE(lines_of(alpha.out).empty());
    CHECK(lines_of(alpha.out).front() == "[1,2][2,3,5][4]");

    const CliResult cech =
        run_cli(td, "nerve --points \"" + pts + "\" --class cech --r 0.7 --out-dir \"" +
                        td.dir.string() + "\"");
    CHECK(cech.exit_code == 0);
    REQUIRE_FALSE(lines_of(cech.out).empty());
    CHECK(lines_of(cech.out).front() == "[1,2,3,5][1,4]");
}

TEST_CASE("nerve subcommand writes a complex.json that round-trips", "[cli]") {
    TempDir td;
    const std::string pts = td.path("points.csv");
    const std::vector<Point> V = nerve_demo_vertices();
    write_points_csv(pts, V);

    const CliResult r = run_cli(td, "nerve --points \"" + pts +
                                        "\" --class alpha --r 0.5 --out-dir \"" +
                                        td.dir.string() + "\"");
    REQUIRE(r.exit_code == 0);

    Json doc = Json::parse(slurp(td.path("complex.json")));
    REQUIRE(doc.contains("complex"));
    REQUIRE(doc.contains("factorization"));
    CHECK(doc.at("factorization").get<std::string>() == "[1,2][2,3,5][4]");
    CHECK(doc.at("resolved_spec").at("class").get<std::string>() == "alpha");

    const SimplicialComplex K = complex_from_json(doc.at("complex"));
    const SimplicialComplex direct = alpha_complex(V, 0.5);
    CHECK(K.n_vertices == direct.n_vertices);
    CHECK(K.simplices == direct.simplices);
}

TEST_CASE("nerve subcommand validates its inputs", "[cli]") {
    TempDir td;
    SECTION("missing points file") {
        const CliResult r =
            run_cli(td, "nerve --points \"" + td.path("absent.csv") + "\" --r 0.5");
        CHECK(r.exit_code == 2);
        CHECK(r.err.find("config error") != std::string::npos);
    }
    SECTION("missing required option") {
        const CliResult r = run_cli(td, "nerve");
        CHECK(r.exit_code == 2);
    }
    SECTION("dimension flag disagrees with the file") {
        const std::string pts = td.path("points.csv");
        write_points_csv(pts, nerve_demo_vertices());
        const CliResult r = run_cli(td, "nerve --points \"" + pts + "\" --r 0.5 --dim 3");
        CHECK(r.exit_code == 2);
    }
    SECTION("cech without a radius") {
        const std::string pts = td.path("points.csv");
        write_points_csv(pts, nerve_demo_vertices());
        const CliResult r = run_cli(td, "nerve --points \"" + pts + "\" --class cech");
        CHECK(r.exit_code == 2);
    }
}

TEST_CASE("decompose subcommand reproduces the worked five-vertex trace", "[cli]") {
    TempDir td;
    const std::string pts = td.path("points.csv");
    write_points_csv(pts, trace_demo_vertices());

    const CliResult r = run_cli(td, "decompose --points \"" + pts + "\" --r 0.25 --out-dir \"" +
                                        td.dir.string() + "\"");
    REQUIRE(r.exit_code == 0);
    REQUIRE_FALSE(lines_of(r.out).empty());
    CHECK(lines_of(r.out).front() == "[1,3,4][2,4,5]");

    /* trace.csv: header comment, column header, initial row, seven proposals
     * with radii on the distance scale (twice the internal ball radius) */
    const auto rows = lines_of(slurp(td.path("trace.csv")));
    REQUIRE(rows.size() == 10);
    CHECK(rows[0].rfind("# spec ", 0) == 0);
    CHECK(rows[1] == "row,radius,edge,accepted,cliques,separators");
    CHECK(rows[2].rfind("1,0,,,", 0) == 0);  // initial row, no edge

    const std::vector<std::string> expected_radius = {"0.313", "0.322", "0.38", "0.422",
                                                      "0.459", "0.474", "0.499"};
    const std::vector<std::string> expected_edge = {"(1-3)", "(4-5)", "(2-5)", "(2-4)",
                                                    "(3-4)", "~(1-2)", "(1-4)"};
    for (size_t i = 0; i < 7; ++i) {
        const std::string& row = rows[3 + i];
        const auto c1 = row.find(','), c2 = row.find(',', row.find(',') + 1);
        REQUIRE(c2 != std::string::npos);
        const double radius = std::stod(row.substr(c1 + 1, c2 - c1 - 1));
        CHECK(radius == Catch::Approx(std::stod(expected_radius[i])).margin(1.5e-3));
        CHECK(row.find(expected_edge[i]) != std::string::npos);
    }
    CHECK(rows[8].find(",0,") != std::string::npos);   // the one rejected proposal
    CHECK(rows[9].find("\"[1,3,4][2,4,5]\"") != std::string::npos);
    CHECK(rows[9].find("\"[4]\"") != std::string::npos);  // final separator

    /* graph.json carries the reduced graph and its junction tree */
    Json doc = Json::parse(slurp(td.path("graph.json")));
    const LabeledGraph G = graph_from_json(doc.at("graph"));
    CHECK(G.edges == std::set<std::pair<int, int>>{
                         {0, 2}, {0, 3}, {1, 3}, {1, 4}, {2, 3}, {3, 4}});
    CHECK(doc.at("junction_tree").contains("cliques"));
}

TEST_CASE("decompose subcommand rejects the delaunay class", "[cli]") {
    TempDir td;
    const std::string pts = td.path("points.csv");
    /* the Delaunay complex has no radius parameter, so no filtration exists */
    write_points_csv(pts, {Point(0.1, 0.1), Point(0.2, 0.2), Point(0.3, 0.3), Point(0.4, 0.4)});
    const CliResult r = run_cli(td, "decompose --points \"" + pts +
                                        "\" --class delaunay --r 0.25 --out-dir \"" +
                                        td.dir.string() + "\"");
    CHECK(r.exit_code == 3);
    CHECK(r.err.find("numeric error") != std::string::npos);
}

TEST_CASE("sample subcommand runs a uniform prior chain with full acceptance", "[cli]") {
    TempDir td;
    const Json cfg{{"seed", 11},
                   {"nerve", {{"class", "cech"}, {"dim", 2}, {"r", 0.3}}},
                   {"prior", {{"kind", "uniform-ball"}, {"n", 5}}},
                   {"chain", {{"steps", 300}, {"burn_in", 50}}}};
    const std::string cfg_path = td.path("run.json");
    write_text(cfg_path, cfg.dump());

    const CliResult r = run_cli(td, "sample --config \"" + cfg_path +
                                        "\" --mode prior --out-dir \"" + td.dir.string() + "\"");
    REQUIRE(r.exit_code == 0);
    const auto out = lines_of(r.out);
    REQUIRE_FALSE(out.empty());
    CHECK(out.front() == "v_acceptance 1");
    CHECK(r.out.find("theta_acceptance") == std::string::npos);
    CHECK(r.out.find("top1 ") != std::string::npos);

    const auto trace_lines = lines_of(slurp(td.path("chain_trace.jsonl")));
    REQUIRE(trace_lines.size() >= 2);
    CHECK(Json::parse(trace_lines[0]).contains("resolved_spec"));
    const Json rec = Json::parse(trace_lines[1]);
    CHECK(rec.contains("structure"));
    CHECK(rec.contains("v_accepted"));

    const auto tally_lines = lines_of(slurp(td.path("chain_tally.csv")));
    REQUIRE(tally_lines.size() >= 3);
    CHECK(tally_lines[1] == "structure,frequency");
}

TEST_CASE("sample subcommand seed override changes the trace", "[cli]") {
    TempDir td;
    const Json cfg{{"seed", 11},
                   {"nerve", {{"class", "cech"}, {"dim", 2}, {"r", 0.3}}},
                   {"prior", {{"kind", "uniform-ball"}, {"n", 4}}},
                   {"chain", {{"steps", 200}, {"burn_in", 0}}}};
    const std::string cfg_path = td.path("run.json");
    write_text(cfg_path, cfg.dump());

    const std::string base = "sample --config \"" + cfg_path + "\" --mode prior --out-dir \"" +
                             td.dir.string() + "\"";
    REQUIRE(run_cli(td, base).exit_code == 0);
    const std::string trace_a = slurp(td.path("chain_trace.jsonl"));
    REQUIRE(run_cli(td, base).exit_code == 0);
    CHECK(slurp(td.path("chain_trace.jsonl")) == trace_a);  // reproducible
    REQUIRE(run_cli(td, base + " --seed 99").exit_code == 0);
    CHECK(slurp(td.path("chain_trace.jsonl")) != trace_a);  // seed override applies
}

TEST_CASE("sample subcommand enforces config preconditions", "[cli]") {
    TempDir td;
    SECTION("posterior mode without a data file path") {
        const Json cfg{{"seed", 5},
                       {"nerve", {{"class", "cech"}, {"dim", 2}, {"r", 0.3}}},
                       {"prior", {{"kind", "uniform-ball"}, {"n", 3}}},
                       {"model", {{"backend", "flat"}}},
                       {"chain", {{"steps", 50}}}};
        write_text(td.path("run.json"), cfg.dump());
        const CliResult r = run_cli(td, "sample --config \"" + td.path("run.json") +
                                            "\" --mode posterior");
        CHECK(r.exit_code == 2);
        CHECK(r.err.find("config error") != std::string::npos);
    }
    SECTION("unknown top-level key") {
        write_text(td.path("run.json"), R"({"seed": 3, "bogus": 1})");
        const CliResult r =
            run_cli(td, "sample --config \"" + td.path("run.json") + "\" --mode prior");
        CHECK(r.exit_code == 2);
        CHECK(r.err.find("bogus") != std::string::npos);
    }
    SECTION("chain block is required") {
        const Json cfg{{"seed", 3}, {"prior", {{"kind", "uniform-ball"}, {"n", 3}}}};
        write_text(td.path("run.json"), cfg.dump());
        CHECK(run_cli(td, "sample --config \"" + td.path("run.json") + "\" --mode prior")
                  .exit_code == 2);
    }
    SECTION("invalid mode string") {
        write_text(td.path("run.json"), R"({"seed": 3})");
        CHECK(run_cli(td, "sample --config \"" + td.path("run.json") + "\" --mode banana")
                  .exit_code == 2);
    }
    SECTION("missing config file") {
        CHECK(run_cli(td, "sample --config \"" + td.path("absent.json") + "\" --mode prior")
                  .exit_code == 2);
    }
}

TEST_CASE("gen-data subcommand writes synthetic data with a spec header", "[cli]") {
    TempDir td;
    SECTION("zero observations give a header-only file") {
        const Json cfg{{"seed", 17},
                       {"model",
                        {{"backend", "clayton-jt"},
                         {"theta_true", 4.0},
                         {"n_obs", 0},
                         {"true_blocks", Json::array({Json::array({1, 2}), Json::array({2, 3})})}}}};
        write_text(td.path("gen.json"), cfg.dump());
        const std::string out_csv = td.path("data.csv");
        const CliResult r = run_cli(td, "gen-data --config \"" + td.path("gen.json") +
                                            "\" --out \"" + out_csv + "\"");
        REQUIRE(r.exit_code == 0);
        CHECK(r.out.find("wrote 0 rows") != std::string::npos);
        const auto rows = lines_of(slurp(out_csv));
        REQUIRE(rows.size() == 2);
        CHECK(rows[0].rfind("# spec ", 0) == 0);
        CHECK(rows[1] == "x1,x2,x3");
    }
    SECTION("generated data round-trips through the reader") {
        const Json cfg{{"seed", 17},
                       {"model",
                        {{"backend", "clayton-jt"},
                         {"theta_true", 4.0},
                         {"n_obs", 25},
                         {"true_blocks", Json::array({Json::array({1, 2}), Json::array({2, 3})})}}}};
        write_text(td.path("gen.json"), cfg.dump());
        const std::string out_csv = td.path("data.csv");
        REQUIRE(run_cli(td, "gen-data --config \"" + td.path("gen.json") + "\" --out \"" +
                                out_csv + "\"")
                    .exit_code == 0);
        const DataMatrix data = read_data_csv(out_csv);
        CHECK(data.n_rows() == 25);
        CHECK(data.cols() == 3);
        for (const auto& row : data.rows)
            for (double v : row) {
                CHECK(v > 0.0);
                CHECK(v <= 1.0);
            }
    }
    SECTION("flat backend has no generator") {
        const Json cfg{{"seed", 17}, {"model", {{"backend", "flat"}}}};
        write_text(td.path("gen.json"), cfg.dump());
        CHECK(run_cli(td, "gen-data --config \"" + td.path("gen.json") + "\"").exit_code == 2);
    }
}

TEST_CASE("experiment subcommand runs the registered summaries", "[cli]") {
    TempDir td;
    SECTION("table3 prints the distance-scale trace") {
        const CliResult r =
            run_cli(td, "experiment --id table3 --out-dir \"" + td.dir.string() + "\"");
        REQUIRE(r.exit_code == 0);
        CHECK(r.out.find("0.313") != std::string::npos);
        CHECK(r.out.find("~(1,2)") != std::string::npos);
        CHECK(r.out.find("[1,3,4][2,4,5]") != std::string::npos);
        CHECK(fs::exists(td.path("table3.csv")));
    }
    SECTION("unknown experiment id") {
        const CliResult r = run_cli(td, "experiment --id nosuch");
        CHECK(r.exit_code == 2);
        CHECK(r.err.find("config error") != std::string::npos);
    }
}
