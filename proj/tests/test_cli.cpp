#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "rpfm/cli.hpp"
#include "rpfm/matrix_market.hpp"
#include "rpfm/problem.hpp"
#include "rpfm/report.hpp"

using namespace rpfm;
namespace fs = std::filesystem;

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run rpfm_cli(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
    const fs::path d = fs::temp_directory_path() / ("rpfm_test_cli_" + name);
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<std::string> lines(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream in(s);
    for (std::string l; std::getline(in, l);) out.push_back(l);
    return out;
}

// Drops the time_ms column (index 5) of bench CSV rows.
std::string without_time(const std::string& csv) {
    std::string out;
    for (const auto& l : lines(csv)) {
        std::vector<std::string> cells;
        std::stringstream ss(l);
        for (std::string c; std::getline(ss, c, ',');) cells.push_back(c);
        if (cells.size() > 5) cells.erase(cells.begin() + 5);
        for (const auto& c : cells) out += c + ",";
        out += "\n";
    }
    return out;
}

const std::string kAfiro = std::string(RPFM_DATA_DIR) + "/netlib/afiro.mtx";

}  // namespace

TEST_CASE("generate from a matrix file") {
    const fs::path d = scratch("gen");
    const auto r = rpfm_cli({"generate", "--a", kAfiro, "--out", (d / "afiro").string()});
    REQUIRE(r.code == cli::kExitOk);
    CHECK(r.out.find("n=78") != std::string::npos);
    const LcpProblem p = load_bundle(d / "afiro");
    CHECK(p.size() == 78);
    CHECK(p.name == "afiro");
    REQUIRE(p.designed_solution);
    CHECK(termination_residual(p, p.designed_solution->x, p.designed_solution->y).terr() <=
          1e-12 * norm_inf(p.m));
}

TEST_CASE("dense variant is deterministic") {
    const fs::path d = scratch("dense");
    for (const char* out : {"a", "b"}) {
        REQUIRE(rpfm_cli({"generate", "--a", kAfiro, "--dense-eps", "1e-3", "--seed", "7", "--out",
                          (d / out).string()})
                    .code == cli::kExitOk);
    }
    CHECK(slurp(d / "a" / "M.mtx") == slurp(d / "b" / "M.mtx"));
    CHECK(slurp(d / "a" / "q.mtx") == slurp(d / "b" / "q.mtx"));
    CHECK(load_bundle(d / "a").name == "afiro_dense");
    CHECK(load_bundle(d / "a").seed == 7);

    REQUIRE(rpfm_cli({"generate", "--a", kAfiro, "--dense-eps", "1e-3", "--seed", "8", "--out",
                      (d / "c").string()})
                .code == cli::kExitOk);
    CHECK(slurp(d / "a" / "M.mtx") != slurp(d / "c" / "M.mtx"));
}

TEST_CASE("generate synthetic") {
    const fs::path d = scratch("syn");
    const auto r = rpfm_cli({"generate", "--synthetic", "4", "6", "--out", (d / "s").string()});
    REQUIRE(r.code == cli::kExitOk);
    CHECK(load_bundle(d / "s").size() == 10);
}

TEST_CASE("generate usage errors") {
    const fs::path d = scratch("genbad");
    CHECK(rpfm_cli({"generate", "--out", (d / "x").string()}).code == cli::kExitUsage);
    CHECK(rpfm_cli({"generate", "--a", kAfiro, "--synthetic", "2", "2", "--out", (d / "x").string()}).code ==
          cli::kExitUsage);
    CHECK(rpfm_cli({"generate", "--a", "/no/such.mtx", "--out", (d / "x").string()}).code == cli::kExitUsage);
    CHECK(rpfm_cli({"generate", "--synthetic", "2", "2"}).code == cli::kExitUsage);
    CHECK(rpfm_cli({"frobnicate"}).code == cli::kExitUsage);
    CHECK(rpfm_cli({}).code == cli::kExitUsage);

    std::ofstream(d / "bad.mtx") << "%%MatrixMarket matrix coordinate real general\n2 2 1\n9 9 1\n";
    const auto r = rpfm_cli({"generate", "--a", (d / "bad.mtx").string(), "--out", (d / "x").string()});
    CHECK(r.code == cli::kExitUsage);
    CHECK(r.err.find("error:") != std::string::npos);
}

TEST_CASE("solve writes a bench row and a trace") {
    const fs::path d = scratch("solve");
    REQUIRE(rpfm_cli({"generate", "--a", kAfiro, "--out", (d / "afiro").string()}).code == cli::kExitOk);
    const auto r = rpfm_cli({"solve", (d / "afiro").string(), "--trace", (d / "trace.csv").string(), "--record",
                             (d / "row.csv").string(), "--monitor"});
    CHECK(r.code == cli::kExitOk);
    const auto out = lines(r.out);
    REQUIRE(out.size() >= 2);
    CHECK(out[0] == kBenchCsvHeader);
    CHECK(out[1].rfind("afiro,78,rpfmtr,", 0) == 0);
    CHECK(out[1].find(",Converged") != std::string::npos);
    CHECK(r.out.find("# monitor pred_identity_max_err=") != std::string::npos);

    const auto trace = lines(slurp(d / "trace.csv"));
    REQUIRE(trace.size() > 2);
    CHECK(trace[0] == kTraceCsvHeader);
    CHECK(trace[1].rfind("0,1,", 0) == 0);
    CHECK(lines(slurp(d / "row.csv")).size() == 2);
}

TEST_CASE("solve exit codes") {
    const fs::path d = scratch("solvecodes");
    REQUIRE(rpfm_cli({"generate", "--synthetic", "4", "6", "--out", (d / "s").string()}).code == cli::kExitOk);

    const auto capped = rpfm_cli({"solve", (d / "s").string(), "--maxit", "1"});
    CHECK(capped.code == cli::kExitNumeric);
    CHECK(capped.out.find("MaxIterations") != std::string::npos);

    const auto dn = rpfm_cli({"solve", (d / "s").string(), "--solver", "damped_newton"});
    CHECK(dn.code == cli::kExitOk);
    CHECK(dn.out.find(",damped_newton,") != std::string::npos);
    CHECK(dn.out.find("# backtracks=") != std::string::npos);

    CHECK(rpfm_cli({"solve", (d / "missing").string()}).code == cli::kExitUsage);
    CHECK(rpfm_cli({"solve", (d / "s").string(), "--solver", "simplex"}).code == cli::kExitUsage);
    CHECK(rpfm_cli({"solve", (d / "s").string(), "--eps", "-1"}).code == cli::kExitUsage);
    CHECK(rpfm_cli({"solve", (d / "s").string(), "--maxit", "lots"}).code == cli::kExitUsage);
}

TEST_CASE("solve with aux seeds") {
    const fs::path d = scratch("aux");
    REQUIRE(rpfm_cli({"generate", "--synthetic", "2", "3", "--out", (d / "s").string()}).code == cli::kExitOk);
    const LcpProblem p = load_bundle(d / "s");
    save_vector(p.designed_solution->x, d / "u0.mtx");
    save_vector(p.designed_solution->y, d / "v0.mtx");
    const auto r = rpfm_cli({"solve", (d / "s").string(), "--upsilon", "0", "--aux-u0", (d / "u0.mtx").string(),
                             "--aux-v0", (d / "v0.mtx").string()});
    CHECK(r.code == cli::kExitOk);
    CHECK(r.out.find("# monitor aux_") != std::string::npos);
}

TEST_CASE("bench runs a manifest") {
    const fs::path d = scratch("bench");
    std::ofstream(d / "m.json") << R"({
        "seed": 3,
        "solvers": ["rpfmtr"],
        "problems": [{"synthetic": [3, 5]}, {"synthetic": [4, 4], "seed": 9}, {"synthetic": [2, 6], "name": "tiny"}],
        "output": {"csv": "out/bench.csv", "markdown": "out/bench.md"}
    })";
    const auto r = rpfm_cli({"bench", (d / "m.json").string()});
    CHECK(r.code == cli::kExitOk);
    const auto csv = lines(slurp(d / "out" / "bench.csv"));
    REQUIRE(csv.size() == 4);
    CHECK(csv[0] == kBenchCsvHeader);
    for (std::size_t i = 1; i < 4; ++i) CHECK(csv[i].find(",Converged") != std::string::npos);
    CHECK(csv[3].rfind("tiny,8,", 0) == 0);
    CHECK(slurp(d / "out" / "bench.md").find("| Problem (n) |") != std::string::npos);
    CHECK(r.out == slurp(d / "out" / "bench.md"));

    // same manifest, parallel workers: identical apart from timing
    const auto r2 = rpfm_cli({"bench", (d / "m.json").string(), "--jobs", "3", "--csv", (d / "b2.csv").string()});
    CHECK(r2.code == cli::kExitOk);
    CHECK(without_time(slurp(d / "b2.csv")) == without_time(slurp(d / "out" / "bench.csv")));
}

TEST_CASE("bench flags override the manifest config") {
    const fs::path d = scratch("benchcfg");
    std::ofstream(d / "m.json") << R"({"config": {"maxit": 1}, "problems": [{"synthetic": [3, 5]}]})";
    CHECK(rpfm_cli({"bench", (d / "m.json").string()}).code == cli::kExitNumeric);
    CHECK(rpfm_cli({"bench", (d / "m.json").string(), "--maxit", "600"}).code == cli::kExitOk);
}

TEST_CASE("bench edge cases") {
    const fs::path d = scratch("benchedge");
    std::ofstream(d / "empty.json") << R"({"problems": []})";
    const auto e = rpfm_cli({"bench", (d / "empty.json").string(), "--csv", (d / "e.csv").string()});
    CHECK(e.code == cli::kExitOk);
    CHECK(lines(slurp(d / "e.csv")).size() == 1);

    std::ofstream(d / "mixed.json") << R"({"problems": [{"synthetic": [3, 5]}, "nowhere", {"synthetic": [2, 2]}]})";
    const auto m = rpfm_cli({"bench", (d / "mixed.json").string(), "--csv", (d / "m.csv").string()});
    CHECK(m.code == cli::kExitNumeric);
    const auto rows = lines(slurp(d / "m.csv"));
    REQUIRE(rows.size() == 4);
    CHECK(rows[1].find(",Converged") != std::string::npos);
    CHECK(rows[2].find("nowhere,") == 0);
    CHECK(rows[2].find("Failed: ") != std::string::npos);
    CHECK(rows[3].find(",Converged") != std::string::npos);

    std::ofstream(d / "broken.json") << "{ not json";
    CHECK(rpfm_cli({"bench", (d / "broken.json").string()}).code == cli::kExitUsage);
    std::ofstream(d / "badkey.json") << R"({"config": {"speed": 11}, "problems": []})";
    CHECK(rpfm_cli({"bench", (d / "badkey.json").string()}).code == cli::kExitUsage);
    CHECK(rpfm_cli({"bench", (d / "none.json").string()}).code == cli::kExitUsage);
    CHECK(rpfm_cli({"bench", (d / "empty.json").string(), "--jobs", "0"}).code == cli::kExitUsage);
}

TEST_CASE("flow-check") {
    const fs::path d = scratch("flow");
    std::ofstream(d / "a.mtx") << "%%MatrixMarket matrix array real general\n1 1\n2\n";
    REQUIRE(rpfm_cli({"generate", "--a", (d / "a.mtx").string(), "--out", (d / "p").string()}).code ==
            cli::kExitOk);
    const std::string b = (d / "p").string();

    const auto ok = rpfm_cli({"flow-check", b, "--csv", (d / "t.csv").string()});
    CHECK(ok.code == cli::kExitOk);
    CHECK(ok.out.find("PASS") != std::string::npos);
    CHECK(lines(slurp(d / "t.csv")).size() == 10002);

    CHECK(rpfm_cli({"flow-check", b, "--sigma", "0.9"}).code == cli::kExitOk);
    CHECK(rpfm_cli({"flow-check", b, "--schedule", "zero"}).code == cli::kExitOk);

    const auto coarse = rpfm_cli({"flow-check", b, "--h", "1"});
    CHECK(coarse.code == cli::kExitNumeric);
    CHECK(coarse.out.find("FAIL") != std::string::npos);

    CHECK(rpfm_cli({"flow-check", b, "--sigma", "1.5"}).code == cli::kExitUsage);
    CHECK(rpfm_cli({"flow-check", b, "--schedule", "cubic"}).code == cli::kExitUsage);
    CHECK(rpfm_cli({"flow-check", (d / "none").string()}).code == cli::kExitUsage);
}

TEST_CASE("help exits cleanly") {
    CHECK(rpfm_cli({"--help"}).code == cli::kExitOk);
    CHECK(rpfm_cli({"flow-check", "--help"}).code == cli::kExitOk);
}
