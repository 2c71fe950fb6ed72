#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "test_util.hpp"

namespace fs = std::filesystem;

namespace {

std::string binary() {
    const char* bin = std::getenv("CDINDEX_BIN");
    REQUIRE_MESSAGE(bin != nullptr, "CDINDEX_BIN must point at the cdindex binary");
    return bin;
}

struct Run {
    int exit_code;
    std::string out;
    std::string err;
};

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::stringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("cdindex_cli_" + std::to_string(::getpid()) + "_" +
                std::to_string(counter++));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string file(const std::string& name) const { return (path / name).string(); }
    static inline int counter = 0;
};

Run run_cli(const TempDir& dir, const std::string& args) {
    static int invocation = 0;
    auto out_path = dir.path / ("stdout_" + std::to_string(invocation));
    auto err_path = dir.path / ("stderr_" + std::to_string(invocation));
    ++invocation;
    std::string cmd = binary() + " " + args + " >" + out_path.string() + " 2>" +
                      err_path.string();
    int status = std::system(cmd.c_str());
    Run result;
    result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    result.out = slurp(out_path);
    result.err = slurp(err_path);
    return result;
}

} // namespace

TEST_CASE("compute reproduces the worked example end to end") {
    TempDir dir;
    auto results = dir.file("results.csv");
    auto run = run_cli(dir, "compute --input " + testutil::fixture("fig1.jsonl") +
                                " --t 2 --out " + results);
    CHECK(run.exit_code == 0);
    auto text = slurp(results);
    CHECK(text.find("f,2,0.200000,5,3,2,2,1\n") != std::string::npos);
    CHECK(run.err.find("\"total_focals\":9") != std::string::npos);
    CHECK(run.err.find("\"defined\":2") != std::string::npos);
}

TEST_CASE("compute on the edge-list fixture agrees with nested input") {
    TempDir dir;
    auto a = dir.file("nested.csv");
    auto b = dir.file("edgelist.csv");
    CHECK(run_cli(dir, "compute --input " + testutil::fixture("fig1.jsonl") +
                           " --t 2 --out " + a)
              .exit_code == 0);
    CHECK(run_cli(dir, "compute --nodes " + testutil::fixture("fig1_nodes.csv") +
                           " --edges " + testutil::fixture("fig1_edges.csv") +
                           " --t 2 --out " + b)
              .exit_code == 0);
    CHECK(slurp(a) == slurp(b));
}

TEST_CASE("synth is byte-deterministic and both algorithms agree") {
    TempDir dir;
    auto args = "synth --nodes 10000 --edges 40000 --seed 11 --acausal 0.2 --out-nodes " +
                dir.file("n1.csv") + " --out-edges " + dir.file("e1.csv");
    CHECK(run_cli(dir, args).exit_code == 0);
    auto args2 = "synth --nodes 10000 --edges 40000 --seed 11 --acausal 0.2 --out-nodes " +
                 dir.file("n2.csv") + " --out-edges " + dir.file("e2.csv");
    CHECK(run_cli(dir, args2).exit_code == 0);
    CHECK(slurp(dir.file("n1.csv")) == slurp(dir.file("n2.csv")));
    CHECK(slurp(dir.file("e1.csv")) == slurp(dir.file("e2.csv")));

    auto both = run_cli(dir, "compute --nodes " + dir.file("n1.csv") + " --edges " +
                                 dir.file("e1.csv") + " --t 5 --algorithm both --out " +
                                 dir.file("results.csv"));
    CHECK(both.exit_code == 0);
    CHECK(both.err.find("\"mismatches\":0") != std::string::npos);
}

TEST_CASE("verify passes on fresh results and fails on a perturbed row") {
    TempDir dir;
    auto results = dir.file("results.csv");
    REQUIRE(run_cli(dir, "compute --input " + testutil::fixture("fig1.jsonl") +
                             " --t 2 --out " + results)
                .exit_code == 0);

    auto clean = run_cli(dir, "verify --input " + testutil::fixture("fig1.jsonl") +
                                  " --results " + results + " --sample 0");
    CHECK(clean.exit_code == 0);
    CHECK(clean.err.find("\"discrepancies\":0") != std::string::npos);

    // hand-written expected file for the worked example
    auto expected = run_cli(dir, "verify --input " + testutil::fixture("fig1.jsonl") +
                                     " --results " +
                                     testutil::fixture("fig1_expected_t2.csv") +
                                     " --sample 0");
    CHECK(expected.exit_code == 0);

    auto text = slurp(results);
    auto pos = text.find("0.200000");
    REQUIRE(pos != std::string::npos);
    text.replace(pos, 8, "0.300000");
    std::ofstream(results, std::ios::binary) << text;
    auto broken = run_cli(dir, "verify --input " + testutil::fixture("fig1.jsonl") +
                                   " --results " + results + " --sample 0");
    CHECK(broken.exit_code == 4);
    CHECK(broken.err.find("\"discrepancies\":1") != std::string::npos);
    CHECK(broken.out.find("f,cd,0.300000,0.200000") != std::string::npos);
}

TEST_CASE("stats, classify and compare pipeline") {
    TempDir dir;
    auto results = dir.file("results.csv");
    REQUIRE(run_cli(dir, "compute --input " + testutil::fixture("fig1.jsonl") +
                             " --t 2 --out " + results)
                .exit_code == 0);

    auto stats = run_cli(dir, "stats --results " + results + " --histogram-out " +
                                  dir.file("hist.csv") + " --source fig1");
    CHECK(stats.exit_code == 0);
    CHECK(stats.out.find("\"count\":2") != std::string::npos);
    CHECK(stats.out.find("\"mean\":0.1") != std::string::npos);
    auto hist = slurp(dir.file("hist.csv"));
    CHECK(hist.rfind("bin_lower,source,count\n", 0) == 0);
    CHECK(hist.find(",fig1,1") != std::string::npos);

    auto labels = dir.file("labels.csv");
    CHECK(run_cli(dir, "classify --results " + results + " --fraction 0.1 --out " +
                           labels)
              .exit_code == 0);
    auto label_text = slurp(labels);
    CHECK(label_text.rfind("focal_id,label\n", 0) == 0);

    auto cmp = run_cli(dir, "compare --truth " + labels + " --pred " + labels +
                                " --matrix-out " + dir.file("matrix.csv"));
    CHECK(cmp.exit_code == 0);
    CHECK(cmp.out.rfind("class,precision,recall,f1,support", 0) == 0);
    CHECK(cmp.out.find("disruptive,1.000000,1.000000,1.000000,1") != std::string::npos);
    auto matrix = slurp(dir.file("matrix.csv"));
    CHECK(matrix.rfind("truth_label,pred_consolidating,pred_neutral,pred_disruptive\n",
                       0) == 0);
}

TEST_CASE("trend emits per-year means") {
    TempDir dir;
    auto results = dir.file("results.csv");
    REQUIRE(run_cli(dir, "compute --input " + testutil::fixture("fig1.jsonl") +
                             " --t 2 --out " + results)
                .exit_code == 0);
    auto trend = run_cli(dir, "trend --input " + testutil::fixture("fig1.jsonl") +
                                  " --results " + results);
    CHECK(trend.exit_code == 0);
    CHECK(trend.out == "year,mean_cd,count\n2000,0.200000,1\n2001,0.000000,1\n");
}

TEST_CASE("compute with --emit-undefined and filters") {
    TempDir dir;
    auto all_rows = run_cli(dir, "compute --input " + testutil::fixture("fig1.jsonl") +
                                     " --t 2 --emit-undefined --out -");
    CHECK(all_rows.exit_code == 0);
    CHECK(std::count(all_rows.out.begin(), all_rows.out.end(), '\n') == 10); // header + 9

    auto filtered = run_cli(dir, "compute --input " + testutil::fixture("fig1.jsonl") +
                                     " --t 2 --min-refs 1 --out -");
    CHECK(filtered.exit_code == 0);
    CHECK(filtered.out.find("f,2,1.000000,3,0") != std::string::npos);
}

TEST_CASE("compute on an edgeless graph emits only the header") {
    TempDir dir;
    std::ofstream(dir.file("nodes.csv")) << "id,year\na,2000\nb,2001\n";
    std::ofstream(dir.file("edges.csv")) << "citing_id,cited_id\n";
    auto run = run_cli(dir, "compute --nodes " + dir.file("nodes.csv") + " --edges " +
                                dir.file("edges.csv") + " --t 5 --out -");
    CHECK(run.exit_code == 0);
    CHECK(run.out == "focal_id,t,cd,n,k,n_disruptive,n_neutral,n_consolidating\n");
}

TEST_CASE("exit codes distinguish failure classes") {
    TempDir dir;
    // missing file -> io
    CHECK(run_cli(dir, "compute --input /nonexistent.jsonl --out -").exit_code == 5);
    // malformed network -> parse
    std::ofstream(dir.file("garbage.jsonl")) << "{\"id\": 12}\n";
    CHECK(run_cli(dir, "compute --input " + dir.file("garbage.jsonl") + " --out -")
              .exit_code == 2);
    // bad flag value -> validation
    CHECK(run_cli(dir, "compute --input " + testutil::fixture("fig1.jsonl") +
                           " --algorithm sideways --out -")
              .exit_code == 3);
    // missing input entirely -> validation
    CHECK(run_cli(dir, "compute --out -").exit_code == 3);
    // stats on an empty results file -> validation
    std::ofstream(dir.file("empty.csv"))
        << "focal_id,t,cd,n,k,n_disruptive,n_neutral,n_consolidating\n";
    CHECK(run_cli(dir, "stats --results " + dir.file("empty.csv")).exit_code == 3);
}

TEST_CASE("jsonl results format round-trips through the tools") {
    TempDir dir;
    auto results = dir.file("results.jsonl");
    REQUIRE(run_cli(dir, "compute --input " + testutil::fixture("fig1.jsonl") +
                             " --t 2 --out-format jsonl --out " + results)
                .exit_code == 0);
    auto text = slurp(results);
    CHECK(text.find("\"focal_id\":\"f\"") != std::string::npos);
    CHECK(text.find("\"cd\":0.2") != std::string::npos);
    auto verify = run_cli(dir, "verify --input " + testutil::fixture("fig1.jsonl") +
                                   " --results " + results +
                                   " --results-format jsonl --sample 0");
    CHECK(verify.exit_code == 0);
}
