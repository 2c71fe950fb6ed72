// cdindex: command-line front end wiring ingestion, batch CD computation and
// validation analytics into reproducible file-to-file pipelines.
//
// Data goes to stdout or files; progress and reports go to stderr. Exit codes:
//   0 success, 1 unexpected failure, 2 input parse failure,
//   3 flag/validation failure, 4 algorithm or verification mismatch,
//   5 I/O failure.

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <random>
#include <string>
#include <vector>

#include "cdindex/analytics.hpp"
#include "cdindex/batch.hpp"
#include "cdindex/cd.hpp"
#include "cdindex/io.hpp"
#include "cdindex/network.hpp"
#include "cdindex/synth.hpp"

namespace {

using nlohmann::ordered_json;
using namespace cdindex;

constexpr int kExitOk = 0;
constexpr int kExitUnexpected = 1;
constexpr int kExitParse = 2;
constexpr int kExitValidation = 3;
constexpr int kExitMismatch = 4;
constexpr int kExitIo = 5;

int exit_code_for(ErrorCategory category) {
    switch (category) {
        case ErrorCategory::Parse: return kExitParse;
        case ErrorCategory::Validation: return kExitValidation;
        case ErrorCategory::Mismatch: return kExitMismatch;
        case ErrorCategory::Io: return kExitIo;
    }
    return kExitUnexpected;
}

struct NetworkArgs {
    std::string nested;
    std::string nodes;
    std::string edges;
    std::string format;            // nested | edgelist; inferred when empty
    std::string dangling = "drop"; // drop | error | materialize
    bool strict_years = false;
};

void add_network_options(CLI::App* cmd, NetworkArgs& args) {
    cmd->add_option("--input", args.nested, "network as nested JSON lines");
    auto* nodes = cmd->add_option("--nodes", args.nodes, "nodes CSV (id,year)");
    auto* edges =
        cmd->add_option("--edges", args.edges, "edges CSV (citing_id,cited_id)");
    nodes->needs(edges);
    edges->needs(nodes);
    cmd->add_option("--format", args.format, "network format: nested|edgelist")
        ->check(CLI::IsMember({"nested", "edgelist"}));
    cmd->add_option("--dangling", args.dangling,
                    "dangling-edge policy: drop|error|materialize")
        ->check(CLI::IsMember({"drop", "error", "materialize"}));
    cmd->add_flag("--strict-years", args.strict_years,
                  "fail on records without a year instead of skipping them");
}

DanglingPolicy dangling_from(const std::string& name) {
    if (name == "error") return DanglingPolicy::Error;
    if (name == "materialize") return DanglingPolicy::Materialize;
    return DanglingPolicy::Drop;
}

LoadResult load_network(const NetworkArgs& args) {
    LoadOptions options;
    options.dangling = dangling_from(args.dangling);
    options.lenient_missing_year = !args.strict_years;

    bool edgelist;
    if (args.format == "nested")
        edgelist = false;
    else if (args.format == "edgelist")
        edgelist = true;
    else
        edgelist = !args.nodes.empty();

    if (edgelist) {
        if (args.nodes.empty() || args.edges.empty())
            throw Error(ErrorCategory::Validation,
                        "edgelist input needs --nodes and --edges");
        return load_edgelist(args.nodes, args.edges, options);
    }
    if (args.nested.empty())
        throw Error(ErrorCategory::Validation,
                    "provide --input (nested) or --nodes/--edges (edgelist)");
    return load_nested(args.nested, options);
}

ordered_json ingest_json(const IngestReport& report) {
    return {{"records_read", report.records_read},
            {"edges_read", report.edges_read},
            {"duplicate_edges_collapsed", report.duplicate_edges_collapsed},
            {"dangling_dropped", report.dangling_dropped},
            {"missing_year_skipped", report.missing_year_skipped},
            {"self_loops_dropped", report.self_loops_dropped},
            {"year_conflicts", report.year_conflicts},
            {"stubs_materialized", report.stubs_materialized}};
}

ResultFormat result_format_from(const std::string& name) {
    return name == "jsonl" ? ResultFormat::JsonLines : ResultFormat::Csv;
}

// Runs a writer against stdout ("-") or a file.
template <typename Fn>
void with_output(const std::string& path, Fn&& fn) {
    if (path == "-" || path.empty()) {
        fn(std::cout);
        std::cout.flush();
        if (!std::cout) throw IoError("failed writing to stdout");
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open for writing: " + path);
    fn(out);
    out.flush();
    if (!out) throw IoError("failed writing: " + path);
}

std::optional<std::pair<int, int>> year_range_from(int year_min, int year_max,
                                                   bool has_min, bool has_max) {
    if (!has_min && !has_max) return std::nullopt;
    int lo = has_min ? year_min : std::numeric_limits<int>::min();
    int hi = has_max ? year_max : std::numeric_limits<int>::max();
    return std::make_pair(lo, hi);
}

std::unordered_set<PubId> read_id_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open for reading: " + path);
    std::unordered_set<PubId> ids;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (!line.empty()) ids.insert(line);
    }
    return ids;
}

// ---------------------------------------------------------------- compute --

struct ComputeArgs {
    NetworkArgs network;
    int t = 5;
    std::string algorithm = "decomposed";
    unsigned parallelism = 0;
    unsigned min_refs = 0;
    bool has_min_refs = false;
    int year_min = 0, year_max = 0;
    bool has_year_min = false, has_year_max = false;
    std::string ids_file;
    bool emit_undefined = false;
    std::string out = "-";
    std::string out_format = "csv";
    std::uint64_t progress_every = 0;
};

int run_compute(const ComputeArgs& args) {
    auto loaded = load_network(args.network);

    BatchSpec spec;
    spec.params.t = args.t;
    spec.emit_undefined = args.emit_undefined;
    spec.parallelism = args.parallelism;
    if (args.algorithm == "original")
        spec.algorithm = Algorithm::Original;
    else if (args.algorithm == "both")
        spec.algorithm = Algorithm::Both;
    if (args.has_min_refs) spec.filter.min_references = args.min_refs;
    spec.filter.year_range = year_range_from(args.year_min, args.year_max,
                                             args.has_year_min, args.has_year_max);
    if (!args.ids_file.empty()) spec.filter.allowed_ids = read_id_file(args.ids_file);
    if (args.progress_every > 0) {
        spec.progress_interval = args.progress_every;
        spec.progress = [](std::uint64_t done, std::uint64_t total) {
            std::fprintf(stderr, "progress: %llu/%llu\n",
                         static_cast<unsigned long long>(done),
                         static_cast<unsigned long long>(total));
        };
    }

    std::vector<CdResult> results;
    BatchReport report = compute_all(loaded.network, spec,
                                     [&](const CdResult& res) { results.push_back(res); });

    with_output(args.out, [&](std::ostream& out) {
        write_results(out, results, result_format_from(args.out_format));
    });

    ordered_json summary{{"total_focals", report.total_focals},
                         {"defined", report.defined},
                         {"undefined", report.undefined},
                         {"mismatches", report.mismatches},
                         {"wall_time_s", report.wall_time.count()},
                         {"throughput", report.throughput},
                         {"ingest", ingest_json(loaded.report)}};
    std::cerr << summary.dump() << '\n';

    if (report.mismatches > 0) {
        std::cerr << "error: " << report.mismatches
                  << " focal(s) disagree between algorithms\n";
        return kExitMismatch;
    }
    return kExitOk;
}

// ------------------------------------------------------------------ stats --

struct StatsArgs {
    std::string results;
    std::string results_format = "csv";
    std::string histogram_out;
    double bin_width = 0.01;
    std::string source = "results";
};

int run_stats(const StatsArgs& args) {
    auto results = read_results_file(args.results, result_format_from(args.results_format));
    SummaryStats stats = summarize(results);
    ordered_json j{{"count", stats.count}, {"mean", stats.mean},
                   {"std", stats.std_dev}, {"min", stats.min},
                   {"max", stats.max},     {"q25", stats.q25},
                   {"q50", stats.q50},     {"q75", stats.q75},
                   {"q95", stats.q95},     {"q99", stats.q99}};
    std::cout << j.dump() << '\n';

    if (!args.histogram_out.empty()) {
        Histogram hist = make_histogram(results, args.bin_width);
        with_output(args.histogram_out, [&](std::ostream& out) {
            write_histogram_csv(out, hist, args.source);
        });
    }
    return kExitOk;
}

// ------------------------------------------------------------------ trend --

struct TrendArgs {
    NetworkArgs network;
    std::string results;
    std::string results_format = "csv";
    std::string out = "-";
};

int run_trend(const TrendArgs& args) {
    auto results = read_results_file(args.results, result_format_from(args.results_format));
    auto loaded = load_network(args.network);
    std::unordered_map<PubId, int> years;
    years.reserve(loaded.network.size());
    for (NodeIndex i = 0; i < loaded.network.size(); ++i)
        years.emplace(loaded.network.id_of(i), loaded.network.year_of(i));
    auto trend = yearly_trend(results, years);
    with_output(args.out, [&](std::ostream& out) { write_trend_csv(out, trend); });
    return kExitOk;
}

// --------------------------------------------------------------- classify --

struct ClassifyArgs {
    std::string results;
    std::string results_format = "csv";
    double fraction = 0.01;
    std::string out = "-";
};

int run_classify(const ClassifyArgs& args) {
    auto results = read_results_file(args.results, result_format_from(args.results_format));
    LabelMap labels = classify(results, args.fraction);
    with_output(args.out, [&](std::ostream& out) { write_labels(out, labels); });
    return kExitOk;
}

// ---------------------------------------------------------------- compare --

struct CompareArgs {
    std::string truth;
    std::string pred;
    std::string matrix_out;
};

int run_compare(const CompareArgs& args) {
    LabelMap truth = read_labels_file(args.truth);
    LabelMap pred = read_labels_file(args.pred);
    LabelComparison cmp = compare_labels(truth, pred);

    char buf[64];
    std::cout << "class,precision,recall,f1,support\n";
    for (std::size_t c = 0; c < 3; ++c) {
        const ClassMetrics& m = cmp.per_class[c];
        std::snprintf(buf, sizeof(buf), "%.6f,%.6f,%.6f", m.precision, m.recall, m.f1);
        std::cout << label_name(static_cast<DisruptionLabel>(c)) << ',' << buf << ','
                  << m.support << '\n';
    }
    std::cout.flush();

    if (!args.matrix_out.empty()) {
        with_output(args.matrix_out, [&](std::ostream& out) {
            out << "truth_label,pred_consolidating,pred_neutral,pred_disruptive\n";
            for (std::size_t r = 0; r < 3; ++r) {
                out << label_name(static_cast<DisruptionLabel>(r));
                for (std::size_t c = 0; c < 3; ++c) out << ',' << cmp.matrix[r][c];
                out << '\n';
            }
        });
    }
    std::cerr << ordered_json{{"overlap", cmp.overlap}}.dump() << '\n';
    return kExitOk;
}

// ------------------------------------------------------------------ synth --

struct SynthArgs {
    std::uint64_t nodes = 0;
    std::uint64_t edges = 0;
    int year_min = 1950;
    int year_max = 2020;
    std::uint64_t seed = 0;
    double acausal = 0.0;
    std::string out_nodes;
    std::string out_edges;
    std::string out_nested;
};

int run_synth(const SynthArgs& args) {
    SynthSpec spec;
    spec.nodes = args.nodes;
    spec.edges = args.edges;
    spec.year_min = args.year_min;
    spec.year_max = args.year_max;
    spec.seed = args.seed;
    spec.acausal_fraction = args.acausal;
    auto records = synth_records(spec);

    std::uint64_t emitted = 0;
    for (const auto& rec : records) emitted += rec.references.size();

    if (!args.out_nested.empty()) {
        with_output(args.out_nested,
                    [&](std::ostream& out) { write_nested(out, records); });
    } else if (!args.out_nodes.empty() && !args.out_edges.empty()) {
        std::ofstream nodes(args.out_nodes, std::ios::binary);
        if (!nodes) throw IoError("cannot open for writing: " + args.out_nodes);
        std::ofstream edges(args.out_edges, std::ios::binary);
        if (!edges) throw IoError("cannot open for writing: " + args.out_edges);
        write_edgelist(nodes, edges, records);
        nodes.flush();
        edges.flush();
        if (!nodes || !edges) throw IoError("failed writing edge list files");
    } else {
        throw Error(ErrorCategory::Validation,
                    "provide --out-nested or --out-nodes/--out-edges");
    }

    std::cerr << ordered_json{{"nodes", records.size()},
                              {"edges_requested", args.edges},
                              {"edges_emitted", emitted}}
                     .dump()
              << '\n';
    if (emitted < args.edges)
        std::cerr << "warning: constraints allowed only " << emitted << " of "
                  << args.edges << " edges\n";
    return kExitOk;
}

// ----------------------------------------------------------------- verify --

struct VerifyArgs {
    NetworkArgs network;
    std::string results;
    std::string results_format = "csv";
    std::uint64_t sample = 1000; // 0 = verify every row
    std::uint64_t seed = 0;
    double tolerance = 1e-12;
};

int run_verify(const VerifyArgs& args) {
    auto rows = read_results_file(args.results, result_format_from(args.results_format));
    auto loaded = load_network(args.network);

    std::vector<std::size_t> order(rows.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::size_t take = args.sample == 0
                           ? rows.size()
                           : std::min<std::size_t>(args.sample, rows.size());
    std::mt19937_64 rng(args.seed);
    for (std::size_t i = 0; i < take && rows.size() > 1; ++i) {
        std::size_t j = i + rng() % (rows.size() - i);
        std::swap(order[i], order[j]);
    }

    std::uint64_t discrepancies = 0;
    std::cout << "focal_id,field,file_value,recomputed_value\n";
    auto report = [&](const PubId& focal, const char* field, const std::string& file_value,
                      const std::string& new_value) {
        ++discrepancies;
        std::cout << focal << ',' << field << ',' << file_value << ',' << new_value
                  << '\n';
    };
    auto format6 = [](double v) {
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%.6f", v);
        return std::string(buf);
    };

    for (std::size_t i = 0; i < take; ++i) {
        const CdResult& row = rows[order[i]];
        auto idx = loaded.network.find(row.focal);
        if (!idx) {
            report(row.focal, "presence", "present", "missing-from-network");
            continue;
        }
        CdParams params{row.t};
        CdResult fresh = cd_original(loaded.network, row.focal, params);
        auto check_count = [&](const char* field, std::uint64_t a, std::uint64_t b) {
            if (a != b) report(row.focal, field, std::to_string(a), std::to_string(b));
        };
        check_count("n", row.n, fresh.n);
        check_count("k", row.k, fresh.k);
        check_count("n_disruptive", row.n_disruptive, fresh.n_disruptive);
        check_count("n_neutral", row.n_neutral, fresh.n_neutral);
        check_count("n_consolidating", row.n_consolidating, fresh.n_consolidating);
        if (row.cd.has_value() != fresh.cd.has_value()) {
            report(row.focal, "cd", row.cd ? format6(*row.cd) : "undefined",
                   fresh.cd ? format6(*fresh.cd) : "undefined");
        } else if (row.cd && fresh.cd) {
            // Files carry cd at 6 decimals; compare at the same precision.
            double expected = std::round(*fresh.cd * 1e6) / 1e6;
            if (std::abs(*row.cd - expected) > args.tolerance)
                report(row.focal, "cd", format6(*row.cd), format6(*fresh.cd));
        }
    }
    std::cout.flush();

    std::cerr << ordered_json{{"rows", rows.size()},
                              {"sampled", take},
                              {"discrepancies", discrepancies}}
                     .dump()
              << '\n';
    return discrepancies == 0 ? kExitOk : kExitMismatch;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"citation-network CD index toolkit"};
    app.require_subcommand(1);
    app.fallthrough(); // lets subcommands see app-level flags like --config
    app.set_config("--config", "", "read defaults from a config file");

    ComputeArgs compute_args;
    auto* compute = app.add_subcommand(
        "compute", "compute CD_t for every publication in a network");
    add_network_options(compute, compute_args.network);
    compute->add_option("--t", compute_args.t, "impact span in years")
        ->default_val(5)
        ->check(CLI::PositiveNumber);
    compute->add_option("--algorithm", compute_args.algorithm,
                        "original|decomposed|both (both cross-checks)")
        ->check(CLI::IsMember({"original", "decomposed", "both"}));
    compute->add_option("--parallelism", compute_args.parallelism,
                        "worker threads (0 = hardware)")
        ->envname("CDINDEX_PARALLELISM");
    auto* min_refs = compute->add_option("--min-refs", compute_args.min_refs,
                                         "keep only focals with at least this many references");
    auto* year_min_opt =
        compute->add_option("--year-min", compute_args.year_min, "focal year lower bound");
    auto* year_max_opt =
        compute->add_option("--year-max", compute_args.year_max, "focal year upper bound");
    compute->add_option("--ids-file", compute_args.ids_file,
                        "restrict to ids listed one per line");
    compute->add_flag("--emit-undefined", compute_args.emit_undefined,
                      "emit rows with undefined cd (n = 0)");
    compute->add_option("--out", compute_args.out, "results path ('-' = stdout)");
    compute->add_option("--out-format", compute_args.out_format, "csv|jsonl")
        ->check(CLI::IsMember({"csv", "jsonl"}));
    compute->add_option("--progress-every", compute_args.progress_every,
                        "report progress to stderr every N focals");
    compute->callback([&] {
        compute_args.has_min_refs = min_refs->count() > 0;
        compute_args.has_year_min = year_min_opt->count() > 0;
        compute_args.has_year_max = year_max_opt->count() > 0;
    });

    StatsArgs stats_args;
    auto* stats = app.add_subcommand("stats", "summary statistics over a results file");
    stats->add_option("--results", stats_args.results, "results file")->required();
    stats->add_option("--results-format", stats_args.results_format, "csv|jsonl")
        ->check(CLI::IsMember({"csv", "jsonl"}));
    stats->add_option("--histogram-out", stats_args.histogram_out,
                      "also write a histogram CSV here");
    stats->add_option("--bin-width", stats_args.bin_width, "histogram bin width")
        ->default_val(0.01);
    stats->add_option("--source", stats_args.source,
                      "source label for histogram rows");

    TrendArgs trend_args;
    auto* trend = app.add_subcommand("trend", "mean CD per publication year");
    add_network_options(trend, trend_args.network);
    trend->add_option("--results", trend_args.results, "results file")->required();
    trend->add_option("--results-format", trend_args.results_format, "csv|jsonl")
        ->check(CLI::IsMember({"csv", "jsonl"}));
    trend->add_option("--out", trend_args.out, "trend CSV path ('-' = stdout)");

    ClassifyArgs classify_args;
    auto* classify_cmd = app.add_subcommand(
        "classify", "label top/bottom fraction as disruptive/consolidating");
    classify_cmd->add_option("--results", classify_args.results, "results file")
        ->required();
    classify_cmd
        ->add_option("--results-format", classify_args.results_format, "csv|jsonl")
        ->check(CLI::IsMember({"csv", "jsonl"}));
    classify_cmd->add_option("--fraction", classify_args.fraction,
                             "tail fraction in (0, 0.5)")
        ->default_val(0.01);
    classify_cmd->add_option("--out", classify_args.out, "labels CSV path");

    CompareArgs compare_args;
    auto* compare = app.add_subcommand(
        "compare", "confusion matrix and per-class metrics for two label files");
    compare->add_option("--truth", compare_args.truth, "labels treated as truth")
        ->required();
    compare->add_option("--pred", compare_args.pred, "labels treated as prediction")
        ->required();
    compare->add_option("--matrix-out", compare_args.matrix_out,
                        "write the 3x3 matrix CSV here");

    SynthArgs synth_args;
    auto* synth = app.add_subcommand("synth", "generate a seeded synthetic network");
    synth->add_option("--nodes", synth_args.nodes, "node count")->required();
    synth->add_option("--edges", synth_args.edges, "edge count")->required();
    synth->add_option("--year-min", synth_args.year_min)->default_val(1950);
    synth->add_option("--year-max", synth_args.year_max)->default_val(2020);
    synth->add_option("--seed", synth_args.seed, "generator seed")->default_val(0);
    synth->add_option("--acausal", synth_args.acausal,
                      "fraction of edges pointing forward in time");
    synth->add_option("--out-nodes", synth_args.out_nodes, "nodes CSV path");
    synth->add_option("--out-edges", synth_args.out_edges, "edges CSV path");
    synth->add_option("--out-nested", synth_args.out_nested,
                      "nested JSON-lines path (instead of CSV pair)");

    VerifyArgs verify_args;
    auto* verify = app.add_subcommand(
        "verify", "recompute a sample of a results file and report discrepancies");
    add_network_options(verify, verify_args.network);
    verify->add_option("--results", verify_args.results, "results file")->required();
    verify->add_option("--results-format", verify_args.results_format, "csv|jsonl")
        ->check(CLI::IsMember({"csv", "jsonl"}));
    verify->add_option("--sample", verify_args.sample,
                       "rows to recompute (0 = all)")
        ->default_val(1000);
    verify->add_option("--seed", verify_args.seed, "sampling seed")->default_val(0);
    verify->add_option("--tolerance", verify_args.tolerance,
                       "max absolute cd difference")
        ->default_val(1e-12);

    try {
        app.parse(argc, argv);
        if (compute->parsed()) return run_compute(compute_args);
        if (stats->parsed()) return run_stats(stats_args);
        if (trend->parsed()) return run_trend(trend_args);
        if (classify_cmd->parsed()) return run_classify(classify_args);
        if (compare->parsed()) return run_compare(compare_args);
        if (synth->parsed()) return run_synth(synth_args);
        if (verify->parsed()) return run_verify(verify_args);
        return kExitValidation;
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kExitOk : kExitValidation;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_code_for(e.category());
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUnexpected;
    }
}
