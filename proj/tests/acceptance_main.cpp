// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Heavier workloads than the unit suites; expected wall time a few
// minutes on a small machine.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "cdindex/analytics.hpp"
#include "cdindex/batch.hpp"
#include "cdindex/cd.hpp"
#include "cdindex/io.hpp"
#include "cdindex/synth.hpp"
#include "oracle.hpp"
#include "test_util.hpp"

using namespace cdindex;

namespace {

struct Check {
    bool ok = true;
    std::string detail;

    void fail(const std::string& message) {
        if (ok) detail = message;
        ok = false;
    }
    void expect(bool condition, const std::string& message) {
        if (!condition) fail(message);
    }
    void note(const std::string& message) {
        if (ok) detail = message;
    }
};

CitationNetwork fig1() {
    return load_nested(testutil::fixture("fig1.jsonl")).network;
}

std::vector<CdResult> run_batch(const CitationNetwork& net, BatchSpec spec) {
    std::vector<CdResult> results;
    compute_all(net, spec, [&](const CdResult& res) { results.push_back(res); });
    return results;
}

// 1. Worked-example exactness on the checked-in fixture, under one second.
void criterion_worked_example(Check& check) {
    const auto started = std::chrono::steady_clock::now();
    auto net = fig1();
    struct Want {
        int t;
        double cd;
        std::uint64_t n, disruptive, neutral, consolidating;
    };
    for (const Want want : {Want{2, 0.2, 5, 2, 2, 1}, Want{1, 0.5, 2, 1, 1, 0}}) {
        auto original = cd_original(net, "f", CdParams{want.t});
        auto decomposed = cd_decomposed(net, "f", CdParams{want.t});
        for (const CdResult* res : {&original, &decomposed}) {
            check.expect(res->cd.has_value(), "cd undefined on fixture");
            if (!res->cd) return;
            check.expect(*res->cd == want.cd,
                         "t=" + std::to_string(want.t) + " cd != expected");
            check.expect(res->n == want.n && res->n_disruptive == want.disruptive &&
                             res->n_neutral == want.neutral &&
                             res->n_consolidating == want.consolidating,
                         "t=" + std::to_string(want.t) + " counts wrong");
            check.expect(res->k == 3, "k != 3");
        }
    }
    const std::chrono::duration<double> elapsed =
        std::chrono::steady_clock::now() - started;
    check.expect(elapsed.count() < 1.0, "fixture run exceeded 1 s");
    check.note("CD_2 = 0.2, CD_1 = 0.5 from both routes");
}

// 2. Decomposed == original on 1000 seeded random networks, every focal,
//    t in {1, 2, 5}, acausal noise on, under 60 s.
void criterion_equivalence(Check& check) {
    const auto started = std::chrono::steady_clock::now();
    std::uint64_t focals_checked = 0;
    for (std::uint64_t seed = 0; seed < 1000; ++seed) {
        auto net = build_network(synth_records(testutil::small_spec(seed)));
        CdWorkspace ws;
        for (int t : {1, 2, 5}) {
            CdParams params{t};
            for (NodeIndex i = 0; i < net.size(); ++i) {
                auto a = cd_original(net, i, params, ws);
                auto b = cd_decomposed(net, i, params, ws);
                ++focals_checked;
                if (!a.same_outcome(b) || (a.cd && *a.cd != *b.cd)) {
                    check.fail("mismatch at seed " + std::to_string(seed) + " focal " +
                               net.id_of(i) + " t " + std::to_string(t));
                    return;
                }
            }
        }
    }
    const std::chrono::duration<double> elapsed =
        std::chrono::steady_clock::now() - started;
    check.expect(elapsed.count() < 60.0, "equivalence sweep exceeded 60 s");
    char buf[128];
    std::snprintf(buf, sizeof(buf), "%llu focal evaluations, %.1f s",
                  static_cast<unsigned long long>(focals_checked), elapsed.count());
    check.note(buf);
}

// 3. k = 0 with citers means cd = 1; n = 0 means undefined, never 0.
void criterion_degenerate_cases(Check& check) {
    std::vector<PublicationRecord> records{
        {"norefs", 2000, {}, {}},
        {"c1", 2001, {"norefs"}, {}},
        {"c2", 2002, {"norefs"}, {}},
    };
    auto tiny = build_network(records);
    for (const CdResult& res : {cd_original(tiny, "norefs", CdParams{2}),
                                cd_decomposed(tiny, "norefs", CdParams{2})}) {
        check.expect(res.cd.has_value() && *res.cd == 1.0 && res.k == 0,
                     "k=0 focal with citers must score exactly 1");
    }

    std::uint64_t k0_seen = 0, undefined_seen = 0;
    for (std::uint64_t seed = 2000; seed < 2050; ++seed) {
        auto net = build_network(synth_records(testutil::small_spec(seed)));
        CdWorkspace ws;
        for (NodeIndex i = 0; i < net.size(); ++i) {
            auto res = cd_decomposed(net, i, CdParams{5}, ws);
            if (res.n == 0) {
                ++undefined_seen;
                check.expect(!res.cd.has_value(), "n=0 must leave cd undefined");
            } else if (res.k == 0) {
                ++k0_seen;
                check.expect(res.cd.has_value() && *res.cd == 1.0,
                             "k=0 with citers must score 1");
            }
        }
    }
    check.expect(k0_seen > 0 && undefined_seen > 0,
                 "sweep never hit the degenerate cases");
    check.note(std::to_string(k0_seen) + " zero-reference focals, " +
               std::to_string(undefined_seen) + " undefined focals checked");
}

// 4. Duplicating any subset of input edges changes no cd, 100 networks.
void criterion_dedup_invariance(Check& check) {
    for (std::uint64_t seed = 3000; seed < 3100; ++seed) {
        auto records = synth_records(testutil::small_spec(seed));
        auto dup =
            testutil::with_duplicated_edges(records, seed ^ 0x5deece66dull);
        auto base_net = build_network(records);
        auto dup_net = build_network(dup);
        CdWorkspace ws;
        for (int t : {2, 5}) {
            for (NodeIndex i = 0; i < base_net.size(); ++i) {
                auto a = cd_decomposed(base_net, i, CdParams{t}, ws);
                auto b = cd_decomposed(dup_net, dup_net.index_of(base_net.id_of(i)),
                                       CdParams{t}, ws);
                if (!a.same_outcome(b)) {
                    check.fail("duplicated edges changed cd at seed " +
                               std::to_string(seed));
                    return;
                }
            }
        }
    }
    check.note("100 networks, t in {2, 5}");
}

// 5. Batch result multiset identical at parallelism 1, 4, 8 on a 100k-node
//    synthetic network.
void criterion_parallelism_invariance(Check& check) {
    SynthSpec spec;
    spec.nodes = 100000;
    spec.edges = 1000000;
    spec.seed = 404;
    spec.acausal_fraction = 0.1;
    auto net = build_network(synth_records(spec));

    BatchSpec batch;
    batch.params.t = 5;
    batch.emit_undefined = true;

    batch.parallelism = 1;
    auto baseline = run_batch(net, batch);
    testutil::sort_results(baseline);
    for (unsigned p : {4u, 8u}) {
        batch.parallelism = p;
        auto candidate = run_batch(net, batch);
        testutil::sort_results(candidate);
        if (candidate.size() != baseline.size()) {
            check.fail("row count differs at parallelism " + std::to_string(p));
            return;
        }
        for (std::size_t i = 0; i < baseline.size(); ++i) {
            if (!testutil::same_result(baseline[i], candidate[i])) {
                check.fail("row " + baseline[i].focal + " differs at parallelism " +
                           std::to_string(p));
                return;
            }
        }
    }
    check.note(std::to_string(baseline.size()) + " rows identical at 1/4/8 workers");
}

// 6. Performance budget: CD_5 for all focals, 1M nodes / 10M edges, single
//    process, under 5 minutes.
void criterion_performance(Check& check) {
    SynthSpec spec;
    spec.nodes = 1000000;
    spec.edges = 10000000;
    spec.seed = 606;
    spec.acausal_fraction = 0.05;
    auto net = build_network(synth_records(spec));

    BatchSpec batch;
    batch.params.t = 5;
    batch.emit_undefined = true;
    std::uint64_t rows = 0;
    auto report = compute_all(net, batch, [&](const CdResult&) { ++rows; });

    check.expect(report.total_focals == spec.nodes, "focal count wrong");
    check.expect(rows == spec.nodes, "row count wrong");
    check.expect(report.wall_time.count() < 300.0,
                 "computation exceeded the 5 minute budget");
    char buf[160];
    std::snprintf(buf, sizeof(buf),
                  "%.1f s compute for %llu focals (%.0f/s), %llu defined",
                  report.wall_time.count(),
                  static_cast<unsigned long long>(report.total_focals),
                  report.throughput, static_cast<unsigned long long>(report.defined));
    check.note(buf);
}

// 7. Analytics agree with brute-force oracles on 10k random values.
void criterion_analytics_oracles(Check& check) {
    std::mt19937_64 rng(70707);
    std::vector<CdResult> results;
    std::vector<double> values;
    std::unordered_map<PubId, int> years;
    std::vector<std::pair<int, double>> year_rows;
    std::vector<std::pair<std::string, double>> id_rows;
    for (int i = 0; i < 10000; ++i) {
        PubId id = "p" + std::to_string(i);
        int year = 1950 + static_cast<int>(rng() % 70);
        years[id] = year;
        double v = static_cast<double>(rng() >> 11) * 0x1.0p-52 - 1.0;
        if (i % 97 == 0) v = 1.0; // boundary mass
        CdResult res;
        res.focal = id;
        res.t = 5;
        res.cd = v;
        res.n = 1;
        results.push_back(res);
        values.push_back(v);
        year_rows.emplace_back(year, v);
        id_rows.emplace_back(id, v);
    }

    auto stats = summarize(results);
    check.expect(std::abs(stats.q25 - oracle::quantile(values, 0.25)) <= 1e-12 &&
                     std::abs(stats.q50 - oracle::quantile(values, 0.50)) <= 1e-12 &&
                     std::abs(stats.q75 - oracle::quantile(values, 0.75)) <= 1e-12 &&
                     std::abs(stats.q95 - oracle::quantile(values, 0.95)) <= 1e-12 &&
                     std::abs(stats.q99 - oracle::quantile(values, 0.99)) <= 1e-12,
                 "quantiles disagree with the sort oracle");
    check.expect(std::abs(stats.mean - oracle::mean(values)) <= 1e-12,
                 "mean disagrees");
    check.expect(std::abs(stats.std_dev - oracle::population_std(values)) <= 1e-12,
                 "std disagrees");

    auto hist = make_histogram(results, 0.01);
    auto want_hist = oracle::histogram(values, 0.01);
    check.expect(hist.bins.size() == want_hist.size(), "bin count differs");
    std::uint64_t total = 0;
    for (std::size_t i = 0; i < want_hist.size(); ++i) {
        if (hist.bins[i].count != want_hist[i]) {
            check.fail("bin " + std::to_string(i) + " differs");
            return;
        }
        total += hist.bins[i].count;
    }
    check.expect(total == values.size() && hist.total == values.size(),
                 "histogram total != defined count");

    auto trend = yearly_trend(results, years);
    auto want_trend = oracle::trend(year_rows);
    check.expect(trend.size() == want_trend.size(), "trend group count differs");
    std::size_t i = 0;
    for (const auto& [year, acc] : want_trend) {
        if (trend[i].year != year || trend[i].count != acc.second ||
            std::abs(trend[i].mean_cd - acc.first) > 1e-12) {
            check.fail("trend row for year " + std::to_string(year) + " differs");
            return;
        }
        ++i;
    }

    auto labels = classify(results, 0.01);
    auto want_labels = oracle::classify(id_rows, 0.01);
    check.expect(labels.size() == want_labels.size(), "label count differs");
    for (const auto& [id, label] : labels) {
        if (static_cast<int>(label) != want_labels.at(id)) {
            check.fail("label for " + id + " differs");
            return;
        }
    }
    check.note("summarize, histogram, trend, classify all match on 10k values");
}

// 8. compare_labels against itself is perfect for supported classes.
void criterion_self_comparison(Check& check) {
    std::mt19937_64 rng(80808);
    std::vector<CdResult> results;
    for (int i = 0; i < 5000; ++i) {
        CdResult res;
        res.focal = "p" + std::to_string(i);
        res.t = 5;
        res.cd = static_cast<double>(rng() >> 11) * 0x1.0p-52 - 1.0;
        res.n = 1;
        results.push_back(res);
    }
    auto labels = classify(results, 0.01);
    auto cmp = compare_labels(labels, labels);
    check.expect(cmp.overlap == labels.size(), "overlap != label count");
    for (std::size_t r = 0; r < 3; ++r)
        for (std::size_t c = 0; c < 3; ++c)
            if (r != c && cmp.matrix[r][c] != 0) check.fail("off-diagonal count");
    for (std::size_t c = 0; c < 3; ++c) {
        const ClassMetrics& m = cmp.per_class[c];
        if (m.support == 0) continue;
        check.expect(m.precision == 1.0 && m.recall == 1.0 && m.f1 == 1.0,
                     "imperfect self metrics for class " +
                         std::string(label_name(static_cast<DisruptionLabel>(c))));
    }
    check.note("all supported classes at precision = recall = f1 = 1.0");
}

// 9. Fixture loads identically through both formats, batch outputs equal.
void criterion_cross_format(Check& check) {
    auto nested = load_nested(testutil::fixture("fig1.jsonl"));
    auto edges = load_edgelist(testutil::fixture("fig1_nodes.csv"),
                               testutil::fixture("fig1_edges.csv"));
    check.expect(testutil::same_graph(nested.network, edges.network),
                 "networks differ between formats");

    BatchSpec spec;
    spec.params.t = 2;
    spec.emit_undefined = true;
    auto a = run_batch(nested.network, spec);
    auto b = run_batch(edges.network, spec);
    check.expect(testutil::same_results(a, b), "batch outputs differ between formats");

    std::stringstream out_a, out_b;
    write_results(out_a, a, ResultFormat::Csv);
    write_results(out_b, b, ResultFormat::Csv);
    check.expect(out_a.str() == out_b.str(), "serialized outputs differ");
    check.note("identical graphs and identical result files");
}

struct Criterion {
    int number;
    const char* title;
    std::function<void(Check&)> run;
};

} // namespace

int main() {
    const std::vector<Criterion> criteria{
        {1, "worked-example exactness", criterion_worked_example},
        {2, "original/decomposed equivalence on 1000 random networks",
         criterion_equivalence},
        {3, "degenerate-case contract (k = 0 and n = 0)", criterion_degenerate_cases},
        {4, "dedup invariance under duplicated input edges", criterion_dedup_invariance},
        {5, "parallelism invariance on a 100k-node network",
         criterion_parallelism_invariance},
        {6, "performance budget: 1M nodes / 10M edges under 5 min",
         criterion_performance},
        {7, "analytics match brute-force oracles", criterion_analytics_oracles},
        {8, "label self-comparison is perfect", criterion_self_comparison},
        {9, "cross-format load equality", criterion_cross_format},
    };

    bool all_ok = true;
    for (const Criterion& criterion : criteria) {
        Check check;
        const auto started = std::chrono::steady_clock::now();
        try {
            criterion.run(check);
        } catch (const std::exception& e) {
            check.fail(std::string("exception: ") + e.what());
        }
        const std::chrono::duration<double> elapsed =
            std::chrono::steady_clock::now() - started;
        std::printf("[%s] criterion %d: %s (%.2fs)%s%s\n",
                    check.ok ? "PASS" : "FAIL", criterion.number, criterion.title,
                    elapsed.count(), check.detail.empty() ? "" : " -- ",
                    check.detail.c_str());
        std::fflush(stdout);
        all_ok = all_ok && check.ok;
    }
    return all_ok ? 0 : 1;
}
