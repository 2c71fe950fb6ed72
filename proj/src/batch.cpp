#include "cdindex/batch.hpp"

#include <atomic>
#include <exception>
#include <mutex>
#include <thread>

namespace cdindex {
namespace {

unsigned resolve_parallelism(unsigned requested, std::size_t focal_count) {
    unsigned p = requested != 0 ? requested : std::thread::hardware_concurrency();
    if (p == 0) p = 1;
    if (focal_count > 0 && p > focal_count) p = static_cast<unsigned>(focal_count);
    return p == 0 ? 1 : p;
}

} // namespace

BatchReport compute_all(const CitationNetwork& network, const BatchSpec& spec,
                        const ResultSink& sink) {
    spec.params.validate();
    spec.filter.validate();

    CitationNetwork filtered;
    const CitationNetwork* work = &network;
    if (!spec.filter.empty()) {
        filtered = subset(network, spec.filter, DanglingPolicy::Drop);
        work = &filtered;
    }

    const auto total = static_cast<std::uint64_t>(work->size());
    const unsigned workers = resolve_parallelism(spec.parallelism, work->size());

    std::atomic<std::uint64_t> defined{0}, undefined{0}, mismatches{0}, done{0};
    std::atomic<bool> abort{false};
    std::mutex sink_mutex;
    std::exception_ptr sink_failure;
    std::string sink_failure_what;

    const auto started = std::chrono::steady_clock::now();

    auto run_shard = [&](NodeIndex begin, NodeIndex end) {
        CdWorkspace ws;
        std::vector<CdResult> buffer;
        buffer.reserve(256);

        auto flush = [&] {
            if (buffer.empty()) return;
            std::lock_guard lock(sink_mutex);
            for (const CdResult& res : buffer) {
                if (abort.load(std::memory_order_relaxed)) break;
                try {
                    sink(res);
                } catch (const std::exception& e) {
                    if (!sink_failure) {
                        sink_failure = std::current_exception();
                        sink_failure_what = e.what();
                    }
                    abort.store(true, std::memory_order_relaxed);
                    break;
                } catch (...) {
                    if (!sink_failure) {
                        sink_failure = std::current_exception();
                        sink_failure_what = "unknown error";
                    }
                    abort.store(true, std::memory_order_relaxed);
                    break;
                }
            }
            buffer.clear();
        };

        for (NodeIndex i = begin; i < end; ++i) {
            if (abort.load(std::memory_order_relaxed)) break;

            CdResult res = spec.algorithm == Algorithm::Original
                               ? cd_original(*work, i, spec.params, ws)
                               : cd_decomposed(*work, i, spec.params, ws);
            if (spec.algorithm == Algorithm::Both) {
                CdResult check = cd_original(*work, i, spec.params, ws);
                if (!res.same_outcome(check))
                    mismatches.fetch_add(1, std::memory_order_relaxed);
            }

            if (res.cd)
                defined.fetch_add(1, std::memory_order_relaxed);
            else
                undefined.fetch_add(1, std::memory_order_relaxed);

            if (res.cd || spec.emit_undefined) {
                buffer.push_back(std::move(res));
                if (buffer.size() >= 256) flush();
            }

            std::uint64_t finished = done.fetch_add(1, std::memory_order_relaxed) + 1;
            if (spec.progress && spec.progress_interval &&
                finished % spec.progress_interval == 0) {
                std::lock_guard lock(sink_mutex);
                spec.progress(finished, total);
            }
        }
        flush();
    };

    if (workers <= 1) {
        run_shard(0, static_cast<NodeIndex>(work->size()));
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        const std::uint64_t per = (total + workers - 1) / workers;
        for (unsigned w = 0; w < workers; ++w) {
            auto begin = static_cast<NodeIndex>(std::min<std::uint64_t>(w * per, total));
            auto end = static_cast<NodeIndex>(std::min<std::uint64_t>(begin + per, total));
            if (begin >= end) break;
            pool.emplace_back(run_shard, begin, end);
        }
        for (auto& t : pool) t.join();
    }

    BatchReport report;
    report.defined = defined.load();
    report.undefined = undefined.load();
    report.total_focals = report.defined + report.undefined;
    report.mismatches = mismatches.load();
    report.wall_time = std::chrono::steady_clock::now() - started;
    report.throughput = report.wall_time.count() > 0
                            ? static_cast<double>(report.total_focals) /
                                  report.wall_time.count()
                            : 0.0;

    if (sink_failure) throw BatchAbortedError(sink_failure_what, report);

    // final tick, unless a worker already reported it on an interval boundary
    if (spec.progress && total > 0 &&
        !(spec.progress_interval && total % spec.progress_interval == 0))
        spec.progress(total, total);
    return report;
}

std::vector<ManyItem> compute_many(const CitationNetwork& network,
                                   const std::vector<PubId>& focals,
                                   const CdParams& params) {
    params.validate();
    CdWorkspace ws;
    std::vector<ManyItem> out;
    out.reserve(focals.size());
    for (const PubId& focal : focals) {
        ManyItem item;
        item.focal = focal;
        if (auto idx = network.find(focal)) {
            item.result = cd_decomposed(network, *idx, params, ws);
        } else {
            item.error = UnknownIdError(focal).what();
        }
        out.push_back(std::move(item));
    }
    return out;
}

} // namespace cdindex
