#pragma once
// Whole-network CD computation: every focal publication in a (filtered)
// network, sharded across worker threads. The network is shared read-only;
// sink access is serialized so single-threaded sinks are fine.

#include <chrono>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "cdindex/cd.hpp"
#include "cdindex/network.hpp"

namespace cdindex {

enum class Algorithm { Original, Decomposed, Both };

struct BatchSpec {
    CdParams params;                 // t
    FilterSpec filter;               // applied as a subset before computing
    bool emit_undefined = false;     // emit rows with n == 0
    unsigned parallelism = 0;        // 0 = hardware concurrency
    Algorithm algorithm = Algorithm::Decomposed;
    // Progress side channel, invoked roughly every progress_interval focals.
    // Never interleaved with sink calls.
    std::uint64_t progress_interval = 0; // 0 = off
    std::function<void(std::uint64_t done, std::uint64_t total)> progress;
};

struct BatchReport {
    std::uint64_t total_focals = 0; // defined + undefined
    std::uint64_t defined = 0;
    std::uint64_t undefined = 0;
    std::uint64_t mismatches = 0;   // Algorithm::Both disagreements
    std::chrono::duration<double> wall_time{0};
    double throughput = 0;          // focals per second
};

// Thrown when the sink fails; carries progress up to the abort.
struct BatchAbortedError : Error {
    BatchAbortedError(const std::string& cause, BatchReport partial_in)
        : Error(ErrorCategory::Io, "batch aborted by sink failure: " + cause),
          partial(partial_in) {}
    BatchReport partial;
};

using ResultSink = std::function<void(const CdResult&)>;

// Computes CD_t for every focal in the subset network and streams results to
// the sink. The result multiset is independent of the parallelism level;
// emission order is unspecified.
BatchReport compute_all(const CitationNetwork& network, const BatchSpec& spec,
                        const ResultSink& sink);

// Targeted recomputation. Results in input order; unknown focals are reported
// per item and do not stop the batch.
struct ManyItem {
    PubId focal;
    std::optional<CdResult> result;
    std::string error; // empty on success
};
std::vector<ManyItem> compute_many(const CitationNetwork& network,
                                   const std::vector<PubId>& focals,
                                   const CdParams& params);

} // namespace cdindex
