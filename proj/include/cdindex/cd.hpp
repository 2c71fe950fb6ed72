#pragma once
// CD_t computation for a focal publication.
//
// Two routes over the same network:
//   cd_original    - collect the citer union, then cross-check each citer's
//                    reference list against the focal work and its references
//                    (three-way scores 1 / 0 / -1).
//   cd_decomposed  - two independent forward scans (citers of the focal work,
//                    citers of its references) with partial scores -1 / -2,
//                    recombined as cd = (sum' + sum'')/n + 2. Never inspects a
//                    citer's reference list.
// Both fill CdResult from integer counts, so agreement is exact.

#include <cstdint>
#include <optional>
#include <vector>

#include "cdindex/network.hpp"

namespace cdindex {

struct CdParams {
    int t = 5; // impact span: citers in years [T+1, T+t] count
    void validate() const {
        if (t < 1) throw Error(ErrorCategory::Validation, "t must be >= 1");
    }
};

// Per-citer outcome. s = 1 cites only the focal work, s = -1 cites the focal
// work and at least one reference, s = 0 cites only references.
struct CiterScore {
    PubId citer;
    bool cites_focal = false;
    bool cites_reference = false;
    int s = 0;
};

struct CdResult {
    PubId focal;
    int t = 0;
    std::optional<double> cd; // absent when n == 0, never 0 or NaN for that case
    std::uint64_t n = 0;      // distinct in-window citers of focal or references
    std::uint64_t k = 0;      // distinct references of the focal work
    std::uint64_t n_disruptive = 0;
    std::uint64_t n_neutral = 0;
    std::uint64_t n_consolidating = 0;

    std::int64_t score_sum() const {
        return static_cast<std::int64_t>(n_disruptive) -
               static_cast<std::int64_t>(n_consolidating);
    }
    // Integer-exact agreement check between computation routes.
    bool same_outcome(const CdResult& other) const {
        return n == other.n && k == other.k &&
               n_disruptive == other.n_disruptive &&
               n_neutral == other.n_neutral &&
               n_consolidating == other.n_consolidating &&
               cd.has_value() == other.cd.has_value();
    }
};

// Reusable scratch for repeated per-focal computations on one network.
// Not thread-safe; use one workspace per thread.
class CdWorkspace {
public:
    void prepare(std::size_t node_count);

    std::vector<std::uint32_t> stamp_focal;  // marks citers of the focal work
    std::vector<std::uint32_t> stamp_ref;    // marks citers of references
    std::vector<std::uint32_t> stamp_refset; // marks the reference set itself
    std::vector<std::uint32_t> stamp_union;
    std::vector<NodeIndex> citer_union;
    std::uint32_t epoch = 0;
};

CdResult cd_original(const CitationNetwork& network, NodeIndex focal,
                     const CdParams& params, CdWorkspace& ws);
CdResult cd_decomposed(const CitationNetwork& network, NodeIndex focal,
                       const CdParams& params, CdWorkspace& ws);

CdResult cd_original(const CitationNetwork& network, const PubId& focal,
                     const CdParams& params);
CdResult cd_decomposed(const CitationNetwork& network, const PubId& focal,
                       const CdParams& params);

// One CiterScore per member of the citer union, sorted by citer id. The mean
// of the s values reproduces cd_original's cd exactly.
std::vector<CiterScore> score_breakdown(const CitationNetwork& network,
                                        const PubId& focal, const CdParams& params);

} // namespace cdindex
