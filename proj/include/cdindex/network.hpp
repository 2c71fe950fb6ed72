#pragma once
// Immutable in-memory citation network.
//
// Records are mapped to dense indices; both adjacency directions live in CSR
// arrays. Citer lists are sorted by (year, index) so year-windowed queries
// are a binary search plus a contiguous slice. After construction the
// structure never changes and is safe to share across threads.

#include <cstdint>
#include <optional>
#include <span>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "cdindex/errors.hpp"
#include "cdindex/types.hpp"

namespace cdindex {

// Node filter for subsetting. min_references is evaluated on the reference
// count in the network being filtered, before any edge pruning.
struct FilterSpec {
    std::optional<std::uint32_t> min_references;
    std::optional<std::unordered_set<PubId>> allowed_ids;
    std::optional<std::pair<int, int>> year_range; // inclusive [lo, hi]

    bool empty() const {
        return !min_references && !allowed_ids && !year_range;
    }
    void validate() const {
        if (year_range && year_range->first > year_range->second)
            throw Error(ErrorCategory::Validation, "year_range lo > hi");
    }
};

class CitationNetwork {
public:
    CitationNetwork() = default;

    std::size_t size() const { return ids_.size(); }
    std::uint64_t edge_count() const { return ref_targets_.size(); }

    bool contains(const PubId& id) const { return index_.count(id) != 0; }
    std::optional<NodeIndex> find(const PubId& id) const {
        auto it = index_.find(id);
        if (it == index_.end()) return std::nullopt;
        return it->second;
    }
    // Throws UnknownIdError when absent.
    NodeIndex index_of(const PubId& id) const;

    const PubId& id_of(NodeIndex node) const { return ids_[node]; }
    int year_of(NodeIndex node) const { return years_[node]; }
    int year_of(const PubId& id) const { return years_[index_of(id)]; }
    // True for records invented by DanglingPolicy::Materialize.
    bool is_stub(NodeIndex node) const { return stub_[node] != 0; }

    // Outgoing references, sorted by target index.
    std::span<const NodeIndex> references(NodeIndex node) const {
        return {ref_targets_.data() + ref_offsets_[node],
                ref_targets_.data() + ref_offsets_[node + 1]};
    }
    // Incoming citers, sorted by (year, index).
    std::span<const NodeIndex> citers(NodeIndex node) const {
        return {citer_sources_.data() + citer_offsets_[node],
                citer_sources_.data() + citer_offsets_[node + 1]};
    }

    // Distinct citers of `node` published in [from_year, to_year], both
    // bounds inclusive. The span version is the hot path; the PubId version
    // returns ids sorted ascending.
    std::span<const NodeIndex> citers_in_window(NodeIndex node, int from_year,
                                                int to_year) const;
    std::vector<PubId> citers_in_window(const PubId& target, int from_year,
                                        int to_year) const;

    const BuildReport& build_report() const { return report_; }

    // Materializes the network back into records (citations carry the citer's
    // canonical year). Used for subsetting and format conversion.
    std::vector<PublicationRecord> to_records() const;

    friend CitationNetwork build_network(const std::vector<PublicationRecord>& records,
                                         DanglingPolicy policy);

private:
    std::vector<PubId> ids_;
    std::unordered_map<PubId, NodeIndex> index_;
    std::vector<int> years_;
    std::vector<std::uint8_t> stub_;
    std::vector<std::uint64_t> ref_offsets_;
    std::vector<NodeIndex> ref_targets_;
    std::vector<std::uint64_t> citer_offsets_;
    std::vector<NodeIndex> citer_sources_;
    BuildReport report_;
};

// Builds a network from records. Ids must be unique. Edges may be given in
// either direction or both; the missing direction is synthesized and
// duplicates are collapsed. Self-citations are rejected (dropped and
// counted). Dangling endpoints are handled per policy.
CitationNetwork build_network(const std::vector<PublicationRecord>& records,
                              DanglingPolicy policy = DanglingPolicy::Drop);

// New network holding only records that pass the filter; edges touching
// removed records are handled per policy.
CitationNetwork subset(const CitationNetwork& network, const FilterSpec& filter,
                       DanglingPolicy policy = DanglingPolicy::Drop);

} // namespace cdindex
