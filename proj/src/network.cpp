#include "cdindex/network.hpp"

#include <algorithm>
#include <cstdint>

namespace cdindex {
namespace {

inline std::uint64_t edge_key(NodeIndex citing, NodeIndex cited) {
    return (static_cast<std::uint64_t>(citing) << 32) | cited;
}

// Sorts and deduplicates one direction's edge keys, returning how many
// duplicates were collapsed.
std::uint64_t sort_unique(std::vector<std::uint64_t>& keys) {
    std::sort(keys.begin(), keys.end());
    auto last = std::unique(keys.begin(), keys.end());
    auto removed = static_cast<std::uint64_t>(keys.end() - last);
    keys.erase(last, keys.end());
    return removed;
}

} // namespace

NodeIndex CitationNetwork::index_of(const PubId& id) const {
    auto it = index_.find(id);
    if (it == index_.end()) throw UnknownIdError(id);
    return it->second;
}

std::span<const NodeIndex> CitationNetwork::citers_in_window(NodeIndex node,
                                                             int from_year,
                                                             int to_year) const {
    if (from_year > to_year)
        throw Error(ErrorCategory::Validation, "citers_in_window: from_year > to_year");
    auto all = citers(node);
    auto first = std::partition_point(all.begin(), all.end(), [&](NodeIndex c) {
        return years_[c] < from_year;
    });
    auto last = std::partition_point(first, all.end(), [&](NodeIndex c) {
        return years_[c] <= to_year;
    });
    return {first, last};
}

std::vector<PubId> CitationNetwork::citers_in_window(const PubId& target,
                                                     int from_year, int to_year) const {
    auto window = citers_in_window(index_of(target), from_year, to_year);
    std::vector<PubId> out;
    out.reserve(window.size());
    for (NodeIndex c : window) out.push_back(ids_[c]);
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<PublicationRecord> CitationNetwork::to_records() const {
    std::vector<PublicationRecord> records(size());
    for (NodeIndex i = 0; i < size(); ++i) {
        auto& rec = records[i];
        rec.id = ids_[i];
        rec.year = years_[i];
        auto refs = references(i);
        rec.references.reserve(refs.size());
        for (NodeIndex target : refs) rec.references.push_back(ids_[target]);
        auto in = citers(i);
        rec.citations.reserve(in.size());
        for (NodeIndex c : in) rec.citations.push_back({ids_[c], years_[c]});
    }
    return records;
}

CitationNetwork build_network(const std::vector<PublicationRecord>& records,
                              DanglingPolicy policy) {
    CitationNetwork net;
    const auto base = static_cast<NodeIndex>(records.size());

    net.ids_.reserve(records.size());
    net.years_.reserve(records.size());
    net.index_.reserve(records.size());
    for (NodeIndex i = 0; i < base; ++i) {
        const auto& rec = records[i];
        if (rec.id.empty())
            throw Error(ErrorCategory::Validation, "empty publication id");
        if (!net.index_.emplace(rec.id, i).second) throw DuplicateIdError(rec.id);
        net.ids_.push_back(rec.id);
        net.years_.push_back(rec.year);
    }
    net.stub_.assign(records.size(), 0);

    // Stubs discovered from unknown citers, in scan order.
    std::unordered_map<PubId, NodeIndex> stub_slot;
    std::vector<int> stub_years;

    std::vector<std::uint64_t> ref_edges;   // from reference arrays
    std::vector<std::uint64_t> cite_edges;  // from citation arrays
    auto& report = net.report_;

    for (NodeIndex i = 0; i < base; ++i) {
        const auto& rec = records[i];
        for (const PubId& target : rec.references) {
            if (target == rec.id) {
                ++report.self_loops_dropped;
                continue;
            }
            auto it = net.index_.find(target);
            if (it == net.index_.end()) {
                // Reference targets carry no year, so Materialize cannot stub them.
                if (policy == DanglingPolicy::Error)
                    throw DanglingEdgeError(rec.id, target);
                ++report.dangling_dropped;
                continue;
            }
            ref_edges.push_back(edge_key(i, it->second));
        }
        for (const CitationEntry& entry : rec.citations) {
            if (entry.id == rec.id) {
                ++report.self_loops_dropped;
                continue;
            }
            auto it = net.index_.find(entry.id);
            if (it != net.index_.end()) {
                if (entry.year && *entry.year != net.years_[it->second])
                    ++report.year_conflicts; // canonical record year wins
                cite_edges.push_back(edge_key(it->second, i));
                continue;
            }
            if (policy == DanglingPolicy::Error)
                throw DanglingEdgeError(entry.id, rec.id);
            if (policy == DanglingPolicy::Drop || !entry.year) {
                ++report.dangling_dropped;
                continue;
            }
            auto slot = stub_slot.find(entry.id);
            if (slot == stub_slot.end()) {
                auto stub_index = static_cast<NodeIndex>(base + stub_years.size());
                stub_slot.emplace(entry.id, stub_index);
                stub_years.push_back(*entry.year);
                cite_edges.push_back(edge_key(stub_index, i));
            } else {
                int known = stub_years[slot->second - base];
                if (known != *entry.year)
                    throw InconsistentEdgeError(entry.id, rec.id, known, *entry.year);
                cite_edges.push_back(edge_key(slot->second, i));
            }
        }
    }

    if (!stub_slot.empty()) {
        report.stubs_materialized = stub_slot.size();
        net.ids_.resize(base + stub_slot.size());
        net.stub_.resize(base + stub_slot.size(), 1);
        for (auto& [id, slot] : stub_slot) {
            net.ids_[slot] = id;
            net.index_.emplace(id, slot);
        }
        net.years_.insert(net.years_.end(), stub_years.begin(), stub_years.end());
    }

    // Duplicates are counted within each direction; the same edge appearing in
    // both directions is consistent input, not a duplicate.
    report.duplicate_edges_collapsed += sort_unique(ref_edges);
    report.duplicate_edges_collapsed += sort_unique(cite_edges);
    std::vector<std::uint64_t> edges;
    edges.reserve(ref_edges.size() + cite_edges.size());
    std::set_union(ref_edges.begin(), ref_edges.end(), cite_edges.begin(),
                   cite_edges.end(), std::back_inserter(edges));
    ref_edges.clear();
    ref_edges.shrink_to_fit();
    cite_edges.clear();
    cite_edges.shrink_to_fit();

    const std::size_t n = net.ids_.size();
    net.ref_offsets_.assign(n + 1, 0);
    net.citer_offsets_.assign(n + 1, 0);
    for (std::uint64_t key : edges) {
        ++net.ref_offsets_[(key >> 32) + 1];
        ++net.citer_offsets_[(key & 0xffffffffu) + 1];
    }
    for (std::size_t i = 0; i < n; ++i) {
        net.ref_offsets_[i + 1] += net.ref_offsets_[i];
        net.citer_offsets_[i + 1] += net.citer_offsets_[i];
    }

    net.ref_targets_.resize(edges.size());
    net.citer_sources_.resize(edges.size());
    std::vector<std::uint64_t> ref_fill(net.ref_offsets_.begin(), net.ref_offsets_.end() - 1);
    std::vector<std::uint64_t> citer_fill(net.citer_offsets_.begin(),
                                          net.citer_offsets_.end() - 1);
    for (std::uint64_t key : edges) {
        auto citing = static_cast<NodeIndex>(key >> 32);
        auto cited = static_cast<NodeIndex>(key & 0xffffffffu);
        net.ref_targets_[ref_fill[citing]++] = cited;
        net.citer_sources_[citer_fill[cited]++] = citing;
    }

    // Keys were sorted, so reference lists are already ordered by target;
    // citer lists get the (year, index) order used by window queries.
    for (std::size_t i = 0; i < n; ++i) {
        auto begin = net.citer_sources_.begin() +
                     static_cast<std::ptrdiff_t>(net.citer_offsets_[i]);
        auto end = net.citer_sources_.begin() +
                   static_cast<std::ptrdiff_t>(net.citer_offsets_[i + 1]);
        std::sort(begin, end, [&](NodeIndex a, NodeIndex b) {
            if (net.years_[a] != net.years_[b]) return net.years_[a] < net.years_[b];
            return a < b;
        });
    }

    return net;
}

CitationNetwork subset(const CitationNetwork& network, const FilterSpec& filter,
                       DanglingPolicy policy) {
    filter.validate();

    std::vector<PublicationRecord> kept;
    const auto n = static_cast<NodeIndex>(network.size());
    for (NodeIndex i = 0; i < n; ++i) {
        if (filter.min_references &&
            network.references(i).size() < *filter.min_references)
            continue;
        if (filter.allowed_ids && !filter.allowed_ids->count(network.id_of(i)))
            continue;
        if (filter.year_range) {
            int year = network.year_of(i);
            if (year < filter.year_range->first || year > filter.year_range->second)
                continue;
        }
        PublicationRecord rec;
        rec.id = network.id_of(i);
        rec.year = network.year_of(i);
        for (NodeIndex target : network.references(i))
            rec.references.push_back(network.id_of(target));
        for (NodeIndex c : network.citers(i))
            rec.citations.push_back({network.id_of(c), network.year_of(c)});
        kept.push_back(std::move(rec));
    }
    return build_network(kept, policy);
}

} // namespace cdindex
