#pragma once
// Core value types shared across the library.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace cdindex {

// Opaque publication identifier, e.g. "pub.1019844293". Mapped to a dense
// NodeIndex inside a CitationNetwork.
using PubId = std::string;
using NodeIndex = std::uint32_t;

// One incoming citation: the citing publication and (optionally) the year the
// citing publication appeared. When the citer is itself a record in the
// network its own year is canonical and wins over this value.
struct CitationEntry {
    PubId id;
    std::optional<int> year;
};

// One publication as ingested: identifier, publication year, outgoing
// references and incoming citations. Either adjacency list may be empty or
// carry duplicates; networks deduplicate at build time.
struct PublicationRecord {
    PubId id;
    int year = 0;
    std::vector<PubId> references;
    std::vector<CitationEntry> citations;
};

// What to do with edges whose endpoint has no record:
//   Error       - abort the build.
//   Drop        - remove the edge, count it.
//   Materialize - unknown citers that carry a year become year-only stub
//                 records; unknown reference targets have no year and are
//                 dropped.
enum class DanglingPolicy { Error, Drop, Materialize };

// Warning counters accumulated while building a network.
struct BuildReport {
    std::uint64_t duplicate_edges_collapsed = 0;
    std::uint64_t dangling_dropped = 0;
    std::uint64_t self_loops_dropped = 0;
    std::uint64_t year_conflicts = 0;
    std::uint64_t stubs_materialized = 0;
};

} // namespace cdindex
