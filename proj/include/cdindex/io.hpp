#pragma once
// File boundary: network ingestion in two formats, result and label
// serialization, analytics CSV artifacts.
//
// Formats (all UTF-8, LF, headers mandatory for CSV):
//   Nested    - JSON lines, one record per line:
//               {"id": "...", "year": 1970,
//                "reference_ids": ["..."],
//                "citations": [{"id": "...", "year": 1971}, ...]}
//               reference_ids/citations may be absent or empty; a citation
//               entry's year may be absent (the citer record's year is
//               canonical anyway).
//   EdgeList  - nodes.csv "id,year" + edges.csv "citing_id,cited_id".
//   Results   - CSV "focal_id,t,cd,n,k,n_disruptive,n_neutral,n_consolidating"
//               (cd with 6 decimals, empty when undefined) or JSON lines with
//               the same fields (cd null when undefined). Rows are sorted by
//               focal id at write time.
//   Labels    - CSV "focal_id,label" with consolidating|neutral|disruptive.

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "cdindex/analytics.hpp"
#include "cdindex/batch.hpp"
#include "cdindex/network.hpp"

namespace cdindex {

enum class NetworkFormat { Nested, EdgeList };
enum class ResultFormat { Csv, JsonLines };

struct LoadOptions {
    DanglingPolicy dangling = DanglingPolicy::Drop;
    // Skip (and count) records without a year instead of failing.
    bool lenient_missing_year = true;
};

struct IngestReport {
    std::uint64_t records_read = 0;          // records accepted into the build
    std::uint64_t edges_read = 0;            // raw edge mentions in the input
    std::uint64_t duplicate_edges_collapsed = 0;
    std::uint64_t dangling_dropped = 0;
    std::uint64_t missing_year_skipped = 0;
    std::uint64_t self_loops_dropped = 0;
    std::uint64_t year_conflicts = 0;
    std::uint64_t stubs_materialized = 0;
};

struct LoadResult {
    CitationNetwork network;
    IngestReport report;
};

LoadResult load_nested(const std::string& path, const LoadOptions& options = {});
LoadResult load_edgelist(const std::string& nodes_path, const std::string& edges_path,
                         const LoadOptions& options = {});

void write_nested(std::ostream& out, std::span<const PublicationRecord> records);
void write_edgelist(std::ostream& nodes_out, std::ostream& edges_out,
                    std::span<const PublicationRecord> records);

// Returns the number of data rows written. Rows are sorted by focal id.
std::uint64_t write_results(std::ostream& out, std::span<const CdResult> results,
                            ResultFormat format);

std::vector<CdResult> read_results(std::istream& in, const std::string& name,
                                   ResultFormat format);
std::vector<CdResult> read_results_file(const std::string& path, ResultFormat format);

void write_labels(std::ostream& out, const LabelMap& labels); // sorted by id
LabelMap read_labels_file(const std::string& path);

// Analytics artifacts ("bin_lower,source,count" / "year,mean_cd,count").
void write_histogram_csv(std::ostream& out, const Histogram& histogram,
                         const std::string& source);
void write_trend_csv(std::ostream& out, std::span<const TrendPoint> trend);

// Opens for writing, throws IoError on failure.
void write_text_file(const std::string& path, const std::string& content);

} // namespace cdindex
