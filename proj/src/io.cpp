#include "cdindex/io.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

namespace cdindex {
namespace {

using ordered_json = nlohmann::ordered_json;

std::ifstream open_input(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open for reading: " + path);
    return in;
}

std::string csv_escape(const std::string& field) {
    if (field.find_first_of(",\"\r\n") == std::string::npos) return field;
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

// Reads one CSV record (RFC-style quoting, embedded newlines allowed inside
// quotes). Returns false at end of input. line is left at the record's first
// line for error reporting and advanced past it.
bool read_csv_record(std::istream& in, std::vector<std::string>& fields,
                     std::uint64_t& line) {
    fields.clear();
    std::string field;
    bool quoted = false;
    bool any = false;
    int ch;
    while ((ch = in.get()) != EOF) {
        char c = static_cast<char>(ch);
        if (quoted) {
            if (c == '"') {
                if (in.peek() == '"') {
                    in.get();
                    field += '"';
                } else {
                    quoted = false;
                }
            } else {
                if (c == '\n') ++line;
                field += c;
            }
            any = true;
            continue;
        }
        switch (c) {
            case '"':
                quoted = true;
                any = true;
                break;
            case ',':
                fields.push_back(std::move(field));
                field.clear();
                any = true;
                break;
            case '\r':
                break;
            case '\n':
                ++line;
                if (!any) {
                    // blank line, keep scanning
                    continue;
                }
                fields.push_back(std::move(field));
                return true;
            default:
                field += c;
                any = true;
                break;
        }
    }
    if (!any) return false;
    ++line;
    fields.push_back(std::move(field));
    return true;
}

bool parse_int(const std::string& text, long long& out) {
    if (text.empty()) return false;
    std::size_t pos = 0;
    try {
        out = std::stoll(text, &pos);
    } catch (...) {
        return false;
    }
    return pos == text.size();
}

bool parse_u64(const std::string& text, std::uint64_t& out) {
    if (text.empty() || text[0] == '-') return false;
    std::size_t pos = 0;
    try {
        out = std::stoull(text, &pos);
    } catch (...) {
        return false;
    }
    return pos == text.size();
}

bool parse_double(const std::string& text, double& out) {
    if (text.empty()) return false;
    std::size_t pos = 0;
    try {
        out = std::stod(text, &pos);
    } catch (...) {
        return false;
    }
    return pos == text.size();
}

std::string format_cd(double cd) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6f", cd);
    return buf;
}

double round_cd(double cd) { return std::round(cd * 1e6) / 1e6; }

void merge_build_report(IngestReport& report, const BuildReport& build) {
    report.duplicate_edges_collapsed += build.duplicate_edges_collapsed;
    report.dangling_dropped += build.dangling_dropped;
    report.self_loops_dropped += build.self_loops_dropped;
    report.year_conflicts += build.year_conflicts;
    report.stubs_materialized += build.stubs_materialized;
}

} // namespace

LoadResult load_nested(const std::string& path, const LoadOptions& options) {
    auto in = open_input(path);
    std::vector<PublicationRecord> records;
    IngestReport report;

    std::string line;
    std::uint64_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;

        ordered_json j = ordered_json::parse(line, nullptr, false);
        if (j.is_discarded()) throw ParseError(path, line_no, "invalid JSON");
        if (!j.is_object()) throw ParseError(path, line_no, "expected a JSON object");

        PublicationRecord rec;
        auto id_it = j.find("id");
        if (id_it == j.end() || !id_it->is_string() ||
            id_it->get_ref<const std::string&>().empty())
            throw ParseError(path, line_no, "missing or invalid id");
        rec.id = id_it->get<std::string>();

        auto year_it = j.find("year");
        if (year_it == j.end() || year_it->is_null()) {
            if (!options.lenient_missing_year)
                throw ParseError(path, line_no, "record has no year");
            ++report.missing_year_skipped;
            continue;
        }
        if (!year_it->is_number_integer())
            throw ParseError(path, line_no, "year must be an integer");
        rec.year = year_it->get<int>();

        if (auto refs_it = j.find("reference_ids"); refs_it != j.end() &&
                                                    !refs_it->is_null()) {
            if (!refs_it->is_array())
                throw ParseError(path, line_no, "reference_ids must be an array");
            for (const auto& ref : *refs_it) {
                if (!ref.is_string())
                    throw ParseError(path, line_no, "reference_ids entries must be strings");
                rec.references.push_back(ref.get<std::string>());
                ++report.edges_read;
            }
        }
        if (auto cites_it = j.find("citations"); cites_it != j.end() &&
                                                 !cites_it->is_null()) {
            if (!cites_it->is_array())
                throw ParseError(path, line_no, "citations must be an array");
            for (const auto& cite : *cites_it) {
                if (!cite.is_object() || !cite.contains("id") ||
                    !cite["id"].is_string())
                    throw ParseError(path, line_no,
                                     "citations entries must be objects with an id");
                CitationEntry entry;
                entry.id = cite["id"].get<std::string>();
                if (cite.contains("year") && !cite["year"].is_null()) {
                    if (!cite["year"].is_number_integer())
                        throw ParseError(path, line_no, "citation year must be an integer");
                    entry.year = cite["year"].get<int>();
                }
                rec.citations.push_back(std::move(entry));
                ++report.edges_read;
            }
        }
        records.push_back(std::move(rec));
    }

    report.records_read = records.size();
    LoadResult result{build_network(records, options.dangling), report};
    merge_build_report(result.report, result.network.build_report());
    return result;
}

LoadResult load_edgelist(const std::string& nodes_path, const std::string& edges_path,
                         const LoadOptions& options) {
    IngestReport report;
    std::vector<PublicationRecord> records;
    std::unordered_map<PubId, std::size_t> slot_of;

    {
        auto in = open_input(nodes_path);
        std::uint64_t line = 1;
        std::vector<std::string> fields;
        if (!read_csv_record(in, fields, line) || fields.size() != 2 ||
            fields[0] != "id" || fields[1] != "year")
            throw ParseError(nodes_path, 1, "expected header: id,year");
        while (true) {
            std::uint64_t row_line = line;
            if (!read_csv_record(in, fields, line)) break;
            if (fields.size() != 2)
                throw ParseError(nodes_path, row_line, "expected 2 fields: id,year");
            if (fields[0].empty()) throw ParseError(nodes_path, row_line, "empty id");
            if (fields[1].empty()) {
                if (!options.lenient_missing_year)
                    throw ParseError(nodes_path, row_line, "record has no year");
                ++report.missing_year_skipped;
                continue;
            }
            long long year;
            if (!parse_int(fields[1], year))
                throw ParseError(nodes_path, row_line, "year must be an integer");
            PublicationRecord rec;
            rec.id = fields[0];
            rec.year = static_cast<int>(year);
            // duplicate ids surface as DuplicateIdError at build time
            slot_of.emplace(rec.id, records.size());
            records.push_back(std::move(rec));
        }
    }

    {
        auto in = open_input(edges_path);
        std::uint64_t line = 1;
        std::vector<std::string> fields;
        if (!read_csv_record(in, fields, line) || fields.size() != 2 ||
            fields[0] != "citing_id" || fields[1] != "cited_id")
            throw ParseError(edges_path, 1, "expected header: citing_id,cited_id");
        while (true) {
            std::uint64_t row_line = line;
            if (!read_csv_record(in, fields, line)) break;
            if (fields.size() != 2)
                throw ParseError(edges_path, row_line,
                                 "expected 2 fields: citing_id,cited_id");
            if (fields[0].empty() || fields[1].empty())
                throw ParseError(edges_path, row_line, "empty id in edge");
            ++report.edges_read;
            auto it = slot_of.find(fields[0]);
            if (it == slot_of.end()) {
                // No record for the citing side; edge rows carry no year, so
                // Materialize cannot stub it either.
                if (options.dangling == DanglingPolicy::Error)
                    throw DanglingEdgeError(fields[0], fields[1]);
                ++report.dangling_dropped;
                continue;
            }
            records[it->second].references.push_back(fields[1]);
        }
    }

    report.records_read = records.size();
    LoadResult result{build_network(records, options.dangling), report};
    merge_build_report(result.report, result.network.build_report());
    return result;
}

void write_nested(std::ostream& out, std::span<const PublicationRecord> records) {
    for (const PublicationRecord& rec : records) {
        ordered_json j;
        j["id"] = rec.id;
        j["year"] = rec.year;
        j["reference_ids"] = rec.references;
        ordered_json cites = ordered_json::array();
        for (const CitationEntry& entry : rec.citations) {
            ordered_json c;
            c["id"] = entry.id;
            if (entry.year) c["year"] = *entry.year;
            cites.push_back(std::move(c));
        }
        j["citations"] = std::move(cites);
        out << j.dump() << '\n';
    }
}

void write_edgelist(std::ostream& nodes_out, std::ostream& edges_out,
                    std::span<const PublicationRecord> records) {
    nodes_out << "id,year\n";
    for (const PublicationRecord& rec : records)
        nodes_out << csv_escape(rec.id) << ',' << rec.year << '\n';

    // Both adjacency directions may mention the same edge; emit each once.
    std::vector<std::pair<PubId, PubId>> edges;
    for (const PublicationRecord& rec : records) {
        for (const PubId& target : rec.references) edges.emplace_back(rec.id, target);
        for (const CitationEntry& entry : rec.citations)
            edges.emplace_back(entry.id, rec.id);
    }
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

    edges_out << "citing_id,cited_id\n";
    for (const auto& [citing, cited] : edges)
        edges_out << csv_escape(citing) << ',' << csv_escape(cited) << '\n';
}

std::uint64_t write_results(std::ostream& out, std::span<const CdResult> results,
                            ResultFormat format) {
    std::vector<const CdResult*> sorted;
    sorted.reserve(results.size());
    for (const CdResult& res : results) sorted.push_back(&res);
    std::sort(sorted.begin(), sorted.end(), [](const CdResult* a, const CdResult* b) {
        if (a->focal != b->focal) return a->focal < b->focal;
        return a->t < b->t;
    });

    if (format == ResultFormat::Csv) {
        out << "focal_id,t,cd,n,k,n_disruptive,n_neutral,n_consolidating\n";
        for (const CdResult* res : sorted) {
            out << csv_escape(res->focal) << ',' << res->t << ','
                << (res->cd ? format_cd(*res->cd) : std::string()) << ',' << res->n
                << ',' << res->k << ',' << res->n_disruptive << ',' << res->n_neutral
                << ',' << res->n_consolidating << '\n';
        }
    } else {
        for (const CdResult* res : sorted) {
            ordered_json j;
            j["focal_id"] = res->focal;
            j["t"] = res->t;
            if (res->cd)
                j["cd"] = round_cd(*res->cd);
            else
                j["cd"] = nullptr;
            j["n"] = res->n;
            j["k"] = res->k;
            j["n_disruptive"] = res->n_disruptive;
            j["n_neutral"] = res->n_neutral;
            j["n_consolidating"] = res->n_consolidating;
            out << j.dump() << '\n';
        }
    }
    if (!out) throw IoError("failed writing results");
    return sorted.size();
}

namespace {

CdResult result_from_fields(const std::string& name, std::uint64_t line,
                            const std::vector<std::string>& fields) {
    if (fields.size() != 8)
        throw ParseError(name, line, "expected 8 result fields");
    CdResult res;
    res.focal = fields[0];
    if (res.focal.empty()) throw ParseError(name, line, "empty focal_id");
    long long t;
    if (!parse_int(fields[1], t)) throw ParseError(name, line, "invalid t");
    res.t = static_cast<int>(t);
    if (!fields[2].empty()) {
        double cd;
        if (!parse_double(fields[2], cd)) throw ParseError(name, line, "invalid cd");
        res.cd = cd;
    }
    if (!parse_u64(fields[3], res.n) || !parse_u64(fields[4], res.k) ||
        !parse_u64(fields[5], res.n_disruptive) ||
        !parse_u64(fields[6], res.n_neutral) ||
        !parse_u64(fields[7], res.n_consolidating))
        throw ParseError(name, line, "invalid count field");
    return res;
}

} // namespace

std::vector<CdResult> read_results(std::istream& in, const std::string& name,
                                   ResultFormat format) {
    std::vector<CdResult> out;
    if (format == ResultFormat::Csv) {
        std::uint64_t line = 1;
        std::vector<std::string> fields;
        if (!read_csv_record(in, fields, line) || fields.size() != 8 ||
            fields[0] != "focal_id")
            throw ParseError(name, 1,
                             "expected header: focal_id,t,cd,n,k,n_disruptive,"
                             "n_neutral,n_consolidating");
        while (true) {
            std::uint64_t row_line = line;
            if (!read_csv_record(in, fields, line)) break;
            out.push_back(result_from_fields(name, row_line, fields));
        }
        return out;
    }

    std::string line;
    std::uint64_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        ordered_json j = ordered_json::parse(line, nullptr, false);
        if (j.is_discarded() || !j.is_object())
            throw ParseError(name, line_no, "invalid JSON result row");
        try {
            CdResult res;
            res.focal = j.at("focal_id").get<std::string>();
            res.t = j.at("t").get<int>();
            if (j.contains("cd") && !j["cd"].is_null()) res.cd = j["cd"].get<double>();
            res.n = j.at("n").get<std::uint64_t>();
            res.k = j.at("k").get<std::uint64_t>();
            res.n_disruptive = j.at("n_disruptive").get<std::uint64_t>();
            res.n_neutral = j.at("n_neutral").get<std::uint64_t>();
            res.n_consolidating = j.at("n_consolidating").get<std::uint64_t>();
            out.push_back(std::move(res));
        } catch (const ordered_json::exception& e) {
            throw ParseError(name, line_no, e.what());
        }
    }
    return out;
}

std::vector<CdResult> read_results_file(const std::string& path, ResultFormat format) {
    auto in = open_input(path);
    return read_results(in, path, format);
}

void write_labels(std::ostream& out, const LabelMap& labels) {
    std::vector<const LabelMap::value_type*> sorted;
    sorted.reserve(labels.size());
    for (const auto& kv : labels) sorted.push_back(&kv);
    std::sort(sorted.begin(), sorted.end(),
              [](auto* a, auto* b) { return a->first < b->first; });
    out << "focal_id,label\n";
    for (const auto* kv : sorted)
        out << csv_escape(kv->first) << ',' << label_name(kv->second) << '\n';
    if (!out) throw IoError("failed writing labels");
}

LabelMap read_labels_file(const std::string& path) {
    auto in = open_input(path);
    std::uint64_t line = 1;
    std::vector<std::string> fields;
    if (!read_csv_record(in, fields, line) || fields.size() != 2 ||
        fields[0] != "focal_id" || fields[1] != "label")
        throw ParseError(path, 1, "expected header: focal_id,label");
    LabelMap labels;
    while (true) {
        std::uint64_t row_line = line;
        if (!read_csv_record(in, fields, line)) break;
        if (fields.size() != 2)
            throw ParseError(path, row_line, "expected 2 fields: focal_id,label");
        auto label = label_from_name(fields[1]);
        if (!label)
            throw ParseError(path, row_line, "unknown label: " + fields[1]);
        labels[fields[0]] = *label;
    }
    return labels;
}

void write_histogram_csv(std::ostream& out, const Histogram& histogram,
                         const std::string& source) {
    out << "bin_lower,source,count\n";
    char buf[32];
    for (const HistogramBin& bin : histogram.bins) {
        std::snprintf(buf, sizeof(buf), "%.6f", bin.lower);
        out << buf << ',' << csv_escape(source) << ',' << bin.count << '\n';
    }
    if (!out) throw IoError("failed writing histogram");
}

void write_trend_csv(std::ostream& out, std::span<const TrendPoint> trend) {
    out << "year,mean_cd,count\n";
    for (const TrendPoint& point : trend)
        out << point.year << ',' << format_cd(point.mean_cd) << ',' << point.count
            << '\n';
    if (!out) throw IoError("failed writing trend");
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open for writing: " + path);
    out << content;
    out.flush();
    if (!out) throw IoError("failed writing: " + path);
}

} // namespace cdindex
