#include "cdindex/synth.hpp"

#include <algorithm>
#include <random>

#include "cdindex/errors.hpp"

namespace cdindex {
namespace {

// Platform-stable draws: mt19937_64 output is fully specified, the standard
// distributions are not, so roll the reductions by hand.
std::uint64_t bounded(std::mt19937_64& rng, std::uint64_t n) { return rng() % n; }
double unit(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

} // namespace

void SynthSpec::validate() const {
    if (nodes == 0) throw Error(ErrorCategory::Validation, "synth: nodes must be >= 1");
    if (nodes > 0xfffffffeull)
        throw Error(ErrorCategory::Validation, "synth: too many nodes");
    if (year_min > year_max)
        throw Error(ErrorCategory::Validation, "synth: year_min > year_max");
    if (acausal_fraction < 0.0 || acausal_fraction > 1.0)
        throw Error(ErrorCategory::Validation, "synth: acausal_fraction must be in [0, 1]");
}

std::vector<PublicationRecord> synth_records(const SynthSpec& spec) {
    spec.validate();
    std::mt19937_64 rng(spec.seed);

    const std::uint64_t n = spec.nodes;
    const auto year_span =
        static_cast<std::uint64_t>(spec.year_max - spec.year_min) + 1;

    std::vector<int> years(n);
    for (auto& year : years)
        year = spec.year_min + static_cast<int>(bounded(rng, year_span));

    std::size_t width = std::to_string(n).size();
    if (width < 7) width = 7;
    auto make_id = [&](std::uint64_t i) {
        std::string digits = std::to_string(i + 1);
        std::string id = spec.id_prefix;
        id.append(width - digits.size(), '0');
        id += digits;
        return id;
    };

    // Draw distinct (citing, cited) pairs in rounds: draw what is still
    // missing, then sort + dedup the whole pool. Duplicate rates are low for
    // sparse graphs so this converges in a handful of rounds.
    std::vector<std::uint64_t> edge_keys;
    edge_keys.reserve(spec.edges + spec.edges / 8 + 16);
    std::uint64_t attempts_left = 20 * spec.edges + 1000;
    while (edge_keys.size() < spec.edges && attempts_left > 0) {
        std::uint64_t need = spec.edges - edge_keys.size();
        for (std::uint64_t drawn = 0; drawn < need && attempts_left > 0;) {
            --attempts_left;
            std::uint64_t citing = bounded(rng, n);
            std::uint64_t cited = bounded(rng, n);
            if (citing == cited) continue;
            bool force_acausal =
                spec.acausal_fraction > 0.0 && unit(rng) < spec.acausal_fraction;
            if (force_acausal) {
                if (years[cited] <= years[citing]) continue;
            } else {
                if (years[cited] > years[citing]) continue;
            }
            edge_keys.push_back((citing << 32) | cited);
            ++drawn;
        }
        std::sort(edge_keys.begin(), edge_keys.end());
        edge_keys.erase(std::unique(edge_keys.begin(), edge_keys.end()),
                        edge_keys.end());
    }

    std::vector<PublicationRecord> records(n);
    for (std::uint64_t i = 0; i < n; ++i) {
        records[i].id = make_id(i);
        records[i].year = years[i];
    }
    for (std::uint64_t key : edge_keys) {
        auto citing = static_cast<std::size_t>(key >> 32);
        auto cited = static_cast<std::size_t>(key & 0xffffffffu);
        records[citing].references.push_back(records[cited].id);
    }
    return records;
}

} // namespace cdindex
