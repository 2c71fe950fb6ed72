#pragma once
// Deterministic synthetic citation networks for benchmarks and property
// tests. A seed fully determines the output; edges respect time order
// (cited year <= citing year) unless acausal noise is requested.

#include <cstdint>
#include <string>
#include <vector>

#include "cdindex/types.hpp"

namespace cdindex {

struct SynthSpec {
    std::uint64_t nodes = 0;
    std::uint64_t edges = 0;
    int year_min = 1950;
    int year_max = 2020;
    std::uint64_t seed = 0;
    // Fraction of edge draws forced to point forward in time (cited published
    // after the citer), exercising the window logic against dirty data.
    double acausal_fraction = 0.0;
    std::string id_prefix = "pub.";

    void validate() const;
};

// Records carry references only; the citation direction is synthesized at
// build time. May emit fewer edges than requested when the constraints make
// the target unreachable (e.g. dense graphs or degenerate year ranges).
std::vector<PublicationRecord> synth_records(const SynthSpec& spec);

} // namespace cdindex
