#include "cdindex/cd.hpp"

#include <algorithm>
#include <cassert>

namespace cdindex {
namespace {

CdResult make_result(const CitationNetwork& net, NodeIndex focal, int t,
                     std::uint64_t k, std::uint64_t disruptive, std::uint64_t neutral,
                     std::uint64_t consolidating) {
    CdResult res;
    res.focal = net.id_of(focal);
    res.t = t;
    res.k = k;
    res.n_disruptive = disruptive;
    res.n_neutral = neutral;
    res.n_consolidating = consolidating;
    res.n = disruptive + neutral + consolidating;
    if (res.n > 0)
        res.cd = static_cast<double>(res.score_sum()) / static_cast<double>(res.n);
    return res;
}

} // namespace

void CdWorkspace::prepare(std::size_t node_count) {
    if (stamp_focal.size() < node_count || epoch == UINT32_MAX) {
        stamp_focal.assign(node_count, 0);
        stamp_ref.assign(node_count, 0);
        stamp_refset.assign(node_count, 0);
        stamp_union.assign(node_count, 0);
        epoch = 0;
    }
    ++epoch;
    citer_union.clear();
}

CdResult cd_original(const CitationNetwork& net, NodeIndex focal,
                     const CdParams& params, CdWorkspace& ws) {
    params.validate();
    ws.prepare(net.size());
    const std::uint32_t ep = ws.epoch;

    const int year = net.year_of(focal);
    const int lo = year + 1;
    const int hi = year + params.t;

    auto refs = net.references(focal);
    for (NodeIndex r : refs) ws.stamp_refset[r] = ep;

    // Citer union: everything citing the focal work or any reference in window.
    for (NodeIndex c : net.citers_in_window(focal, lo, hi)) {
        ws.stamp_union[c] = ep;
        ws.citer_union.push_back(c);
    }
    for (NodeIndex r : refs) {
        for (NodeIndex c : net.citers_in_window(r, lo, hi)) {
            if (ws.stamp_union[c] != ep) {
                ws.stamp_union[c] = ep;
                ws.citer_union.push_back(c);
            }
        }
    }

    // Cross-check each citer's reference list against the focal work and its
    // reference set; this is the method's defining second pass.
    std::uint64_t disruptive = 0, neutral = 0, consolidating = 0;
    for (NodeIndex c : ws.citer_union) {
        bool cites_focal = false;
        bool cites_reference = false;
        for (NodeIndex target : net.references(c)) {
            if (target == focal)
                cites_focal = true;
            else if (ws.stamp_refset[target] == ep)
                cites_reference = true;
            if (cites_focal && cites_reference) break;
        }
        assert(cites_focal || cites_reference);
        if (cites_focal && !cites_reference)
            ++disruptive;
        else if (cites_focal)
            ++consolidating;
        else
            ++neutral;
    }

    return make_result(net, focal, params.t, refs.size(), disruptive, neutral,
                       consolidating);
}

CdResult cd_decomposed(const CitationNetwork& net, NodeIndex focal,
                       const CdParams& params, CdWorkspace& ws) {
    params.validate();
    ws.prepare(net.size());
    const std::uint32_t ep = ws.epoch;

    const int year = net.year_of(focal);
    const int lo = year + 1;
    const int hi = year + params.t;

    // Scan A: citers of the focal work, each scoring s' = -1 regardless of
    // what else they cite. The adjacency is deduplicated, so no stamp check
    // is needed within this scan.
    std::uint64_t size_a = 0;
    for (NodeIndex c : net.citers_in_window(focal, lo, hi)) {
        ws.stamp_focal[c] = ep;
        ++size_a;
    }

    // Scan B: citers of any reference, s'' = -2 counted once per citer no
    // matter how many references it cites. Never looks at a citer's own
    // reference list.
    auto refs = net.references(focal);
    std::uint64_t size_b = 0, in_both = 0;
    for (NodeIndex r : refs) {
        for (NodeIndex c : net.citers_in_window(r, lo, hi)) {
            if (ws.stamp_ref[c] == ep) continue;
            ws.stamp_ref[c] = ep;
            ++size_b;
            if (ws.stamp_focal[c] == ep) ++in_both;
        }
    }

    // n = |A u B|; categories follow from (in A, in B) membership, matching
    // s = s' + s'' + 2 case by case.
    const std::uint64_t consolidating = in_both;
    const std::uint64_t disruptive = size_a - in_both;
    const std::uint64_t neutral = size_b - in_both;
    return make_result(net, focal, params.t, refs.size(), disruptive, neutral,
                       consolidating);
}

CdResult cd_original(const CitationNetwork& net, const PubId& focal,
                     const CdParams& params) {
    CdWorkspace ws;
    return cd_original(net, net.index_of(focal), params, ws);
}

CdResult cd_decomposed(const CitationNetwork& net, const PubId& focal,
                       const CdParams& params) {
    CdWorkspace ws;
    return cd_decomposed(net, net.index_of(focal), params, ws);
}

std::vector<CiterScore> score_breakdown(const CitationNetwork& net, const PubId& focal,
                                        const CdParams& params) {
    params.validate();
    CdWorkspace ws;
    const NodeIndex f = net.index_of(focal);
    ws.prepare(net.size());
    const std::uint32_t ep = ws.epoch;

    const int year = net.year_of(f);
    const int lo = year + 1;
    const int hi = year + params.t;

    auto refs = net.references(f);
    for (NodeIndex r : refs) ws.stamp_refset[r] = ep;
    for (NodeIndex c : net.citers_in_window(f, lo, hi)) {
        ws.stamp_union[c] = ep;
        ws.citer_union.push_back(c);
    }
    for (NodeIndex r : refs) {
        for (NodeIndex c : net.citers_in_window(r, lo, hi)) {
            if (ws.stamp_union[c] != ep) {
                ws.stamp_union[c] = ep;
                ws.citer_union.push_back(c);
            }
        }
    }

    std::vector<CiterScore> out;
    out.reserve(ws.citer_union.size());
    for (NodeIndex c : ws.citer_union) {
        CiterScore score;
        score.citer = net.id_of(c);
        for (NodeIndex target : net.references(c)) {
            if (target == f)
                score.cites_focal = true;
            else if (ws.stamp_refset[target] == ep)
                score.cites_reference = true;
            if (score.cites_focal && score.cites_reference) break;
        }
        score.s = score.cites_focal ? (score.cites_reference ? -1 : 1) : 0;
        out.push_back(std::move(score));
    }
    std::sort(out.begin(), out.end(),
              [](const CiterScore& a, const CiterScore& b) { return a.citer < b.citer; });
    return out;
}

} // namespace cdindex
