#include "doctest.h"

#include "emu/critical.hpp"
#include "emu/generator.hpp"
#include "emu/preprocess.hpp"

using namespace emu;

namespace {

SimplifiedInstance two_ring(std::uint64_t seed, int outer_k = 4, int inner_k = 4) {
    InstanceSpec spec;
    spec.rows = 6;
    spec.cols = 8;
    spec.terminals_per_face = {outer_k, inner_k};
    spec.weight_max = 7;
    spec.seed = seed;
    return preprocess(gen_instance(spec));
}

} // namespace

TEST_CASE("two-face instances: unique split position per outer terminal, clockwise monotone") {
    for (std::uint64_t seed : {1ULL, 2ULL, 5ULL, 9ULL, 14ULL}) {
        SimplifiedInstance si = two_ring(seed);
        CriticalContext cx(si);
        const auto& outer_terms = si.inst.faces[0].terminals_cw;
        const auto& inner_terms = si.inst.faces[1].terminals_cw;
        std::size_t m = inner_terms.size();
        std::vector<int> split_pos;
        for (int t : outer_terms) {
            int splits = 0, where = -1;
            for (std::size_t j = 0; j < m; ++j) {
                if (!equivalent(cx, t, 1, static_cast<int>(j))) {
                    ++splits;
                    where = static_cast<int>(j);
                }
            }
            CHECK(splits == 1);
            split_pos.push_back(where);
        }
        // split positions advance clockwise with the outer terminals:
        // some rotation of the sequence must be cyclically non-decreasing
        bool monotone = false;
        std::size_t n = split_pos.size();
        for (std::size_t shift = 0; shift < n && !monotone; ++shift) {
            bool ok = true;
            for (std::size_t i = 0; i + 1 < n; ++i) {
                int a = split_pos[(shift + i) % n];
                int b = split_pos[(shift + i + 1) % n];
                int diff = (b - a + static_cast<int>(m)) % static_cast<int>(m);
                if (diff > static_cast<int>(m) - 1 || diff < 0) ok = false;
            }
            // non-decreasing cyclically: total winding of one lap is < m
            int total = 0;
            for (std::size_t i = 0; i + 1 < n; ++i) {
                int a = split_pos[(shift + i) % n];
                int b = split_pos[(shift + i + 1) % n];
                total += (b - a + static_cast<int>(m)) % static_cast<int>(m);
            }
            if (ok && total <= static_cast<int>(m)) monotone = true;
        }
        CHECK(monotone);
    }
}

TEST_CASE("critical path count per terminal is at most 8f-4") {
    for (auto [f, cols] : {std::pair<int, int>{2, 9}, {3, 12}}) {
        InstanceSpec spec;
        spec.kind = "random-planar";
        spec.rows = 6;
        spec.cols = cols;
        spec.terminals_per_face.assign(f, 3);
        spec.weight_max = 6;
        spec.seed = 21 + f;
        SimplifiedInstance si = preprocess(gen_instance(spec));
        CriticalContext cx(si);
        CriticalPathSet cps = critical_paths(cx);
        for (int t : si.inst.all_terminals()) {
            CHECK(cps.per_terminal_count(si, t) <= 8 * f - 4);
        }
    }
}

TEST_CASE("two-face ring: exactly two critical paths per terminal") {
    SimplifiedInstance si = two_ring(3);
    CriticalContext cx(si);
    CriticalPathSet cps = critical_paths(cx);
    for (int t : si.inst.all_terminals()) {
        CHECK(cps.per_terminal_count(si, t) == 2);
    }
}

TEST_CASE("primary classification follows the face-index rule") {
    SimplifiedInstance si = two_ring(4);
    CriticalContext cx(si);
    CriticalPathSet cps = critical_paths(cx);
    for (const auto& [key, ps] : cps.pairs) {
        auto [t, r] = key;
        int src = si.inst.face_of_terminal(t);
        for (const CriticalPair& p : ps) {
            // lower source face designates the clockwise-first path
            CHECK(p.a_primary == (src < r));
        }
    }
    // every primary record names a critical strand
    for (const PrimaryRec& pr : cps.primaries) CHECK(cps.critical_strands.count(pr.strand));
}

TEST_CASE("canonical paths exist for all inter-face pairs and are at least as long as distance") {
    for (std::uint64_t seed : {2ULL, 6ULL, 11ULL}) {
        SimplifiedInstance si = two_ring(seed, 4, 3);
        CriticalContext cx(si);
        CriticalPathSet cps = critical_paths(cx);
        auto dists = all_terminal_distances(si.inst);
        for (int t : si.inst.faces[0].terminals_cw) {
            for (int tp : si.inst.faces[1].terminals_cw) {
                CanonicalPath cp = canonical_path(cx, cps, t, tp);
                std::vector<int> walk = canonical_walk(si, cp);
                REQUIRE(walk.size() >= 2);
                CHECK(walk.front() == cp.t);
                CHECK(walk.back() == cp.tp);
                // simple path
                std::set<int> uniq(walk.begin(), walk.end());
                CHECK(uniq.size() == walk.size());
                Rat len(0);
                const PlanarGraph& g = si.inst.g;
                for (std::size_t i = 0; i + 1 < walk.size(); ++i) {
                    int eid = -1;
                    for (int cand : g.incident_edge_ids(walk[i]))
                        if (g.other_endpoint(cand, walk[i]) == walk[i + 1]) eid = cand;
                    REQUIRE(eid >= 0);
                    len += g.edge(eid).w;
                }
                CHECK(len >= lookup_distance(dists, t, tp));
            }
        }
    }
}

TEST_CASE("canonical area between primaries holds no terminal face (safe one-bend)") {
    SimplifiedInstance si = two_ring(7);
    CriticalContext cx(si);
    CriticalPathSet cps = critical_paths(cx);
    const PlanarGraph& g = si.inst.g;
    for (int t : si.inst.faces[0].terminals_cw) {
        for (int tp : si.inst.faces[1].terminals_cw) {
            CanonicalPath cp = canonical_path(cx, cps, t, tp);
            if (cp.sA == cp.sB) continue; // degenerate bend
            // area between the two full primaries: A, arc(s) along F_rp from
            // A's far end to tp, reversed B, arc(s) along F_r from B's far
            // end back to t
            const Strand& A = si.strands[cp.sA];
            const Strand& B = si.strands[cp.sB];
            int a_far = A.a == cp.t ? A.b : A.a;
            int b_far = B.a == cp.tp ? B.b : B.a;
            // walk face arcs from one terminal to another, clockwise or not
            auto arc_walk = [&](int r, int from, int to, bool cw, std::vector<int>& out) {
                const auto& terms = si.inst.faces[r].terminals_cw;
                int m = static_cast<int>(terms.size());
                int at = -1;
                for (int i = 0; i < m; ++i)
                    if (terms[i] == from) at = i;
                REQUIRE(at >= 0);
                while (terms[at] != to) {
                    int nxt = cw ? (at + 1) % m : (at + m - 1) % m;
                    int lo = cw ? at : nxt, hi = cw ? nxt : at;
                    auto it = si.arc_strand.find({terms[lo], terms[hi]});
                    REQUIRE(it != si.arc_strand.end());
                    bool fwd = it->second.second;
                    critical_detail::append_strand_darts(g, si.strands[it->second.first],
                                                         cw ? fwd : !fwd, out);
                    at = nxt;
                }
            };
            std::vector<int> walk;
            critical_detail::append_strand_darts(g, A, A.a == cp.t, walk);
            int rp = si.inst.face_of_terminal(cp.tp);
            int r = si.inst.face_of_terminal(cp.t);
            // stay inside the governed segments: direction depends on which
            // end of the segment the primary reaches
            const CriticalPair& pa = governed_pair(cps, si, cp.t, rp, cp.tp);
            const CriticalPair& pb = governed_pair(cps, si, cp.tp, r, cp.t);
            bool a_cw = si.inst.faces[rp].terminals_cw[pa.cw_start] == a_far;
            bool b_cw = si.inst.faces[r].terminals_cw[pb.cw_start] == b_far;
            arc_walk(rp, a_far, cp.tp, a_cw, walk);
            critical_detail::append_strand_darts(g, B, B.a == cp.tp, walk);
            arc_walk(r, b_far, cp.t, b_cw, walk);
            if (walk.empty()) continue;
            // drop duplicated edges if the arcs retrace the strands (degenerate)
            std::set<int> eids;
            bool dup = false;
            for (int d : walk)
                if (!eids.insert(d >> 1).second) dup = true;
            if (dup) continue;
            auto inside = g.enclosed_faces(cx.fs, cx.outer_face, walk);
            std::set<int> inset(inside.begin(), inside.end());
            for (std::size_t q = 0; q < si.hole_faces.size(); ++q) {
                CHECK(!inset.count(si.hole_faces[q]));
            }
        }
    }
}
