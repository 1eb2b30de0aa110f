#pragma once

#include <array>
#include <map>
#include <optional>
#include <vector>

#include "emu/instance.hpp"
#include "emu/json_io.hpp"
#include "emu/shortest_path.hpp"

namespace emu {

// One redrawn terminal shortest path.  Boundary arcs are the extra
// face-cycle edges kept purely to bound a hole when the tie-broken
// shortest path between consecutive face terminals picked a parallel
// edge instead.
struct Strand {
    int a = -1, b = -1;     // terminal endpoints, path runs a -> b
    bool boundary_arc = false;
    std::vector<int> verts; // vertex ids in the simplified graph
    std::vector<int> eids;
    Rat length;
};

struct StrandCrossing {
    int vertex = -1;    // simplified-graph vertex id (degree 4)
    int s1 = -1, s2 = -1; // strand indices, s1 < s2
    int pos1 = -1, pos2 = -1; // index into verts of each strand
    int sigma = 0;      // sign of cross(dir_s1, dir_s2) at the crossing,
                        // directions taken along each strand's a->b run
};

struct SimplifiedInstance {
    TerminalInstance inst; // zero-weight graph + hole faces + outer walk
    std::vector<Strand> strands;
    std::map<std::pair<int, int>, int> pair_strand;          // (a<b) -> strand
    std::map<std::pair<int, int>, std::pair<int, bool>> arc_strand; // cw pair -> (strand, fwd?)
    std::vector<StrandCrossing> crossings;
    std::map<std::pair<int, int>, int> crossing_of;          // (s1<s2) -> crossing idx
    std::vector<std::vector<int>> strand_crossings;          // per strand, in path order
    std::map<int, int> provenance;                            // new vid -> original vid
    std::vector<int> hole_faces;                              // per face r: traced face idx
    int outer_terminal_face = -1;                             // r with F_r designated outer

    const Strand& strand_for(int s, int t) const {
        auto it = pair_strand.find({std::min(s, t), std::max(s, t)});
        EMU_INTERNAL_CHECK(it != pair_strand.end(), "no strand for terminal pair");
        return strands[it->second];
    }
    int strand_index(int s, int t) const {
        auto it = pair_strand.find({std::min(s, t), std::max(s, t)});
        EMU_INTERNAL_CHECK(it != pair_strand.end(), "no strand for terminal pair");
        return it->second;
    }
};

namespace preprocess_detail {

// ---- exact 2d helpers for the per-disc chord arrangements ----

struct Pt {
    Rat x, y;
};

inline Rat cross(const Pt& o, const Pt& a, const Pt& b) {
    return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

inline Pt sub(const Pt& a, const Pt& b) { return Pt{a.x - b.x, a.y - b.y}; }

// ccw-angle comparator for direction vectors (pseudo-angle: half plane
// split at the positive x axis, then cross product).
inline bool dir_ccw_less(const Pt& a, const Pt& b) {
    auto half = [](const Pt& p) {
        if (p.y.sign() > 0 || (p.y.sign() == 0 && p.x.sign() > 0)) return 0;
        return 1;
    };
    int ha = half(a), hb = half(b);
    if (ha != hb) return ha < hb;
    Rat cr = a.x * b.y - a.y * b.x;
    EMU_INTERNAL_CHECK(cr.sign() != 0, "collinear directions at a crossing");
    return cr.sign() > 0;
}

} // namespace preprocess_detail

// ---------------------------------------------------------------------------
// Stage 1: make every terminal face a simple cycle of its own terminals.
// Consecutive clockwise terminals get a direct edge of exactly their
// distance, drawn inside the face; terminals shared between faces count
// only for the lowest-index face.  Distances between terminals never
// change.  Faces with a single terminal are left untouched.
// ---------------------------------------------------------------------------
inline TerminalInstance enforce_face_cycles(const TerminalInstance& input) {
    input.validate();
    TerminalInstance out = input;
    PlanarGraph& g = out.g;

    // G2: claim each terminal for its lowest face.
    std::set<int> claimed;
    for (FaceSpec& f : out.faces) {
        std::vector<int> kept;
        for (int t : f.terminals_cw)
            if (claimed.insert(t).second) kept.push_back(t);
        EMU_INPUT_CHECK(!kept.empty(), "a terminal face lost all terminals to lower faces");
        f.terminals_cw = std::move(kept);
    }

    auto dists = all_terminal_distances(input);

    auto fs0 = g.trace_faces();
    int outer0 = out.resolve_outer(fs0);

    // (face sector anchors) at each terminal of each face, on the original graph
    struct Anchor {
        int e_in, e_out; // edge ids of the face walk through the terminal
    };
    std::vector<std::map<int, Anchor>> anchors(out.faces.size());
    for (std::size_t r = 0; r < out.faces.size(); ++r) {
        int fi = out.resolve_face(fs0, r);
        const auto& walk = fs0.face_darts[fi];
        std::set<int> want(out.faces[r].terminals_cw.begin(), out.faces[r].terminals_cw.end());
        for (std::size_t i = 0; i < walk.size(); ++i) {
            int v = g.dart_tail(walk[i]);
            if (!want.count(v) || anchors[r].count(v)) continue;
            int d_out = walk[i];
            int d_in = walk[(i + walk.size() - 1) % walk.size()];
            anchors[r][v] = Anchor{g.dart_edge_id(d_in), g.dart_edge_id(d_out)};
        }
        for (int t : out.faces[r].terminals_cw)
            EMU_INPUT_CHECK(anchors[r].count(t), "terminal " + std::to_string(t) +
                                                     " not on boundary of its face");
    }

    int next_eid = g.max_edge_id() + 1;
    for (std::size_t r = 0; r < out.faces.size(); ++r) {
        FaceSpec& f = out.faces[r];
        std::size_t m = f.terminals_cw.size();
        if (m < 2) continue;
        bool is_outer_face = out.resolve_face(fs0, r) == outer0;

        // chord i runs clockwise from terminal i to terminal i+1
        std::vector<int> chord(m);
        for (std::size_t i = 0; i < m; ++i) {
            int a = f.terminals_cw[i], b = f.terminals_cw[(i + 1) % m];
            chord[i] = next_eid++;
            g.add_edge(chord[i], a, b, lookup_distance(dists, a, b));
        }
        // splice both incident chords into each terminal's rotation inside
        // the face sector
        for (std::size_t i = 0; i < m; ++i) {
            int t = f.terminals_cw[i];
            int c_next = chord[i];
            int c_prev = chord[(i + m - 1) % m];
            const Anchor& an = anchors[r].at(t);
            std::vector<int> rot = g.rotation_ids(t);
            auto pos = std::find(rot.begin(), rot.end(), an.e_out);
            EMU_INPUT_CHECK(pos != rot.end(), "face anchor edge missing from rotation");
            // ccw within the sector: bounded face (e_out, c_prev, c_next, e_in),
            // outer face (e_out, c_next, c_prev, e_in)
            std::vector<int> ins = is_outer_face ? std::vector<int>{c_next, c_prev}
                                                 : std::vector<int>{c_prev, c_next};
            rot.insert(pos + 1, ins.begin(), ins.end());
            g.set_rotation(t, rot);
        }
        f.walk_edge_ids = chord;
        if (is_outer_face) out.outer_walk = chord;
    }

    // the new hole faces must trace as stated and distances must not move
    out.validate();
    auto dists2 = all_terminal_distances(out);
    for (const auto& [key, val] : dists) {
        EMU_INTERNAL_CHECK(lookup_distance(dists2, key.first, key.second) == val,
                           "face-cycle insertion changed a terminal distance");
    }
    return out;
}

// ---------------------------------------------------------------------------
// Stage 2: redraw all terminal shortest paths as pairwise-transversal
// strands.  Every vertex becomes a tiny disc, every surviving edge a strip
// of parallel lanes (one per path through it), and path curves cross only
// inside discs.  Lane order inside each strip is chosen from the paths'
// divergence sides so that two strands cross at most once overall; the
// pairwise audit at the end verifies that no pair crosses twice.
// ---------------------------------------------------------------------------
inline SimplifiedInstance uncross_shortest_paths(const TerminalInstance& g1) {
    using preprocess_detail::Pt;
    using preprocess_detail::cross;
    using preprocess_detail::dir_ccw_less;

    const PlanarGraph& G = g1.g;
    std::vector<int> terminals = g1.all_terminals();
    EMU_INPUT_CHECK(terminals.size() >= 2, "need at least two terminals");

    auto fsG = G.trace_faces();
    int outerG = g1.resolve_outer(fsG);
    int outer_r = -1;
    for (std::size_t r = 0; r < g1.faces.size(); ++r)
        if (g1.resolve_face(fsG, r) == outerG) outer_r = static_cast<int>(r);
    EMU_INPUT_CHECK(outer_r >= 0,
                    "the designated outer face must be one of the terminal faces");

    // --- terminal shortest paths ---
    std::map<int, PathTree> trees;
    for (int t : terminals) trees.emplace(t, PathTree(G, t));

    SimplifiedInstance si;
    si.outer_terminal_face = outer_r;
    std::vector<Strand> protos; // in original-graph coordinates
    for (std::size_t i = 0; i < terminals.size(); ++i) {
        for (std::size_t j = i + 1; j < terminals.size(); ++j) {
            int a = std::min(terminals[i], terminals[j]);
            int b = std::max(terminals[i], terminals[j]);
            TerminalPath p = trees.at(a).path_to(b);
            Strand s;
            s.a = a;
            s.b = b;
            s.verts = p.vertices;
            s.eids = p.edge_ids;
            s.length = p.length;
            si.pair_strand[{a, b}] = static_cast<int>(protos.size());
            protos.push_back(std::move(s));
        }
    }

    // boundary arcs: each face-cycle edge must be realized by some strand
    for (std::size_t r = 0; r < g1.faces.size(); ++r) {
        const FaceSpec& f = g1.faces[r];
        std::size_t m = f.terminals_cw.size();
        if (m < 2) continue;
        for (std::size_t i = 0; i < m; ++i) {
            int a = f.terminals_cw[i], b = f.terminals_cw[(i + 1) % m];
            int eid = f.walk_edge_ids[i];
            int ps = si.pair_strand.at({std::min(a, b), std::max(a, b)});
            if (protos[ps].eids.size() == 1 && protos[ps].eids[0] == eid) {
                si.arc_strand[{a, b}] = {ps, protos[ps].a == a};
            } else {
                Strand s;
                s.a = a;
                s.b = b;
                s.boundary_arc = true;
                s.verts = {a, b};
                s.eids = {eid};
                s.length = G.edge(eid).w;
                si.arc_strand[{a, b}] = {static_cast<int>(protos.size()), true};
                protos.push_back(std::move(s));
            }
        }
    }

    // --- prune to the union of strands ---
    std::set<int> used_eids;
    for (const Strand& s : protos) used_eids.insert(s.eids.begin(), s.eids.end());
    std::map<int, std::vector<int>> prot; // vertex -> surviving rotation (edge ids)
    for (int v : G.vertex_ids()) {
        std::vector<int> rot;
        for (int eid : G.rotation_ids(v))
            if (used_eids.count(eid)) rot.push_back(eid);
        if (!rot.empty()) prot[v] = std::move(rot);
    }
    auto rot_pos = [&](int v, int eid) -> int {
        const auto& rot = prot.at(v);
        for (std::size_t i = 0; i < rot.size(); ++i)
            if (rot[i] == eid) return static_cast<int>(i);
        EMU_INTERNAL_CHECK(false, "edge not in pruned rotation");
        return -1;
    };

    // --- terminal gap anchors (where the terminal point sits on its disc) ---
    // walk clockwise from the face sector's outgoing edge to the first
    // surviving edge; the terminal point is placed just ccw of it.
    std::map<int, int> gap_after; // terminal -> edge id whose arc precedes the T point
    {
        auto face_of_terminal = [&](int t) { return g1.face_of_terminal(t); };
        for (std::size_t r = 0; r < g1.faces.size(); ++r) {
            int fi = g1.resolve_face(fsG, r);
            const auto& walk = fsG.face_darts[fi];
            for (std::size_t i = 0; i < walk.size(); ++i) {
                int v = G.dart_tail(walk[i]);
                if (face_of_terminal(v) != static_cast<int>(r) || gap_after.count(v)) continue;
                int e_out = G.dart_edge_id(walk[i]);
                std::vector<int> rotG = G.rotation_ids(v);
                int p = -1;
                for (std::size_t x = 0; x < rotG.size(); ++x)
                    if (rotG[x] == e_out) p = static_cast<int>(x);
                EMU_INTERNAL_CHECK(p >= 0, "gap anchor not found");
                for (std::size_t step = 0; step < rotG.size(); ++step) {
                    int cand = rotG[(p + rotG.size() - step) % rotG.size()];
                    if (used_eids.count(cand)) {
                        gap_after[v] = cand;
                        break;
                    }
                }
                EMU_INTERNAL_CHECK(gap_after.count(v), "terminal retained no edges");
            }
        }
        for (int t : terminals)
            EMU_INTERNAL_CHECK(gap_after.count(t), "terminal without a face gap anchor");
    }

    // --- lane assignment ---
    struct Traversal {
        int strand;
        int step; // edge index along the strand
        bool fwd; // true when the strand walks the edge u->v (canonical)
    };
    std::map<int, std::vector<Traversal>> lanes; // edge id -> ordered traversals
    for (std::size_t s = 0; s < protos.size(); ++s) {
        for (std::size_t st = 0; st < protos[s].eids.size(); ++st) {
            int eid = protos[s].eids[st];
            const auto& e = G.edge(eid);
            bool fwd = protos[s].verts[st] == e.u;
            lanes[eid].push_back(Traversal{static_cast<int>(s), static_cast<int>(st), fwd});
        }
    }

    // slot of a continuation at vertex v, in doubled rotation units measured
    // ccw from a reference edge.  -1 encodes "terminates here" and resolves
    // to the terminal point's slot.
    auto slot_of = [&](int v, int cont_eid) -> int {
        if (cont_eid >= 0) return 2 * rot_pos(v, cont_eid);
        auto it = gap_after.find(v);
        EMU_INTERNAL_CHECK(it != gap_after.end(), "path terminates at a non-terminal");
        return 2 * rot_pos(v, it->second) + 1;
    };
    auto rel_ccw = [&](int v, int ref_eid, int slot) -> int {
        int n = 2 * static_cast<int>(prot.at(v).size());
        int rel = (slot - 2 * rot_pos(v, ref_eid)) % n;
        if (rel < 0) rel += n;
        EMU_INTERNAL_CHECK(rel != 0, "continuation equals the reference edge");
        return rel;
    };

    // "ta is left of tb across the strip of eid, relative to the canonical
    // u->v direction".  Decided at the backward divergence of the two
    // strands' maximal shared run (the side a strand arrives from is the
    // side it keeps), falling back to the forward divergence when both
    // strands start together at a shared terminal.
    auto compare_lr = [&](int eid, const Traversal& ta, const Traversal& tb) -> bool {
        const Strand& A = protos[ta.strand];
        const Strand& B = protos[tb.strand];
        auto run = [&](bool head_dir) -> std::array<int, 4> {
            // returns {divergence vertex, contA, contB, reference edge}
            int da = (ta.fwd == head_dir) ? 1 : -1;
            int db = (tb.fwd == head_dir) ? 1 : -1;
            int ia = ta.step, ib = tb.step;
            int ref = eid;
            int v = head_dir == true ? (ta.fwd ? A.verts[ta.step + 1] : A.verts[ta.step])
                                     : (ta.fwd ? A.verts[ta.step] : A.verts[ta.step + 1]);
            while (true) {
                int na = ia + da;
                int nb = ib + db;
                int ea = (na >= 0 && na < static_cast<int>(A.eids.size())) ? A.eids[na] : -1;
                int eb = (nb >= 0 && nb < static_cast<int>(B.eids.size())) ? B.eids[nb] : -1;
                if (ea != eb || ea == -1) return {v, ea, eb, ref};
                ia = na;
                ib = nb;
                ref = ea;
                v = G.other_endpoint(ea, v);
            }
        };
        auto bwd = run(false);
        auto fwd = run(true);
        bool bwd_term = bwd[1] == -1 && bwd[2] == -1;
        bool fwd_term = fwd[1] == -1 && fwd[2] == -1;
        EMU_INTERNAL_CHECK(!(bwd_term && fwd_term),
                           "two strands share both endpoints and their whole run");
        // The decisive end of the shared run must not depend on which strip
        // of the run is being ordered, or the lane order would flip midway;
        // ends where both strands terminate can never host a crossing, so
        // the other end decides there.
        bool use_bwd;
        if (bwd_term)
            use_bwd = false;
        else if (fwd_term)
            use_bwd = true;
        else
            use_bwd = bwd[0] < fwd[0];
        if (use_bwd) {
            int ra = rel_ccw(bwd[0], bwd[3], slot_of(bwd[0], bwd[1]));
            int rb = rel_ccw(bwd[0], bwd[3], slot_of(bwd[0], bwd[2]));
            EMU_INTERNAL_CHECK(ra != rb, "divergence without distinct sides");
            return ra < rb; // smaller ccw offset = left of canonical travel
        }
        int ra = rel_ccw(fwd[0], fwd[3], slot_of(fwd[0], fwd[1]));
        int rb = rel_ccw(fwd[0], fwd[3], slot_of(fwd[0], fwd[2]));
        EMU_INTERNAL_CHECK(ra != rb, "divergence without distinct sides");
        return ra > rb; // smaller ccw offset = right of canonical travel
    };

    // Initial lane order: insertion by the divergence-side heuristic.  The
    // pairwise relation is not always linearizable (three runs can disagree
    // inside one strip), so leftover pairs that still cross twice are fixed
    // by the uncrossing loop below.
    for (auto& [eid, ts] : lanes) {
        std::vector<Traversal> ordered;
        for (const Traversal& t : ts) {
            std::size_t at = ordered.size();
            for (std::size_t i = 0; i < ordered.size(); ++i) {
                if (compare_lr(eid, t, ordered[i])) {
                    at = i;
                    break;
                }
            }
            ordered.insert(ordered.begin() + at, t);
        }
        ts = std::move(ordered);
    }

    auto lane_pos_of = [&](int eid, int strand) -> int {
        const auto& ts = lanes.at(eid);
        for (std::size_t li = 0; li < ts.size(); ++li)
            if (ts[li].strand == strand) return static_cast<int>(li);
        EMU_INTERNAL_CHECK(false, "strand not found in lane list");
        return -1;
    };

    // --- uncrossing loop ---
    // Cyclic slot positions around a disc under the current lane order, one
    // slot per lane per incident edge plus one for the terminal point.
    struct DiscSlots {
        int M = 0;
        std::map<std::pair<int, int>, int> lane_slot; // (eid, lane idx) -> slot
        int t_slot = -1;
    };
    auto disc_slots = [&](int v) -> DiscSlots {
        DiscSlots d;
        bool is_term = gap_after.count(v) != 0;
        for (int eid : prot.at(v)) {
            const auto& ts = lanes.at(eid);
            const auto& e = G.edge(eid);
            int side = (e.u == v) ? 0 : 1;
            for (std::size_t i = 0; i < ts.size(); ++i) {
                // ccw sweep passes lanes right-to-left as seen walking out of
                // v: reversed list at the canonical tail, forward at the head
                int lane = side == 0 ? static_cast<int>(ts.size() - 1 - i) : static_cast<int>(i);
                d.lane_slot[{eid, lane}] = d.M++;
            }
            if (is_term && gap_after.at(v) == eid) d.t_slot = d.M++;
        }
        return d;
    };
    struct AChord {
        int strand;
        int path_vtx; // index of this disc's vertex along the strand
        int from_slot, to_slot;
    };
    auto disc_chords = [&](int v, const DiscSlots& d) -> std::vector<AChord> {
        std::vector<AChord> out;
        for (int eid : prot.at(v)) {
            for (const Traversal& t : lanes.at(eid)) {
                const Strand& S = protos[t.strand];
                int arrive = t.step + 1;
                if (S.verts[arrive] != v) continue;
                AChord c;
                c.strand = t.strand;
                c.path_vtx = arrive;
                c.from_slot = d.lane_slot.at({eid, lane_pos_of(eid, t.strand)});
                if (arrive == static_cast<int>(S.verts.size()) - 1) {
                    c.to_slot = d.t_slot;
                } else {
                    int e2 = S.eids[arrive];
                    c.to_slot = d.lane_slot.at({e2, lane_pos_of(e2, t.strand)});
                }
                out.push_back(c);
            }
        }
        if (gap_after.count(v)) {
            for (std::size_t sdx = 0; sdx < protos.size(); ++sdx) {
                const Strand& S = protos[sdx];
                if (S.verts.front() != v) continue;
                AChord c;
                c.strand = static_cast<int>(sdx);
                c.path_vtx = 0;
                c.from_slot = d.t_slot;
                c.to_slot = d.lane_slot.at({S.eids[0], lane_pos_of(S.eids[0], c.strand)});
                out.push_back(c);
            }
        }
        return out;
    };
    auto interleaves = [](int M, const AChord& A, const AChord& B) -> bool {
        if (A.from_slot == B.from_slot || A.from_slot == B.to_slot ||
            A.to_slot == B.from_slot || A.to_slot == B.to_slot)
            return false; // shared terminal slot, never a crossing
        int span = (A.to_slot - A.from_slot + M) % M;
        auto inside = [&](int x) {
            int r = (x - A.from_slot + M) % M;
            return r > 0 && r < span;
        };
        return inside(B.from_slot) != inside(B.to_slot);
    };

    {
        long long prev_total = -1, cap = -1;
        for (long long pass = 0;; ++pass) {
            long long total = 0;
            // pair -> crossing discs, keyed by the lower strand's path index
            std::map<std::pair<int, int>, std::vector<std::pair<int, int>>> pair_hits;
            for (const auto& [v, rot] : prot) {
                (void)rot;
                DiscSlots d = disc_slots(v);
                auto cs = disc_chords(v, d);
                for (std::size_t i = 0; i < cs.size(); ++i) {
                    for (std::size_t j = i + 1; j < cs.size(); ++j) {
                        if (cs[i].strand == cs[j].strand) continue;
                        if (!interleaves(d.M, cs[i], cs[j])) continue;
                        ++total;
                        const AChord& lo = cs[i].strand < cs[j].strand ? cs[i] : cs[j];
                        const AChord& hi = cs[i].strand < cs[j].strand ? cs[j] : cs[i];
                        pair_hits[{lo.strand, hi.strand}].push_back({lo.path_vtx, hi.path_vtx});
                    }
                }
            }
            if (pass == 0) {
                cap = total + 1;
            } else {
                EMU_INTERNAL_CHECK(total <= prev_total - 2,
                                   "uncross step failed to remove two crossings");
            }
            EMU_INTERNAL_CHECK(pass <= cap,
                               "NonTermination: uncrossing exceeded the initial crossing count");
            prev_total = total;

            const std::pair<int, int>* worst = nullptr;
            const std::vector<std::pair<int, int>>* hits = nullptr;
            for (const auto& [key, hs] : pair_hits) {
                if (hs.size() >= 2) {
                    worst = &key;
                    hits = &hs;
                    break;
                }
            }
            if (!worst) break;

            // exchange the two strands' lanes between their first two
            // crossing discs along the lower strand
            int sx = worst->first, sy = worst->second;
            std::vector<std::pair<int, int>> ordered = *hits;
            std::sort(ordered.begin(), ordered.end());
            int p1 = ordered[0].first, p2 = ordered[1].first;
            EMU_INTERNAL_CHECK(p1 < p2, "pair crosses twice in one disc");
            const Strand& X = protos[sx];
            for (int st = p1; st < p2; ++st) {
                int eid = X.eids[st];
                auto& ts = lanes.at(eid);
                int ix = -1, iy = -1;
                for (std::size_t li = 0; li < ts.size(); ++li) {
                    if (ts[li].strand == sx) ix = static_cast<int>(li);
                    if (ts[li].strand == sy) iy = static_cast<int>(li);
                }
                EMU_INTERNAL_CHECK(ix >= 0 && iy >= 0,
                                   "crossing pair does not share the run between its crossings");
                std::swap(ts[ix], ts[iy]);
            }
        }
    }

    // --- build the simplified graph ---
    PlanarGraph H(/*allow_zero=*/true);
    int next_vid = G.max_vertex_id() + 1;
    int next_eid = 0;
    // endpoint pair -> edge id; rotations are assigned only at the end, so
    // incidence lookups during construction go through this map
    std::map<std::pair<int, int>, int> hedge;
    auto add_h_edge = [&](int a, int b, Rat w) -> int {
        int id = next_eid++;
        H.add_edge(id, a, b, std::move(w));
        auto key = std::minmax(a, b);
        EMU_INTERNAL_CHECK(!hedge.count({key.first, key.second}),
                           "parallel edge produced during redraw");
        hedge[{key.first, key.second}] = id;
        return id;
    };
    auto h_edge_between = [&](int a, int b) -> int {
        auto key = std::minmax(a, b);
        auto it = hedge.find({key.first, key.second});
        EMU_INTERNAL_CHECK(it != hedge.end(), "missing edge between redraw vertices");
        return it->second;
    };

    for (int t : terminals) {
        H.add_vertex(t);
        si.provenance[t] = t;
    }

    // ports: per (edge id, lane index, side), side 0 at e.u, 1 at e.v
    std::map<std::tuple<int, int, int>, int> port_vid;
    for (const auto& [eid, ts] : lanes) {
        for (std::size_t li = 0; li < ts.size(); ++li) {
            for (int side = 0; side < 2; ++side) {
                int vid = next_vid++;
                H.add_vertex(vid);
                const auto& e = G.edge(eid);
                si.provenance[vid] = side == 0 ? e.u : e.v;
                port_vid[{eid, static_cast<int>(li), side}] = vid;
            }
        }
    }
    // lane edges
    std::map<std::tuple<int, int>, int> lane_eid; // (edge id, lane idx) -> new edge
    for (const auto& [eid, ts] : lanes) {
        for (std::size_t li = 0; li < ts.size(); ++li) {
            int id = add_h_edge(port_vid.at({eid, static_cast<int>(li), 0}),
                                port_vid.at({eid, static_cast<int>(li), 1}), G.edge(eid).w);
            lane_eid[{eid, static_cast<int>(li)}] = id;
        }
    }
    auto lane_index_of = [&](int eid, int strand, int step) -> int {
        const auto& ts = lanes.at(eid);
        for (std::size_t li = 0; li < ts.size(); ++li)
            if (ts[li].strand == strand && ts[li].step == step) return static_cast<int>(li);
        EMU_INTERNAL_CHECK(false, "traversal not found in lane list");
        return -1;
    };

    // per-strand assembled vertex sequences
    std::vector<std::vector<int>> sverts(protos.size());
    std::vector<std::vector<int>> seids(protos.size());
    // disc-local subpath for (strand, vertex position) filled below
    std::map<std::pair<int, int>, std::vector<int>> disc_path; // (strand, path vtx idx) -> vids

    // --- per-disc chord arrangement ---
    struct ChordRef {
        int strand = -1;
        int path_vtx = -1;  // index of this vertex in the strand path
        int from_vid, to_vid; // entry/exit vertices (port or terminal)
        int from_pos, to_pos; // cyclic boundary positions
    };

    for (const auto& [v, rot] : prot) {
        bool is_terminal = gap_after.count(v) != 0;
        // boundary order: for each edge ccw, its lane ports; terminal point
        // right after the gap_after edge's arc.
        std::vector<int> boundary; // vertex ids in ccw order
        std::map<int, int> pos_of; // vertex id -> position
        for (std::size_t ri = 0; ri < rot.size(); ++ri) {
            int eid = rot[ri];
            const auto& e = G.edge(eid);
            int side = (e.u == v) ? 0 : 1;
            const auto& ts = lanes.at(eid);
            // ccw sweep passes lanes right-to-left as seen walking out of v:
            // reversed lane order at the canonical tail, forward at the head
            std::vector<int> arc;
            for (std::size_t li = 0; li < ts.size(); ++li)
                arc.push_back(port_vid.at({eid, static_cast<int>(li), side}));
            if (side == 0) std::reverse(arc.begin(), arc.end());
            for (int p : arc) boundary.push_back(p);
            if (is_terminal && gap_after.at(v) == eid) boundary.push_back(v);
        }
        for (std::size_t i = 0; i < boundary.size(); ++i)
            pos_of[boundary[i]] = static_cast<int>(i);

        // chords
        std::vector<ChordRef> chords;
        for (std::size_t ri = 0; ri < rot.size(); ++ri) {
            int eid = rot[ri];
            for (const Traversal& t : lanes.at(eid)) {
                const Strand& S = protos[t.strand];
                // process each strand visit once, keyed at the vertex the
                // strand arrives at along its own a->b run
                int arrive_vtx = t.step + 1;
                if (S.verts[arrive_vtx] != v) continue;
                const auto& e = G.edge(eid);
                int side = (e.u == v) ? 0 : 1;
                int li = lane_index_of(eid, t.strand, t.step);
                ChordRef c;
                c.strand = t.strand;
                c.path_vtx = arrive_vtx;
                c.from_vid = port_vid.at({eid, li, side});
                if (arrive_vtx == static_cast<int>(S.verts.size()) - 1) {
                    c.to_vid = v; // terminates here
                } else {
                    int eid2 = S.eids[arrive_vtx];
                    const auto& e2 = G.edge(eid2);
                    int side2 = (e2.u == v) ? 0 : 1;
                    int li2 = lane_index_of(eid2, t.strand, arrive_vtx);
                    c.to_vid = port_vid.at({eid2, li2, side2});
                }
                c.from_pos = pos_of.at(c.from_vid);
                c.to_pos = pos_of.at(c.to_vid);
                chords.push_back(c);
            }
        }
        // strands STARTING at v (terminal): chord from terminal point to the
        // first edge's port
        if (is_terminal) {
            for (std::size_t s = 0; s < protos.size(); ++s) {
                const Strand& S = protos[s];
                if (S.verts.front() != v) continue;
                int eid0 = S.eids[0];
                const auto& e0 = G.edge(eid0);
                int side0 = (e0.u == v) ? 0 : 1;
                int li0 = lane_index_of(eid0, static_cast<int>(s), 0);
                ChordRef c;
                c.strand = static_cast<int>(s);
                c.path_vtx = 0;
                c.from_vid = v;
                c.to_vid = port_vid.at({eid0, li0, side0});
                c.from_pos = pos_of.at(v);
                c.to_pos = pos_of.at(c.to_vid);
                chords.push_back(c);
            }
        }

        // exact coordinates on a convex curve; retry with more spread-out
        // abscissas if three chords ever concur.
        std::size_t M = boundary.size();
        bool done = false;
        for (int attempt = 0; attempt < 3 && !done; ++attempt) {
            std::vector<Pt> pt(M);
            for (std::size_t i = 0; i < M; ++i) {
                Rat x = attempt == 0 ? Rat(static_cast<std::int64_t>(i))
                        : attempt == 1
                            ? Rat(BigInt::pow(BigInt(2), static_cast<unsigned>(i)), BigInt(1))
                            : Rat(BigInt::pow(BigInt(3), static_cast<unsigned>(i)), BigInt(1));
                pt[i] = Pt{x, x * x};
            }
            struct Hit {
                Rat t;      // parameter along the chord, from its entry end
                int other;  // other chord index
                Pt at;
            };
            std::vector<std::vector<Hit>> hits(chords.size());
            bool degenerate = false;
            for (std::size_t i = 0; i < chords.size() && !degenerate; ++i) {
                for (std::size_t j = i + 1; j < chords.size() && !degenerate; ++j) {
                    const ChordRef& A = chords[i];
                    const ChordRef& B = chords[j];
                    if (A.from_vid == B.from_vid || A.from_vid == B.to_vid ||
                        A.to_vid == B.from_vid || A.to_vid == B.to_vid)
                        continue; // shared terminal point, never a crossing
                    const Pt &p1 = pt[A.from_pos], &p2 = pt[A.to_pos];
                    const Pt &q1 = pt[B.from_pos], &q2 = pt[B.to_pos];
                    Rat d1 = cross(p1, p2, q1), d2 = cross(p1, p2, q2);
                    Rat d3 = cross(q1, q2, p1), d4 = cross(q1, q2, p2);
                    if (!(d1.sign() * d2.sign() < 0 && d3.sign() * d4.sign() < 0)) continue;
                    // parameter of the intersection along each chord:
                    // d3,d4 are signed areas of A's endpoints against line B,
                    // so they interpolate along A (and d1,d2 along B)
                    Rat tA = d3 / (d3 - d4);
                    Rat tB = d1 / (d1 - d2);
                    Pt at{p1.x + tA * (pt[A.to_pos].x - p1.x), p1.y + tA * (pt[A.to_pos].y - p1.y)};
                    hits[i].push_back(Hit{tA, static_cast<int>(j), at});
                    hits[j].push_back(Hit{tB, static_cast<int>(i), at});
                }
            }
            for (std::size_t i = 0; i < chords.size() && !degenerate; ++i) {
                std::sort(hits[i].begin(), hits[i].end(),
                          [](const Hit& a, const Hit& b) { return a.t < b.t; });
                for (std::size_t k = 0; k + 1 < hits[i].size(); ++k)
                    if (hits[i][k].t == hits[i][k + 1].t) degenerate = true;
            }
            if (degenerate) continue;
            done = true;

            // materialize crossing vertices
            std::map<std::pair<int, int>, int> xvid; // chord index pair -> vid
            std::map<std::pair<int, int>, Pt> xpt;
            for (std::size_t i = 0; i < chords.size(); ++i) {
                for (const auto& h : hits[i]) {
                    int ci = static_cast<int>(i);
                    std::pair<int, int> k{std::min(ci, h.other), std::max(ci, h.other)};
                    if (!xvid.count(k)) {
                        int vid = next_vid++;
                        H.add_vertex(vid);
                        si.provenance[vid] = v;
                        xvid[k] = vid;
                        xpt[k] = h.at;
                    }
                }
            }
            // chord segment edges + per-chord vertex chains
            std::map<int, std::vector<std::pair<int, Pt>>> stubs; // crossing vid -> (edge, dir)
            for (std::size_t i = 0; i < chords.size(); ++i) {
                const ChordRef& C = chords[i];
                std::vector<int> chain{C.from_vid};
                std::vector<Pt> pts{pt[C.from_pos]};
                for (const auto& h : hits[i]) {
                    int ci = static_cast<int>(i);
                    chain.push_back(xvid.at({std::min(ci, h.other), std::max(ci, h.other)}));
                    pts.push_back(h.at);
                }
                chain.push_back(C.to_vid);
                pts.push_back(pt[C.to_pos]);
                for (std::size_t k = 0; k + 1 < chain.size(); ++k) {
                    int id = add_h_edge(chain[k], chain[k + 1], Rat(0));
                    // stub directions at the interior (crossing) vertices
                    Pt d_fwd = preprocess_detail::sub(pts[k + 1], pts[k]);
                    Pt d_bwd = preprocess_detail::sub(pts[k], pts[k + 1]);
                    if (k > 0) stubs[chain[k]].push_back({id, d_fwd});
                    if (k + 1 < chain.size() - 1) stubs[chain[k + 1]].push_back({id, d_bwd});
                }
                disc_path[{C.strand, C.path_vtx}] = chain;
                // crossing registry entries
                for (std::size_t k = 0; k < hits[i].size(); ++k) {
                    int other = hits[i][k].other;
                    if (static_cast<int>(i) > other) continue; // record once
                    const ChordRef& D = chords[other];
                    int s1 = C.strand, s2 = D.strand;
                    EMU_INTERNAL_CHECK(s1 != s2, "a strand crossed itself inside a disc");
                    Pt dir1 = preprocess_detail::sub(pt[C.to_pos], pt[C.from_pos]);
                    Pt dir2 = preprocess_detail::sub(pt[D.to_pos], pt[D.from_pos]);
                    Rat cr = dir1.x * dir2.y - dir1.y * dir2.x;
                    EMU_INTERNAL_CHECK(cr.sign() != 0, "degenerate crossing direction");
                    StrandCrossing sc;
                    int ci = static_cast<int>(i);
                    sc.vertex = xvid.at({std::min(ci, other), std::max(ci, other)});
                    if (s1 < s2) {
                        sc.s1 = s1;
                        sc.s2 = s2;
                        sc.sigma = cr.sign();
                    } else {
                        sc.s1 = s2;
                        sc.s2 = s1;
                        sc.sigma = -cr.sign();
                    }
                    auto pkey = std::make_pair(sc.s1, sc.s2);
                    EMU_INTERNAL_CHECK(!si.crossing_of.count(pkey),
                                       "two strands cross more than once");
                    si.crossing_of[pkey] = static_cast<int>(si.crossings.size());
                    si.crossings.push_back(sc);
                }
            }
            // rotations at crossing vertices: ccw by exact direction
            for (auto& [cvid, ss] : stubs) {
                EMU_INTERNAL_CHECK(ss.size() == 4, "crossing vertex degree != 4");
                std::sort(ss.begin(), ss.end(), [&](const auto& A, const auto& B) {
                    return dir_ccw_less(A.second, B.second);
                });
                std::vector<int> r;
                for (auto& [eid2, d] : ss) r.push_back(eid2);
                H.set_rotation(cvid, r);
            }
            // rotation at the terminal point: fan of first chord segments,
            // ordered ccw = ascending cyclic distance of the chord's other
            // boundary anchor from the terminal's own position.
            if (is_terminal) {
                int tpos = pos_of.at(v);
                std::vector<std::pair<int, int>> fan; // (cyclic offset, edge id)
                for (std::size_t i = 0; i < chords.size(); ++i) {
                    const ChordRef& C = chords[i];
                    int anchor = -1;
                    bool from_t = C.from_vid == v;
                    bool to_t = C.to_vid == v;
                    if (!from_t && !to_t) continue;
                    anchor = from_t ? C.to_pos : C.from_pos;
                    // first edge of the chord's chain at the terminal side
                    const auto& chain = disc_path.at({C.strand, C.path_vtx});
                    int nb = from_t ? chain[1] : chain[chain.size() - 2];
                    int found = h_edge_between(v, nb);
                    int off = (anchor - tpos) % static_cast<int>(M);
                    if (off < 0) off += static_cast<int>(M);
                    fan.push_back({off, found});
                }
                std::sort(fan.begin(), fan.end());
                std::vector<int> r;
                for (auto& [off, eid2] : fan) r.push_back(eid2);
                H.set_rotation(v, r);
            }
        }
        EMU_INTERNAL_CHECK(done, "disc arrangement degenerate under all parameter choices");
    }

    // port rotations (degree 2: lane edge plus one chord segment)
    {
        std::map<int, std::vector<int>> incid;
        for (const auto& [vv, id] : hedge) {
            incid[vv.first].push_back(id);
            incid[vv.second].push_back(id);
        }
        for (const auto& [key, vid] : port_vid) {
            auto it = incid.find(vid);
            EMU_INTERNAL_CHECK(it != incid.end() && it->second.size() == 2,
                               "port vertex degree != 2");
            H.set_rotation(vid, it->second);
        }
    }

    // --- stitch strands ---
    for (std::size_t s = 0; s < protos.size(); ++s) {
        const Strand& P = protos[s];
        std::vector<int> vs;
        for (std::size_t i = 0; i < P.verts.size(); ++i) {
            auto it = disc_path.find({static_cast<int>(s), static_cast<int>(i)});
            std::vector<int> local;
            if (i == 0) {
                EMU_INTERNAL_CHECK(it != disc_path.end(), "missing start chord");
                local = it->second;
            } else {
                EMU_INTERNAL_CHECK(it != disc_path.end(), "missing disc chord");
                local = it->second;
            }
            if (vs.empty()) {
                vs = local;
            } else {
                // discs are joined by one lane edge: exit port at the previous
                // vertex, entry port at this one
                h_edge_between(vs.back(), local.front());
                vs.insert(vs.end(), local.begin(), local.end());
            }
        }
        Strand out = P;
        out.verts = vs;
        out.eids.clear();
        Rat len(0);
        for (std::size_t i = 0; i + 1 < vs.size(); ++i) {
            int found = h_edge_between(vs[i], vs[i + 1]);
            out.eids.push_back(found);
            len += H.edge(found).w;
        }
        EMU_INTERNAL_CHECK(len == P.length, "strand length changed during redraw");
        si.strands.push_back(std::move(out));
    }

    // crossing positions along each strand
    std::map<int, std::vector<std::pair<int, int>>> at_vertex; // crossing vid -> (strand, pos)
    for (std::size_t s = 0; s < si.strands.size(); ++s)
        for (std::size_t p = 0; p < si.strands[s].verts.size(); ++p)
            at_vertex[si.strands[s].verts[p]].push_back({static_cast<int>(s), static_cast<int>(p)});
    for (StrandCrossing& c : si.crossings) {
        for (auto& [s, p] : at_vertex.at(c.vertex)) {
            if (s == c.s1) c.pos1 = p;
            if (s == c.s2) c.pos2 = p;
        }
        EMU_INTERNAL_CHECK(c.pos1 >= 0 && c.pos2 >= 0, "crossing positions not located");
    }
    si.strand_crossings.assign(si.strands.size(), {});
    {
        // order by position along each strand
        std::vector<std::vector<std::pair<int, int>>> tmp(si.strands.size());
        for (std::size_t ci = 0; ci < si.crossings.size(); ++ci) {
            tmp[si.crossings[ci].s1].push_back({si.crossings[ci].pos1, static_cast<int>(ci)});
            tmp[si.crossings[ci].s2].push_back({si.crossings[ci].pos2, static_cast<int>(ci)});
        }
        for (std::size_t s = 0; s < tmp.size(); ++s) {
            std::sort(tmp[s].begin(), tmp[s].end());
            for (auto& [pos, ci] : tmp[s]) si.strand_crossings[s].push_back(ci);
        }
    }

    // --- faces of the simplified instance ---
    H.validate_rotations();
    auto fsH = H.trace_faces();
    H.check_euler(fsH);

    si.inst.g = std::move(H);
    const PlanarGraph& HH = si.inst.g;

    // hole face per terminal face: the wrap sector at any of its terminals
    si.hole_faces.assign(g1.faces.size(), -1);
    for (std::size_t r = 0; r < g1.faces.size(); ++r) {
        int rep = g1.faces[r].terminals_cw.front();
        std::vector<int> rot = HH.rotation_ids(rep);
        EMU_INTERNAL_CHECK(!rot.empty(), "terminal lost all strand ends");
        int last = rot.back();
        int d = HH.dart_of(last, rep);
        si.hole_faces[r] = fsH.face_of_dart(d);
        // audit: the same sector at each terminal of the face
        for (int t : g1.faces[r].terminals_cw) {
            std::vector<int> rt = HH.rotation_ids(t);
            int dt = HH.dart_of(rt.back(), t);
            EMU_INTERNAL_CHECK(fsH.face_of_dart(dt) == si.hole_faces[r],
                               "terminals of one face disagree on their hole");
        }
    }
    {
        // faces with a full terminal cycle always keep their own hole; the
        // face around a lone terminal can merge with another region when
        // pruning removes every boundary edge, and containment tests treat
        // the merged face as holding both
        std::set<int> uniq;
        for (std::size_t r = 0; r < g1.faces.size(); ++r) {
            if (g1.faces[r].terminals_cw.size() < 2) continue;
            EMU_INTERNAL_CHECK(uniq.insert(si.hole_faces[r]).second,
                               "two terminal cycles mapped to the same hole");
        }
    }

    // face specs + outer walk in the new graph
    si.inst.faces.clear();
    for (std::size_t r = 0; r < g1.faces.size(); ++r) {
        FaceSpec f;
        for (int d : fsH.face_darts[si.hole_faces[r]]) f.walk_edge_ids.push_back(HH.dart_edge_id(d));
        f.terminals_cw = g1.faces[r].terminals_cw;
        si.inst.faces.push_back(std::move(f));
    }
    si.inst.outer_walk = si.inst.faces[outer_r].walk_edge_ids;

    // the instance-level invariants must hold for the redrawn graph too
    si.inst.validate(/*allow_shared_faces=*/true);

    // --- final audits: distance preservation and transversality ---
    {
        auto want = all_terminal_distances(g1);
        auto got = all_terminal_distances(si.inst);
        for (const auto& [key, val] : want)
            EMU_INTERNAL_CHECK(lookup_distance(got, key.first, key.second) == val,
                               "redraw changed a terminal distance");
    }
    {
        // pairwise strand intersections: one shared terminal, or at most one
        // crossing vertex of degree four
        std::map<std::pair<int, int>, std::vector<int>> shared;
        for (const auto& [vid, occ] : at_vertex) {
            for (std::size_t i = 0; i < occ.size(); ++i)
                for (std::size_t j = i + 1; j < occ.size(); ++j) {
                    int s1 = std::min(occ[i].first, occ[j].first);
                    int s2 = std::max(occ[i].first, occ[j].first);
                    if (s1 == s2) continue;
                    shared[{s1, s2}].push_back(vid);
                }
        }
        std::set<int> term_set(terminals.begin(), terminals.end());
        for (const auto& [key, verts] : shared) {
            int interior = 0;
            for (int vid : verts) {
                if (term_set.count(vid)) continue;
                ++interior;
                EMU_INTERNAL_CHECK(si.crossing_of.count(key),
                                   "strands share a vertex that is not a crossing");
            }
            EMU_INTERNAL_CHECK(interior <= 1, "strand pair shares two interior vertices");
        }
    }

    return si;
}

inline SimplifiedInstance preprocess(const TerminalInstance& input) {
    return uncross_shortest_paths(enforce_face_cycles(input));
}

} // namespace emu
