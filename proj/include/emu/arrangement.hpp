#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <tuple>
#include <set>
#include <vector>

#include "emu/critical.hpp"

namespace emu {

// The skeleton under construction: one strand per critical path, each an
// ordered list of crossing records.  Rerouting edits orders and crossing
// handedness but never the set of crossing pairs.
class Arrangement {
public:
    struct Cross {
        int s1 = -1, s2 = -1; // arrangement strand indices, s1 < s2
        int sigma = 0;        // sign of cross(dir_s1, dir_s2), strands walked
                              // in their stored a->b direction
    };

    std::vector<int> strand_si;                 // arrangement idx -> si strand idx
    std::vector<char> is_critical;              // arcs seal the holes but are
                                                // never the moving path of a
                                                // bad pair
    std::vector<std::array<int, 2>> ends;       // stored (a, b) per strand
    std::vector<std::array<int, 2>> end_faces;  // faces of (a, b)
    std::vector<Cross> crossings;               // ids stable forever
    std::vector<std::vector<int>> order;        // per strand: crossing ids, a->b
    std::map<std::pair<int, int>, int> cross_of; // (s1,s2) -> crossing id
    // per terminal: incident strand stubs in ccw rotation order, fixed
    std::map<int, std::vector<int>> terminal_fan;

    int strand_count() const { return static_cast<int>(strand_si.size()); }

    int crossing_between(int x, int y) const {
        auto it = cross_of.find({std::min(x, y), std::max(x, y)});
        return it == cross_of.end() ? -1 : it->second;
    }

    int position_on(int strand, int cross_id) const {
        const auto& o = order[strand];
        for (std::size_t i = 0; i < o.size(); ++i)
            if (o[i] == cross_id) return static_cast<int>(i);
        EMU_INTERNAL_CHECK(false, "crossing not on strand");
        return -1;
    }

    // sign of cross(dir_x, dir_y) at crossing c when strand x is walked from
    // its end `xa` (true = stored a end) and y from `ya`
    int sigma_dir(int c, int x, bool x_from_a, int y, bool y_from_a) const {
        const Cross& cr = crossings[c];
        EMU_INTERNAL_CHECK((cr.s1 == x && cr.s2 == y) || (cr.s1 == y && cr.s2 == x),
                           "sigma query against wrong strands");
        int s = cr.sigma;
        if (cr.s1 == y) s = -s; // det is antisymmetric
        if (!x_from_a) s = -s;
        if (!y_from_a) s = -s;
        return s;
    }
    void set_sigma_dir(int c, int x, bool x_from_a, int y, bool y_from_a, int value) {
        Cross& cr = crossings[c];
        int s = value;
        if (!x_from_a) s = -s;
        if (!y_from_a) s = -s;
        if (cr.s1 == y) s = -s;
        cr.sigma = s;
    }

    int other_strand(int c, int s) const {
        const Cross& cr = crossings[c];
        return cr.s1 == s ? cr.s2 : cr.s1;
    }
};

// A critical strand crossing a safe 1-bend path twice.
struct BadPair {
    int p = -1;          // the critical strand (a..b)
    int s1 = -1, s2 = -1; // the 1-bend path's primaries: s1 from F_a, s2 from F_b
    int c = -1, e = -1;   // their source terminals
    int a = -1, b = -1;   // p's endpoints, a on the face of c
    int d = -1;           // crossing id (s1, s2): the bend
    int h = -1, i = -1;   // crossing ids (p,s1) and (p,s2)
    bool canonical = false;
};

// Arrangement plus the immutable context it was built from.
struct Skeleton {
    Arrangement arr;
    const SimplifiedInstance* si = nullptr;
    const CriticalPathSet* cps = nullptr;
    std::map<int, int> si_to_arr; // si strand idx -> arrangement idx
    std::vector<CanonicalPath> canonicals; // all inter-face pairs, (t,tp) lex order
    int expected_bend_chirality = 0;       // calibrated off canonical bends
    long long elimination_iterations = 0;

    int arr_strand(int si_idx) const {
        auto it = si_to_arr.find(si_idx);
        EMU_INTERNAL_CHECK(it != si_to_arr.end(), "strand is not critical");
        return it->second;
    }
};

// ---------------------------------------------------------------------------
// Initial arrangement: critical strands with the crossing pattern they have
// in the redrawn instance.
// ---------------------------------------------------------------------------
inline Skeleton build_initial(const CriticalContext& cx, const CriticalPathSet& cps) {
    const SimplifiedInstance& si = cx.si;
    Skeleton sk;
    sk.si = &si;
    sk.cps = &cps;
    Arrangement& arr = sk.arr;

    // critical paths plus the face-cycle arcs: the arcs keep every hole a
    // genuine face of the skeleton (terminals in clockwise order, faces
    // pairwise separated) even when few critical paths surround it
    std::set<int> chosen(cps.critical_strands.begin(), cps.critical_strands.end());
    std::set<int> arcs;
    for (const auto& [key, val] : si.arc_strand) arcs.insert(val.first);
    std::set<int> all;
    all.insert(chosen.begin(), chosen.end());
    all.insert(arcs.begin(), arcs.end());
    for (int s : all) {
        sk.si_to_arr[s] = arr.strand_count();
        arr.strand_si.push_back(s);
        arr.is_critical.push_back(chosen.count(s) ? 1 : 0);
        const Strand& S = si.strands[s];
        arr.ends.push_back({S.a, S.b});
        arr.end_faces.push_back({si.inst.face_of_terminal(S.a), si.inst.face_of_terminal(S.b)});
    }
    std::vector<int> crit(all.begin(), all.end());
    // crossings between critical strands, orders along each strand
    arr.order.assign(arr.strand_count(), {});
    for (std::size_t ci = 0; ci < si.crossings.size(); ++ci) {
        const StrandCrossing& c = si.crossings[ci];
        auto i1 = sk.si_to_arr.find(c.s1);
        auto i2 = sk.si_to_arr.find(c.s2);
        if (i1 == sk.si_to_arr.end() || i2 == sk.si_to_arr.end()) continue;
        Arrangement::Cross cr;
        cr.s1 = std::min(i1->second, i2->second);
        cr.s2 = std::max(i1->second, i2->second);
        cr.sigma = i1->second < i2->second ? c.sigma : -c.sigma;
        int id = static_cast<int>(arr.crossings.size());
        arr.crossings.push_back(cr);
        arr.cross_of[{cr.s1, cr.s2}] = id;
    }
    for (int s = 0; s < arr.strand_count(); ++s) {
        const Strand& S = si.strands[arr.strand_si[s]];
        (void)S;
        for (int ci : si.strand_crossings[arr.strand_si[s]]) {
            const StrandCrossing& c = si.crossings[ci];
            int os = c.s1 == arr.strand_si[s] ? c.s2 : c.s1;
            if (!sk.si_to_arr.count(os)) continue;
            arr.order[s].push_back(
                arr.cross_of.at({std::min(s, sk.si_to_arr.at(os)), std::max(s, sk.si_to_arr.at(os))}));
        }
    }
    // terminal fans in ccw rotation order, restricted to critical strands
    {
        std::map<int, int> edge_strand; // first/last strand edge -> si strand
        for (int s : crit) {
            const Strand& S = si.strands[s];
            edge_strand[S.eids.front()] = s;
            edge_strand[S.eids.back()] = s;
        }
        for (int t : si.inst.all_terminals()) {
            std::vector<int> fan;
            for (int eid : si.inst.g.rotation_ids(t)) {
                auto it = edge_strand.find(eid);
                if (it == edge_strand.end()) continue;
                fan.push_back(sk.si_to_arr.at(it->second));
            }
            arr.terminal_fan[t] = std::move(fan);
        }
    }

    // canonical paths for every inter-face pair
    std::vector<int> terms = si.inst.all_terminals();
    std::sort(terms.begin(), terms.end());
    for (std::size_t x = 0; x < terms.size(); ++x) {
        for (std::size_t y = x + 1; y < terms.size(); ++y) {
            if (si.inst.face_of_terminal(terms[x]) == si.inst.face_of_terminal(terms[y]))
                continue;
            sk.canonicals.push_back(canonical_path(cx, cps, terms[x], terms[y]));
        }
    }

    // calibrate the bend handedness shared by all canonical paths
    for (const CanonicalPath& cp : sk.canonicals) {
        if (cp.bend_crossing < 0) continue;
        int sA = sk.arr_strand(cp.sA);
        int sB = sk.arr_strand(cp.sB);
        int cid = arr.crossing_between(sA, sB);
        EMU_INTERNAL_CHECK(cid >= 0, "canonical bend lost in the arrangement");
        int chir = arr.sigma_dir(cid, sA, arr.ends[sA][0] == cp.t, sB,
                                 arr.ends[sB][0] == cp.tp);
        if (sk.expected_bend_chirality == 0) sk.expected_bend_chirality = chir;
        EMU_INTERNAL_CHECK(sk.expected_bend_chirality == chir,
                           "canonical bends disagree in handedness");
    }
    return sk;
}

// ---------------------------------------------------------------------------
// Materialized skeleton graph: terminals plus crossings, edges between
// consecutive records on each strand, rotation from crossing handedness.
// ---------------------------------------------------------------------------
struct SkeletonGraph {
    PlanarGraph g{true};
    std::map<int, int> terminal_vertex;   // terminal id -> vertex id (identity)
    std::map<int, int> crossing_vertex;   // crossing id -> vertex id
    std::vector<std::vector<int>> strand_vertices;
    std::vector<std::vector<int>> strand_edges;
    PlanarGraph::FaceStructure fs;
    int outer_face = -1;
    std::vector<int> hole_faces; // per face r of the instance
};

inline SkeletonGraph to_graph(const Skeleton& sk) {
    const Arrangement& arr = sk.arr;
    const SimplifiedInstance& si = *sk.si;
    SkeletonGraph out;
    int next_vid = 0;
    for (int t : si.inst.all_terminals()) next_vid = std::max(next_vid, t + 1);
    for (int t : si.inst.all_terminals()) {
        out.g.add_vertex(t);
        out.terminal_vertex[t] = t;
    }
    for (std::size_t c = 0; c < arr.crossings.size(); ++c) {
        int vid = next_vid++;
        out.g.add_vertex(vid);
        out.crossing_vertex[static_cast<int>(c)] = vid;
    }
    int next_eid = 0;
    out.strand_vertices.assign(arr.strand_count(), {});
    out.strand_edges.assign(arr.strand_count(), {});
    for (int s = 0; s < arr.strand_count(); ++s) {
        std::vector<int>& vs = out.strand_vertices[s];
        vs.push_back(arr.ends[s][0]);
        for (int c : arr.order[s]) vs.push_back(out.crossing_vertex.at(c));
        vs.push_back(arr.ends[s][1]);
        for (std::size_t i = 0; i + 1 < vs.size(); ++i) {
            int id = next_eid++;
            out.g.add_edge(id, vs[i], vs[i + 1], Rat(0));
            out.strand_edges[s].push_back(id);
        }
    }
    // rotations: terminals use the fixed fan; a crossing interleaves the two
    // strands, (s1_in, s2_in, s1_out, s2_out) ccw when sigma = +1
    for (const auto& [t, fan] : arr.terminal_fan) {
        std::vector<int> rot;
        for (int s : fan) {
            bool from_a = arr.ends[s][0] == t;
            EMU_INTERNAL_CHECK(from_a || arr.ends[s][1] == t, "fan strand not at terminal");
            rot.push_back(from_a ? out.strand_edges[s].front() : out.strand_edges[s].back());
        }
        out.g.set_rotation(t, rot);
    }
    for (std::size_t c = 0; c < arr.crossings.size(); ++c) {
        const Arrangement::Cross& cr = arr.crossings[c];
        int p1 = arr.position_on(cr.s1, static_cast<int>(c));
        int p2 = arr.position_on(cr.s2, static_cast<int>(c));
        int a_in = out.strand_edges[cr.s1][p1];
        int a_out = out.strand_edges[cr.s1][p1 + 1];
        int b_in = out.strand_edges[cr.s2][p2];
        int b_out = out.strand_edges[cr.s2][p2 + 1];
        std::vector<int> rot = cr.sigma > 0 ? std::vector<int>{a_in, b_in, a_out, b_out}
                                            : std::vector<int>{a_in, b_out, a_out, b_in};
        out.g.set_rotation(out.crossing_vertex.at(static_cast<int>(c)), rot);
    }
    out.g.validate_rotations();
    out.fs = out.g.trace_faces();
    {
        bool conn = out.g.connected();
        long long euler = static_cast<long long>(out.g.vertex_count()) -
                          static_cast<long long>(out.g.edge_count()) +
                          static_cast<long long>(out.fs.size());
        EMU_INTERNAL_CHECK(conn && euler == 2,
                           "NonPlanarRotation: skeleton embedding fails the face count");
    }

    // hole of each terminal face: the wrap sector between the fan's last and
    // first strands at any of its terminals
    out.hole_faces.assign(si.inst.faces.size(), -1);
    for (std::size_t r = 0; r < si.inst.faces.size(); ++r) {
        int hole = -1;
        for (int t : si.inst.faces[r].terminals_cw) {
            std::vector<int> rot = out.g.rotation_ids(t);
            EMU_INTERNAL_CHECK(!rot.empty(), "terminal without strands in the skeleton");
            int d = out.g.dart_of(rot.back(), t);
            int f = out.fs.face_of_dart(d);
            if (hole < 0) hole = f;
            EMU_INTERNAL_CHECK(hole == f, "terminals of a face disagree on the skeleton hole");
        }
        out.hole_faces[r] = hole;
    }
    out.outer_face = out.hole_faces[si.outer_terminal_face];
    // terminals must sit on their hole in the original clockwise order
    for (std::size_t r = 0; r < si.inst.faces.size(); ++r) {
        auto cyc = TerminalInstance::clockwise_vertices(out.g, out.fs, out.hole_faces[r],
                                                        out.outer_face);
        std::set<int> tset(si.inst.faces[r].terminals_cw.begin(),
                           si.inst.faces[r].terminals_cw.end());
        std::vector<int> got;
        for (int v : cyc)
            if (tset.count(v)) got.push_back(v);
        EMU_INTERNAL_CHECK(TerminalInstance::cyclic_subsequence(got,
                                                                si.inst.faces[r].terminals_cw) &&
                               std::set<int>(got.begin(), got.end()) == tset,
                           "terminals lost their clockwise order on the skeleton hole");
    }
    return out;
}

// face-boundary walk of `face` from terminal `from` to terminal `to`;
// forward follows the trace direction
inline std::vector<int> hole_walk_between(const PlanarGraph& g,
                                          const PlanarGraph::FaceStructure& fs, int face,
                                          int from, int to, bool forward) {
    const std::vector<int>& darts = fs.face_darts[face];
    int n = static_cast<int>(darts.size());
    int start = -1;
    for (int i = 0; i < n; ++i)
        if (g.dart_tail(darts[i]) == from) start = i;
    EMU_INTERNAL_CHECK(start >= 0, "terminal not on the face walk");
    std::vector<int> out;
    if (from == to) return out;
    if (forward) {
        int i = start;
        while (g.dart_tail(darts[i]) != to || out.empty()) {
            out.push_back(darts[i]);
            i = (i + 1) % n;
            EMU_INTERNAL_CHECK(static_cast<int>(out.size()) <= n, "terminal not reached");
            if (g.dart_tail(darts[i]) == to) break;
        }
    } else {
        int i = (start + n - 1) % n;
        while (true) {
            out.push_back(PlanarGraph::dart_reverse(darts[i]));
            if (g.dart_tail(darts[i]) == to) break;
            i = (i + n - 1) % n;
            EMU_INTERNAL_CHECK(static_cast<int>(out.size()) <= n, "terminal not reached");
        }
    }
    return out;
}

// darts of a strand piece between two of its skeleton vertices
inline void strand_piece_darts(const SkeletonGraph& sg, int s, int from_vid, int to_vid,
                               std::vector<int>& out) {
    const std::vector<int>& vs = sg.strand_vertices[s];
    int a = -1, b = -1;
    for (std::size_t i = 0; i < vs.size(); ++i) {
        if (vs[i] == from_vid) a = static_cast<int>(i);
        if (vs[i] == to_vid) b = static_cast<int>(i);
    }
    EMU_INTERNAL_CHECK(a >= 0 && b >= 0, "piece endpoints not on strand");
    if (a <= b) {
        for (int i = a; i < b; ++i) out.push_back(sg.g.dart_of(sg.strand_edges[s][i], vs[i]));
    } else {
        for (int i = a; i > b; --i)
            out.push_back(sg.g.dart_of(sg.strand_edges[s][i - 1], vs[i]));
    }
}

// ---------------------------------------------------------------------------
// Safe 1-bend paths.  A pair of primaries heading at each other's faces,
// crossing with the calibrated handedness, whose enclosing area holds no
// terminal face.
// ---------------------------------------------------------------------------
class SafetyOracle {
public:
    SafetyOracle(const Skeleton& sk, const SkeletonGraph& sg) : sk_(sk), sg_(sg) {}

    // strand x walked from terminal src_x on face fx toward fy; strand y from
    // src_y on fy; they cross at `bend`
    bool safe(int x, int src_x, int y, int src_y, int fx, int fy) {
        auto key = std::minmax(x, y);
        auto it = cache_.find({key.first, key.second});
        if (it != cache_.end()) return it->second;
        bool v = compute(x, src_x, y, src_y, fx, fy);
        cache_[{key.first, key.second}] = v;
        return v;
    }

private:
    const Skeleton& sk_;
    const SkeletonGraph& sg_;
    std::map<std::pair<int, int>, bool> cache_;

    bool compute(int x, int src_x, int y, int src_y, int fx, int fy) {
        const Arrangement& arr = sk_.arr;
        int far_x = arr.ends[x][0] == src_x ? arr.ends[x][1] : arr.ends[x][0];
        int far_y = arr.ends[y][0] == src_y ? arr.ends[y][1] : arr.ends[y][0];
        // boundary: x (src_x .. far_x), F_fy hole walk (far_x .. src_y),
        //           y (src_y .. far_y), F_fx hole walk (far_y .. src_x)
        for (bool dir1 : {true, false}) {
            for (bool dir2 : {true, false}) {
                std::vector<int> walk;
                strand_piece_darts(sg_, x, src_x, far_x, walk);
                auto w1 = hole_walk_between(sg_.g, sg_.fs, sg_.hole_faces[fy], far_x, src_y, dir1);
                walk.insert(walk.end(), w1.begin(), w1.end());
                strand_piece_darts(sg_, y, src_y, far_y, walk);
                auto w2 = hole_walk_between(sg_.g, sg_.fs, sg_.hole_faces[fx], far_y, src_x, dir2);
                walk.insert(walk.end(), w2.begin(), w2.end());
                auto inside = sg_.g.enclosed_faces_mod2(sg_.fs, sg_.outer_face, walk);
                std::set<int> inset(inside.begin(), inside.end());
                if (inset.count(sg_.hole_faces[fx]) || inset.count(sg_.hole_faces[fy]))
                    continue; // wrong way around a hole
                bool clean = true;
                for (int hf : sg_.hole_faces)
                    if (inset.count(hf)) clean = false;
                return clean;
            }
        }
        // every arc choice wraps a hole: the area between the paths contains
        // one however it is drawn
        return false;
    }
};

// enumerate all safe 1-bend paths (pairs of crossing primaries with the
// calibrated bend handedness), keyed by their face pair
struct OneBend {
    int x, y;         // arrangement strands
    int src_x, src_y; // their source terminals
    int fx, fy;       // fx = lower face index
    int bend;         // crossing id
    bool canonical_pair = false;
};

inline std::vector<OneBend> all_safe_one_bends(const Skeleton& sk, const SkeletonGraph& sg,
                                               SafetyOracle& oracle) {
    const Arrangement& arr = sk.arr;
    std::vector<OneBend> out;
    const auto& prim = sk.cps->primaries;
    for (std::size_t i = 0; i < prim.size(); ++i) {
        for (std::size_t j = i + 1; j < prim.size(); ++j) {
            const PrimaryRec& A = prim[i];
            const PrimaryRec& B = prim[j];
            if (A.src_face == B.src_face) continue;
            if (A.dst_face != B.src_face || B.dst_face != A.src_face) continue;
            int x = sk.arr_strand(A.strand), y = sk.arr_strand(B.strand);
            if (x == y) continue;
            int bend = arr.crossing_between(x, y);
            if (bend < 0) continue;
            // orient: x from the lower face
            const PrimaryRec* lo = A.src_face < B.src_face ? &A : &B;
            const PrimaryRec* hi = A.src_face < B.src_face ? &B : &A;
            int sx = sk.arr_strand(lo->strand), sy = sk.arr_strand(hi->strand);
            int chir = arr.sigma_dir(bend, sx, arr.ends[sx][0] == lo->src, sy,
                                     arr.ends[sy][0] == hi->src);
            if (chir != sk.expected_bend_chirality) continue;
            if (!oracle.safe(sx, lo->src, sy, hi->src, lo->src_face, hi->src_face)) continue;
            OneBend ob;
            ob.x = sx;
            ob.y = sy;
            ob.src_x = lo->src;
            ob.src_y = hi->src;
            ob.fx = lo->src_face;
            ob.fy = hi->src_face;
            ob.bend = bend;
            out.push_back(ob);
        }
    }
    std::sort(out.begin(), out.end(), [](const OneBend& a, const OneBend& b) {
        return std::tie(a.x, a.y, a.src_x, a.src_y) < std::tie(b.x, b.y, b.src_x, b.src_y);
    });
    out.erase(std::unique(out.begin(), out.end(),
                          [](const OneBend& a, const OneBend& b) {
                              return std::tie(a.x, a.y, a.src_x, a.src_y) ==
                                     std::tie(b.x, b.y, b.src_x, b.src_y);
                          }),
              out.end());
    return out;
}

namespace arrangement_detail {

// index of crossing `cid` along strand s, measured walking from terminal
// `from`; positions are comparable only within one strand+direction
inline int pos_from(const Arrangement& arr, int s, int from, int cid) {
    int p = arr.position_on(s, cid);
    if (arr.ends[s][0] == from) return p;
    EMU_INTERNAL_CHECK(arr.ends[s][1] == from, "walk endpoint not on strand");
    return static_cast<int>(arr.order[s].size()) - 1 - p;
}

} // namespace arrangement_detail

// crossings of a critical strand p with a 1-bend path (x from src_x to the
// bend, y from src_y to the bend); returns crossing ids in (piece-x, piece-y)
inline std::vector<int> crossings_with_one_bend(const Arrangement& arr, int p,
                                                const OneBend& ob) {
    using arrangement_detail::pos_from;
    std::vector<int> hits;
    int bx = pos_from(arr, ob.x, ob.src_x, ob.bend);
    int cx = arr.crossing_between(p, ob.x);
    if (cx >= 0 && pos_from(arr, ob.x, ob.src_x, cx) < bx) hits.push_back(cx);
    int by = pos_from(arr, ob.y, ob.src_y, ob.bend);
    int cy = arr.crossing_between(p, ob.y);
    if (cy >= 0 && pos_from(arr, ob.y, ob.src_y, cy) < by) hits.push_back(cy);
    return hits;
}

inline std::optional<BadPair> make_bad_pair(const Skeleton& sk, int p, const OneBend& ob) {
    const Arrangement& arr = sk.arr;
    std::set<int> epts{arr.ends[p][0], arr.ends[p][1], ob.src_x, ob.src_y};
    if (epts.size() != 4) return std::nullopt;
    std::set<int> pf{arr.end_faces[p][0], arr.end_faces[p][1]};
    if (pf != std::set<int>{ob.fx, ob.fy}) return std::nullopt;
    auto hits = crossings_with_one_bend(arr, p, ob);
    if (hits.size() < 2) return std::nullopt;
    EMU_INTERNAL_CHECK(hits.size() == 2, "strand crosses a 1-bend path more than twice");
    BadPair bp;
    bp.p = p;
    bp.s1 = ob.x;
    bp.s2 = ob.y;
    bp.c = ob.src_x;
    bp.e = ob.src_y;
    bp.a = arr.end_faces[p][0] == ob.fx ? arr.ends[p][0] : arr.ends[p][1];
    bp.b = arr.ends[p][0] == bp.a ? arr.ends[p][1] : arr.ends[p][0];
    bp.d = ob.bend;
    bp.h = hits[0];
    bp.i = hits[1];
    return bp;
}

// first canonical bad pair in scan order, if any
inline std::optional<BadPair> find_canonical_bad_pair(const Skeleton& sk) {
    const Arrangement& arr = sk.arr;
    for (const CanonicalPath& cp : sk.canonicals) {
        if (cp.bend_crossing < 0) continue;
        OneBend ob;
        int r = sk.si->inst.face_of_terminal(cp.t);
        int rp = sk.si->inst.face_of_terminal(cp.tp);
        ob.x = sk.arr_strand(cp.sA);
        ob.y = sk.arr_strand(cp.sB);
        ob.src_x = cp.t;
        ob.src_y = cp.tp;
        ob.fx = r;
        ob.fy = rp;
        ob.bend = arr.crossing_between(ob.x, ob.y);
        EMU_INTERNAL_CHECK(ob.bend >= 0, "canonical bend lost during elimination");
        for (int p = 0; p < arr.strand_count(); ++p) {
            if (!arr.is_critical[p] || p == ob.x || p == ob.y) continue;
            auto bp = make_bad_pair(sk, p, ob);
            if (bp) {
                bp->canonical = true;
                return bp;
            }
        }
    }
    return std::nullopt;
}

// total bad pairs against every safe 1-bend path (monotonicity audit)
inline long long count_bad_pairs(const Skeleton& sk, const SkeletonGraph& sg) {
    SafetyOracle oracle(sk, sg);
    auto obs = all_safe_one_bends(sk, sg, oracle);
    long long n = 0;
    for (const OneBend& ob : obs)
        for (int p = 0; p < sk.arr.strand_count(); ++p) {
            if (!sk.arr.is_critical[p] || p == ob.x || p == ob.y) continue;
            if (make_bad_pair(sk, p, ob)) ++n;
        }
    return n;
}

// ---------------------------------------------------------------------------
// Step 1: shrink a bad pair until no critical path cuts both upper sides of
// its triangle and no primary both crosses its base and forms a safe 1-bend
// path with p.
// ---------------------------------------------------------------------------
inline BadPair minimalize(const Skeleton& sk, const SkeletonGraph& sg, SafetyOracle& oracle,
                          BadPair bp) {
    using arrangement_detail::pos_from;
    const Arrangement& arr = sk.arr;
    long long cap = static_cast<long long>(arr.strand_count()) * arr.strand_count() + 2;
    for (long long iter = 0;; ++iter) {
        EMU_INTERNAL_CHECK(iter < cap, "ConvergenceCapExceeded: minimalization looped");
        // triangle in strand positions
        int h_on_s1 = pos_from(arr, bp.s1, bp.c, bp.h);
        int d_on_s1 = pos_from(arr, bp.s1, bp.c, bp.d);
        int d_on_s2 = pos_from(arr, bp.s2, bp.e, bp.d);
        int i_on_s2 = pos_from(arr, bp.s2, bp.e, bp.i);
        EMU_INTERNAL_CHECK(h_on_s1 < d_on_s1 && i_on_s2 < d_on_s2,
                           "bad pair crossings out of order");

        // Case 1: a critical path between the same faces crossing both (h,d)
        // and (d,i)
        bool updated = false;
        for (int rs = 0; rs < arr.strand_count() && !updated; ++rs) {
            if (!arr.is_critical[rs] || rs == bp.p || rs == bp.s1 || rs == bp.s2) continue;
            std::set<int> rf{arr.end_faces[rs][0], arr.end_faces[rs][1]};
            if (rf != std::set<int>{sk.si->inst.face_of_terminal(bp.c),
                                    sk.si->inst.face_of_terminal(bp.e)})
                continue;
            int r1 = arr.crossing_between(rs, bp.s1);
            int r2 = arr.crossing_between(rs, bp.s2);
            if (r1 < 0 || r2 < 0) continue;
            int p1 = pos_from(arr, bp.s1, bp.c, r1);
            int p2 = pos_from(arr, bp.s2, bp.e, r2);
            if (p1 > h_on_s1 && p1 < d_on_s1 && p2 > i_on_s2 && p2 < d_on_s2) {
                bp.p = rs;
                bp.a = arr.end_faces[rs][0] == sk.si->inst.face_of_terminal(bp.c)
                           ? arr.ends[rs][0]
                           : arr.ends[rs][1];
                bp.b = arr.ends[rs][0] == bp.a ? arr.ends[rs][1] : arr.ends[rs][0];
                bp.h = r1;
                bp.i = r2;
                updated = true;
            }
        }
        if (updated) continue;

        // Case 2: a primary from F_b toward F_a crossing p inside (h,i) and
        // forming a safe 1-bend path with p; p itself must be primary from a
        bool p_is_primary = false;
        for (const PrimaryRec& pr : sk.cps->primaries) {
            if (sk.arr_strand(pr.strand) == bp.p && pr.src == bp.a) p_is_primary = true;
        }
        if (p_is_primary) {
            int h_on_p = pos_from(arr, bp.p, bp.a, bp.h);
            int i_on_p = pos_from(arr, bp.p, bp.a, bp.i);
            EMU_INTERNAL_CHECK(h_on_p < i_on_p, "triangle base out of order");
            int fa = sk.si->inst.face_of_terminal(bp.a);
            int fb = sk.si->inst.face_of_terminal(bp.b);
            for (const PrimaryRec& pr : sk.cps->primaries) {
                if (pr.src_face != fb || pr.dst_face != fa) continue;
                int rs = sk.arr_strand(pr.strand);
                if (rs == bp.p || rs == bp.s2) continue;
                int rc = arr.crossing_between(rs, bp.p);
                if (rc < 0) continue;
                int rp = pos_from(arr, bp.p, bp.a, rc);
                if (rp <= h_on_p || rp >= i_on_p) continue;
                int lo_face = std::min(fa, fb);
                int sx = lo_face == fa ? bp.p : rs;
                int sy = lo_face == fa ? rs : bp.p;
                int src_x = lo_face == fa ? bp.a : pr.src;
                int src_y = lo_face == fa ? pr.src : bp.a;
                int chir = arr.sigma_dir(rc, sx, arr.ends[sx][0] == src_x, sy,
                                         arr.ends[sy][0] == src_y);
                if (chir != sk.expected_bend_chirality) continue;
                if (!oracle.safe(sx, src_x, sy, src_y, std::min(fa, fb), std::max(fa, fb)))
                    continue;
                // new 1-bend path: (c, g) stays, R replaces (e, f); the new
                // bend is R x s1, which must lie beyond h toward g
                int nb = arr.crossing_between(rs, bp.s1);
                EMU_INTERNAL_CHECK(nb >= 0, "case-2 primary does not cross the kept side");
                int nb_on_s1 = pos_from(arr, bp.s1, bp.c, nb);
                EMU_INTERNAL_CHECK(nb_on_s1 > h_on_s1, "case-2 bend inside the triangle base");
                bp.s2 = rs;
                bp.e = pr.src;
                bp.d = nb;
                bp.i = rc;
                updated = true;
                break;
            }
        }
        if (!updated) break;
    }

    // minimality audit: nothing crosses both upper sides of the triangle
    {
        int h_on_s1 = pos_from(arr, bp.s1, bp.c, bp.h);
        int d_on_s1 = pos_from(arr, bp.s1, bp.c, bp.d);
        int d_on_s2 = pos_from(arr, bp.s2, bp.e, bp.d);
        int i_on_s2 = pos_from(arr, bp.s2, bp.e, bp.i);
        for (int rs = 0; rs < arr.strand_count(); ++rs) {
            if (rs == bp.p || rs == bp.s1 || rs == bp.s2) continue;
            int r1 = arr.crossing_between(rs, bp.s1);
            int r2 = arr.crossing_between(rs, bp.s2);
            if (r1 < 0 || r2 < 0) continue;
            int p1 = pos_from(arr, bp.s1, bp.c, r1);
            int p2 = pos_from(arr, bp.s2, bp.e, r2);
            EMU_INTERNAL_CHECK(!(p1 > h_on_s1 && p1 < d_on_s1 && p2 > i_on_s2 && p2 < d_on_s2),
                               "minimal triangle still pierced through both upper sides");
        }
    }
    return bp;
}

// ---------------------------------------------------------------------------
// Step 2: reroute p over the triangle apex.  Crossings inside the triangle
// move onto the detour in the order induced by their positions along the
// upper sides; p's crossings with s1 and s2 relocate just past the apex.
// ---------------------------------------------------------------------------
inline void reroute(Skeleton& sk, const BadPair& bp) {
    using arrangement_detail::pos_from;
    Arrangement& arr = sk.arr;
    bool p_from_a = arr.ends[bp.p][0] == bp.a;
    bool s1_from_c = arr.ends[bp.s1][0] == bp.c;
    bool s2_from_e = arr.ends[bp.s2][0] == bp.e;

    int h_on_p = pos_from(arr, bp.p, bp.a, bp.h);
    int i_on_p = pos_from(arr, bp.p, bp.a, bp.i);
    int h_on_s1 = pos_from(arr, bp.s1, bp.c, bp.h);
    int d_on_s1 = pos_from(arr, bp.s1, bp.c, bp.d);
    int d_on_s2 = pos_from(arr, bp.s2, bp.e, bp.d);
    int i_on_s2 = pos_from(arr, bp.s2, bp.e, bp.i);
    EMU_INTERNAL_CHECK(h_on_p < i_on_p, "triangle base inverted");

    // split the strict interior of (h, i) on p into side-1 and side-2 movers
    struct Mover {
        int cid;
        int other;   // the crossed strand
        int side;    // 1: crosses (h,d) on s1; 2: crosses (d,i) on s2
        int side_pos; // position along the upper side, from h / from d
    };
    std::vector<Mover> movers;
    for (int q = h_on_p + 1; q < i_on_p; ++q) {
        int cid = arr.order[bp.p][p_from_a ? q : static_cast<int>(arr.order[bp.p].size()) - 1 - q];
        int other = arr.other_strand(cid, bp.p);
        Mover m;
        m.cid = cid;
        m.other = other;
        int c1 = arr.crossing_between(other, bp.s1);
        int c2 = arr.crossing_between(other, bp.s2);
        int p1 = c1 >= 0 ? pos_from(arr, bp.s1, bp.c, c1) : -1;
        int p2 = c2 >= 0 ? pos_from(arr, bp.s2, bp.e, c2) : -1;
        bool in1 = c1 >= 0 && p1 > h_on_s1 && p1 < d_on_s1;
        bool in2 = c2 >= 0 && p2 > i_on_s2 && p2 < d_on_s2;
        EMU_INTERNAL_CHECK(in1 != in2,
                           "triangle interior crossing does not leave through one upper side");
        m.side = in1 ? 1 : 2;
        m.side_pos = in1 ? p1 : -p2; // ascending along (h->d), then (d->i)
        movers.push_back(m);
    }
    std::sort(movers.begin(), movers.end(), [](const Mover& x, const Mover& y) {
        if (x.side != y.side) return x.side < y.side;
        return x.side_pos < y.side_pos;
    });

    // --- rebuild p's order ---
    {
        std::vector<int> fwd; // walked from a
        const auto& o = arr.order[bp.p];
        for (std::size_t q = 0; q < o.size(); ++q)
            fwd.push_back(p_from_a ? o[q] : o[o.size() - 1 - q]);
        std::vector<int> neu(fwd.begin(), fwd.begin() + h_on_p);
        for (const Mover& m : movers)
            if (m.side == 1) neu.push_back(m.cid);
        neu.push_back(bp.i); // crossing with s2 beyond the apex comes first
        neu.push_back(bp.h);
        for (const Mover& m : movers)
            if (m.side == 2) neu.push_back(m.cid);
        for (std::size_t q = i_on_p + 1; q < fwd.size(); ++q) neu.push_back(fwd[q]);
        if (!p_from_a) std::reverse(neu.begin(), neu.end());
        EMU_INTERNAL_CHECK(neu.size() == o.size(), "reroute changed p's crossing count");
        arr.order[bp.p] = std::move(neu);
    }

    // --- move each interior crossing next to its upper-side exit ---
    for (const Mover& m : movers) {
        auto& ro = arr.order[m.other];
        int anchor = m.side == 1 ? arr.crossing_between(m.other, bp.s1)
                                 : arr.crossing_between(m.other, bp.s2);
        int old_pos = arr.position_on(m.other, m.cid);
        ro.erase(ro.begin() + old_pos);
        int anchor_pos = arr.position_on(m.other, anchor);
        // p's new crossing sits on the side of the anchor away from the old
        // triangle interior
        int insert_at = old_pos <= anchor_pos ? anchor_pos + 1 : anchor_pos;
        ro.insert(ro.begin() + insert_at, m.cid);
        // handedness: p now runs parallel to the upper side the mover exits
        if (m.side == 1) {
            int v = arr.sigma_dir(anchor, m.other, true, bp.s1, s1_from_c);
            arr.set_sigma_dir(m.cid, m.other, true, bp.p, p_from_a, v);
        } else {
            // p travels against (d -> i) == from e side reversed
            int v = arr.sigma_dir(anchor, m.other, true, bp.s2, !s2_from_e);
            arr.set_sigma_dir(m.cid, m.other, true, bp.p, p_from_a, v);
        }
    }

    // --- relocate h and i just past the apex; a later detour slides in
    // between the bend and any earlier detours ---
    auto relocate_past_apex = [&](int cid, int carrier, bool carrier_from_src) {
        auto& co = arr.order[carrier];
        int old_pos = arr.position_on(carrier, cid);
        co.erase(co.begin() + old_pos);
        int d_stored = arr.position_on(carrier, bp.d);
        // immediately beyond the apex, away from the src end
        int insert_at = carrier_from_src ? d_stored + 1 : d_stored;
        co.insert(co.begin() + insert_at, cid);
    };
    relocate_past_apex(bp.i, bp.s2, s2_from_e);
    relocate_past_apex(bp.h, bp.s1, s1_from_c);

    // handedness at the apex: p rounds it moving first along (h->d), then
    // along (d->i)
    {
        int v1 = arr.sigma_dir(bp.d, bp.s1, s1_from_c, bp.s2, s2_from_e);
        // crossing with s2 while moving along s1's (h->d) direction
        arr.set_sigma_dir(bp.i, bp.p, p_from_a, bp.s2, s2_from_e, v1);
        int v2 = arr.sigma_dir(bp.d, bp.s2, !s2_from_e, bp.s1, s1_from_c);
        // crossing with s1 while moving along s2's (d->i) direction
        arr.set_sigma_dir(bp.h, bp.p, p_from_a, bp.s1, s1_from_c, v2);
    }
}

// piece of a canonical path on one carrier strand: positions from `src`
// strictly before the bend
struct CanonicalPieces {
    int sA, sB;       // arrangement strands (equal when degenerate)
    int srcA, srcB;
    int endA, endB;   // one past the last crossing position inside the piece
};

inline CanonicalPieces canonical_pieces(const Skeleton& sk, const CanonicalPath& cp) {
    using arrangement_detail::pos_from;
    const Arrangement& arr = sk.arr;
    CanonicalPieces out;
    out.sA = sk.arr_strand(cp.sA);
    out.srcA = cp.t;
    if (cp.sA == cp.sB) {
        out.sB = out.sA;
        out.srcB = cp.tp;
        out.endA = static_cast<int>(arr.order[out.sA].size());
        out.endB = 0;
        return out;
    }
    out.sB = sk.arr_strand(cp.sB);
    out.srcB = cp.tp;
    int bend = arr.crossing_between(out.sA, out.sB);
    EMU_INTERNAL_CHECK(bend >= 0, "canonical bend missing");
    out.endA = pos_from(arr, out.sA, cp.t, bend);
    out.endB = pos_from(arr, out.sB, cp.tp, bend);
    return out;
}

// crossings between two canonical paths in the arrangement
inline int canonical_cross_count(const Skeleton& sk, const CanonicalPath& u,
                                 const CanonicalPath& v) {
    using arrangement_detail::pos_from;
    const Arrangement& arr = sk.arr;
    CanonicalPieces a = canonical_pieces(sk, u);
    CanonicalPieces b = canonical_pieces(sk, v);
    struct Piece {
        int s, src, end;
    };
    std::vector<Piece> pa{{a.sA, a.srcA, a.endA}};
    if (a.sB != a.sA) pa.push_back({a.sB, a.srcB, a.endB});
    std::vector<Piece> pb{{b.sA, b.srcA, b.endA}};
    if (b.sB != b.sA) pb.push_back({b.sB, b.srcB, b.endB});
    int count = 0;
    for (const Piece& x : pa) {
        for (const Piece& y : pb) {
            if (x.s == y.s) {
                // shared carrier: with four distinct terminals the two pieces
                // start from opposite ends and may not reach a common edge
                EMU_INTERNAL_CHECK(x.src != y.src, "shared-carrier pieces from one end");
                int total = static_cast<int>(arr.order[x.s].size());
                EMU_INTERNAL_CHECK(x.end + y.end < total,
                                   "canonical paths overlap on a shared strand");
                continue;
            }
            int c = arr.crossing_between(x.s, y.s);
            if (c < 0) continue;
            if (pos_from(arr, x.s, x.src, c) < x.end && pos_from(arr, y.s, y.src, c) < y.end)
                ++count;
        }
    }
    return count;
}

// After elimination: canonical paths cross exactly when the corresponding
// shortest paths cross in the redrawn input, and never more than once.
inline void check_canonical_crossing_pattern(const Skeleton& sk) {
    const SimplifiedInstance& si = *sk.si;
    for (std::size_t i = 0; i < sk.canonicals.size(); ++i) {
        for (std::size_t j = i + 1; j < sk.canonicals.size(); ++j) {
            const CanonicalPath& u = sk.canonicals[i];
            const CanonicalPath& v = sk.canonicals[j];
            std::set<int> ts{u.t, u.tp, v.t, v.tp};
            if (ts.size() != 4) continue;
            int got = canonical_cross_count(sk, u, v);
            EMU_INTERNAL_CHECK(got <= 1, "canonical paths cross twice after elimination");
            int su = si.strand_index(u.t, u.tp);
            int sv = si.strand_index(v.t, v.tp);
            bool in_g = si.crossing_of.count({std::min(su, sv), std::max(su, sv)}) != 0;
            EMU_INTERNAL_CHECK((got == 1) == in_g,
                               "canonical crossing pattern differs from the shortest paths");
        }
    }
}

// ---------------------------------------------------------------------------
// The elimination loop.
// ---------------------------------------------------------------------------
struct EliminationStats {
    long long iterations = 0;
    long long initial_bad_pairs = 0;
};

inline EliminationStats eliminate_all(Skeleton& sk, int audit_every = 1) {
    EliminationStats st;
    long long cap = -1;
    long long prev_count = -1;
    for (long long iter = 0;; ++iter) {
        SkeletonGraph sg = to_graph(sk); // also audits planarity
        bool audit_iter = iter == 0 || (audit_every > 0 && iter % audit_every == 0);
        if (audit_iter) {
            long long count = count_bad_pairs(sk, sg);
            if (iter == 0) {
                st.initial_bad_pairs = count;
                cap = count + 1;
            } else {
                EMU_INTERNAL_CHECK(count < prev_count, "bad pair count failed to decrease");
            }
            prev_count = count;
        }
        EMU_INTERNAL_CHECK(cap < 0 || iter <= cap,
                           "elimination exceeded the initial bad-pair count");

        auto bp = find_canonical_bad_pair(sk);
        if (!bp) {
            st.iterations = iter;
            sk.elimination_iterations = iter;
            break;
        }
        SafetyOracle oracle(sk, sg);
        BadPair mbp = minimalize(sk, sg, oracle, *bp);
        // crossing set must be untouched by the reroute
        auto before = sk.arr.cross_of;
        reroute(sk, mbp);
        EMU_INTERNAL_CHECK(before == sk.arr.cross_of,
                           "reroute changed which strand pairs cross");
    }
    return st;
}

} // namespace emu
