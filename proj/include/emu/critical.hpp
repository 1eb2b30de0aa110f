#pragma once

#include <map>
#include <set>
#include <vector>

#include "emu/preprocess.hpp"

namespace emu {

// Paired critical paths from one terminal toward one foreign face: the two
// shortest paths bounding a maximal run of mutually equivalent positions.
// cw_start..cw_end is the governed segment in plane-clockwise positions;
// the (a, b) endpoint roles read the same segment walking the boundary
// with the face's region on the right, which is plane-clockwise for holes
// and the reverse for the outer face.
struct CriticalPair {
    int cw_start = -1, cw_end = -1; // indices into the face's terminal list
    int a_pos = -1, b_pos = -1;
    int a_strand = -1, b_strand = -1;
    bool a_primary = false;         // which role is the designated primary
};

struct PrimaryRec {
    int strand;   // the primary path
    int src;      // terminal it starts from
    int src_face; // face index of src
    int dst_face; // foreign face it runs toward
};

struct CriticalPathSet {
    // (terminal, foreign face index) -> its pairs, in clockwise segment order
    std::map<std::pair<int, int>, std::vector<CriticalPair>> pairs;
    std::set<int> critical_strands;
    std::vector<PrimaryRec> primaries;

    int per_terminal_count(const SimplifiedInstance& si, int t) const {
        std::set<int> s;
        for (const auto& [key, ps] : pairs) {
            if (key.first != t) continue;
            for (const CriticalPair& p : ps) {
                s.insert(p.a_strand);
                s.insert(p.b_strand);
            }
        }
        (void)si;
        return static_cast<int>(s.size());
    }
};

// Query context: the simplified instance plus its traced faces, built once.
struct CriticalContext {
    const SimplifiedInstance& si;
    PlanarGraph::FaceStructure fs;
    int outer_face;

    explicit CriticalContext(const SimplifiedInstance& s)
        : si(s), fs(s.inst.g.trace_faces()), outer_face(-1) {
        outer_face = si.hole_faces[si.outer_terminal_face];
    }
};

namespace critical_detail {

// darts of a strand walked from one endpoint to the other
inline void append_strand_darts(const PlanarGraph& g, const Strand& s, bool from_a,
                                std::vector<int>& out) {
    if (from_a) {
        for (std::size_t i = 0; i < s.eids.size(); ++i)
            out.push_back(g.dart_of(s.eids[i], s.verts[i]));
    } else {
        for (std::size_t i = s.eids.size(); i-- > 0;)
            out.push_back(g.dart_of(s.eids[i], s.verts[i + 1]));
    }
}

} // namespace critical_detail

// Region bounded by the two shortest paths from t to consecutive clockwise
// terminals of face r and the clockwise boundary arc between them; the two
// paths are equivalent when that region holds no terminal face.
inline bool equivalent(const CriticalContext& cx, int t, int r, int j) {
    const SimplifiedInstance& si = cx.si;
    const std::vector<int>& terms = si.inst.faces[r].terminals_cw;
    std::size_t m = terms.size();
    EMU_INTERNAL_CHECK(m >= 2, "equivalence needs at least two terminals on the face");
    int tj = terms[j % m];
    int tj1 = terms[(j + 1) % m];
    EMU_INTERNAL_CHECK(t != tj && t != tj1, "terminal queried against its own face");

    const PlanarGraph& g = si.inst.g;
    std::vector<int> walk;
    // t -> tj
    {
        const Strand& A = si.strands[si.strand_index(t, tj)];
        critical_detail::append_strand_darts(g, A, A.a == t, walk);
    }
    // clockwise arc tj -> tj1
    {
        auto it = si.arc_strand.find({tj, tj1});
        EMU_INTERNAL_CHECK(it != si.arc_strand.end(), "missing boundary arc strand");
        const Strand& S = si.strands[it->second.first];
        critical_detail::append_strand_darts(g, S, it->second.second, walk);
    }
    // tj1 -> t
    {
        const Strand& B = si.strands[si.strand_index(t, tj1)];
        critical_detail::append_strand_darts(g, B, B.a == tj1, walk);
    }
    std::vector<int> inside = g.enclosed_faces(cx.fs, cx.outer_face, walk);
    std::set<int> inset(inside.begin(), inside.end());
    for (int hf : si.hole_faces)
        if (inset.count(hf)) return false;
    return true;
}

// All critical pairs from terminal t toward foreign face r.  A face with a
// single terminal contributes one self-paired path whose governed segment
// is the whole face.
inline std::vector<CriticalPair> critical_pairs_from(const CriticalContext& cx, int t, int r) {
    const SimplifiedInstance& si = cx.si;
    const std::vector<int>& terms = si.inst.faces[r].terminals_cw;
    int src_face = si.inst.face_of_terminal(t);
    EMU_INTERNAL_CHECK(src_face != r, "critical paths are defined toward foreign faces only");
    std::size_t m = terms.size();
    std::vector<CriticalPair> out;
    if (m == 1) {
        CriticalPair p;
        p.cw_start = p.cw_end = p.a_pos = p.b_pos = 0;
        p.a_strand = p.b_strand = si.strand_index(t, terms[0]);
        p.a_primary = true;
        out.push_back(p);
        return out;
    }
    std::vector<char> eq(m, 0);
    int splits = 0;
    for (std::size_t j = 0; j < m; ++j) {
        eq[j] = equivalent(cx, t, r, static_cast<int>(j)) ? 1 : 0;
        if (!eq[j]) ++splits;
    }
    EMU_INTERNAL_CHECK(splits >= 1,
                       "all shortest paths toward a foreign face claim to be equivalent");
    // segments of equivalent positions between non-equivalent boundaries:
    // each boundary j with eq[j]=0 ends a segment at position j and starts
    // the next at j+1
    bool flipped = r == si.outer_terminal_face;
    for (std::size_t j = 0; j < m; ++j) {
        if (eq[j]) continue;
        // segment starting at j+1, running clockwise to the next boundary
        std::size_t start = (j + 1) % m;
        std::size_t end = start;
        while (eq[end]) end = (end + 1) % m;
        CriticalPair p;
        p.cw_start = static_cast<int>(start);
        p.cw_end = static_cast<int>(end);
        p.a_pos = flipped ? p.cw_end : p.cw_start;
        p.b_pos = flipped ? p.cw_start : p.cw_end;
        p.a_strand = si.strand_index(t, terms[p.a_pos]);
        p.b_strand = si.strand_index(t, terms[p.b_pos]);
        // a lower-index source face designates the a role, a higher one b
        p.a_primary = src_face < r;
        out.push_back(p);
    }
    return out;
}

inline CriticalPathSet critical_paths(const CriticalContext& cx) {
    const SimplifiedInstance& si = cx.si;
    CriticalPathSet cps;
    std::size_t f = si.inst.faces.size();
    for (std::size_t r = 0; r < f; ++r) {
        for (int t : si.inst.faces[r].terminals_cw) {
            for (std::size_t q = 0; q < f; ++q) {
                if (q == r) continue;
                auto ps = critical_pairs_from(cx, t, static_cast<int>(q));
                for (const CriticalPair& p : ps) {
                    cps.critical_strands.insert(p.a_strand);
                    cps.critical_strands.insert(p.b_strand);
                    int prim = p.a_primary ? p.a_strand : p.b_strand;
                    cps.primaries.push_back(PrimaryRec{prim, t, static_cast<int>(r),
                                                       static_cast<int>(q)});
                }
                cps.pairs[{t, static_cast<int>(q)}] = std::move(ps);
            }
        }
    }
    return cps;
}

// The canonical path between terminals on different faces: the designated
// primaries of the governed pairs containing the other endpoint, joined at
// their crossing (the bend).  Degenerates to a single primary when the
// other endpoint is that primary's own end.
struct CanonicalPath {
    int t = -1, tp = -1; // t on the lower-index face
    int sA = -1, sB = -1;       // primary strands: sA from t, sB from tp
    int bend_crossing = -1;     // index into si.crossings, -1 when degenerate
    int bend_vertex = -1;       // simplified-graph vertex id of the bend
};

inline const CriticalPair& governed_pair(const CriticalPathSet& cps,
                                         const SimplifiedInstance& si, int t, int r,
                                         int other_terminal) {
    const std::vector<int>& terms = si.inst.faces[r].terminals_cw;
    int pos = -1;
    for (std::size_t i = 0; i < terms.size(); ++i)
        if (terms[i] == other_terminal) pos = static_cast<int>(i);
    EMU_INTERNAL_CHECK(pos >= 0, "terminal not on the expected face");
    const auto& ps = cps.pairs.at({t, r});
    int m = static_cast<int>(terms.size());
    for (const CriticalPair& p : ps) {
        int span = (p.cw_end - p.cw_start + m) % m;
        int rel = (pos - p.cw_start + m) % m;
        if (rel <= span) return p;
    }
    EMU_INTERNAL_CHECK(false, "governed segments do not cover the face");
    return ps.front();
}

inline CanonicalPath canonical_path(const CriticalContext& cx, const CriticalPathSet& cps,
                                    int t, int tp) {
    const SimplifiedInstance& si = cx.si;
    int r = si.inst.face_of_terminal(t);
    int rp = si.inst.face_of_terminal(tp);
    EMU_INTERNAL_CHECK(r != rp, "canonical paths join terminals on distinct faces");
    if (r > rp) {
        std::swap(t, tp);
        std::swap(r, rp);
    }
    CanonicalPath cp;
    cp.t = t;
    cp.tp = tp;

    // t's governed pair toward F_rp holding tp: primary is the clockwise
    // first endpoint (src face r < rp); tp's pair toward F_r holding t:
    // primary is the clockwise last endpoint (src face rp > r).
    const CriticalPair& pa = governed_pair(cps, si, t, rp, tp);
    const CriticalPair& pb = governed_pair(cps, si, tp, r, t);
    cp.sA = pa.a_primary ? pa.a_strand : pa.b_strand;
    cp.sB = pb.a_primary ? pb.a_strand : pb.b_strand;

    const Strand& A = si.strands[cp.sA];
    const Strand& B = si.strands[cp.sB];
    bool a_direct = A.a == tp || A.b == tp; // primary from t already ends at tp
    bool b_direct = B.a == t || B.b == t;
    if (a_direct || b_direct) {
        // canonical path is that single primary; the bend degenerates to tp
        // so the sA piece is the whole strand and the sB piece is empty
        int s = a_direct ? cp.sA : cp.sB;
        cp.sA = s;
        cp.sB = s;
        cp.bend_vertex = tp;
        return cp;
    }
    auto it = si.crossing_of.find({std::min(cp.sA, cp.sB), std::max(cp.sA, cp.sB)});
    EMU_INTERNAL_CHECK(it != si.crossing_of.end(),
                       "NoBend: designated primaries do not cross");
    cp.bend_crossing = it->second;
    cp.bend_vertex = si.crossings[it->second].vertex;
    return cp;
}

// Concatenated vertex walk of a canonical path in the simplified graph
// (used by verification; the arrangement keeps its own realization).
inline std::vector<int> canonical_walk(const SimplifiedInstance& si, const CanonicalPath& cp) {
    const Strand& A = si.strands[cp.sA];
    std::vector<int> walk;
    // t .. bend along A
    {
        std::vector<int> vs = A.verts;
        if (A.a != cp.t) std::reverse(vs.begin(), vs.end());
        for (int v : vs) {
            walk.push_back(v);
            if (v == cp.bend_vertex) break;
        }
    }
    if (cp.sB == cp.sA) return walk;
    const Strand& B = si.strands[cp.sB];
    {
        std::vector<int> vs = B.verts;
        if (B.a != cp.tp) std::reverse(vs.begin(), vs.end());
        // bend .. tp along B, reversed segment
        std::vector<int> tail;
        for (int v : vs) {
            tail.push_back(v);
            if (v == cp.bend_vertex) break;
        }
        EMU_INTERNAL_CHECK(tail.back() == cp.bend_vertex, "bend not on second primary");
        for (std::size_t i = tail.size() - 1; i-- > 0;) walk.push_back(tail[i]);
    }
    return walk;
}

} // namespace emu
