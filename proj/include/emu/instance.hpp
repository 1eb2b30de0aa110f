#pragma once

#include <map>
#include <vector>

#include "emu/planar_graph.hpp"
#include "emu/shortest_path.hpp"

namespace emu {

struct FaceSpec {
    std::vector<int> walk_edge_ids;   // boundary walk, by edge id
    std::vector<int> terminals_cw;    // clockwise as seen in the plane
};

// A plane graph plus the designated terminal faces F_1..F_f.  Terminals
// may appear on several faces until preprocessing assigns each to its
// lowest-index face.
struct TerminalInstance {
    PlanarGraph g;
    std::vector<int> outer_walk;      // edge ids of the designated outer face
    std::vector<FaceSpec> faces;

    TerminalInstance() : g(false) {}
    explicit TerminalInstance(bool allow_zero) : g(allow_zero) {}

    std::size_t face_count() const { return faces.size(); }

    // Terminals in face order, deduplicated (first face wins).
    std::vector<int> all_terminals() const {
        std::vector<int> out;
        std::set<int> seen;
        for (const FaceSpec& f : faces)
            for (int t : f.terminals_cw)
                if (seen.insert(t).second) out.push_back(t);
        return out;
    }

    // Lowest face index listing t, or -1.
    int face_of_terminal(int t) const {
        for (std::size_t r = 0; r < faces.size(); ++r)
            for (int x : faces[r].terminals_cw)
                if (x == t) return static_cast<int>(r);
        return -1;
    }

    // Cyclic vertex order of a traced face in clockwise (plane) direction.
    // Bounded faces trace counterclockwise under the dart convention, the
    // outer face traces clockwise, so bounded walks are reversed here.
    static std::vector<int> clockwise_vertices(const PlanarGraph& g,
                                               const PlanarGraph::FaceStructure& fs,
                                               int face, int outer_face) {
        std::vector<int> verts;
        for (int d : fs.face_darts[face]) verts.push_back(g.dart_tail(d));
        if (face != outer_face) std::reverse(verts.begin(), verts.end());
        return verts;
    }

    // True when `order` appears as a cyclic subsequence of `cycle`.
    static bool cyclic_subsequence(const std::vector<int>& cycle, const std::vector<int>& order) {
        if (order.empty()) return true;
        std::size_t n = cycle.size();
        for (std::size_t start = 0; start < n; ++start) {
            if (cycle[start] != order[0]) continue;
            std::size_t oi = 1, steps = 1;
            std::size_t pos = (start + 1) % n;
            while (oi < order.size() && steps < n) {
                if (cycle[pos] == order[oi]) ++oi;
                pos = (pos + 1) % n;
                ++steps;
            }
            if (oi == order.size()) return true;
        }
        return false;
    }

    // Faces around a lone terminal may legitimately share a traced face in
    // pipeline intermediates; fresh inputs must keep faces distinct.
    void validate(bool allow_shared_faces = false) const {
        g.validate_rotations();
        auto fs = g.trace_faces();
        g.check_euler(fs, /*as_input=*/true);
        int outer = g.find_face_by_edge_ids(fs, outer_walk);
        EMU_INPUT_CHECK(!faces.empty(), "instance has no terminal faces");
        std::set<int> resolved;
        for (std::size_t r = 0; r < faces.size(); ++r) {
            const FaceSpec& f = faces[r];
            EMU_INPUT_CHECK(!f.terminals_cw.empty(),
                            "face " + std::to_string(r + 1) + " has no terminals");
            std::set<int> uniq(f.terminals_cw.begin(), f.terminals_cw.end());
            EMU_INPUT_CHECK(uniq.size() == f.terminals_cw.size(),
                            "face " + std::to_string(r + 1) + " repeats a terminal");
            int fi = g.find_face_by_edge_ids(fs, f.walk_edge_ids);
            bool fresh = resolved.insert(fi).second;
            EMU_INPUT_CHECK(fresh || (allow_shared_faces && f.terminals_cw.size() == 1),
                            "two terminal faces resolve to the same face");
            auto cyc = clockwise_vertices(g, fs, fi, outer);
            EMU_INPUT_CHECK(cyclic_subsequence(cyc, f.terminals_cw),
                            "terminals of face " + std::to_string(r + 1) +
                                " are not in clockwise boundary order");
        }
    }

    // Traced face index of F_r.
    int resolve_face(const PlanarGraph::FaceStructure& fs, std::size_t r) const {
        return g.find_face_by_edge_ids(fs, faces[r].walk_edge_ids);
    }
    int resolve_outer(const PlanarGraph::FaceStructure& fs) const {
        return g.find_face_by_edge_ids(fs, outer_walk);
    }
};

// Exact pairwise distances over the instance's terminals (symmetric,
// zero diagonal).  Keys are ordered pairs (s < t).
inline std::map<std::pair<int, int>, Rat>
all_terminal_distances(const TerminalInstance& inst) {
    std::vector<int> ts = inst.all_terminals();
    std::map<std::pair<int, int>, Rat> out;
    for (std::size_t i = 0; i < ts.size(); ++i) {
        PathTree tree(inst.g, ts[i]);
        for (std::size_t j = i + 1; j < ts.size(); ++j) {
            int a = std::min(ts[i], ts[j]), b = std::max(ts[i], ts[j]);
            out[{a, b}] = tree.dist(ts[j]);
        }
    }
    return out;
}

inline const Rat& lookup_distance(const std::map<std::pair<int, int>, Rat>& d, int s, int t) {
    auto it = d.find({std::min(s, t), std::max(s, t)});
    EMU_INTERNAL_CHECK(it != d.end(), "missing distance entry");
    return it->second;
}

} // namespace emu
