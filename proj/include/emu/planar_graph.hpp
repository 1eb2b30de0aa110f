#pragma once

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "emu/check.hpp"
#include "emu/rational.hpp"

namespace emu {

// Edge-weighted multigraph with a combinatorial embedding: every vertex
// carries the counterclockwise cyclic order of its incident edges.
// Vertices and edges are identified by caller-visible integer ids; loops
// are not supported (an edge occupies one rotation slot per endpoint).
//
// Darts: directed edge occurrences, encoded 2*edge_index + direction
// (direction 0 = u->v).  Faces are traced with
//   next(u->v) = predecessor of the reverse dart in the rotation at v,
// which keeps the face on the left of every dart: bounded faces walk
// counterclockwise, the outer face walks clockwise.
class PlanarGraph {
public:
    struct Edge {
        int id = -1;
        int u = -1, v = -1;
        Rat w;
    };

    // Zero weights appear in pipeline artifacts (collapsed disc arcs, LP
    // outputs); instance inputs are validated strictly positive.
    explicit PlanarGraph(bool allow_zero_weights = false)
        : allow_zero_(allow_zero_weights) {}

    bool zero_weights_allowed() const { return allow_zero_; }

    int add_vertex(int id) {
        EMU_INPUT_CHECK(id >= 0, "vertex ids must be nonnegative");
        EMU_INPUT_CHECK(!vid2idx_.count(id), "duplicate vertex id " + std::to_string(id));
        vid2idx_[id] = static_cast<int>(vids_.size());
        vids_.push_back(id);
        rot_.emplace_back();
        return id;
    }

    int add_edge(int id, int u, int v, Rat w) {
        EMU_INPUT_CHECK(id >= 0, "edge ids must be nonnegative");
        EMU_INPUT_CHECK(!eid2idx_.count(id), "duplicate edge id " + std::to_string(id));
        EMU_INPUT_CHECK(u != v, "loops are not supported (edge " + std::to_string(id) + ")");
        EMU_INPUT_CHECK(vid2idx_.count(u) && vid2idx_.count(v),
                        "edge " + std::to_string(id) + " references unknown vertex");
        EMU_INPUT_CHECK(allow_zero_ ? w.sign() >= 0 : w.sign() > 0,
                        "edge " + std::to_string(id) + " has non-positive weight");
        eid2idx_[id] = static_cast<int>(edges_.size());
        edges_.push_back(Edge{id, u, v, std::move(w)});
        return id;
    }

    // Rotation given as ccw edge ids around vertex id.
    void set_rotation(int vid, const std::vector<int>& edge_ids) {
        int vi = vertex_index(vid);
        std::vector<int> r;
        r.reserve(edge_ids.size());
        std::set<int> seen;
        for (int eid : edge_ids) {
            auto it = eid2idx_.find(eid);
            EMU_INPUT_CHECK(it != eid2idx_.end(),
                            "rotation at " + std::to_string(vid) + " names unknown edge " +
                                std::to_string(eid));
            EMU_INPUT_CHECK(seen.insert(eid).second,
                            "rotation at " + std::to_string(vid) + " repeats edge " +
                                std::to_string(eid));
            const Edge& e = edges_[it->second];
            EMU_INPUT_CHECK(e.u == vid || e.v == vid,
                            "rotation at " + std::to_string(vid) + " lists non-incident edge " +
                                std::to_string(eid));
            r.push_back(it->second);
        }
        rot_[vi] = std::move(r);
    }

    std::size_t vertex_count() const { return vids_.size(); }
    std::size_t edge_count() const { return edges_.size(); }
    const std::vector<int>& vertex_ids() const { return vids_; }
    const std::vector<Edge>& edges() const { return edges_; }

    bool has_vertex(int vid) const { return vid2idx_.count(vid) != 0; }
    bool has_edge(int eid) const { return eid2idx_.count(eid) != 0; }

    int vertex_index(int vid) const {
        auto it = vid2idx_.find(vid);
        EMU_INPUT_CHECK(it != vid2idx_.end(), "unknown vertex id " + std::to_string(vid));
        return it->second;
    }
    int edge_index(int eid) const {
        auto it = eid2idx_.find(eid);
        EMU_INPUT_CHECK(it != eid2idx_.end(), "unknown edge id " + std::to_string(eid));
        return it->second;
    }
    const Edge& edge(int eid) const { return edges_[edge_index(eid)]; }
    const Edge& edge_at(int eidx) const { return edges_[eidx]; }

    std::vector<int> rotation_ids(int vid) const {
        std::vector<int> out;
        for (int ei : rot_[vertex_index(vid)]) out.push_back(edges_[ei].id);
        return out;
    }

    // ---- darts ----
    int dart_of(int eid, int tail_vid) const {
        int ei = edge_index(eid);
        const Edge& e = edges_[ei];
        EMU_INPUT_CHECK(e.u == tail_vid || e.v == tail_vid, "dart tail not on edge");
        return 2 * ei + (e.u == tail_vid ? 0 : 1);
    }
    int dart_edge_id(int d) const { return edges_[d >> 1].id; }
    int dart_tail(int d) const {
        const Edge& e = edges_[d >> 1];
        return (d & 1) ? e.v : e.u;
    }
    int dart_head(int d) const {
        const Edge& e = edges_[d >> 1];
        return (d & 1) ? e.u : e.v;
    }
    static int dart_reverse(int d) { return d ^ 1; }
    std::size_t dart_count() const { return edges_.size() * 2; }

    // Every edge present in both endpoint rotations, exactly once each.
    void validate_rotations() const {
        for (std::size_t vi = 0; vi < vids_.size(); ++vi) {
            for (int ei : rot_[vi]) {
                const Edge& e = edges_[ei];
                EMU_INPUT_CHECK(e.u == vids_[vi] || e.v == vids_[vi], "rotation inconsistency");
            }
        }
        std::vector<int> count(edges_.size(), 0);
        for (std::size_t vi = 0; vi < vids_.size(); ++vi)
            for (int ei : rot_[vi]) count[ei]++;
        for (std::size_t ei = 0; ei < edges_.size(); ++ei) {
            EMU_INPUT_CHECK(count[ei] == 2,
                            "edge " + std::to_string(edges_[ei].id) +
                                " missing from an endpoint rotation");
        }
    }

    bool connected() const {
        if (vids_.empty()) return true;
        std::vector<char> vis(vids_.size(), 0);
        std::vector<int> stack{0};
        vis[0] = 1;
        std::size_t seen = 1;
        while (!stack.empty()) {
            int vi = stack.back();
            stack.pop_back();
            for (int ei : rot_[vi]) {
                const Edge& e = edges_[ei];
                int o = vertex_index(e.u == vids_[vi] ? e.v : e.u);
                if (!vis[o]) {
                    vis[o] = 1;
                    ++seen;
                    stack.push_back(o);
                }
            }
        }
        return seen == vids_.size();
    }

    int next_dart_in_face(int d) const {
        int r = dart_reverse(d);
        int h = dart_tail(r); // == dart_head(d)
        int hi = vertex_index(h);
        const std::vector<int>& rot = rot_[hi];
        int rei = r >> 1;
        int pos = -1;
        for (std::size_t i = 0; i < rot.size(); ++i) {
            if (rot[i] == rei) {
                pos = static_cast<int>(i);
                break;
            }
        }
        EMU_INPUT_CHECK(pos >= 0, "edge " + std::to_string(edges_[rei].id) +
                                      " missing from rotation at " + std::to_string(h));
        int nei = rot[(pos + rot.size() - 1) % rot.size()];
        const Edge& ne = edges_[nei];
        return 2 * nei + (ne.u == h ? 0 : 1);
    }

    struct FaceStructure {
        std::vector<std::vector<int>> face_darts; // trace order
        std::vector<int> dart_face;               // dart -> face index
        int outer = -1;

        int face_of_dart(int d) const { return dart_face[d]; }
        std::size_t size() const { return face_darts.size(); }
    };

    FaceStructure trace_faces() const {
        FaceStructure fs;
        fs.dart_face.assign(dart_count(), -1);
        for (std::size_t d0 = 0; d0 < dart_count(); ++d0) {
            if (fs.dart_face[d0] >= 0) continue;
            int fidx = static_cast<int>(fs.face_darts.size());
            fs.face_darts.emplace_back();
            int d = static_cast<int>(d0);
            while (fs.dart_face[d] < 0) {
                fs.dart_face[d] = fidx;
                fs.face_darts[fidx].push_back(d);
                d = next_dart_in_face(d);
            }
            EMU_INTERNAL_CHECK(d == static_cast<int>(d0), "face trace did not close");
        }
        return fs;
    }

    // Connected graph must satisfy V - E + F = 2.
    void check_euler(const FaceStructure& fs, bool as_input = false) const {
        bool conn = connected();
        long long lhs = static_cast<long long>(vids_.size()) -
                        static_cast<long long>(edges_.size()) +
                        static_cast<long long>(fs.face_darts.size());
        std::string msg = "Euler check failed: V=" + std::to_string(vids_.size()) +
                          " E=" + std::to_string(edges_.size()) +
                          " F=" + std::to_string(fs.face_darts.size()) +
                          (conn ? "" : " (graph disconnected)");
        if (as_input) {
            EMU_INPUT_CHECK(conn && lhs == 2, msg);
        } else {
            EMU_INTERNAL_CHECK(conn && lhs == 2, msg);
        }
    }

    // Resolve a face by its edge ids.  Matching is by multiset; when two
    // faces share the multiset (a bare cycle bounds both of its sides) the
    // cyclic order of the given ids against the trace order decides.
    int find_face_by_edge_ids(const FaceStructure& fs, const std::vector<int>& walk_eids) const {
        std::vector<int> want;
        want.reserve(walk_eids.size());
        for (int eid : walk_eids) want.push_back(edge_index(eid));
        std::sort(want.begin(), want.end());
        std::vector<int> candidates;
        for (std::size_t f = 0; f < fs.face_darts.size(); ++f) {
            if (fs.face_darts[f].size() != want.size()) continue;
            std::vector<int> have;
            have.reserve(want.size());
            for (int d : fs.face_darts[f]) have.push_back(d >> 1);
            std::sort(have.begin(), have.end());
            if (have == want) candidates.push_back(static_cast<int>(f));
        }
        EMU_INPUT_CHECK(!candidates.empty(), "face walk does not match any traced face");
        if (candidates.size() == 1) return candidates[0];
        std::vector<int> refined;
        for (int f : candidates) {
            std::vector<int> seq;
            for (int d : fs.face_darts[f]) seq.push_back(dart_edge_id(d));
            for (std::size_t shift = 0; shift < seq.size(); ++shift) {
                bool eq = true;
                for (std::size_t i = 0; i < seq.size() && eq; ++i)
                    eq = seq[(shift + i) % seq.size()] == walk_eids[i];
                if (eq) {
                    refined.push_back(f);
                    break;
                }
            }
        }
        EMU_INPUT_CHECK(refined.size() == 1,
                        "face walk is ambiguous; give the ids in boundary-walk order");
        return refined[0];
    }

    // Faces strictly inside a closed walk: those not reachable from the
    // outer face in the dual graph when the walk's edges are removed.
    // The walk is given as darts, must be closed, and may not repeat edges.
    std::vector<int> enclosed_faces(const FaceStructure& fs, int outer_face,
                                    const std::vector<int>& walk_darts) const {
        EMU_INPUT_CHECK(!walk_darts.empty(), "NotClosed: empty walk");
        std::set<int> blocked;
        for (std::size_t i = 0; i < walk_darts.size(); ++i) {
            int d = walk_darts[i];
            int n = walk_darts[(i + 1) % walk_darts.size()];
            EMU_INPUT_CHECK(dart_head(d) == dart_tail(n), "NotClosed: walk is not a closed chain");
            EMU_INPUT_CHECK(blocked.insert(d >> 1).second, "walk repeats an edge");
        }
        std::vector<char> reached(fs.face_darts.size(), 0);
        std::vector<int> stack{outer_face};
        reached[outer_face] = 1;
        while (!stack.empty()) {
            int f = stack.back();
            stack.pop_back();
            for (int d : fs.face_darts[f]) {
                if (blocked.count(d >> 1)) continue;
                int g = fs.dart_face[dart_reverse(d)];
                if (!reached[g]) {
                    reached[g] = 1;
                    stack.push_back(g);
                }
            }
        }
        std::vector<int> inside;
        for (std::size_t f = 0; f < fs.face_darts.size(); ++f)
            if (!reached[f]) inside.push_back(static_cast<int>(f));
        return inside;
    }

    // Region enclosed by a 1-cycle given as darts with multiplicity: edges
    // used an odd number of times form the boundary, spurs cancel.  Used for
    // areas whose boundary walk retraces shared stubs.
    std::vector<int> enclosed_faces_mod2(const FaceStructure& fs, int outer_face,
                                         const std::vector<int>& walk_darts) const {
        std::map<int, int> mult;
        for (int d : walk_darts) mult[d >> 1]++;
        std::set<int> blocked;
        for (auto& [ei, m] : mult)
            if (m % 2) blocked.insert(ei);
        std::vector<char> reached(fs.face_darts.size(), 0);
        std::vector<int> stack{outer_face};
        reached[outer_face] = 1;
        while (!stack.empty()) {
            int f = stack.back();
            stack.pop_back();
            for (int d : fs.face_darts[f]) {
                if (blocked.count(d >> 1)) continue;
                int g2 = fs.dart_face[dart_reverse(d)];
                if (!reached[g2]) {
                    reached[g2] = 1;
                    stack.push_back(g2);
                }
            }
        }
        std::vector<int> inside;
        for (std::size_t f = 0; f < fs.face_darts.size(); ++f)
            if (!reached[f]) inside.push_back(static_cast<int>(f));
        return inside;
    }

    std::vector<int> incident_edge_ids(int vid) const {
        std::vector<int> out;
        for (int ei : rot_[vertex_index(vid)]) out.push_back(edges_[ei].id);
        return out;
    }

    int degree(int vid) const { return static_cast<int>(rot_[vertex_index(vid)].size()); }

    int other_endpoint(int eid, int vid) const {
        const Edge& e = edge(eid);
        EMU_INPUT_CHECK(e.u == vid || e.v == vid, "vertex not on edge");
        return e.u == vid ? e.v : e.u;
    }

    void set_weight(int eid, Rat w) {
        EMU_INPUT_CHECK(allow_zero_ ? w.sign() >= 0 : w.sign() > 0,
                        "edge " + std::to_string(eid) + " assigned non-positive weight");
        edges_[edge_index(eid)].w = std::move(w);
    }

    int max_edge_id() const {
        int m = -1;
        for (const Edge& e : edges_) m = std::max(m, e.id);
        return m;
    }
    int max_vertex_id() const {
        int m = -1;
        for (int v : vids_) m = std::max(m, v);
        return m;
    }

private:
    bool allow_zero_;
    std::vector<int> vids_;
    std::map<int, int> vid2idx_;
    std::vector<Edge> edges_;
    std::map<int, int> eid2idx_;
    std::vector<std::vector<int>> rot_; // per vertex index, edge indices ccw
};

} // namespace emu
