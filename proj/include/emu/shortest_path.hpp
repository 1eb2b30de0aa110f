#pragma once

#include <queue>
#include <vector>

#include "emu/planar_graph.hpp"

namespace emu {

struct TerminalPath {
    int s = -1, t = -1;
    std::vector<int> vertices; // s ... t
    std::vector<int> edge_ids; // one fewer than vertices
    Rat length;
};

// Single-source shortest paths with a graph-wide deterministic tie-break:
// paths are compared by (length, hop count, edge-id set), the last by a
// symbolic perturbation that charges edge e an extra eps^e.  Of two
// otherwise-tied paths the one containing the smallest edge id outside
// the other loses.  All three components are sums over edges, so the key
// is direction-independent and fully additive: the selected paths are
// unique, subpath-consistent (any subpath of a selected path is the
// selected path for its endpoints), and two selected paths always meet
// in a single contiguous stretch.
class PathTree {
public:
    PathTree(const PlanarGraph& g, int source_vid) : g_(&g), source_(source_vid) {
        run();
    }

    const PlanarGraph& graph() const { return *g_; }
    int source() const { return source_; }

    bool reached(int vid) const { return reached_[g_->vertex_index(vid)] != 0; }
    const Rat& dist(int vid) const {
        int vi = g_->vertex_index(vid);
        EMU_INPUT_CHECK(reached_[vi], "Unreachable: no path from " + std::to_string(source_) +
                                          " to " + std::to_string(vid));
        return dist_[vi];
    }
    int hops(int vid) const { return hops_[g_->vertex_index(vid)]; }

    TerminalPath path_to(int vid) const {
        int vi = g_->vertex_index(vid);
        EMU_INPUT_CHECK(reached_[vi], "Unreachable: no path from " + std::to_string(source_) +
                                          " to " + std::to_string(vid));
        TerminalPath p;
        p.s = source_;
        p.t = vid;
        p.length = dist_[vi];
        int cur = vi;
        while (parent_dart_[cur] >= 0) {
            int d = parent_dart_[cur];
            p.edge_ids.push_back(g_->dart_edge_id(d));
            p.vertices.push_back(g_->dart_head(d));
            cur = g_->vertex_index(g_->dart_tail(d));
        }
        p.vertices.push_back(source_);
        std::reverse(p.vertices.begin(), p.vertices.end());
        std::reverse(p.edge_ids.begin(), p.edge_ids.end());
        return p;
    }

private:
    const PlanarGraph* g_;
    int source_;
    std::vector<Rat> dist_;
    std::vector<int> hops_;
    std::vector<int> parent_dart_; // dart ending at the vertex, -1 at source
    std::vector<char> reached_;
    std::vector<char> settled_;

    // Sorted edge-id set of the current tree path to vi.
    std::vector<int> edge_set_of(int vi) const {
        std::vector<int> seq;
        int cur = vi;
        while (parent_dart_[cur] >= 0) {
            seq.push_back(g_->dart_edge_id(parent_dart_[cur]));
            cur = g_->vertex_index(g_->dart_tail(parent_dart_[cur]));
        }
        std::sort(seq.begin(), seq.end());
        return seq;
    }

    // True when the candidate path (tree path to ui, then cand_eid) beats
    // the incumbent tree path at vi.  Lengths and hop counts already tied;
    // the path holding the smallest id in the symmetric difference carries
    // the larger perturbation and loses.
    bool perturbation_improves(int ui, int cand_eid, int vi) const {
        std::vector<int> a = edge_set_of(ui);
        a.insert(std::lower_bound(a.begin(), a.end(), cand_eid), cand_eid);
        std::vector<int> b = edge_set_of(vi);
        std::size_t i = 0, j = 0;
        while (i < a.size() && j < b.size()) {
            if (a[i] == b[j]) {
                ++i;
                ++j;
            } else if (a[i] < b[j]) {
                return false; // candidate holds the smaller differing id
            } else {
                return true;
            }
        }
        if (i < a.size()) return false;
        return j < b.size();
    }

    void run() {
        std::size_t n = g_->vertex_count();
        dist_.assign(n, Rat(0));
        hops_.assign(n, 0);
        parent_dart_.assign(n, -1);
        reached_.assign(n, 0);
        settled_.assign(n, 0);

        struct Item {
            Rat d;
            int hops;
            int vi;
            std::uint64_t stamp;
        };
        struct Cmp {
            bool operator()(const Item& a, const Item& b) const {
                int c = Rat::cmp(a.d, b.d);
                if (c != 0) return c > 0;
                return a.hops > b.hops;
            }
        };
        std::priority_queue<Item, std::vector<Item>, Cmp> pq;
        std::vector<std::uint64_t> stamp(n, 0);

        int si = g_->vertex_index(source_);
        reached_[si] = 1;
        pq.push(Item{Rat(0), 0, si, 0});

        while (!pq.empty()) {
            Item it = pq.top();
            pq.pop();
            if (settled_[it.vi] || it.stamp != stamp[it.vi]) continue;
            settled_[it.vi] = 1;
            int uvid = g_->vertex_ids()[it.vi];
            for (int eid : g_->incident_edge_ids(uvid)) {
                const PlanarGraph::Edge& e = g_->edge(eid);
                int wvid = e.u == uvid ? e.v : e.u;
                int wi = g_->vertex_index(wvid);
                if (settled_[wi]) continue;
                Rat nd = dist_[it.vi] + e.w;
                int nh = hops_[it.vi] + 1;
                bool better = false;
                if (!reached_[wi]) {
                    better = true;
                } else {
                    int c = Rat::cmp(nd, dist_[wi]);
                    if (c < 0) {
                        better = true;
                    } else if (c == 0) {
                        if (nh < hops_[wi]) {
                            better = true;
                        } else if (nh == hops_[wi]) {
                            better = perturbation_improves(it.vi, eid, wi);
                        }
                    }
                }
                if (better) {
                    reached_[wi] = 1;
                    dist_[wi] = nd;
                    hops_[wi] = nh;
                    parent_dart_[wi] = g_->dart_of(eid, uvid);
                    ++stamp[wi];
                    pq.push(Item{dist_[wi], nh, wi, stamp[wi]});
                }
            }
        }
    }
};

} // namespace emu
