#pragma once

#include <map>
#include <set>
#include <vector>

#include "emu/glue.hpp"
#include "emu/instance.hpp"

namespace emu {

// Baseline distance-preserving minor: the union of all terminal shortest
// paths with every induced path between special vertices (terminals and
// endpoints of pairwise path intersections) contracted to one edge.
struct KnzResult {
    Emulator emulator;
    std::size_t special_vertices = 0; // non-terminal special vertices
};

inline KnzResult build_knz_minor(const TerminalInstance& inst) {
    const PlanarGraph& g = inst.g;
    std::vector<int> terms = inst.all_terminals();
    std::map<int, PathTree> trees;
    for (int t : terms) trees.emplace(t, PathTree(g, t));

    std::vector<TerminalPath> paths;
    for (std::size_t i = 0; i < terms.size(); ++i)
        for (std::size_t j = i + 1; j < terms.size(); ++j)
            paths.push_back(trees.at(terms[i]).path_to(terms[j]));

    std::set<int> used;
    for (const TerminalPath& p : paths) used.insert(p.edge_ids.begin(), p.edge_ids.end());

    std::set<int> special(terms.begin(), terms.end());
    for (std::size_t i = 0; i < paths.size(); ++i) {
        std::set<int> vi(paths[i].vertices.begin(), paths[i].vertices.end());
        for (std::size_t j = i + 1; j < paths.size(); ++j) {
            // the intersection is one contiguous stretch; its ends are special
            std::vector<int> shared;
            for (int v : paths[j].vertices)
                if (vi.count(v)) shared.push_back(v);
            if (shared.empty()) continue;
            special.insert(shared.front());
            special.insert(shared.back());
        }
    }

    // walk chains of the union graph between special vertices
    auto union_neighbors = [&](int v) {
        std::vector<std::pair<int, int>> out; // (edge id, other endpoint)
        for (int eid : g.incident_edge_ids(v))
            if (used.count(eid)) out.push_back({eid, g.other_endpoint(eid, v)});
        return out;
    };
    // vertices kept: special vertices that appear in the union, plus any
    // union vertex of degree != 2 (safety: covered by special by theory)
    std::set<int> union_verts;
    for (const TerminalPath& p : paths)
        union_verts.insert(p.vertices.begin(), p.vertices.end());
    for (int v : union_verts) {
        if (union_neighbors(v).size() != 2)
            EMU_INTERNAL_CHECK(special.count(v),
                               "union vertex of degree != 2 escaped the special set");
    }

    KnzResult out;
    Emulator& em = out.emulator;
    for (int v : union_verts)
        if (special.count(v)) em.g.add_vertex(v);
    for (int t : terms) em.terminal_vertex[t] = t;
    out.special_vertices = em.g.vertex_count() - terms.size();

    // contract maximal chains; rotations carry over with chain edges
    // replaced by the contracted edge, so the minor stays plane
    int next_eid = 0;
    std::map<std::pair<int, int>, int> chain_edge; // (special v, first union eid) -> new eid
    std::map<int, std::vector<int>> rot;           // per special vertex, new edge ids
    std::set<std::pair<int, int>> walked;
    for (int v : union_verts) {
        if (!special.count(v)) continue;
        for (int eid : g.incident_edge_ids(v)) {
            if (!used.count(eid)) continue;
            if (walked.count({v, eid})) continue;
            // walk the chain starting with (v, eid)
            Rat len(0);
            int prev = v, cur = v, via = eid;
            std::vector<std::pair<int, int>> steps;
            do {
                steps.push_back({cur, via});
                len += g.edge(via).w;
                int nxt = g.other_endpoint(via, cur);
                if (special.count(nxt)) {
                    cur = nxt;
                    break;
                }
                auto nb = union_neighbors(nxt);
                EMU_INTERNAL_CHECK(nb.size() == 2, "chain interior must have degree two");
                int nvia = nb[0].first == via ? nb[1].first : nb[0].first;
                prev = cur;
                cur = nxt;
                via = nvia;
            } while (true);
            (void)prev;
            int id = next_eid++;
            em.g.add_edge(id, v, cur, len);
            em.provenance[id] = "baseline";
            walked.insert({v, eid});
            walked.insert({cur, steps.back().second});
            chain_edge[{v, eid}] = id;
            chain_edge[{cur, steps.back().second}] = id;
        }
    }
    for (int v : union_verts) {
        if (!special.count(v)) continue;
        std::vector<int> r;
        for (int eid : g.incident_edge_ids(v))
            if (used.count(eid)) r.push_back(chain_edge.at({v, eid}));
        em.g.set_rotation(v, r);
    }
    em.g.validate_rotations();
    auto fs = em.g.trace_faces();
    em.g.check_euler(fs);
    return out;
}

} // namespace emu
