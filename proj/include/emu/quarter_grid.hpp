#pragma once

#include <map>
#include <vector>

#include "emu/weights.hpp"

namespace emu {

// One-face emulator skeleton on m + m(m-1)/2 vertices.  Terminal t_i heads
// a horizontal row of vertices p_{i,j} (i < j <= m); column j descends
// through p_{1,j}..p_{j-1,j} into t_j.  The designated path for a pair
// (i, j) is L-shaped: along row i to column j, then down to t_j.  Terminals
// sit on the outer face in their input order; rotations put the outer gap
// between the upward and rightward stubs, so a host can splice the fan in
// verbatim.
struct QuarterGrid {
    PlanarGraph g{true};
    std::vector<int> terminals; // caller ids, clockwise on the outer face
    std::vector<PathConstraint> l_paths;
    std::map<int, std::vector<int>> rotation_for_glue; // terminal -> stub edges
};

inline QuarterGrid build_quarter_grid(const std::vector<int>& terminal_ids, int first_free_id) {
    int m = static_cast<int>(terminal_ids.size());
    EMU_INPUT_CHECK(m >= 1, "a quarter grid needs at least one terminal");
    QuarterGrid qg;
    qg.terminals = terminal_ids;
    for (int t : terminal_ids) qg.g.add_vertex(t);
    if (m == 1) return qg;

    if (m == 2) {
        qg.g.add_edge(0, terminal_ids[0], terminal_ids[1], Rat(0));
        qg.g.set_rotation(terminal_ids[0], {0});
        qg.g.set_rotation(terminal_ids[1], {0});
        qg.rotation_for_glue[terminal_ids[0]] = {0};
        qg.rotation_for_glue[terminal_ids[1]] = {0};
        PathConstraint pc;
        pc.s = terminal_ids[0];
        pc.t = terminal_ids[1];
        pc.edges = {0};
        qg.l_paths.push_back(pc);
        return qg;
    }

    // The staircase drawing walks t_1..t_m counterclockwise around the
    // outer face, so build on the reversed list to present the caller's
    // order clockwise.
    std::vector<int> tid(terminal_ids.rbegin(), terminal_ids.rend());

    // interior ids
    std::map<std::pair<int, int>, int> pid;
    int next = first_free_id;
    for (int i = 1; i <= m; ++i)
        for (int j = i + 1; j <= m; ++j) {
            pid[{i, j}] = next;
            qg.g.add_vertex(next++);
        }
    auto node = [&](int i, int j) { return i == j ? tid[i - 1] : pid.at({i, j}); };

    int eid = 0;
    std::map<std::pair<int, int>, int> row_edge; // (i, j): node(i,j-1) -- node(i,j)
    std::map<std::pair<int, int>, int> col_edge; // (i, j): node(i,j) -- node(i+1,j)
    for (int i = 1; i <= m; ++i)
        for (int j = i + 1; j <= m; ++j) {
            row_edge[{i, j}] = eid;
            qg.g.add_edge(eid++, node(i, j - 1), node(i, j), Rat(0));
        }
    for (int j = 1; j <= m; ++j)
        for (int i = 1; i < j; ++i) {
            col_edge[{i, j}] = eid;
            qg.g.add_edge(eid++, node(i, j), node(i + 1, j), Rat(0));
        }

    // rotations, ccw = E, N, W, S with rows drawn to the right and columns
    // descending
    for (int i = 1; i <= m; ++i) {
        for (int j = i; j <= m; ++j) {
            std::vector<int> rot;
            if (i == j) {
                // terminal: E then N, outer gap at the wrap
                if (j < m) rot.push_back(row_edge.at({i, j + 1}));
                if (i > 1) rot.push_back(col_edge.at({i - 1, j}));
                qg.g.set_rotation(tid[i - 1], rot);
                qg.rotation_for_glue[tid[i - 1]] = rot;
            } else {
                if (j < m) rot.push_back(row_edge.at({i, j + 1})); // E
                if (i > 1) rot.push_back(col_edge.at({i - 1, j})); // N
                rot.push_back(row_edge.at({i, j}));                // W
                rot.push_back(col_edge.at({i, j}));                // S
                qg.g.set_rotation(node(i, j), rot);
            }
        }
    }
    qg.g.validate_rotations();
    auto fs = qg.g.trace_faces();
    qg.g.check_euler(fs);

    for (int i = 1; i <= m; ++i)
        for (int j = i + 1; j <= m; ++j) {
            PathConstraint pc;
            pc.s = tid[i - 1];
            pc.t = tid[j - 1];
            for (int q = i + 1; q <= j; ++q) pc.edges.push_back(row_edge.at({i, q}));
            for (int q = i; q < j; ++q) pc.edges.push_back(col_edge.at({q, j}));
            qg.l_paths.push_back(pc);
        }
    return qg;
}

struct OneFaceResult {
    QuarterGrid grid;
    std::map<int, Rat> weights;
    long long rounds = 0;
    long long pivots = 0;
};

// Weighted one-face emulator: every pairwise distance is met exactly.
// Feasibility is guaranteed when the targets come from a planar graph with
// the terminals on one face in this cyclic order; anything else may
// legitimately fail and surfaces as an internal error with a certificate.
inline OneFaceResult oneface_emulator(const std::vector<int>& terminal_ids, int first_free_id,
                                      const std::map<std::pair<int, int>, Rat>& targets) {
    OneFaceResult out;
    out.grid = build_quarter_grid(terminal_ids, first_free_id);
    if (terminal_ids.size() < 2) return out;
    std::set<std::pair<int, int>> equality;
    for (std::size_t i = 0; i < terminal_ids.size(); ++i)
        for (std::size_t j = i + 1; j < terminal_ids.size(); ++j)
            equality.insert({std::min(terminal_ids[i], terminal_ids[j]),
                             std::max(terminal_ids[i], terminal_ids[j])});
    WeightResult wr =
        solve_weights(out.grid.g, terminal_ids, out.grid.l_paths, targets, equality);
    EMU_INTERNAL_CHECK(wr.feasible,
                       "Infeasible: one-face targets admit no quarter-grid weights");
    out.weights = std::move(wr.weights);
    out.rounds = wr.rounds;
    out.pivots = wr.pivots;
    for (const auto& [eid, w] : out.weights) out.grid.g.set_weight(eid, w);
    return out;
}

} // namespace emu
