#pragma once

#include <string>
#include <vector>

#include "emu/arrangement.hpp"
#include "emu/glue.hpp"
#include "emu/knz.hpp"
#include "emu/preprocess.hpp"
#include "emu/quarter_grid.hpp"
#include "emu/verify.hpp"
#include "emu/weights.hpp"

namespace emu {

struct PipelineStats {
    long long elim_iterations = 0;
    long long initial_bad_pairs = 0;
    long long lp_rounds = 0;
    long long lp_pivots = 0;
    std::size_t skeleton_vertices = 0;
    std::size_t emulator_vertices = 0;
    int max_critical_per_terminal = 0;
};

struct BuildResult {
    Emulator emulator;
    PipelineStats stats;
};

// canonical path as skeleton edge lists
inline PathConstraint canonical_constraint(const Skeleton& sk, const SkeletonGraph& sg,
                                           const CanonicalPath& cp) {
    PathConstraint pc;
    pc.s = cp.t;
    pc.t = cp.tp;
    CanonicalPieces pieces = canonical_pieces(sk, cp);
    auto piece_edges = [&](int s, int src, int end) {
        const auto& es = sg.strand_edges[s];
        std::vector<int> out;
        bool from_a = sk.arr.ends[s][0] == src;
        for (int q = 0; q <= end; ++q)
            out.push_back(from_a ? es[q] : es[es.size() - 1 - q]);
        return out;
    };
    auto ea = piece_edges(pieces.sA, pieces.srcA, pieces.endA);
    pc.edges.insert(pc.edges.end(), ea.begin(), ea.end());
    if (pieces.sB != pieces.sA || pieces.endB > 0) {
        auto eb = piece_edges(pieces.sB, pieces.srcB, pieces.endB);
        if (pieces.sB != pieces.sA) pc.edges.insert(pc.edges.end(), eb.begin(), eb.end());
    }
    return pc;
}

inline BuildResult build_emulator(const TerminalInstance& inst, int audit_every = 1) {
    BuildResult out;
    inst.validate();
    std::vector<int> terms = inst.all_terminals();
    auto targets = all_terminal_distances(inst);

    if (terms.size() == 1) {
        out.emulator.g.add_vertex(terms[0]);
        out.emulator.terminal_vertex[terms[0]] = terms[0];
        out.emulator.g.set_rotation(terms[0], {});
        out.stats.emulator_vertices = 1;
        return out;
    }

    SimplifiedInstance si = preprocess(inst);
    std::size_t f = si.inst.faces.size();

    SkeletonGraph sgraph;
    std::map<int, Rat> hstar_weights;
    bool have_host = f >= 2;
    if (have_host) {
        CriticalContext cx(si);
        CriticalPathSet cps = critical_paths(cx);
        for (int t : terms)
            out.stats.max_critical_per_terminal =
                std::max(out.stats.max_critical_per_terminal, cps.per_terminal_count(si, t));
        Skeleton sk = build_initial(cx, cps);
        EliminationStats est = eliminate_all(sk, audit_every);
        out.stats.elim_iterations = est.iterations;
        out.stats.initial_bad_pairs = est.initial_bad_pairs;
        check_canonical_crossing_pattern(sk);
        sgraph = to_graph(sk);
        out.stats.skeleton_vertices = sgraph.g.vertex_count();

        std::vector<PathConstraint> canonicals;
        std::set<std::pair<int, int>> equality;
        for (const CanonicalPath& cp : sk.canonicals) {
            canonicals.push_back(canonical_constraint(sk, sgraph, cp));
            equality.insert({std::min(cp.t, cp.tp), std::max(cp.t, cp.tp)});
        }
        WeightResult wr = solve_weights(sgraph.g, terms, canonicals, targets, equality, 0,
                                        /*pin_off_canonical=*/true);
        EMU_INTERNAL_CHECK(wr.feasible,
                           "Infeasible: the central weight program rejected a pipeline skeleton");
        out.stats.lp_rounds += wr.rounds;
        out.stats.lp_pivots += wr.pivots;
        hstar_weights = std::move(wr.weights);
    }

    // one-face emulators, with fresh interior ids above everything used so far
    int next_free = inst.g.max_vertex_id() + 1;
    if (have_host) next_free = std::max(next_free, sgraph.g.max_vertex_id() + 1);
    std::vector<QuarterGrid> parts;
    std::vector<std::vector<int>> face_terms;
    for (std::size_t r = 0; r < f; ++r) {
        std::vector<int> tr = si.inst.faces[r].terminals_cw;
        // a part nested in a hole keeps the plane orientation; the part
        // wrapped around the outside faces the host, so its boundary order
        // reverses
        if (static_cast<int>(r) == si.outer_terminal_face)
            std::reverse(tr.begin(), tr.end());
        face_terms.push_back(tr);
        std::map<std::pair<int, int>, Rat> sub;
        for (std::size_t i = 0; i < tr.size(); ++i)
            for (std::size_t j = i + 1; j < tr.size(); ++j) {
                int a = std::min(tr[i], tr[j]), b = std::max(tr[i], tr[j]);
                sub[{a, b}] = lookup_distance(targets, a, b);
            }
        OneFaceResult part = oneface_emulator(tr, next_free, sub);
        out.stats.lp_rounds += part.rounds;
        out.stats.lp_pivots += part.pivots;
        next_free = std::max(next_free, part.grid.g.max_vertex_id() + 1);
        parts.push_back(std::move(part.grid));
    }

    out.emulator = glue(have_host ? &sgraph : nullptr,
                        have_host ? &hstar_weights : nullptr, parts, face_terms);
    out.stats.emulator_vertices = out.emulator.g.vertex_count();
    return out;
}

} // namespace emu
