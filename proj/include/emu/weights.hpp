#pragma once

#include <map>
#include <set>
#include <vector>

#include "emu/planar_graph.hpp"
#include "emu/shortest_path.hpp"
#include "emu/simplex.hpp"

namespace emu {

struct PathConstraint {
    int s = -1, t = -1;
    std::vector<int> edges;
};

// Witness of infeasibility: a flow on canonical paths that dominates a
// cheaper flow on simple paths edge by edge.
struct FarkasCertificate {
    std::vector<std::pair<PathConstraint, Rat>> canonical_flow; // F
    std::vector<std::pair<PathConstraint, Rat>> simple_flow;    // F'
};

struct WeightResult {
    bool feasible = false;
    std::map<int, Rat> weights; // edge id -> value (zero allowed)
    FarkasCertificate certificate;
    long long rounds = 0;
    long long pivots = 0;
};

inline Rat certificate_cost(const std::vector<std::pair<PathConstraint, Rat>>& flows,
                            const std::map<std::pair<int, int>, Rat>& targets) {
    Rat c(0);
    for (const auto& [p, f] : flows) {
        auto it = targets.find({std::min(p.s, p.t), std::max(p.s, p.t)});
        EMU_INPUT_CHECK(it != targets.end(), "certificate path without a distance target");
        c += f * it->second;
    }
    return c;
}

// Domination and the strict cost gap, checked exactly.
inline bool verify_certificate(const FarkasCertificate& cert,
                               const std::map<std::pair<int, int>, Rat>& targets) {
    for (const auto& [p, f] : cert.canonical_flow)
        if (f.sign() < 0) return false;
    for (const auto& [p, f] : cert.simple_flow)
        if (f.sign() < 0) return false;
    std::map<int, Rat> fe, fpe;
    for (const auto& [p, f] : cert.canonical_flow)
        for (int e : p.edges) fe[e] += f;
    for (const auto& [p, f] : cert.simple_flow)
        for (int e : p.edges) fpe[e] += f;
    for (const auto& [e, v] : fpe) {
        auto it = fe.find(e);
        if (it == fe.end()) {
            if (v.sign() > 0) return false;
        } else if (it->second < v) {
            return false;
        }
    }
    return certificate_cost(cert.canonical_flow, targets) <
           certificate_cost(cert.simple_flow, targets);
}

// Find nonnegative edge weights making every canonical path at most its
// pair's distance while no simple path between any terminal pair beats the
// pair's distance.  The exponential lower-constraint family is handled by
// a shortest-path separation oracle; each round adds the violated pairs'
// current shortest paths as constraints and re-solves.
inline WeightResult solve_weights(const PlanarGraph& skeleton, const std::vector<int>& terminals,
                                  const std::vector<PathConstraint>& canonicals,
                                  const std::map<std::pair<int, int>, Rat>& targets,
                                  const std::set<std::pair<int, int>>& equality_pairs,
                                  long long round_cap = 0, bool pin_off_canonical = false) {
    WeightResult out;
    if (round_cap <= 0)
        round_cap = 10 * static_cast<long long>(targets.size()) *
                    std::max<long long>(1, skeleton.edge_count());

    // Edges off every canonical path may carry any large value without
    // disturbing feasibility (upper constraints never see them, lower ones
    // only profit), so pinning them above every target confines both the
    // program and the separation oracle to the canonical sub-skeleton.
    std::map<int, Rat> pinned;
    if (pin_off_canonical) {
        std::set<int> canonical_edges;
        for (const PathConstraint& c : canonicals)
            canonical_edges.insert(c.edges.begin(), c.edges.end());
        Rat big(1);
        for (const auto& [key, d] : targets) big += d;
        for (const auto& e : skeleton.edges())
            if (!canonical_edges.count(e.id)) pinned[e.id] = big;
    }

    // LP columns: edges appearing in some constraint; others stay at 0
    std::map<int, int> col_of;
    std::vector<int> col_edge;
    auto column = [&](int eid) {
        EMU_INTERNAL_CHECK(!pinned.count(eid), "pinned edge entered the program");
        auto it = col_of.find(eid);
        if (it != col_of.end()) return it->second;
        int c = static_cast<int>(col_edge.size());
        col_of[eid] = c;
        col_edge.push_back(eid);
        return c;
    };

    struct StoredRow {
        PathConstraint path;
        bool upper;     // canonical <= target; otherwise >= target
        bool permanent; // canonical rows never leave the working set
        int slack_age = 0;
    };
    std::vector<StoredRow> stored;
    for (const PathConstraint& c : canonicals) {
        for (int e : c.edges) column(e);
        stored.push_back({c, true, true});
        // a canonical path is itself a simple path, so its lower constraint
        // holds a priori; seeding it pins the path to its exact target and
        // spares the separation oracle a round
        stored.push_back({c, false, true});
    }

    auto target_of = [&](int s, int t) -> const Rat& {
        auto it = targets.find({std::min(s, t), std::max(s, t)});
        EMU_INPUT_CHECK(it != targets.end(), "terminal pair without a distance target");
        return it->second;
    };

    for (long long round = 1;; ++round) {
        EMU_INTERNAL_CHECK(round <= round_cap,
                           "IterationCap: constraint generation did not converge");
        out.rounds = round;
        // assemble and solve
        std::vector<Simplex::Row> rows;
        for (const StoredRow& sr : stored) {
            Simplex::Row r;
            for (int e : sr.path.edges)
                r.coeffs.push_back({column(e), Rat(sr.upper ? 1 : -1)});
            const Rat& tgt = target_of(sr.path.s, sr.path.t);
            r.rhs = sr.upper ? tgt : -tgt;
            rows.push_back(std::move(r));
        }
        std::vector<Rat> cost(col_edge.size(), Rat(1));
        Simplex::Result res = Simplex::solve(static_cast<int>(col_edge.size()), rows, cost);
        out.pivots += res.pivots;
        if (res.status == Simplex::Status::Infeasible) {
            FarkasCertificate cert;
            for (std::size_t i = 0; i < stored.size(); ++i) {
                if (res.farkas_y[i].sign() <= 0) continue;
                if (stored[i].upper)
                    cert.canonical_flow.push_back({stored[i].path, res.farkas_y[i]});
                else
                    cert.simple_flow.push_back({stored[i].path, res.farkas_y[i]});
            }
            EMU_INTERNAL_CHECK(verify_certificate(cert, targets),
                               "extracted certificate fails its own arithmetic");
            out.feasible = false;
            out.certificate = std::move(cert);
            return out;
        }
        EMU_INTERNAL_CHECK(res.status == Simplex::Status::Optimal,
                           "weight program unbounded below");

        // separation: current shortest distances against the targets
        PlanarGraph weighted = skeleton;
        for (const auto& e : skeleton.edges()) {
            auto pit = pinned.find(e.id);
            if (pit != pinned.end()) {
                weighted.set_weight(e.id, pit->second);
                continue;
            }
            auto it = col_of.find(e.id);
            weighted.set_weight(e.id, it == col_of.end() ? Rat(0) : res.x[it->second]);
        }
        // age out generated cuts that have gone slack; they return through
        // the oracle if they ever bind again, and the working set stays
        // near the column count
        {
            std::vector<StoredRow> kept;
            for (std::size_t i = 0; i < stored.size(); ++i) {
                StoredRow& sr = stored[i];
                if (!sr.permanent) {
                    Rat lhs(0);
                    for (int e : sr.path.edges) lhs += weighted.edge(e).w;
                    const Rat& tgt = target_of(sr.path.s, sr.path.t);
                    sr.slack_age = lhs > tgt ? sr.slack_age + 1 : 0;
                }
                if (sr.permanent || sr.slack_age < 2) kept.push_back(std::move(sr));
            }
            stored = std::move(kept);
        }
        bool violated = false;
        for (std::size_t i = 0; i < terminals.size(); ++i) {
            PathTree tree(weighted, terminals[i]);
            for (std::size_t j = i + 1; j < terminals.size(); ++j) {
                const Rat& tgt = target_of(terminals[i], terminals[j]);
                TerminalPath p = tree.path_to(terminals[j]);
                if (p.length >= tgt) continue;
                violated = true;
                PathConstraint pc;
                pc.s = terminals[i];
                pc.t = terminals[j];
                pc.edges = p.edge_ids;
                for (int e : pc.edges) column(e);
                stored.push_back({std::move(pc), false, false});
            }
        }
        if (!violated) {
            out.feasible = true;
            for (std::size_t c = 0; c < col_edge.size(); ++c) out.weights[col_edge[c]] = res.x[c];
            for (const auto& [eid, w] : pinned) out.weights[eid] = w;
            for (const auto& e : skeleton.edges())
                if (!out.weights.count(e.id)) out.weights[e.id] = Rat(0);
            // audit with an independent pass: canonical paths exact on
            // equality pairs, nothing shorter than its target anywhere
            for (std::size_t i = 0; i < terminals.size(); ++i) {
                PathTree tree(weighted, terminals[i]);
                for (std::size_t j = i + 1; j < terminals.size(); ++j) {
                    const Rat& tgt = target_of(terminals[i], terminals[j]);
                    EMU_INTERNAL_CHECK(tree.dist(terminals[j]) >= tgt,
                                       "final weights undercut a terminal distance");
                }
            }
            for (const PathConstraint& c : canonicals) {
                Rat len(0);
                for (int e : c.edges) len += out.weights.at(e);
                const Rat& tgt = target_of(c.s, c.t);
                EMU_INTERNAL_CHECK(len <= tgt, "canonical path exceeds its target");
                if (equality_pairs.count({std::min(c.s, c.t), std::max(c.s, c.t)})) {
                    PathTree tree(weighted, c.s);
                    EMU_INTERNAL_CHECK(tree.dist(c.t) == tgt && len == tgt,
                                       "equality pair missed its exact distance");
                }
            }
            return out;
        }
    }
}

} // namespace emu
