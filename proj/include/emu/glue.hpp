#pragma once

#include <map>
#include <string>
#include <vector>

#include "emu/arrangement.hpp"
#include "emu/quarter_grid.hpp"

namespace emu {

struct Emulator {
    PlanarGraph g{true};
    std::map<int, int> terminal_vertex;      // original terminal -> vertex
    std::map<int, std::string> provenance;   // edge id -> construction tag
};

// Place each one-face emulator inside its face of the central graph and
// identify the terminal copies.  The host keeps each terminal's rotation
// with the face gap at the wrap, and every part does the same, so the
// splice appends the part's stubs verbatim.
inline Emulator glue(const SkeletonGraph* host, const std::map<int, Rat>* host_weights,
                     const std::vector<QuarterGrid>& parts,
                     const std::vector<std::vector<int>>& face_terminals_cw) {
    Emulator out;
    int next_vid = 0, next_eid = 0;
    std::size_t host_vertices = 0;

    if (host) {
        for (int v : host->g.vertex_ids()) {
            out.g.add_vertex(v);
            next_vid = std::max(next_vid, v + 1);
        }
        host_vertices = host->g.vertex_count();
        for (const auto& e : host->g.edges()) {
            Rat w = host_weights ? host_weights->at(e.id) : e.w;
            out.g.add_edge(e.id, e.u, e.v, std::move(w));
            out.provenance[e.id] = "hstar";
            next_eid = std::max(next_eid, e.id + 1);
        }
        for (const auto& [t, vid] : host->terminal_vertex) out.terminal_vertex[t] = vid;
        // interior (crossing) rotations carry over; terminal ones are
        // rebuilt below with the parts spliced in
        std::set<int> host_terms;
        for (const auto& [t, vid] : host->terminal_vertex) host_terms.insert(vid);
        for (int v : host->g.vertex_ids())
            if (!host_terms.count(v)) out.g.set_rotation(v, host->g.rotation_ids(v));
    }

    std::map<int, std::vector<int>> extra_rot; // terminal -> appended stubs
    for (std::size_t r = 0; r < parts.size(); ++r) {
        const QuarterGrid& part = parts[r];
        EMU_INPUT_CHECK(part.terminals.size() == face_terminals_cw[r].size(),
                        "OrderMismatch: part terminal count differs from its face");
        // cyclic order must agree with the face
        {
            const auto& want = face_terminals_cw[r];
            bool ok = false;
            std::size_t n = want.size();
            for (std::size_t shift = 0; shift < n && !ok; ++shift) {
                bool eq = true;
                for (std::size_t i = 0; i < n && eq; ++i)
                    eq = part.terminals[(shift + i) % n] == want[i];
                ok = eq;
            }
            EMU_INPUT_CHECK(ok || n == 1,
                            "OrderMismatch: part terminals disagree with the face order");
        }
        // remap part interiors and edges
        std::map<int, int> vmap;
        for (int t : part.terminals) {
            if (!out.g.has_vertex(t)) {
                out.g.add_vertex(t);
                next_vid = std::max(next_vid, t + 1);
            }
            vmap[t] = t;
            out.terminal_vertex[t] = t;
        }
        for (int v : part.g.vertex_ids()) {
            if (vmap.count(v)) continue;
            vmap[v] = next_vid;
            out.g.add_vertex(next_vid++);
        }
        std::map<int, int> emap;
        for (const auto& e : part.g.edges()) {
            emap[e.id] = next_eid;
            out.g.add_edge(next_eid, vmap.at(e.u), vmap.at(e.v), e.w);
            out.provenance[next_eid] = "oneface:" + std::to_string(r);
            ++next_eid;
        }
        // rotations: interior vertices as-is; terminals splice into the gap
        for (int v : part.g.vertex_ids()) {
            std::vector<int> rot;
            for (int eid : part.g.rotation_ids(v)) rot.push_back(emap.at(eid));
            if (vmap.at(v) == v && out.terminal_vertex.count(v)) {
                auto it = part.rotation_for_glue.find(v);
                EMU_INPUT_CHECK(it != part.rotation_for_glue.end(),
                                "part lacks a glue rotation for terminal " + std::to_string(v));
                std::vector<int> stubs;
                for (int eid : it->second) stubs.push_back(emap.at(eid));
                auto& acc = extra_rot[v];
                acc.insert(acc.end(), stubs.begin(), stubs.end());
            } else {
                out.g.set_rotation(vmap.at(v), rot);
            }
        }
    }

    // terminal rotations: host fan first (gap at the wrap), then the part
    for (const auto& [t, vid] : out.terminal_vertex) {
        std::vector<int> rot;
        if (host && host->g.has_vertex(vid) && host->g.degree(vid) > 0)
            rot = host->g.rotation_ids(vid);
        auto it = extra_rot.find(t);
        if (it != extra_rot.end()) rot.insert(rot.end(), it->second.begin(), it->second.end());
        out.g.set_rotation(vid, rot);
    }

    out.g.validate_rotations();
    auto fs = out.g.trace_faces();
    out.g.check_euler(fs);

    // |V(H)| = |V(H*)| + sum over faces of (|V(H_r)| - |T_r|)
    std::size_t expect = host_vertices;
    for (std::size_t r = 0; r < parts.size(); ++r) {
        expect += parts[r].g.vertex_count() - parts[r].terminals.size();
        if (!host)
            expect += parts[r].terminals.size(); // standalone part keeps its terminals
    }
    EMU_INTERNAL_CHECK(out.g.vertex_count() == expect, "glued vertex count off the ledger");
    return out;
}

} // namespace emu
