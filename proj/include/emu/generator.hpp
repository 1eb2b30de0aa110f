#pragma once

#include <array>
#include <string>
#include <vector>

#include "emu/instance.hpp"
#include "emu/prng.hpp"

namespace emu {

// Seed-reproducible benchmark instances.  "grid-ring" is an R x C grid
// with f-1 rectangular holes carved out; "random-planar" additionally
// drops a random diagonal into some cells.  Terminals sit on the outer
// boundary and on the hole boundaries; face 0 is always the outer face.
struct InstanceSpec {
    std::string kind = "grid-ring"; // or "random-planar"
    int rows = 5;
    int cols = 5;
    std::vector<int> terminals_per_face = {4};
    int weight_max = 9;
    std::uint64_t seed = 1;
};

namespace detail {

struct GridBuilder {
    int R, C;
    PlanarGraph g{false};
    std::vector<std::vector<char>> hole_cell; // [r][c], cell = [r,r+1]x[c,c+1]
    int next_eid = 0;

    GridBuilder(int rows, int cols) : R(rows), C(cols) {
        hole_cell.assign(R - 1, std::vector<char>(C - 1, 0));
    }

    int vid(int r, int c) const { return r * C + c; }
    bool vertex_alive(int r, int c, const std::vector<std::array<int, 4>>& holes) const {
        for (const auto& h : holes) {
            if (r > h[0] && r < h[1] && c > h[2] && c < h[3]) return false;
        }
        return true;
    }
    // Inside the closed rectangle of some hole but not on its perimeter.
    bool edge_carved(int r1, int c1, int r2, int c2,
                     const std::vector<std::array<int, 4>>& holes) const {
        for (const auto& h : holes) {
            bool in1 = r1 >= h[0] && r1 <= h[1] && c1 >= h[2] && c1 <= h[3];
            bool in2 = r2 >= h[0] && r2 <= h[1] && c2 >= h[2] && c2 <= h[3];
            if (!in1 || !in2) continue;
            bool on_perimeter;
            if (r1 == r2) { // horizontal edge
                on_perimeter = (r1 == h[0] || r1 == h[1]);
            } else if (c1 == c2) {
                on_perimeter = (c1 == h[2] || c1 == h[3]);
            } else {
                on_perimeter = false; // diagonals never survive inside a hole
            }
            if (!on_perimeter) return true;
        }
        return false;
    }
};

} // namespace detail

// Holes as vertex rectangles [rlo, rhi] x [clo, chi], spread along the
// horizontal axis with one-cell margins.
inline std::vector<std::array<int, 4>> plan_holes(int R, int C, int count) {
    std::vector<std::array<int, 4>> holes;
    if (count <= 0) return holes;
    EMU_INPUT_CHECK(R >= 5 && C >= 3 + 4 * count,
                    "SpecInfeasible: grid too small for " + std::to_string(count) + " hole(s)");
    int rlo = 2, rhi = R - 3;
    if (rhi <= rlo) { rlo = 1; rhi = R - 2; }
    int span = (C - 2) / count;
    for (int i = 0; i < count; ++i) {
        int clo = 2 + i * span;
        int chi = std::min(C - 3, clo + std::max(1, span - 4));
        if (chi <= clo) chi = clo + 1;
        EMU_INPUT_CHECK(chi <= C - 2, "SpecInfeasible: hole does not fit");
        holes.push_back({rlo, rhi, clo, chi});
    }
    return holes;
}

inline TerminalInstance gen_instance(const InstanceSpec& spec) {
    EMU_INPUT_CHECK(spec.kind == "grid-ring" || spec.kind == "random-planar",
                    "unknown generator kind: " + spec.kind);
    EMU_INPUT_CHECK(spec.rows >= 2 && spec.cols >= 2, "grid too small");
    EMU_INPUT_CHECK(!spec.terminals_per_face.empty(), "no terminal faces requested");
    EMU_INPUT_CHECK(spec.weight_max >= 1, "weight_max must be >= 1");
    int f = static_cast<int>(spec.terminals_per_face.size());

    Prng rng(spec.seed * 0x9e3779b97f4a7c15ULL + 17);
    int R = spec.rows, C = spec.cols;
    auto holes = plan_holes(R, C, f - 1);

    detail::GridBuilder b(R, C);
    // cells covered by holes (for diagonal placement)
    for (const auto& h : holes)
        for (int r = h[0]; r < h[1]; ++r)
            for (int c = h[2]; c < h[3]; ++c) b.hole_cell[r][c] = 1;

    for (int r = 0; r < R; ++r)
        for (int c = 0; c < C; ++c)
            if (b.vertex_alive(r, c, holes)) b.g.add_vertex(b.vid(r, c));

    auto wrand = [&]() { return Rat(rng.next_in(1, spec.weight_max)); };

    // edge id -> present; keyed by (vid1, vid2)
    std::map<std::pair<int, int>, int> eid_of;
    auto add_edge = [&](int r1, int c1, int r2, int c2) -> int {
        if (r1 < 0 || r2 < 0 || c1 < 0 || c2 < 0 || r1 >= R || r2 >= R || c1 >= C || c2 >= C)
            return -1;
        if (!b.vertex_alive(r1, c1, holes) || !b.vertex_alive(r2, c2, holes)) return -1;
        if (b.edge_carved(r1, c1, r2, c2, holes)) return -1;
        int a = b.vid(r1, c1), d = b.vid(r2, c2);
        int id = b.next_eid++;
        b.g.add_edge(id, a, d, wrand());
        eid_of[{std::min(a, d), std::max(a, d)}] = id;
        return id;
    };

    // Horizontal then vertical edges, in scan order so ids reproduce.
    for (int r = 0; r < R; ++r)
        for (int c = 0; c + 1 < C; ++c) add_edge(r, c, r, c + 1);
    for (int r = 0; r + 1 < R; ++r)
        for (int c = 0; c < C; ++c) add_edge(r, c, r + 1, c);

    // Diagonals for random-planar: at most one per cell, never in holes.
    std::map<std::pair<int, int>, int> diag_kind; // cell -> 1 '/' , 2 '\'
    if (spec.kind == "random-planar") {
        for (int r = 0; r + 1 < R; ++r) {
            for (int c = 0; c + 1 < C; ++c) {
                if (b.hole_cell[r][c]) continue;
                std::uint64_t roll = rng.next_below(4);
                if (roll == 0) {
                    int id = add_edge(r, c + 1, r + 1, c); // '/'
                    if (id >= 0) diag_kind[{r, c}] = 1;
                } else if (roll == 1) {
                    int id = add_edge(r, c, r + 1, c + 1); // '\'
                    if (id >= 0) diag_kind[{r, c}] = 2;
                }
            }
        }
    }

    // Rotations: counterclockwise by direction angle with +r up, +c right:
    // E, NE, N, NW, W, SW, S, SE.
    auto find_eid = [&](int a, int d) -> int {
        auto it = eid_of.find({std::min(a, d), std::max(a, d)});
        return it == eid_of.end() ? -1 : it->second;
    };
    for (int r = 0; r < R; ++r) {
        for (int c = 0; c < C; ++c) {
            if (!b.vertex_alive(r, c, holes)) continue;
            int v = b.vid(r, c);
            const int dr[8] = {0, 1, 1, 1, 0, -1, -1, -1};
            const int dc[8] = {1, 1, 0, -1, -1, -1, 0, 1};
            std::vector<int> rot;
            for (int k = 0; k < 8; ++k) {
                int nr = r + dr[k], nc = c + dc[k];
                if (nr < 0 || nc < 0 || nr >= R || nc >= C) continue;
                if (!b.vertex_alive(nr, nc, holes)) continue;
                int eid = find_eid(v, b.vid(nr, nc));
                if (eid < 0) continue;
                if (dr[k] != 0 && dc[k] != 0) {
                    // diagonal: confirm this cell actually carries it
                    int cr = std::min(r, nr), cc = std::min(c, nc);
                    auto it = diag_kind.find({cr, cc});
                    if (it == diag_kind.end()) continue;
                    bool is_slash = (dr[k] == 1 && dc[k] == -1) || (dr[k] == -1 && dc[k] == 1);
                    if ((it->second == 1) != is_slash) continue;
                }
                rot.push_back(eid);
            }
            b.g.set_rotation(v, rot);
        }
    }

    TerminalInstance inst;
    inst.g = std::move(b.g);

    // Outer walk: grid perimeter edges.
    std::vector<int> outer;
    for (int c = 0; c + 1 < C; ++c) outer.push_back(find_eid(b.vid(0, c), b.vid(0, c + 1)));
    for (int r = 0; r + 1 < R; ++r)
        outer.push_back(find_eid(b.vid(r, C - 1), b.vid(r + 1, C - 1)));
    for (int c = 0; c + 1 < C; ++c)
        outer.push_back(find_eid(b.vid(R - 1, c), b.vid(R - 1, c + 1)));
    for (int r = 0; r + 1 < R; ++r) outer.push_back(find_eid(b.vid(r, 0), b.vid(r + 1, 0)));
    inst.outer_walk = outer;

    // Face walks: outer first, then the holes.
    std::vector<std::vector<int>> face_walks;
    face_walks.push_back(outer);
    for (const auto& h : holes) {
        std::vector<int> walk;
        for (int c = h[2]; c < h[3]; ++c) walk.push_back(find_eid(b.vid(h[0], c), b.vid(h[0], c + 1)));
        for (int c = h[2]; c < h[3]; ++c) walk.push_back(find_eid(b.vid(h[1], c), b.vid(h[1], c + 1)));
        for (int r = h[0]; r < h[1]; ++r) walk.push_back(find_eid(b.vid(r, h[2]), b.vid(r + 1, h[2])));
        for (int r = h[0]; r < h[1]; ++r) walk.push_back(find_eid(b.vid(r, h[3]), b.vid(r + 1, h[3])));
        face_walks.push_back(walk);
    }

    // Terminal placement: evenly spread with seeded jitter along each
    // face boundary, read off in clockwise order.
    auto fs = inst.g.trace_faces();
    int outer_face = inst.g.find_face_by_edge_ids(fs, inst.outer_walk);
    for (int r = 0; r < f; ++r) {
        FaceSpec fsp;
        fsp.walk_edge_ids = face_walks[r];
        int fi = inst.g.find_face_by_edge_ids(fs, face_walks[r]);
        std::vector<int> cyc = TerminalInstance::clockwise_vertices(inst.g, fs, fi, outer_face);
        int want = spec.terminals_per_face[r];
        EMU_INPUT_CHECK(want >= 1, "each face needs at least one terminal");
        EMU_INPUT_CHECK(static_cast<std::size_t>(want) <= cyc.size(),
                        "SpecInfeasible: " + std::to_string(want) +
                            " terminals exceed boundary length " + std::to_string(cyc.size()));
        std::size_t n = cyc.size();
        std::size_t offset = rng.next_below(n);
        std::set<std::size_t> chosen;
        for (int i = 0; i < want; ++i) {
            std::size_t base = offset + (i * n) / want;
            std::size_t jitter = want < static_cast<int>(n) ? rng.next_below(std::max<std::size_t>(n / want, 1)) : 0;
            std::size_t pos = (base + jitter) % n;
            while (chosen.count(pos)) pos = (pos + 1) % n;
            chosen.insert(pos);
        }
        for (std::size_t i = 0; i < n; ++i) {
            std::size_t pos = (offset + i) % n;
            if (chosen.count(pos)) fsp.terminals_cw.push_back(cyc[pos]);
        }
        inst.faces.push_back(std::move(fsp));
    }

    inst.validate();
    return inst;
}

} // namespace emu
