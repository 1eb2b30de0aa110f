#include "doctest.h"

#include "emu/generator.hpp"
#include "emu/instance.hpp"
#include "emu/json_io.hpp"
#include "emu/planar_graph.hpp"
#include "emu/shortest_path.hpp"

#include <tuple>

using namespace emu;

namespace {

PlanarGraph triangle() {
    PlanarGraph g;
    for (int v : {1, 2, 3}) g.add_vertex(v);
    g.add_edge(0, 1, 2, Rat(1));
    g.add_edge(1, 2, 3, Rat(1));
    g.add_edge(2, 3, 1, Rat(1));
    g.set_rotation(1, {0, 2});
    g.set_rotation(2, {1, 0});
    g.set_rotation(3, {2, 1});
    return g;
}

// K4: triangle 1,2,3 with center 4, drawn 1=(0,0) 2=(2,0) 3=(1,2) 4=(1,0.7).
PlanarGraph k4() {
    PlanarGraph g;
    for (int v : {1, 2, 3, 4}) g.add_vertex(v);
    g.add_edge(0, 1, 2, Rat(1));
    g.add_edge(1, 2, 3, Rat(1));
    g.add_edge(2, 3, 1, Rat(1));
    g.add_edge(3, 1, 4, Rat(1));
    g.add_edge(4, 2, 4, Rat(1));
    g.add_edge(5, 3, 4, Rat(1));
    g.set_rotation(1, {0, 3, 2});
    g.set_rotation(2, {1, 4, 0});
    g.set_rotation(3, {2, 5, 1});
    g.set_rotation(4, {5, 3, 4});
    return g;
}

int find_edge(const PlanarGraph& g, int u, int v) {
    for (const auto& e : g.edges())
        if ((e.u == u && e.v == v) || (e.u == v && e.v == u)) return e.id;
    return -1;
}

std::vector<int> dart_walk(const PlanarGraph& g, const std::vector<int>& verts) {
    std::vector<int> darts;
    for (std::size_t i = 0; i < verts.size(); ++i) {
        int a = verts[i], b = verts[(i + 1) % verts.size()];
        int eid = find_edge(g, a, b);
        REQUIRE(eid >= 0);
        darts.push_back(g.dart_of(eid, a));
    }
    return darts;
}

// Independent oracle: enumerate all simple paths and pick the minimum of
// (length, hops, edge-id sequence).
struct BrutePath {
    Rat len;
    std::vector<int> eids;
    std::vector<int> verts;
    bool valid = false;
};

void brute_dfs(const PlanarGraph& g, int cur, int goal, std::vector<char>& used,
               std::vector<int>& eids, std::vector<int>& verts, Rat len, BrutePath& best) {
    if (cur == goal) {
        bool better = !best.valid;
        if (!better) {
            int c = Rat::cmp(len, best.len);
            if (c < 0) {
                better = true;
            } else if (c == 0) {
                if (eids.size() < best.eids.size()) {
                    better = true;
                } else if (eids.size() == best.eids.size()) {
                    // the path containing the smallest differing edge id loses
                    std::vector<int> a = eids, b = best.eids;
                    std::sort(a.begin(), a.end());
                    std::sort(b.begin(), b.end());
                    std::size_t i = 0;
                    while (i < a.size() && a[i] == b[i]) ++i;
                    if (i < a.size()) better = a[i] > b[i];
                }
            }
        }
        if (better) best = BrutePath{len, eids, verts, true};
        return;
    }
    for (int eid : g.incident_edge_ids(cur)) {
        const auto& e = g.edge(eid);
        int nxt = e.u == cur ? e.v : e.u;
        int ni = g.vertex_index(nxt);
        if (used[ni]) continue;
        used[ni] = 1;
        eids.push_back(eid);
        verts.push_back(nxt);
        brute_dfs(g, nxt, goal, used, eids, verts, len + e.w, best);
        verts.pop_back();
        eids.pop_back();
        used[ni] = 0;
    }
}

BrutePath brute_shortest(const PlanarGraph& g, int s, int t) {
    BrutePath best;
    std::vector<char> used(g.vertex_count(), 0);
    used[g.vertex_index(s)] = 1;
    std::vector<int> eids, verts{s};
    brute_dfs(g, s, t, used, eids, verts, Rat(0), best);
    return best;
}

} // namespace

TEST_CASE("triangle has two faces and passes Euler") {
    PlanarGraph g = triangle();
    g.validate_rotations();
    auto fs = g.trace_faces();
    CHECK(fs.size() == 2);
    g.check_euler(fs);
}

TEST_CASE("planar K4 has four faces") {
    PlanarGraph g = k4();
    g.validate_rotations();
    auto fs = g.trace_faces();
    CHECK(fs.size() == 4);
    g.check_euler(fs);

    // orientation pin: the face on the left of dart 1->2 is triangle {1,2,4},
    // and bounded faces trace counterclockwise
    int d12 = g.dart_of(0, 1);
    int f = fs.face_of_dart(d12);
    std::set<int> verts;
    for (int d : fs.face_darts[f]) verts.insert(g.dart_tail(d));
    CHECK(verts == std::set<int>{1, 2, 4});
    REQUIRE(fs.face_darts[f].size() == 3);
    // walk order 1 -> 2 -> 4 (counterclockwise in the drawing)
    std::vector<int> tails;
    for (int d : fs.face_darts[f]) tails.push_back(g.dart_tail(d));
    // rotate so the walk starts at 1
    while (tails[0] != 1) std::rotate(tails.begin(), tails.begin() + 1, tails.end());
    CHECK(tails == std::vector<int>{1, 2, 4});
}

TEST_CASE("3x3 grid has five faces (four cells plus outer)") {
    InstanceSpec spec;
    spec.rows = spec.cols = 3;
    spec.terminals_per_face = {4};
    spec.weight_max = 1;
    TerminalInstance inst = gen_instance(spec);
    auto fs = inst.g.trace_faces();
    CHECK(fs.size() == 5);
}

TEST_CASE("rotation missing an edge is rejected") {
    PlanarGraph g;
    g.add_vertex(1);
    g.add_vertex(2);
    g.add_vertex(3);
    g.add_edge(0, 1, 2, Rat(1));
    g.add_edge(1, 2, 3, Rat(1));
    g.set_rotation(1, {0});
    g.set_rotation(2, {0}); // edge 1 missing here
    g.set_rotation(3, {1});
    CHECK_THROWS_AS(g.validate_rotations(), input_error);
}

TEST_CASE("enclosed_faces on grid cells") {
    InstanceSpec spec;
    spec.rows = spec.cols = 3;
    spec.terminals_per_face = {4};
    spec.weight_max = 1;
    TerminalInstance inst = gen_instance(spec);
    const PlanarGraph& g = inst.g;
    auto fs = g.trace_faces();
    int outer = inst.resolve_outer(fs);

    SUBCASE("one cell encloses exactly its own face") {
        auto walk = dart_walk(g, {0, 1, 4, 3});
        auto inside = g.enclosed_faces(fs, outer, walk);
        REQUIRE(inside.size() == 1);
        // the enclosed face is bounded by exactly those four edges
        CHECK(fs.face_darts[inside[0]].size() == 4);
    }
    SUBCASE("outer boundary encloses all four cells") {
        auto walk = dart_walk(g, {0, 1, 2, 5, 8, 7, 6, 3});
        auto inside = g.enclosed_faces(fs, outer, walk);
        CHECK(inside.size() == 4);
    }
    SUBCASE("open walk is rejected") {
        auto walk = dart_walk(g, {0, 1, 4, 3});
        walk.pop_back();
        CHECK_THROWS_AS(g.enclosed_faces(fs, outer, walk), input_error);
    }
}

TEST_CASE("shortest path on a 3-vertex path graph") {
    PlanarGraph g;
    for (int v : {0, 1, 2}) g.add_vertex(v);
    g.add_edge(0, 0, 1, Rat(1));
    g.add_edge(1, 1, 2, Rat(1));
    g.set_rotation(0, {0});
    g.set_rotation(1, {0, 1});
    g.set_rotation(2, {1});
    PathTree tree(g, 0);
    TerminalPath p = tree.path_to(2);
    CHECK(p.length == Rat(2));
    CHECK(p.vertices == std::vector<int>{0, 1, 2});
}

TEST_CASE("shortest path on a lopsided 4-cycle takes the cheap side") {
    PlanarGraph g;
    for (int v : {0, 1, 2, 3}) g.add_vertex(v);
    g.add_edge(0, 0, 1, Rat(1));
    g.add_edge(1, 1, 2, Rat(1));
    g.add_edge(2, 2, 3, Rat(1));
    g.add_edge(3, 3, 0, Rat(10));
    g.set_rotation(0, {0, 3});
    g.set_rotation(1, {1, 0});
    g.set_rotation(2, {2, 1});
    g.set_rotation(3, {3, 2});
    PathTree tree(g, 0);
    CHECK(tree.dist(3) == Rat(3));
    CHECK(tree.path_to(3).vertices == std::vector<int>{0, 1, 2, 3});
}

TEST_CASE("unreachable vertex reports an error") {
    PlanarGraph g;
    g.add_vertex(0);
    g.add_vertex(1);
    g.add_vertex(2);
    g.add_edge(0, 0, 1, Rat(1));
    g.set_rotation(0, {0});
    g.set_rotation(1, {0});
    g.set_rotation(2, {});
    PathTree tree(g, 0);
    CHECK_THROWS_AS(tree.dist(2), input_error);
}

TEST_CASE("4x4 unit grid: tie-broken path matches brute force and is subpath-consistent") {
    InstanceSpec spec;
    spec.rows = spec.cols = 4;
    spec.terminals_per_face = {4};
    spec.weight_max = 1;
    TerminalInstance inst = gen_instance(spec);
    const PlanarGraph& g = inst.g;

    PathTree tree(g, 0);
    TerminalPath p = tree.path_to(15);
    CHECK(p.length == Rat(6));

    BrutePath oracle = brute_shortest(g, 0, 15);
    REQUIRE(oracle.valid);
    CHECK(oracle.len == p.length);
    CHECK(oracle.eids == p.edge_ids);

    // every prefix of the returned path is itself the returned path
    for (std::size_t i = 1; i + 1 < p.vertices.size(); ++i) {
        TerminalPath pre = tree.path_to(p.vertices[i]);
        CHECK(std::vector<int>(p.vertices.begin(), p.vertices.begin() + i + 1) == pre.vertices);
    }
}

TEST_CASE("returned shortest paths pairwise intersect in a single contiguous stretch") {
    InstanceSpec spec;
    spec.rows = 4;
    spec.cols = 5;
    spec.terminals_per_face = {6};
    spec.weight_max = 4;
    for (std::uint64_t seed : {1ULL, 2ULL, 3ULL, 9ULL}) {
        spec.seed = seed;
        TerminalInstance inst = gen_instance(spec);
        const PlanarGraph& g = inst.g;
        std::vector<TerminalPath> paths;
        for (int s : g.vertex_ids()) {
            if (s % 3 != 0) continue;
            PathTree tree(g, s);
            for (int t : g.vertex_ids())
                if (t > s && t % 4 == 0) paths.push_back(tree.path_to(t));
        }
        for (std::size_t i = 0; i < paths.size(); ++i) {
            for (std::size_t j = i + 1; j < paths.size(); ++j) {
                std::set<int> a(paths[i].vertices.begin(), paths[i].vertices.end());
                std::vector<int> shared;
                for (int v : paths[j].vertices)
                    if (a.count(v)) shared.push_back(v);
                if (shared.size() <= 1) continue;
                // shared vertices must be contiguous along both paths
                for (const TerminalPath* p : {&paths[i], &paths[j]}) {
                    std::set<int> sh(shared.begin(), shared.end());
                    int first = -1, last = -1;
                    for (std::size_t k = 0; k < p->vertices.size(); ++k) {
                        if (sh.count(p->vertices[k])) {
                            if (first < 0) first = static_cast<int>(k);
                            last = static_cast<int>(k);
                        }
                    }
                    CHECK(last - first + 1 == static_cast<int>(shared.size()));
                }
            }
        }
    }
}

TEST_CASE("all_terminal_distances basics") {
    SUBCASE("single terminal gives an empty table") {
        PlanarGraph g;
        g.add_vertex(0);
        g.add_vertex(1);
        g.add_edge(0, 0, 1, Rat(5));
        g.set_rotation(0, {0});
        g.set_rotation(1, {0});
        TerminalInstance inst;
        inst.g = std::move(g);
        inst.outer_walk = {0};
        // degenerate single-edge graph: both sides of the edge bound one face
        FaceSpec f;
        f.walk_edge_ids = {0};
        f.terminals_cw = {0};
        inst.faces.push_back(f);
        auto d = all_terminal_distances(inst);
        CHECK(d.empty());
    }
    SUBCASE("two terminals joined by a weight-5 edge") {
        PlanarGraph g;
        g.add_vertex(0);
        g.add_vertex(1);
        g.add_edge(0, 0, 1, Rat(5));
        g.set_rotation(0, {0});
        g.set_rotation(1, {0});
        TerminalInstance inst;
        inst.g = std::move(g);
        inst.outer_walk = {0};
        FaceSpec f;
        f.walk_edge_ids = {0};
        f.terminals_cw = {0, 1};
        inst.faces.push_back(f);
        auto d = all_terminal_distances(inst);
        REQUIRE(d.size() == 1);
        CHECK(lookup_distance(d, 0, 1) == Rat(5));
        CHECK(lookup_distance(d, 1, 0) == Rat(5));
    }
}

TEST_CASE("generator determinism and validation") {
    InstanceSpec spec;
    spec.kind = "random-planar";
    spec.rows = 6;
    spec.cols = 11;
    spec.terminals_per_face = {4, 3, 3};
    spec.weight_max = 7;
    spec.seed = 42;
    TerminalInstance a = gen_instance(spec);
    TerminalInstance b = gen_instance(spec);
    CHECK(instance_to_json(a) == instance_to_json(b));
    a.validate();
    CHECK(a.faces.size() == 3);

    spec.seed = 43;
    TerminalInstance c = gen_instance(spec);
    CHECK(instance_to_json(a) != instance_to_json(c));

    SUBCASE("terminal overflow is rejected") {
        InstanceSpec bad;
        bad.rows = bad.cols = 3;
        bad.terminals_per_face = {100};
        CHECK_THROWS_AS(gen_instance(bad), input_error);
    }
}

TEST_CASE("instance JSON round trip") {
    InstanceSpec spec;
    spec.rows = 5;
    spec.cols = 7;
    spec.terminals_per_face = {4, 4};
    spec.seed = 7;
    TerminalInstance inst = gen_instance(spec);
    Json j = instance_to_json(inst);
    TerminalInstance back = instance_from_json(j);
    back.validate();
    CHECK(instance_to_json(back) == j);

    SUBCASE("non-positive weights are rejected") {
        Json bad = j;
        bad["edges"][0]["w"] = "0";
        CHECK_THROWS_AS(instance_from_json(bad), input_error);
        bad["edges"][0]["w"] = "-3/2";
        CHECK_THROWS_AS(instance_from_json(bad), input_error);
    }
}
