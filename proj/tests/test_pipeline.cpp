#include "doctest.h"

#include "emu/generator.hpp"
#include "emu/knz.hpp"
#include "emu/pipeline.hpp"
#include "emu/verify.hpp"
#include "emu/wye_delta.hpp"

using namespace emu;

TEST_CASE("end to end: one-face instances come out exact") {
    for (std::uint64_t seed : {1ULL, 4ULL, 9ULL}) {
        InstanceSpec spec;
        spec.rows = 5;
        spec.cols = 5;
        spec.terminals_per_face = {5};
        spec.weight_max = 8;
        spec.seed = seed;
        TerminalInstance inst = gen_instance(spec);
        BuildResult br = build_emulator(inst);
        VerifyReport rep = verify_emulator(inst, br.emulator);
        CHECK(rep.pass());
        int m = 5;
        CHECK(br.emulator.g.vertex_count() == static_cast<std::size_t>(m + m * (m - 1) / 2));
    }
}

TEST_CASE("end to end: two-face instances come out exact") {
    for (auto kind : {"grid-ring", "random-planar"}) {
        for (std::uint64_t seed : {2ULL, 7ULL, 12ULL}) {
            InstanceSpec spec;
            spec.kind = kind;
            spec.rows = 6;
            spec.cols = 9;
            spec.terminals_per_face = {4, 4};
            spec.weight_max = 9;
            spec.seed = seed;
            TerminalInstance inst = gen_instance(spec);
            BuildResult br = build_emulator(inst);
            VerifyReport rep = verify_emulator(inst, br.emulator);
            if (!rep.pass()) {
                for (const auto& row : rep.rows)
                    if (!row.equal)
                        MESSAGE("pair ", row.s, "-", row.t, ": g=", row.dist_g.to_string(),
                                " h=", row.dist_h.to_string());
                MESSAGE("planar=", rep.planar, " ", rep.planar_error);
            }
            CHECK(rep.pass());
        }
    }
}

TEST_CASE("end to end: three-face instance with reroutes comes out exact") {
    InstanceSpec spec;
    spec.kind = "random-planar";
    spec.rows = 7;
    spec.cols = 13;
    spec.terminals_per_face = {6, 6, 6};
    spec.weight_max = 9;
    spec.seed = 4081;
    TerminalInstance inst = gen_instance(spec);
    BuildResult br = build_emulator(inst);
    CHECK(br.stats.elim_iterations >= 1);
    VerifyReport rep = verify_emulator(inst, br.emulator);
    CHECK(rep.pass());
}

TEST_CASE("knz baseline: star, path, and generated instances stay exact") {
    SUBCASE("path with two end terminals contracts to one edge") {
        TerminalInstance inst;
        for (int v : {0, 1, 2, 3}) inst.g.add_vertex(v);
        inst.g.add_edge(0, 0, 1, Rat(2));
        inst.g.add_edge(1, 1, 2, Rat(3));
        inst.g.add_edge(2, 2, 3, Rat(4));
        inst.g.set_rotation(0, {0});
        inst.g.set_rotation(1, {0, 1});
        inst.g.set_rotation(2, {1, 2});
        inst.g.set_rotation(3, {2});
        inst.outer_walk = {0, 1, 2, 2, 1, 0};
        FaceSpec f;
        f.walk_edge_ids = inst.outer_walk;
        f.terminals_cw = {0, 3};
        inst.faces.push_back(f);
        KnzResult kr = build_knz_minor(inst);
        CHECK(kr.emulator.g.vertex_count() == 2);
        CHECK(kr.emulator.g.edge_count() == 1);
        CHECK(kr.emulator.g.edges()[0].w == Rat(9));
    }
    SUBCASE("star with three leaf terminals keeps its hub") {
        TerminalInstance inst;
        for (int v : {0, 1, 2, 3}) inst.g.add_vertex(v);
        inst.g.add_edge(0, 0, 1, Rat(1));
        inst.g.add_edge(1, 0, 2, Rat(2));
        inst.g.add_edge(2, 0, 3, Rat(3));
        inst.g.set_rotation(0, {0, 1, 2});
        inst.g.set_rotation(1, {0});
        inst.g.set_rotation(2, {1});
        inst.g.set_rotation(3, {2});
        inst.outer_walk = {0, 1, 1, 2, 2, 0};
        FaceSpec f;
        f.walk_edge_ids = inst.outer_walk;
        f.terminals_cw = {1, 2, 3};
        inst.faces.push_back(f);
        KnzResult kr = build_knz_minor(inst);
        CHECK(kr.emulator.g.vertex_count() == 4);
        VerifyReport rep = verify_emulator(inst, kr.emulator);
        CHECK(rep.pass());
    }
    SUBCASE("generated instances verify and respect the special-vertex bound") {
        for (std::uint64_t seed : {3ULL, 8ULL}) {
            InstanceSpec spec;
            spec.kind = "random-planar";
            spec.rows = 6;
            spec.cols = 9;
            spec.terminals_per_face = {4, 4};
            spec.weight_max = 7;
            spec.seed = seed;
            TerminalInstance inst = gen_instance(spec);
            KnzResult kr = build_knz_minor(inst);
            VerifyReport rep = verify_emulator(inst, kr.emulator);
            CHECK(rep.pass());
            std::size_t k = inst.all_terminals().size();
            std::size_t pairs = k * (k - 1) / 2;
            CHECK(kr.special_vertices <= 2 * (pairs * (pairs - 1) / 2));
        }
    }
}

TEST_CASE("verifier flags corrupted weights") {
    InstanceSpec spec;
    spec.rows = 5;
    spec.cols = 7;
    spec.terminals_per_face = {4, 3};
    spec.weight_max = 6;
    spec.seed = 6;
    TerminalInstance inst = gen_instance(spec);
    BuildResult br = build_emulator(inst);
    REQUIRE(verify_emulator(inst, br.emulator).pass());
    // corrupt one weight by +1: only affected pairs may flip
    Emulator bad = br.emulator;
    int victim = -1;
    for (const auto& e : bad.g.edges())
        if (e.w.sign() > 0) victim = e.id;
    REQUIRE(victim >= 0);
    // lowering a positive weight must break at least one pair
    bad.g.set_weight(victim, Rat(0));
    VerifyReport rep = verify_emulator(inst, bad);
    // either some pair got shorter than the input distance, or the victim
    // edge was off every shortest path; lowering the heaviest edge of a
    // shortest path always breaks it, so scan for a breaking victim
    if (rep.all_equal) {
        bool broke = false;
        for (const auto& e : br.emulator.g.edges()) {
            if (e.w.sign() <= 0) continue;
            Emulator b2 = br.emulator;
            b2.g.set_weight(e.id, Rat(0));
            if (!verify_emulator(inst, b2).all_equal) {
                broke = true;
                break;
            }
        }
        CHECK(broke);
    } else {
        CHECK(!rep.all_equal);
    }
}

TEST_CASE("wye-delta equivalence on fixed and random capacities") {
    // unit capacities: triangle sides are all 1/2 and the min cut at u is 1
    TriangleCaps t = wye_to_delta(Rat(1), Rat(1), Rat(1));
    CHECK(t.uv == Rat(1, 2));
    CHECK(t.uw == Rat(1, 2));
    CHECK(t.vw == Rat(1, 2));
    CHECK(t.uv + t.uw == Rat(1));
    // capacities (2,1,1): cut at u is 2 on both sides
    TriangleCaps t2 = wye_to_delta(Rat(2), Rat(1), Rat(1));
    CHECK(t2.uv + t2.uw == Rat(2));
    CHECK(t2.vw == Rat(0));
    // regime violation
    CHECK_THROWS_AS(wye_to_delta(Rat(5), Rat(1), Rat(1)), input_error);

    CHECK(wye_delta_equiv_test(Rat(1), Rat(1), Rat(1), 99, 60));
    CHECK(wye_delta_equiv_test(Rat(2), Rat(1), Rat(1), 100, 60));
    CHECK(wye_delta_equiv_test(Rat(5, 2), Rat(7, 3), Rat(3), 101, 60));
}
