#include "doctest.h"

#include "emu/arrangement.hpp"
#include "emu/generator.hpp"

using namespace emu;

namespace {

Skeleton make_skeleton(const InstanceSpec& spec, SimplifiedInstance& si_out,
                       CriticalPathSet& cps_out) {
    si_out = preprocess(gen_instance(spec));
    CriticalContext cx(si_out);
    cps_out = critical_paths(cx);
    return build_initial(cx, cps_out);
}

} // namespace

TEST_CASE("initial arrangement mirrors the redrawn crossing pattern and embeds planar") {
    InstanceSpec spec;
    spec.rows = 6;
    spec.cols = 9;
    spec.terminals_per_face = {4, 4};
    spec.weight_max = 7;
    spec.seed = 5;
    SimplifiedInstance si;
    CriticalPathSet cps;
    Skeleton sk = make_skeleton(spec, si, cps);

    // crossing set == redrawn crossing set restricted to critical strands
    for (const auto& [key, cid] : sk.arr.cross_of) {
        (void)cid;
        int s1 = sk.arr.strand_si[key.first];
        int s2 = sk.arr.strand_si[key.second];
        CHECK(si.crossing_of.count({std::min(s1, s2), std::max(s1, s2)}));
    }
    // materializes to a planar graph with terminals on their holes (audited
    // inside to_graph); sanity-check vertex counts here
    SkeletonGraph sg = to_graph(sk);
    CHECK(sg.g.vertex_count() ==
          si.inst.all_terminals().size() + sk.arr.crossings.size());
    // every strand pair crosses at most once
    for (int s = 0; s < sk.arr.strand_count(); ++s) {
        std::set<int> partners;
        for (int c : sk.arr.order[s]) CHECK(partners.insert(sk.arr.other_strand(c, s)).second);
    }
}

TEST_CASE("elimination terminates, conserves crossings, and fixes the canonical pattern") {
    for (auto kind : {"grid-ring", "random-planar"}) {
        for (std::uint64_t seed = 1; seed <= 10; ++seed) {
            InstanceSpec spec;
            spec.kind = kind;
            spec.rows = 6;
            spec.cols = 9;
            spec.terminals_per_face = {4, 4};
            spec.weight_max = 7;
            spec.seed = seed * 13 + 1;
            SimplifiedInstance si;
            CriticalPathSet cps;
            Skeleton sk = make_skeleton(spec, si, cps);
            auto before = sk.arr.cross_of;
            EliminationStats st = eliminate_all(sk);
            CHECK(sk.arr.cross_of == before);
            CHECK(st.iterations <= st.initial_bad_pairs);
            CHECK(!find_canonical_bad_pair(sk).has_value());
            check_canonical_crossing_pattern(sk);
            to_graph(sk); // planar after the dust settles
        }
    }
}

TEST_CASE("instances with genuine canonical bad pairs get rerouted and settle") {
    // these seeds are known to produce multi-crossing canonical pairs
    for (auto [seed, iters_min] : {std::pair<std::uint64_t, long long>{4081, 1}, {12153, 1}}) {
        InstanceSpec spec;
        spec.kind = "random-planar";
        spec.rows = 7;
        spec.cols = 13;
        spec.terminals_per_face = {6, 6, 6};
        spec.weight_max = 9;
        spec.seed = seed;
        SimplifiedInstance si;
        CriticalPathSet cps;
        Skeleton sk = make_skeleton(spec, si, cps);
        auto before = sk.arr.cross_of;
        EliminationStats st = eliminate_all(sk);
        CHECK(st.iterations >= iters_min);
        CHECK(st.iterations <= st.initial_bad_pairs);
        CHECK(sk.arr.cross_of == before);
        CHECK(!find_canonical_bad_pair(sk).has_value());
        check_canonical_crossing_pattern(sk);
        to_graph(sk);
    }
}

TEST_CASE("three-face elimination also settles") {
    InstanceSpec spec;
    spec.kind = "random-planar";
    spec.rows = 7;
    spec.cols = 12;
    spec.terminals_per_face = {3, 3, 3};
    spec.weight_max = 6;
    for (std::uint64_t seed : {4ULL, 9ULL, 17ULL}) {
        spec.seed = seed;
        SimplifiedInstance si;
        CriticalPathSet cps;
        Skeleton sk = make_skeleton(spec, si, cps);
        EliminationStats st = eliminate_all(sk);
        (void)st;
        CHECK(!find_canonical_bad_pair(sk).has_value());
        check_canonical_crossing_pattern(sk);
        SkeletonGraph sg = to_graph(sk);
        // size bound: nonterminal vertices are pairwise strand crossings
        std::size_t k = si.inst.all_terminals().size();
        std::size_t nstr = sk.arr.strand_count();
        CHECK(sg.g.vertex_count() - k <= nstr * (nstr - 1) / 2);
    }
}
