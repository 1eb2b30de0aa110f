#pragma once

#include <array>

#include "emu/prng.hpp"
#include "emu/simplex.hpp"

namespace emu {

// Star-triangle capacity rewrite: a degree-three hub with leg capacities
// (cu, cv, cw) against the triangle with side capacities
// ((cu+cv-cw)/2, (cu+cw-cv)/2, (cv+cw-cu)/2).  Demands route in one
// exactly when they route in the other.

struct TriangleCaps {
    Rat uv, uw, vw;
};

inline TriangleCaps wye_to_delta(const Rat& cu, const Rat& cv, const Rat& cw) {
    TriangleCaps t;
    t.uv = (cu + cv - cw) / Rat(2);
    t.uw = (cu + cw - cv) / Rat(2);
    t.vw = (cv + cw - cu) / Rat(2);
    EMU_INPUT_CHECK(t.uv.sign() >= 0 && t.uw.sign() >= 0 && t.vw.sign() >= 0,
                    "NegativeTriangleCapacity: capacities leave the rewrite's regime");
    return t;
}

// All flow between terminal pairs passes through the hub, one leg per
// endpoint.
inline bool star_routable(const Rat& cu, const Rat& cv, const Rat& cw, const Rat& duv,
                          const Rat& duw, const Rat& dvw) {
    return duv + duw <= cu && duv + dvw <= cv && duw + dvw <= cw;
}

// Exact multicommodity feasibility on the triangle: each demand splits
// between its direct edge and the two-edge detour.
inline bool triangle_routable(const TriangleCaps& cap, const Rat& duv, const Rat& duw,
                              const Rat& dvw) {
    // variables: direct and detour flow per pair
    // 0: uv direct, 1: uv via w, 2: uw direct, 3: uw via v, 4: vw direct, 5: vw via u
    std::vector<Simplex::Row> rows;
    auto eq = [&](std::vector<std::pair<int, Rat>> cs, const Rat& rhs) {
        Simplex::Row a;
        a.coeffs = cs;
        a.rhs = rhs;
        rows.push_back(a);
        Simplex::Row b;
        for (auto& [j, v] : cs) b.coeffs.push_back({j, -v});
        b.rhs = -rhs;
        rows.push_back(b);
    };
    eq({{0, Rat(1)}, {1, Rat(1)}}, duv);
    eq({{2, Rat(1)}, {3, Rat(1)}}, duw);
    eq({{4, Rat(1)}, {5, Rat(1)}}, dvw);
    Simplex::Row c1; // edge uv: uv direct, uw via v, vw via u
    c1.coeffs = {{0, Rat(1)}, {3, Rat(1)}, {5, Rat(1)}};
    c1.rhs = cap.uv;
    rows.push_back(c1);
    Simplex::Row c2; // edge uw
    c2.coeffs = {{2, Rat(1)}, {1, Rat(1)}, {5, Rat(1)}};
    c2.rhs = cap.uw;
    rows.push_back(c2);
    Simplex::Row c3; // edge vw
    c3.coeffs = {{4, Rat(1)}, {1, Rat(1)}, {3, Rat(1)}};
    c3.rhs = cap.vw;
    rows.push_back(c3);
    auto res = Simplex::solve(6, rows, std::vector<Rat>(6, Rat(0)));
    return res.status == Simplex::Status::Optimal;
}

// Sample rational demands on a quarter-integer lattice and compare
// routability on both sides.
inline bool wye_delta_equiv_test(const Rat& cu, const Rat& cv, const Rat& cw,
                                 std::uint64_t seed, int samples) {
    TriangleCaps cap = wye_to_delta(cu, cv, cw);
    Prng rng(seed);
    // demands on a quarter lattice spanning past the largest capacity
    Rat hi = cu + cv + cw;
    std::int64_t quarters = hi.num().fits_i64() && hi.den().fits_i64()
                                ? 4 * (hi.num().as_i64() / hi.den().as_i64() + 1)
                                : 64;
    for (int s = 0; s < samples; ++s) {
        auto demand = [&]() { return Rat(rng.next_in(0, quarters), 4); };
        Rat duv = demand(), duw = demand(), dvw = demand();
        if (star_routable(cu, cv, cw, duv, duw, dvw) != triangle_routable(cap, duv, duw, dvw))
            return false;
    }
    return true;
}

} // namespace emu
