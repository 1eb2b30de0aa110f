#include "doctest.h"

#include "emu/prng.hpp"
#include "emu/simplex.hpp"
#include "emu/weights.hpp"

using namespace emu;

namespace {

Simplex::Row row(std::vector<std::pair<int, Rat>> cs, Rat rhs) {
    Simplex::Row r;
    r.coeffs = std::move(cs);
    r.rhs = std::move(rhs);
    return r;
}

} // namespace

TEST_CASE("simplex solves small programs exactly") {
    SUBCASE("single lower bound") {
        // min x st x >= 3
        auto res = Simplex::solve(1, {row({{0, Rat(-1)}}, Rat(-3))}, {Rat(1)});
        REQUIRE(res.status == Simplex::Status::Optimal);
        CHECK(res.x[0] == Rat(3));
    }
    SUBCASE("two variables, fractional optimum") {
        // min x + y st x + 2y >= 4, 3x + y >= 6
        auto res = Simplex::solve(
            2,
            {row({{0, Rat(-1)}, {1, Rat(-2)}}, Rat(-4)), row({{0, Rat(-3)}, {1, Rat(-1)}}, Rat(-6))},
            {Rat(1), Rat(1)});
        REQUIRE(res.status == Simplex::Status::Optimal);
        // vertex of the two constraints: x = 8/5, y = 6/5
        CHECK(res.x[0] == Rat(8, 5));
        CHECK(res.x[1] == Rat(6, 5));
        CHECK(res.objective == Rat(14, 5));
    }
    SUBCASE("upper bounds bind") {
        // min -x - 2y st x <= 3, y <= 2, x + y <= 4
        auto res = Simplex::solve(2,
                                  {row({{0, Rat(1)}}, Rat(3)), row({{1, Rat(1)}}, Rat(2)),
                                   row({{0, Rat(1)}, {1, Rat(1)}}, Rat(4))},
                                  {Rat(-1), Rat(-2)});
        REQUIRE(res.status == Simplex::Status::Optimal);
        CHECK(res.x[0] == Rat(2));
        CHECK(res.x[1] == Rat(2));
        CHECK(res.objective == Rat(-6));
    }
    SUBCASE("unbounded") {
        auto res = Simplex::solve(1, {row({{0, Rat(-1)}}, Rat(-1))}, {Rat(-1)});
        CHECK(res.status == Simplex::Status::Unbounded);
    }
}

TEST_CASE("infeasible programs yield verified Farkas vectors") {
    // x <= 1 and x >= 2
    std::vector<Simplex::Row> rows{row({{0, Rat(1)}}, Rat(1)), row({{0, Rat(-1)}}, Rat(-2))};
    auto res = Simplex::solve(1, rows, {Rat(1)});
    REQUIRE(res.status == Simplex::Status::Infeasible);
    // y >= 0, A^T y >= 0, b^T y < 0
    REQUIRE(res.farkas_y.size() == 2);
    Rat aty = res.farkas_y[0] - res.farkas_y[1];
    Rat bty = res.farkas_y[0] * Rat(1) + res.farkas_y[1] * Rat(-2);
    CHECK(res.farkas_y[0].sign() >= 0);
    CHECK(res.farkas_y[1].sign() >= 0);
    CHECK(aty.sign() >= 0);
    CHECK(bty.sign() < 0);
}

TEST_CASE("random programs: outcomes are self-consistent") {
    Prng rng(2024);
    int optimal = 0, infeasible = 0;
    for (int iter = 0; iter < 200; ++iter) {
        int n = 1 + static_cast<int>(rng.next_below(4));
        int m = 1 + static_cast<int>(rng.next_below(5));
        std::vector<Simplex::Row> rows;
        for (int i = 0; i < m; ++i) {
            Simplex::Row r;
            for (int j = 0; j < n; ++j) {
                int c = static_cast<int>(rng.next_in(-3, 3));
                if (c != 0) r.coeffs.push_back({j, Rat(c)});
            }
            r.rhs = Rat(rng.next_in(-6, 8));
            rows.push_back(std::move(r));
        }
        std::vector<Rat> cost;
        for (int j = 0; j < n; ++j) cost.push_back(Rat(rng.next_in(0, 4)));
        auto res = Simplex::solve(n, rows, cost);
        if (res.status == Simplex::Status::Optimal) {
            ++optimal;
            for (int i = 0; i < m; ++i) {
                Rat lhs(0);
                for (const auto& [j, v] : rows[i].coeffs) lhs += v * res.x[j];
                CHECK(lhs <= rows[i].rhs);
            }
            for (int j = 0; j < n; ++j) CHECK(res.x[j].sign() >= 0);
        } else if (res.status == Simplex::Status::Infeasible) {
            ++infeasible;
            std::vector<Rat> aty(n, Rat(0));
            Rat bty(0);
            for (int i = 0; i < m; ++i) {
                CHECK(res.farkas_y[i].sign() >= 0);
                for (const auto& [j, v] : rows[i].coeffs) aty[j] += res.farkas_y[i] * v;
                bty += res.farkas_y[i] * rows[i].rhs;
            }
            for (int j = 0; j < n; ++j) CHECK(aty[j].sign() >= 0);
            CHECK(bty.sign() < 0);
        }
    }
    CHECK(optimal > 20);
    CHECK(infeasible > 20);
}

namespace {

// two paths crossing at a middle vertex: edges t1-p, p-t1b, t2-p, p-t2b
PlanarGraph quadrangle_skeleton() {
    PlanarGraph g(true);
    for (int v : {1, 2, 3, 4, 9}) g.add_vertex(v); // 9 = the crossing
    g.add_edge(0, 1, 9, Rat(0));
    g.add_edge(1, 9, 2, Rat(0));
    g.add_edge(2, 3, 9, Rat(0));
    g.add_edge(3, 9, 4, Rat(0));
    g.set_rotation(1, {0});
    g.set_rotation(2, {1});
    g.set_rotation(3, {2});
    g.set_rotation(4, {3});
    g.set_rotation(9, {0, 2, 1, 3});
    return g;
}

} // namespace

TEST_CASE("weights: single edge, one pair, exact target") {
    PlanarGraph g(true);
    g.add_vertex(0);
    g.add_vertex(1);
    g.add_edge(0, 0, 1, Rat(0));
    g.set_rotation(0, {0});
    g.set_rotation(1, {0});
    std::map<std::pair<int, int>, Rat> targets{{{0, 1}, Rat(5)}};
    PathConstraint can{0, 1, {0}};
    auto res = solve_weights(g, {0, 1}, {can}, targets, {{0, 1}});
    REQUIRE(res.feasible);
    CHECK(res.weights.at(0) == Rat(5));
}

TEST_CASE("weights: crossing canonicals violating the quadrangle inequality are infeasible") {
    PlanarGraph g = quadrangle_skeleton();
    std::map<std::pair<int, int>, Rat> targets{
        {{1, 2}, Rat(2)}, {{3, 4}, Rat(2)}, {{1, 4}, Rat(3)},
        {{2, 3}, Rat(3)}, {{1, 3}, Rat(1)}, {{2, 4}, Rat(1)},
    };
    std::vector<PathConstraint> canonicals{{1, 2, {0, 1}}, {3, 4, {2, 3}}};
    auto res = solve_weights(g, {1, 2, 3, 4}, canonicals, targets, {{1, 2}, {3, 4}});
    REQUIRE(!res.feasible);
    CHECK(verify_certificate(res.certificate, targets));
    CHECK(!res.certificate.canonical_flow.empty());
    CHECK(!res.certificate.simple_flow.empty());

    SUBCASE("zero flows fail the strict cost gap") {
        FarkasCertificate zero;
        CHECK(!verify_certificate(zero, targets));
    }
    SUBCASE("perturbing a flow breaks domination") {
        FarkasCertificate bad = res.certificate;
        bad.simple_flow.front().second += Rat(1000);
        CHECK(!verify_certificate(bad, targets));
    }
}

TEST_CASE("weights: feasible crossing when the quadrangle inequality holds") {
    PlanarGraph g = quadrangle_skeleton();
    std::map<std::pair<int, int>, Rat> targets{
        {{1, 2}, Rat(4)}, {{3, 4}, Rat(4)}, {{1, 4}, Rat(3)},
        {{2, 3}, Rat(3)}, {{1, 3}, Rat(3)}, {{2, 4}, Rat(3)},
    };
    std::vector<PathConstraint> canonicals{{1, 2, {0, 1}}, {3, 4, {2, 3}}};
    auto res = solve_weights(g, {1, 2, 3, 4}, canonicals, targets, {{1, 2}, {3, 4}});
    REQUIRE(res.feasible);
    // canonical paths land exactly on their targets
    CHECK(res.weights.at(0) + res.weights.at(1) == Rat(4));
    CHECK(res.weights.at(2) + res.weights.at(3) == Rat(4));
}
