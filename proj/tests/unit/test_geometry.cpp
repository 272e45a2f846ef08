#include <doctest.h>

#include <algorithm>
#include <random>
#include <set>

#include "helpers.hpp"

using namespace msalab;
using th::p1;
using th::p2;

TEST_CASE("sup norm of pairs") {
    CHECK(sup_norm(p2({1, 2}, {3, -4})) == 4);
    CHECK(sup_norm(p2({0}, {0})) == 0);
    CHECK(sup_norm(p2({-5, 1, 0}, {2, 2, 2})) == 5);
}

TEST_CASE("particle exchange") {
    CHECK(permute(p2({1, 2}, {3, 4})) == p2({3, 4}, {1, 2}));
    CHECK(permute(p2({5}, {5})) == p2({5}, {5}));
    std::mt19937 rng(3);
    std::uniform_int_distribution<int> u(-20, 20);
    for (int i = 0; i < 50; ++i) {
        const auto x = p2({u(rng), u(rng)}, {u(rng), u(rng)});
        CHECK(permute(permute(x)) == x);
    }
}

TEST_CASE("box enumeration") {
    CHECK(enumerate_box(Box2(p2({0}, {0}), 1)).size() == 9);
    const auto single = enumerate_box(Box2(p2({1, 2}, {3, 4}), 0));
    REQUIRE(single.size() == 1);
    CHECK(single[0] == p2({1, 2}, {3, 4}));
    const Box2 b(p2({0}, {0}), 2);
    const auto pts = enumerate_box(b);
    CHECK(pts.size() == 25);
    CHECK(pts.front() == p2({-2}, {-2}));
    CHECK(std::is_sorted(pts.begin(), pts.end()));
    CHECK(std::adjacent_find(pts.begin(), pts.end()) == pts.end());
    for (std::size_t i = 0; i < pts.size(); ++i) {
        CHECK(b.index_of(pts[i]) == i);
        CHECK(b.point_at(i) == pts[i]);
    }
}

TEST_CASE("boundaries") {
    CHECK(interior_boundary(Box2(p2({0}, {0}), 1)).size() == 8);
    CHECK(interior_boundary(Box2(p2({0}, {0}), 2)).size() == 16);
    CHECK(interior_boundary(Box2(p2({0}, {0}), 0)).empty());
    CHECK(exterior_boundary(Box2(p2({0}, {0}), 1)).size() == 16);
    CHECK(exterior_boundary(Box2(p2({0, 0}, {0, 0}), 0)).size() == 80);

    std::mt19937 rng(5);
    std::uniform_int_distribution<int> c(-5, 5), r(1, 3);
    for (int i = 0; i < 20; ++i) {
        const Box2 b(p2({c(rng)}, {c(rng)}), r(rng));
        const auto in = interior_boundary(b);
        const auto out = exterior_boundary(b);
        std::set<Point2> s(in.begin(), in.end());
        for (const auto& x : out) CHECK(!s.count(x));
        const std::size_t side_in = b.radius > 0 ? static_cast<std::size_t>(2 * b.radius - 1) : 0;
        CHECK(in.size() + side_in * side_in == b.size());
    }
}

TEST_CASE("R-distant boxes") {
    CHECK(is_r_distant(Box2(p2({0}, {0}), 1), Box2(p2({100}, {100}), 1), 10));
    CHECK_FALSE(is_r_distant(Box2(p2({0}, {50}), 1), Box2(p2({50}, {0}), 1), 10));
    CHECK_FALSE(is_r_distant(Box2(p2({3}, {4}), 1), Box2(p2({3}, {4}), 1), 0));

    std::mt19937 rng(7);
    std::uniform_int_distribution<int> u(-30, 30);
    for (int i = 0; i < 100; ++i) {
        const auto a = p2({u(rng)}, {u(rng)});
        const auto b = p2({u(rng)}, {u(rng)});
        CHECK(std::min(distance(a, b), distance(permute(a), b)) ==
              std::min(distance(permute(a), permute(b)), distance(a, permute(b))));
    }
}

TEST_CASE("interactive boxes") {
    CHECK_FALSE(is_interactive(Box2(p2({0}, {10}), 2), 1));
    CHECK(is_interactive(Box2(p2({0}, {0}), 4), 1));
    CHECK(is_interactive(Box2(p2({0}, {5}), 2), 1));
    // agrees with a direct scan for the layer ||x1 - x2|| <= r0
    for (int off = 0; off < 10; ++off) {
        const Box2 b(p2({0}, {off}), 2);
        bool any = false;
        for (const auto& x : enumerate_box(b)) any |= distance(x.x1, x.x2) <= 1;
        CHECK(is_interactive(b, 1) == any);
    }
}

TEST_CASE("projections") {
    const auto p = projections(Box2(p2({0}, {10}), 2));
    CHECK(p.first == Box1(p1({0}), 2));
    CHECK(p.second == Box1(p1({10}), 2));
    CHECK(p.merged.size() == 10);
    CHECK(projections(Box2(p2({3, 1}, {3, 1}), 1)).merged.size() == 9);
    const Box2 b(p2({1}, {7}), 2);
    const auto q = projections(permute(b));
    CHECK(q.first == projections(b).second);
    CHECK(q.second == projections(b).first);
}

TEST_CASE("annulus") {
    const auto u = p2({0}, {0});
    const auto a = annulus(u, 2, 3);
    CHECK(a.size() == 49 - 25);
    const auto v = p2({0}, {2});  // R(u) = 2
    const auto b = annulus(v, 2, 3);
    CHECK(b.size() == static_cast<std::size_t>(11 * 11 - 9 * 9));
    const auto m = symmetrized_box(v, 2);
    std::set<Point2> ms(m.begin(), m.end());
    for (const auto& x : b) CHECK(!ms.count(x));
}

TEST_CASE("adjacency offsets") {
    CHECK(neighbour_offsets(2, Adjacency::SupNorm).size() == 8);
    CHECK(neighbour_offsets(2, Adjacency::L1).size() == 4);
    CHECK(neighbour_offsets(4, Adjacency::SupNorm).size() == 80);
    CHECK(adjacent(p2({0}, {0}), p2({1}, {1}), Adjacency::SupNorm));
    CHECK_FALSE(adjacent(p2({0}, {0}), p2({1}, {1}), Adjacency::L1));
    CHECK(ceil_radius(22.627) == 23);
}
