#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "sirv/grid.hpp"
#include "sirv/region.hpp"

using namespace sirv;

TEST_CASE("ball cell count approximates the continuous area") {
    GridSpec g(64, 64, 3);
    auto mask = make_ball(g, 0.3, 0.3, 0.1);
    const double expected = M_PI * 0.01 * 64 * 64;
    CHECK(static_cast<double>(mask.count()) > 0.9 * expected);
    CHECK(static_cast<double>(mask.count()) < 1.1 * expected);
}

TEST_CASE("zero-radius ball is empty and rejected") {
    GridSpec g(16, 16, 3);
    CHECK_THROWS_AS(make_ball(g, 0.3, 0.3, 0.0), ConfigError);
}

TEST_CASE("full-domain rectangle selects every cell") {
    GridSpec g(8, 12, 3);
    auto mask = make_rect(g, 0.0, 1.0, 0.0, 1.0);
    CHECK(mask.count() == g.spatial_size());
}

TEST_CASE("geometry outside the unit square is rejected") {
    GridSpec g(8, 8, 3);
    CHECK_THROWS_AS(make_ball(g, 1.5, 0.5, 0.1), ConfigError);
    CHECK_THROWS_AS(make_rect(g, -0.1, 0.5, 0.0, 1.0), ConfigError);
    CHECK_THROWS_AS(make_rect(g, 0.6, 0.5, 0.0, 1.0), ConfigError);
}

TEST_CASE("disjointness and union behave as set operations") {
    GridSpec g(32, 32, 3);
    auto a = make_ball(g, 0.25, 0.25, 0.1);
    auto b = make_ball(g, 0.75, 0.75, 0.1);
    CHECK(a.disjoint_from(b));
    auto u = a;
    u.unite(b);
    CHECK(u.count() == a.count() + b.count());
    CHECK_FALSE(u.disjoint_from(a));
}
