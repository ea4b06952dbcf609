#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "sirv/dct.hpp"
#include "sirv/grid.hpp"
#include "sirv/operator_norm.hpp"

using namespace sirv;

TEST_CASE("identity operator has norm one") {
    auto n = estimate_operator_norm(identity_operator(100));
    CHECK(n == Catch::Approx(1.0).margin(1e-8));
}

TEST_CASE("gradient norm doubles when the grid is refined") {
    const double n32 = estimate_operator_norm(gradient_operator(GridSpec(32, 32, 3)));
    const double n64 = estimate_operator_norm(gradient_operator(GridSpec(64, 64, 3)));
    CHECK(n64 > n32);
    CHECK(n64 / n32 > 1.8);
    CHECK(n64 / n32 < 2.2);
}

TEST_CASE("laplacian norm approaches the maximal spectral symbol") {
    GridSpec g(32, 32, 3);
    const double est = estimate_operator_norm(laplacian_operator(g));
    // exact operator norm: the symbol is maximal at the highest mode pair
    const double exact = lap_symbol_axis(g.nx1 - 1, g.nx1, g.dx1()) +
                         lap_symbol_axis(g.nx2 - 1, g.nx2, g.dx2());
    CHECK(est == Catch::Approx(exact).epsilon(2e-3));
    // and the coarse bound quoted for fine grids
    const double bound = 4.0 * (1.0 / (g.dx1() * g.dx1()) + 1.0 / (g.dx2() * g.dx2()));
    CHECK(est < bound);
    CHECK(est > 0.9 * bound);
}
