#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "sirv/dct.hpp"
#include "sirv/grid.hpp"
#include "sirv/precond.hpp"

using namespace sirv;

TEST_CASE("surrogate round trip is the identity") {
    GridSpec g(8, 8, 8);
    EpidemicParams ep;
    Preconditioner pc(g, ep);
    std::mt19937 rng(17);
    std::uniform_real_distribution<double> d(-1.0, 1.0);
    for (int pop : {S, I, R, V}) {
        ScalarField r(g);
        for (auto& x : r.v) x = d(rng);
        ScalarField back = pc.solve(pop, pc.apply(pop, r));
        double err = 0.0;
        for (std::size_t i = 0; i < r.v.size(); ++i)
            err = std::max(err, std::abs(back.v[i] - r.v[i]));
        CHECK(err < 1e-8);
    }
}

TEST_CASE("a single cosine mode is divided by its analytic symbol") {
    GridSpec g(8, 8, 8);
    EpidemicParams ep;
    Preconditioner pc(g, ep);
    const int pt = 2, p1 = 1, p2 = 3;
    ScalarField r(g);
    for (int n = 0; n < g.nt; ++n)
        for (int k = 0; k < g.nx1; ++k)
            for (int l = 0; l < g.nx2; ++l)
                r.at(n, k, l) = std::cos(M_PI * pt * (n + 0.5) / g.nt) *
                                std::cos(M_PI * p1 * (k + 0.5) / g.nx1) *
                                std::cos(M_PI * p2 * (l + 0.5) / g.nx2);

    // analytic symbol for the S surrogate on this mode
    const double st = lap_symbol_axis(pt, g.nt, g.dt());
    const double lap = lap_symbol_axis(p1, g.nx1, g.dx1()) + lap_symbol_axis(p2, g.nx2, g.dx2());
    const double bt = ep.beta + ep.theta1;
    const double sym = st + std::pow(ep.eta_s, 4) / 4.0 * lap * lap +
                       (1.0 + bt * ep.eta_s * ep.eta_s) * lap + bt * bt;
    CHECK(pc.symbol(S, pt, p1, p2) == Catch::Approx(sym).epsilon(1e-12));

    ScalarField out = pc.solve(S, r);
    for (std::size_t i = 0; i < r.v.size(); ++i)
        CHECK(out.v[i] == Catch::Approx(r.v[i] / sym).margin(1e-10));
}

TEST_CASE("constant field solve for the vaccine row divides by theta2^2") {
    GridSpec g(8, 8, 8);
    EpidemicParams ep;
    ep.theta2 = 0.9;
    Preconditioner pc(g, ep);
    ScalarField r(g);
    r.fill(1.0);
    ScalarField out = pc.solve(V, r);
    for (double x : out.v) CHECK(x == Catch::Approx(1.0 / (0.9 * 0.9)).epsilon(1e-10));
}

TEST_CASE("recovered-row zero mode is regularized to the slowest time eigenvalue") {
    GridSpec g(8, 8, 8);
    EpidemicParams ep;
    Preconditioner pc(g, ep);
    CHECK(pc.symbol(R, 0, 0, 0) == Catch::Approx(lap_symbol_axis(1, g.nt, g.dt())));
    // and every symbol is strictly positive across all rows
    for (int pop : {S, I, R, V})
        for (int n = 0; n < g.nt; ++n)
            for (int p = 0; p < g.nx1; ++p)
                for (int q = 0; q < g.nx2; ++q) CHECK(pc.symbol(pop, n, p, q) > 0.0);
}
