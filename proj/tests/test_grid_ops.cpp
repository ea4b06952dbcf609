#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "sirv/dct.hpp"
#include "sirv/grid.hpp"
#include "sirv/ops.hpp"

using namespace sirv;

namespace {

std::vector<double> random_slice(const GridSpec& g, unsigned seed) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> d(-1.0, 1.0);
    std::vector<double> v(g.spatial_size());
    for (auto& x : v) x = d(rng);
    return v;
}

} // namespace

TEST_CASE("grid spec basics") {
    GridSpec g(32, 32, 32, 0.5);
    CHECK(g.dx1() == Catch::Approx(1.0 / 32));
    CHECK(g.dt() == Catch::Approx(1.0 / 31));
    CHECK(g.tprime_index() == 16); // round(15.5) away from zero
    CHECK(g.x1(0) == Catch::Approx(0.5 / 32));
    CHECK_THROWS_AS(GridSpec(32, 32, 32, 0.0), ConfigError);
    CHECK_THROWS_AS(GridSpec(0, 32, 32, 0.5), ConfigError);
}

TEST_CASE("gradient of a constant field vanishes") {
    GridSpec g(16, 12, 3);
    ScalarField u(g);
    u.fill(3.7);
    auto [g1, g2] = gradient(u, 1);
    for (auto x : g1) CHECK(x == 0.0);
    for (auto x : g2) CHECK(x == 0.0);
}

TEST_CASE("gradient of x1 is (1, 0) away from the boundary") {
    GridSpec g(16, 16, 3);
    ScalarField u(g);
    for (int k = 0; k < 16; ++k)
        for (int l = 0; l < 16; ++l) u.at(0, k, l) = g.x1(k);
    auto [g1, g2] = gradient(u, 0);
    for (int k = 1; k < 15; ++k)
        for (int l = 0; l < 16; ++l) {
            CHECK(g1[g.sidx(k, l)] == Catch::Approx(1.0).margin(1e-12));
            CHECK(g2[g.sidx(k, l)] == Catch::Approx(0.0).margin(1e-12));
        }
}

TEST_CASE("gradient time index out of range") {
    GridSpec g(4, 4, 3);
    ScalarField u(g);
    CHECK_THROWS_AS(gradient(u, 3), std::out_of_range);
}

TEST_CASE("gradient converges at second order against an analytic field") {
    // u = exp(-20 |x-c|^2) centered so that boundary values are negligible
    auto max_err = [](int n) {
        GridSpec g(n, n, 3);
        ScalarField u(g);
        for (int k = 0; k < n; ++k)
            for (int l = 0; l < n; ++l) {
                const double d1 = g.x1(k) - 0.5, d2 = g.x2(l) - 0.5;
                u.at(0, k, l) = std::exp(-20.0 * (d1 * d1 + d2 * d2));
            }
        auto [g1, g2] = gradient(u, 0);
        double e = 0.0;
        for (int k = 1; k < n - 1; ++k)
            for (int l = 1; l < n - 1; ++l) {
                const double d1 = g.x1(k) - 0.5, d2 = g.x2(l) - 0.5;
                const double f = std::exp(-20.0 * (d1 * d1 + d2 * d2));
                e = std::max(e, std::abs(g1[g.sidx(k, l)] + 40.0 * d1 * f));
                e = std::max(e, std::abs(g2[g.sidx(k, l)] + 40.0 * d2 * f));
            }
        return e;
    };
    const double e64 = max_err(64), e128 = max_err(128);
    CHECK(e64 < 0.02);
    CHECK(e64 / e128 > 3.0); // O(dx^2): halving dx shrinks the error ~4x
    CHECK(e64 / e128 < 5.0);
}

TEST_CASE("divergence of a constant vector field vanishes in the interior") {
    GridSpec g(16, 16, 3);
    std::vector<double> m1(g.spatial_size(), 2.0), m2(g.spatial_size(), -1.0);
    auto d = divergence(g, m1, m2);
    for (int k = 1; k < 15; ++k)
        for (int l = 1; l < 15; ++l) CHECK(d[g.sidx(k, l)] == Catch::Approx(0.0).margin(1e-13));
}

TEST_CASE("divergence of (x1, 0) is 1 in the interior") {
    GridSpec g(16, 16, 3);
    std::vector<double> m1(g.spatial_size()), m2(g.spatial_size(), 0.0);
    for (int k = 0; k < 16; ++k)
        for (int l = 0; l < 16; ++l) m1[g.sidx(k, l)] = g.x1(k);
    auto d = divergence(g, m1, m2);
    for (int k = 1; k < 15; ++k)
        for (int l = 1; l < 15; ++l) CHECK(d[g.sidx(k, l)] == Catch::Approx(1.0).margin(1e-12));
}

TEST_CASE("discrete integration by parts holds to round-off") {
    GridSpec g(13, 17, 3);
    auto u = random_slice(g, 1);
    auto m1 = random_slice(g, 2);
    auto m2 = random_slice(g, 3);
    std::vector<double> g1(g.spatial_size()), g2(g.spatial_size());
    gradient_slice(g, u, g1, g2);
    auto d = divergence(g, m1, m2);
    const double lhs = flat_dot(g1, m1) + flat_dot(g2, m2);
    const double rhs = flat_dot(u, d);
    CHECK(std::abs(lhs + rhs) < 1e-12 * g.spatial_size());
}

TEST_CASE("laplacian of a constant vanishes everywhere") {
    GridSpec g(8, 8, 3);
    std::vector<double> u(g.spatial_size(), 5.0);
    auto L = laplacian(g, u);
    for (auto x : L) CHECK(x == Catch::Approx(0.0).margin(1e-12));
}

TEST_CASE("cosine modes are eigenvectors of the Neumann laplacian") {
    const int n = 16;
    GridSpec g(n, n, 3);
    for (int p : {1, 3, 7}) {
        std::vector<double> u(g.spatial_size());
        for (int k = 0; k < n; ++k)
            for (int l = 0; l < n; ++l) u[g.sidx(k, l)] = std::cos(M_PI * p * (k + 0.5) / n);
        auto L = laplacian(g, u);
        const double ev = -(2.0 / (g.dx1() * g.dx1())) * (1.0 - std::cos(M_PI * p * g.dx1() * n / n));
        const double expected = -lap_symbol_axis(p, n, g.dx1());
        CHECK(ev == Catch::Approx(expected));
        for (std::size_t i = 0; i < u.size(); ++i)
            CHECK(L[i] == Catch::Approx(expected * u[i]).margin(1e-9 * std::abs(expected)));
    }
}

TEST_CASE("biharmonic eigenvalue is the squared laplacian eigenvalue") {
    const int n = 12;
    GridSpec g(n, n, 3);
    const int p = 5;
    std::vector<double> u(g.spatial_size());
    for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) u[g.sidx(k, l)] = std::cos(M_PI * p * (k + 0.5) / n);
    auto B = biharmonic(g, u);
    const double lam = -lap_symbol_axis(p, n, g.dx1());
    for (std::size_t i = 0; i < u.size(); ++i)
        CHECK(B[i] == Catch::Approx(lam * lam * u[i]).margin(1e-7 * lam * lam));
}

TEST_CASE("laplacian agrees with its spectral symbol applied in DCT space") {
    GridSpec g(8, 8, 8);
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    ScalarField u(g);
    for (auto& x : u.v) x = dist(rng);

    ScalarField phys(g);
    for (int n = 0; n < g.nt; ++n) laplacian_slice(g, u.slice(n), phys.slice(n));
    ScalarField lhs = dct_forward(phys);

    ScalarField rhs = dct_forward(u);
    for (int n = 0; n < g.nt; ++n)
        for (int p = 0; p < g.nx1; ++p)
            for (int q = 0; q < g.nx2; ++q)
                rhs.at(n, p, q) *= -(lap_symbol_axis(p, g.nx1, g.dx1()) +
                                     lap_symbol_axis(q, g.nx2, g.dx2()));
    for (std::size_t i = 0; i < lhs.v.size(); ++i)
        CHECK(lhs.v[i] == Catch::Approx(rhs.v[i]).margin(1e-10 * g.spatial_size()));
}
