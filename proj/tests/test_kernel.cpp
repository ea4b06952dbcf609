#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "sirv/grid.hpp"
#include "sirv/kernel.hpp"

using namespace sirv;

namespace {

// Direct O(n^2) mirror-extension convolution: the independent oracle.
std::vector<double> direct_convolve(const GridSpec& g, const KernelSpec& spec,
                                    const std::vector<double>& rho) {
    auto weights = [](double sigma, double dx, int& r) {
        r = std::max(1, static_cast<int>(std::ceil(5.0 * sigma / dx)));
        std::vector<double> w(2 * r + 1);
        double tot = 0.0;
        for (int a = -r; a <= r; ++a) {
            w[a + r] = std::exp(-(a * dx) * (a * dx) / (2.0 * sigma * sigma));
            tot += w[a + r];
        }
        for (auto& x : w) x /= tot;
        return w;
    };
    auto fold = [](int i, int n) {
        // infinite even mirror about the half-sample boundaries
        const int period = 2 * n;
        int j = ((i % period) + period) % period;
        return j < n ? j : period - 1 - j;
    };
    int r1 = 0, r2 = 0;
    auto w1 = weights(spec.sigma1, g.dx1(), r1);
    auto w2 = weights(spec.sigma2, g.dx2(), r2);
    std::vector<double> out(g.spatial_size(), 0.0);
    for (int k = 0; k < g.nx1; ++k)
        for (int l = 0; l < g.nx2; ++l) {
            double s = 0.0;
            for (int a = -r1; a <= r1; ++a)
                for (int b = -r2; b <= r2; ++b)
                    s += w1[a + r1] * w2[b + r2] *
                         rho[g.sidx(fold(k - a, g.nx1), fold(l - b, g.nx2))];
            out[g.sidx(k, l)] = s;
        }
    return out;
}

} // namespace

TEST_CASE("uniform density is a fixed point of the kernel") {
    GridSpec g(16, 16, 3);
    KernelSpec spec{0.05, 0.05};
    std::vector<double> rho(g.spatial_size(), 0.7);
    auto out = kernel_convolve(spec, g, rho);
    for (auto x : out) CHECK(x == Catch::Approx(0.7).epsilon(1e-12));
}

TEST_CASE("impulse response is a centered gaussian bump") {
    GridSpec g(32, 32, 3);
    KernelSpec spec{0.05, 0.05};
    std::vector<double> rho(g.spatial_size(), 0.0);
    rho[g.sidx(16, 16)] = 1.0;
    auto out = kernel_convolve(spec, g, rho);
    CHECK(out[g.sidx(16, 16)] > out[g.sidx(18, 16)]);
    CHECK(out[g.sidx(18, 16)] > out[g.sidx(20, 16)]);
    CHECK(out[g.sidx(18, 16)] == Catch::Approx(out[g.sidx(14, 16)]).epsilon(1e-10));
    CHECK(out[g.sidx(16, 18)] == Catch::Approx(out[g.sidx(18, 16)]).epsilon(1e-10));
    double mass = 0.0;
    for (auto x : out) mass += x;
    CHECK(mass == Catch::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("spectral convolution matches the direct mirrored double sum") {
    GridSpec g(32, 32, 3);
    KernelSpec spec{0.04, 0.07};
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> dist(0.0, 1.0);
    std::vector<double> rho(g.spatial_size());
    for (auto& x : rho) x = dist(rng);
    auto fast = kernel_convolve(spec, g, rho);
    auto slow = direct_convolve(g, spec, rho);
    double err = 0.0;
    for (std::size_t i = 0; i < fast.size(); ++i) err = std::max(err, std::abs(fast[i] - slow[i]));
    CHECK(err < 1e-8);
}

TEST_CASE("convolution preserves total mass") {
    GridSpec g(24, 24, 3);
    KernelSpec spec{0.1, 0.03};
    std::mt19937 rng(5);
    std::uniform_real_distribution<double> dist(0.0, 2.0);
    std::vector<double> rho(g.spatial_size());
    for (auto& x : rho) x = dist(rng);
    auto out = kernel_convolve(spec, g, rho);
    double m0 = 0.0, m1 = 0.0;
    for (auto x : rho) m0 += x;
    for (auto x : out) m1 += x;
    CHECK(m1 == Catch::Approx(m0).epsilon(1e-10));
}

TEST_CASE("unresolvable kernel width is a configuration error") {
    GridSpec g(16, 16, 3); // dx = 1/16, so sigma must be >= 1/32
    CHECK_THROWS_AS(KernelOp(g, KernelSpec{0.01, 0.05}), ConfigError);
    CHECK_THROWS_AS(KernelOp(g, KernelSpec{0.05, -1.0}), ConfigError);
    CHECK_NOTHROW(KernelOp(g, KernelSpec{1.0 / 32, 1.0 / 32}));
}
