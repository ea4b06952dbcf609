#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "sirv/cubic.hpp"

using namespace sirv;

namespace {

// independent oracle: scan [0, R] from the right for the outermost sign
// change and bisect it down to machine resolution
double bisection_oracle(double a, double b, double c) {
    auto p = [&](double x) { return ((x + a) * x + b) * x + c; };
    const double R = 1.0 + std::abs(a) + std::abs(b) + std::abs(c);
    const int scan = 4000;
    double hi = R, lo = -1.0;
    for (int i = scan - 1; i >= 0; --i) {
        const double x = R * i / scan;
        if (p(x) <= 0.0) {
            lo = x;
            hi = R * (i + 1) / scan;
            break;
        }
    }
    if (lo < 0.0) return 0.0; // p > 0 on [0, R]: largest real root is negative
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid == lo || mid == hi) break;
        if (p(mid) <= 0.0)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

} // namespace

TEST_CASE("simple cubic roots") {
    CHECK(root_plus(0.0, 0.0, -8.0) == Catch::Approx(2.0).epsilon(1e-14));
    CHECK(root_plus(-1.0, 0.0, 0.0) == Catch::Approx(1.0).epsilon(1e-14)); // roots {0, 0, 1}
    CHECK(root_plus(1.0, 0.0, 0.0) == 0.0);                                // roots {0, 0, -1}
    CHECK(root_plus(0.0, 0.0, 8.0) == 0.0);                                // root -2 clamps to 0
}

TEST_CASE("root residual satisfies the scaled bound") {
    std::mt19937 rng(1234);
    std::uniform_real_distribution<double> d(-3.0, 3.0);
    for (int t = 0; t < 10000; ++t) {
        const double a = d(rng), b = d(rng), c = d(rng);
        const double x = root_plus(a, b, c);
        if (x > 0.0) {
            const double res = std::abs(((x + a) * x + b) * x + c);
            CHECK(res <= 1e-10 * std::max({1.0, std::abs(a), std::abs(b), std::abs(c)}));
        }
    }
}

TEST_CASE("matches the bisection oracle") {
    CHECK(root_plus(1.5, 0.0, -2.0) ==
          Catch::Approx(bisection_oracle(1.5, 0.0, -2.0)).margin(1e-10));
    std::mt19937 rng(999);
    std::uniform_real_distribution<double> d(-3.0, 3.0);
    for (int t = 0; t < 20000; ++t) {
        const double a = d(rng), b = d(rng), c = d(rng);
        const double got = root_plus(a, b, c);
        const double want = bisection_oracle(a, b, c);
        CHECK(got == Catch::Approx(want).margin(1e-10));
    }
}

TEST_CASE("solver-shaped cubics: b = 0, c <= 0") {
    std::mt19937 rng(77);
    std::uniform_real_distribution<double> da(-5.0, 5.0), dc(-5.0, 0.0);
    for (int t = 0; t < 20000; ++t) {
        const double a = da(rng), c = dc(rng);
        const double x = root_plus(a, 0.0, c);
        CHECK(x >= 0.0);
        if (c < 0.0) {
            // unique positive root, residual tight
            const double res = std::abs(((x + a) * x) * x + c);
            CHECK(res <= 1e-10 * std::max({1.0, std::abs(a), std::abs(c)}));
        }
    }
}
