#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "sirv/errors.hpp"

namespace sirv {

/// Cell-centered space-time grid on the unit square, T = 1.
///
/// Space is cell-centered: x_kl = ((k+0.5)dx1, (l+0.5)dx2).
/// Time is node-centered: t_n = n*dt with dt = 1/(nt-1), so t spans [0,1].
/// tprime marks the production/delivery switch and maps to the node index
/// round(tprime/dt), which must fall strictly inside (0, nt-1).
struct GridSpec {
    int nx1 = 0;
    int nx2 = 0;
    int nt = 0;
    double tprime = 0.5;

    static constexpr double T = 1.0;

    GridSpec() = default;

    GridSpec(int nx1_, int nx2_, int nt_, double tprime_ = 0.5)
        : nx1(nx1_), nx2(nx2_), nt(nt_), tprime(tprime_) {
        std::vector<std::string> bad;
        if (nx1 < 1) bad.push_back("grid.nx1: must be >= 1");
        if (nx2 < 1) bad.push_back("grid.nx2: must be >= 1");
        if (nt < 3) bad.push_back("grid.nt: must be >= 3");
        if (!(tprime > 0.0 && tprime < T)) bad.push_back("grid.tprime: must lie in (0, T)");
        if (!bad.empty()) throw ConfigError(bad);
        const int np = tprime_index();
        if (!(np > 0 && np < nt - 1))
            throw ConfigError("grid.tprime: index round(tprime/dt) must lie strictly inside (0, nt-1)");
    }

    double dx1() const { return 1.0 / nx1; }
    double dx2() const { return 1.0 / nx2; }
    double dt() const { return 1.0 / (nt - 1); }

    double x1(int k) const { return (k + 0.5) * dx1(); }
    double x2(int l) const { return (l + 0.5) * dx2(); }
    double t(int n) const { return n * dt(); }

    /// Node index of the production/delivery switch.
    int tprime_index() const { return static_cast<int>(std::llround(tprime / dt())); }

    std::size_t spatial_size() const { return static_cast<std::size_t>(nx1) * nx2; }
    std::size_t size() const { return static_cast<std::size_t>(nt) * spatial_size(); }

    std::size_t sidx(int k, int l) const { return static_cast<std::size_t>(k) * nx2 + l; }
    std::size_t idx(int n, int k, int l) const { return static_cast<std::size_t>(n) * spatial_size() + sidx(k, l); }

    bool operator==(const GridSpec& o) const {
        return nx1 == o.nx1 && nx2 == o.nx2 && nt == o.nt && tprime == o.tprime;
    }
};

/// Space-time scalar grid function, one value per (n, k, l) node.
struct ScalarField {
    GridSpec grid;
    std::vector<double> v;

    ScalarField() = default;
    explicit ScalarField(const GridSpec& g) : grid(g), v(g.size(), 0.0) {}

    double& at(int n, int k, int l) { return v[grid.idx(n, k, l)]; }
    double at(int n, int k, int l) const { return v[grid.idx(n, k, l)]; }

    std::span<double> slice(int n) {
        return {v.data() + static_cast<std::size_t>(n) * grid.spatial_size(), grid.spatial_size()};
    }
    std::span<const double> slice(int n) const {
        return {v.data() + static_cast<std::size_t>(n) * grid.spatial_size(), grid.spatial_size()};
    }

    void fill(double c) { std::fill(v.begin(), v.end(), c); }
};

/// Two co-located scalar components (m.e1, m.e2) sharing one grid.
struct VectorField {
    ScalarField c1;
    ScalarField c2;

    VectorField() = default;
    explicit VectorField(const GridSpec& g) : c1(g), c2(g) {}

    const GridSpec& grid() const { return c1.grid; }
};

inline double flat_dot(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

inline double flat_norm2(const std::vector<double>& a) { return flat_dot(a, a); }

inline bool field_finite(const ScalarField& f) {
    double s = 0.0;
    for (double x : f.v) s += x;
    return std::isfinite(s);
}

} // namespace sirv
