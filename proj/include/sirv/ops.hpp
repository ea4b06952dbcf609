#pragma once

#include <span>
#include <stdexcept>
#include <vector>

#include "sirv/grid.hpp"

namespace sirv {

// Spatial stencils on one time slice. All use mirror ghost cells: even
// extension for gradient/laplacian, odd extension for divergence, which makes
// divergence the exact negative transpose of gradient (discrete integration
// by parts holds to round-off) and gives zero normal flux at the boundary.

inline void gradient_slice(const GridSpec& g, std::span<const double> u,
                           std::span<double> g1, std::span<double> g2) {
    const int n1 = g.nx1, n2 = g.nx2;
    const double h1 = 0.5 / g.dx1(), h2 = 0.5 / g.dx2();
    for (int k = 0; k < n1; ++k) {
        const int kp = k + 1 < n1 ? k + 1 : n1 - 1;
        const int km = k - 1 >= 0 ? k - 1 : 0;
        for (int l = 0; l < n2; ++l) {
            const int lp = l + 1 < n2 ? l + 1 : n2 - 1;
            const int lm = l - 1 >= 0 ? l - 1 : 0;
            g1[g.sidx(k, l)] = (u[g.sidx(kp, l)] - u[g.sidx(km, l)]) * h1;
            g2[g.sidx(k, l)] = (u[g.sidx(k, lp)] - u[g.sidx(k, lm)]) * h2;
        }
    }
}

inline void divergence_slice(const GridSpec& g, std::span<const double> m1,
                             std::span<const double> m2, std::span<double> out) {
    const int n1 = g.nx1, n2 = g.nx2;
    const double h1 = 0.5 / g.dx1(), h2 = 0.5 / g.dx2();
    for (int k = 0; k < n1; ++k) {
        for (int l = 0; l < n2; ++l) {
            // odd mirror: ghost value is the negated boundary value
            const double a1 = k + 1 < n1 ? m1[g.sidx(k + 1, l)] : -m1[g.sidx(n1 - 1, l)];
            const double b1 = k - 1 >= 0 ? m1[g.sidx(k - 1, l)] : -m1[g.sidx(0, l)];
            const double a2 = l + 1 < n2 ? m2[g.sidx(k, l + 1)] : -m2[g.sidx(k, n2 - 1)];
            const double b2 = l - 1 >= 0 ? m2[g.sidx(k, l - 1)] : -m2[g.sidx(k, 0)];
            out[g.sidx(k, l)] = (a1 - b1) * h1 + (a2 - b2) * h2;
        }
    }
}

inline void laplacian_slice(const GridSpec& g, std::span<const double> u, std::span<double> out) {
    const int n1 = g.nx1, n2 = g.nx2;
    const double i1 = 1.0 / (g.dx1() * g.dx1()), i2 = 1.0 / (g.dx2() * g.dx2());
    for (int k = 0; k < n1; ++k) {
        const int kp = k + 1 < n1 ? k + 1 : n1 - 1;
        const int km = k - 1 >= 0 ? k - 1 : 0;
        for (int l = 0; l < n2; ++l) {
            const int lp = l + 1 < n2 ? l + 1 : n2 - 1;
            const int lm = l - 1 >= 0 ? l - 1 : 0;
            const double c = u[g.sidx(k, l)];
            out[g.sidx(k, l)] = (u[g.sidx(kp, l)] - 2.0 * c + u[g.sidx(km, l)]) * i1 +
                                (u[g.sidx(k, lp)] - 2.0 * c + u[g.sidx(k, lm)]) * i2;
        }
    }
}

inline void biharmonic_slice(const GridSpec& g, std::span<const double> u, std::span<double> out) {
    std::vector<double> tmp(g.spatial_size());
    laplacian_slice(g, u, tmp);
    laplacian_slice(g, tmp, out);
}

// Field-level wrappers.

inline std::pair<std::vector<double>, std::vector<double>> gradient(const ScalarField& u, int n) {
    if (n < 0 || n >= u.grid.nt) throw std::out_of_range("gradient: time index out of range");
    std::vector<double> g1(u.grid.spatial_size()), g2(u.grid.spatial_size());
    gradient_slice(u.grid, u.slice(n), g1, g2);
    return {std::move(g1), std::move(g2)};
}

inline std::vector<double> divergence(const GridSpec& g, std::span<const double> m1,
                                      std::span<const double> m2) {
    std::vector<double> out(g.spatial_size());
    divergence_slice(g, m1, m2, out);
    return out;
}

inline std::vector<double> laplacian(const GridSpec& g, std::span<const double> u) {
    std::vector<double> out(g.spatial_size());
    laplacian_slice(g, u, out);
    return out;
}

inline std::vector<double> biharmonic(const GridSpec& g, std::span<const double> u) {
    std::vector<double> out(g.spatial_size());
    biharmonic_slice(g, u, out);
    return out;
}

/// Gradient of every time slice at once.
inline VectorField gradient_field(const ScalarField& u) {
    VectorField out(u.grid);
    for (int n = 0; n < u.grid.nt; ++n)
        gradient_slice(u.grid, u.slice(n), out.c1.slice(n), out.c2.slice(n));
    return out;
}

inline ScalarField laplacian_field(const ScalarField& u) {
    ScalarField out(u.grid);
    for (int n = 0; n < u.grid.nt; ++n) laplacian_slice(u.grid, u.slice(n), out.slice(n));
    return out;
}

} // namespace sirv
