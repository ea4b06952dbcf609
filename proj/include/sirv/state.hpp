#pragma once

#include <array>

#include "sirv/grid.hpp"
#include "sirv/params.hpp"

namespace sirv {

/// Primal unknowns: four densities, four momenta, and the production rate.
struct StateVector {
    std::array<ScalarField, 4> rho;
    std::array<VectorField, 4> m;
    ScalarField f;

    StateVector() = default;
    explicit StateVector(const GridSpec& g)
        : rho{ScalarField(g), ScalarField(g), ScalarField(g), ScalarField(g)},
          m{VectorField(g), VectorField(g), VectorField(g), VectorField(g)},
          f(g) {}

    const GridSpec& grid() const { return f.grid; }
};

/// Dual unknowns: one multiplier field per continuity equation.
struct DualVector {
    std::array<ScalarField, 4> phi;

    DualVector() = default;
    explicit DualVector(const GridSpec& g)
        : phi{ScalarField(g), ScalarField(g), ScalarField(g), ScalarField(g)} {}

    const GridSpec& grid() const { return phi[0].grid; }
};

/// Frozen densities entering the constraint bilinearly. Snapshot, immutable
/// during an iteration.
struct LinearizationPoint {
    ScalarField rho_s;
    ScalarField rho_i;
    ScalarField rho_v;

    LinearizationPoint() = default;
    explicit LinearizationPoint(const StateVector& u)
        : rho_s(u.rho[S]), rho_i(u.rho[I]), rho_v(u.rho[V]) {}

    const GridSpec& grid() const { return rho_s.grid; }
};

} // namespace sirv
