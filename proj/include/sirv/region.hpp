#pragma once

#include <cstdint>
#include <vector>

#include "sirv/errors.hpp"
#include "sirv/grid.hpp"

namespace sirv {

/// Boolean indicator over spatial cells.
struct RegionMask {
    int nx1 = 0;
    int nx2 = 0;
    std::vector<std::uint8_t> m;

    RegionMask() = default;
    RegionMask(int n1, int n2) : nx1(n1), nx2(n2), m(static_cast<std::size_t>(n1) * n2, 0) {}

    bool at(int k, int l) const { return m[static_cast<std::size_t>(k) * nx2 + l] != 0; }
    void set(int k, int l, bool b) { m[static_cast<std::size_t>(k) * nx2 + l] = b ? 1 : 0; }

    std::size_t count() const {
        std::size_t c = 0;
        for (auto b : m) c += b;
        return c;
    }

    bool empty() const { return count() == 0; }

    bool disjoint_from(const RegionMask& o) const {
        for (std::size_t i = 0; i < m.size(); ++i)
            if (m[i] && o.m[i]) return false;
        return true;
    }

    RegionMask& unite(const RegionMask& o) {
        for (std::size_t i = 0; i < m.size(); ++i) m[i] = m[i] || o.m[i];
        return *this;
    }
};

/// Cells whose centers lie inside the closed ball B_radius(c1, c2).
inline RegionMask make_ball(const GridSpec& g, double c1, double c2, double radius) {
    if (c1 < 0.0 || c1 > 1.0 || c2 < 0.0 || c2 > 1.0 || radius < 0.0)
        throw ConfigError("region.ball: geometry must lie within the unit square");
    RegionMask r(g.nx1, g.nx2);
    for (int k = 0; k < g.nx1; ++k)
        for (int l = 0; l < g.nx2; ++l) {
            const double d1 = g.x1(k) - c1, d2 = g.x2(l) - c2;
            if (d1 * d1 + d2 * d2 <= radius * radius) r.set(k, l, true);
        }
    if (r.empty()) throw ConfigError("region.ball: no cell center falls inside the ball");
    return r;
}

/// Cells whose centers lie inside the closed rectangle [a1,b1] x [a2,b2].
inline RegionMask make_rect(const GridSpec& g, double a1, double b1, double a2, double b2) {
    if (a1 < 0.0 || b1 > 1.0 || a2 < 0.0 || b2 > 1.0 || a1 > b1 || a2 > b2)
        throw ConfigError("region.rect: bounds must be ordered and within the unit square");
    RegionMask r(g.nx1, g.nx2);
    for (int k = 0; k < g.nx1; ++k)
        for (int l = 0; l < g.nx2; ++l) {
            const double x = g.x1(k), y = g.x2(l);
            if (x >= a1 && x <= b1 && y >= a2 && y <= b2) r.set(k, l, true);
        }
    if (r.empty()) throw ConfigError("region.rect: no cell center falls inside the rectangle");
    return r;
}

} // namespace sirv
