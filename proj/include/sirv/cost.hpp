#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "sirv/constraint.hpp"
#include "sirv/grid.hpp"
#include "sirv/params.hpp"
#include "sirv/state.hpp"

namespace sirv {

/// Movement cost density: alpha |m|^2 / (2 rho), extended by 0 at (0, 0) and
/// +infinity where mass vanishes but momentum does not.
inline double kinetic_term(double rho, double m1, double m2, double alpha) {
    if (rho < 0.0) throw std::domain_error("kinetic_term: negative density");
    const double m2sum = m1 * m1 + m2 * m2;
    if (rho > 0.0) return alpha * m2sum / (2.0 * rho);
    return m2sum == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
}

namespace detail {

// Two time quadratures, chosen so that every integral of a constant over its
// window is exact and every proximal update matches the slab pairing weight
// one-to-one:
//  - density quadratics (congestion, lambda rho^2): trapezoid on the nodes;
//  - control terms (kinetic, production, lambda m^2 and f^2): rectangle rule
//    on the slabs, labeled by the left node, so the terminal node carries no
//    control cost (m at the last node is a gauge variable held at zero).

/// Trapezoid weight on the time nodes of [0, T].
inline double time_weight(const GridSpec& g, int n) {
    return (n == 0 || n == g.nt - 1) ? 0.5 * g.dt() : g.dt();
}

/// Trapezoid weight on the sub-window [n_lo, n_hi].
inline double time_weight_window(const GridSpec& g, int n, int n_lo, int n_hi) {
    if (n < n_lo || n > n_hi) return 0.0;
    return (n == n_lo || n == n_hi) ? 0.5 * g.dt() : g.dt();
}

/// Left-anchored slab weight on the sub-window of slabs [n_lo, n_hi).
inline double slab_weight_window(const GridSpec& g, int n, int n_lo, int n_hi) {
    return (n >= n_lo && n < n_hi) ? g.dt() : 0.0;
}

} // namespace detail

struct CostBreakdown {
    double terminal_s = 0.0, terminal_i = 0.0, terminal_v = 0.0, terminal_r = 0.0;
    std::array<double, 4> kinetic{0.0, 0.0, 0.0, 0.0};
    double congestion_p = 0.0;
    double congestion_v = 0.0;
    double production = 0.0;
    double lambda_reg = 0.0;

    double total() const {
        double s = terminal_s + terminal_i + terminal_v + terminal_r;
        for (double k : kinetic) s += k;
        return s + congestion_p + congestion_v + production + lambda_reg;
    }
};

struct CostResult {
    CostBreakdown terms;
    bool feasible = true;          // all indicator constraints hold within 1e-9
    double worst_violation = 0.0;  // largest indicator violation found
    bool kinetic_infinite = false; // some cell has rho = 0 with |m| > 0

    double smooth_total() const { return terms.total(); }
    bool is_infinite() const { return !feasible || kinetic_infinite; }
};

struct FeasibilityReport {
    double f_lower = 0.0;    // worst negative excursion of f
    double f_upper = 0.0;    // worst excess over f_max
    double f_support = 0.0;  // worst |f| off-factory or past tprime
    double v_cap = 0.0;      // worst rho_V excess over c_factory on factory x [0, tprime]
    double nonneg = 0.0;     // worst negative excursion of any density
    double obstacle = 0.0;   // worst |rho_i| on obstacle cells

    double worst() const {
        return std::max({f_lower, f_upper, f_support, v_cap, nonneg, obstacle});
    }
    bool all_clear(double tol = 0.0) const { return worst() <= tol; }
};

/// Worst violation of every hard constraint, one entry per constraint family.
inline FeasibilityReport check_feasibility(const StateVector& u, const ModelParams& mp) {
    const GridSpec& g = u.grid();
    const int np = g.tprime_index();
    FeasibilityReport rep;
    const auto& fac = mp.logistics.factory;
    for (int n = 0; n < g.nt; ++n) {
        auto f = u.f.slice(n);
        auto rv = u.rho[V].slice(n);
        for (int k = 0; k < g.nx1; ++k)
            for (int l = 0; l < g.nx2; ++l) {
                const std::size_t i = g.sidx(k, l);
                const bool on_factory = fac.at(k, l);
                if (on_factory && n < np) {
                    rep.f_lower = std::max(rep.f_lower, -f[i]);
                    rep.f_upper = std::max(rep.f_upper, f[i] - mp.logistics.f_max);
                } else {
                    rep.f_support = std::max(rep.f_support, std::abs(f[i]));
                }
                if (on_factory && n <= np)
                    rep.v_cap = std::max(rep.v_cap, rv[i] - mp.logistics.c_factory);
                for (int pop : {S, I, R, V}) {
                    const double rho = u.rho[pop].slice(n)[i];
                    rep.nonneg = std::max(rep.nonneg, -rho);
                    if (mp.logistics.has_obstacle && mp.logistics.obstacle.at(k, l))
                        rep.obstacle = std::max(rep.obstacle, std::abs(rho));
                }
            }
    }
    return rep;
}

/// The full cost functional: terminal quadratics, movement costs, congestion,
/// production and the strong-convexity term, with indicator constraints
/// reported through the feasible flag instead of a floating infinity.
/// Time integrals use the trapezoid rule; space integrals the midpoint rule.
inline CostResult evaluate_cost(const StateVector& u, const ModelParams& mp) {
    const GridSpec& g = u.grid();
    for (int pop : {S, I, R, V}) {
        check_same_grid(u.rho[pop].grid, g, "evaluate_cost");
        check_same_grid(u.m[pop].grid(), g, "evaluate_cost");
    }
    const int np = g.tprime_index();
    const double cell = g.dx1() * g.dx2();
    const auto& w = mp.w;

    CostResult res;
    const FeasibilityReport feas = check_feasibility(u, mp);
    constexpr double kIndicatorTol = 1e-9;
    res.worst_violation = feas.worst();
    res.feasible = feas.all_clear(kIndicatorTol);

    // terminal costs
    const int nT = g.nt - 1;
    {
        auto rs = u.rho[S].slice(nT);
        auto ri = u.rho[I].slice(nT);
        auto rv = u.rho[V].slice(nT);
        auto rr = u.rho[R].slice(nT);
        for (std::size_t i = 0; i < g.spatial_size(); ++i) {
            res.terms.terminal_s += 0.5 * w.a_s * rs[i] * rs[i] * cell;
            res.terms.terminal_i += 0.5 * w.a_i * ri[i] * ri[i] * cell;
            res.terms.terminal_v += 0.5 * w.a_v * rv[i] * rv[i] * cell;
            res.terms.terminal_r += 0.5 * w.a_r * (1.0 - rr[i]) * (1.0 - rr[i]) * cell;
        }
    }

    for (int n = 0; n < g.nt; ++n) {
        const double wt = detail::time_weight(g, n);
        const double ws = detail::slab_weight_window(g, n, 0, g.nt - 1);
        const double ws_v = detail::slab_weight_window(g, n, np, g.nt - 1);
        const double ws_f = detail::slab_weight_window(g, n, 0, np);
        auto f = u.f.slice(n);
        for (std::size_t i = 0; i < g.spatial_size(); ++i) {
            double sum_sir = 0.0, lam_rho = 0.0, lam_ctrl = 0.0;
            for (int pop : {S, I, R, V}) {
                const double rho = u.rho[pop].slice(n)[i];
                const double m1 = u.m[pop].c1.slice(n)[i];
                const double m2 = u.m[pop].c2.slice(n)[i];
                if (pop != V) sum_sir += rho;
                const bool lam_counts = !mp.lambda_v_only || pop == V;
                if (lam_counts) {
                    lam_rho += rho * rho;
                    lam_ctrl += m1 * m1 + m2 * m2;
                }

                const double wk = pop == V ? ws_v : ws;
                if (wk > 0.0) {
                    if (rho < -kIndicatorTol) {
                        res.kinetic_infinite = true;
                    } else {
                        const double kt = kinetic_term(std::max(rho, 0.0), m1, m2, w.alpha(pop));
                        if (std::isinf(kt))
                            res.kinetic_infinite = true;
                        else
                            res.terms.kinetic[pop] += kt * wk * cell;
                    }
                }
            }
            lam_ctrl += f[i] * f[i];
            const double rv = u.rho[V].slice(n)[i];
            res.terms.congestion_p += 0.5 * w.d_p * sum_sir * sum_sir * wt * cell;
            res.terms.congestion_v += 0.5 * w.d_v * rv * rv * wt * cell;
            res.terms.production += 0.5 * w.d_0 * f[i] * f[i] * ws_f * cell;
            res.terms.lambda_reg += 0.5 * w.lambda * (lam_rho * wt + lam_ctrl * ws) * cell;
        }
    }
    return res;
}

/// The indicator-free monitoring value: smooth cost terms plus the duality
/// pairing with the nonlinear residuals. Finite for every input; movement
/// cost is read as 0 wherever the density vanishes.
inline double evaluate_monitor_lagrangian(const StateVector& u, const DualVector& p,
                                          const ModelParams& mp, const KernelOp& kernel) {
    const GridSpec& g = u.grid();
    const int np = g.tprime_index();
    const double cell = g.dx1() * g.dx2();
    const auto& w = mp.w;

    double smooth = 0.0;
    const int nT = g.nt - 1;
    {
        auto rs = u.rho[S].slice(nT);
        auto ri = u.rho[I].slice(nT);
        auto rv = u.rho[V].slice(nT);
        auto rr = u.rho[R].slice(nT);
        for (std::size_t i = 0; i < g.spatial_size(); ++i)
            smooth += cell * (0.5 * w.a_s * rs[i] * rs[i] + 0.5 * w.a_i * ri[i] * ri[i] +
                              0.5 * w.a_v * rv[i] * rv[i] +
                              0.5 * w.a_r * (1.0 - rr[i]) * (1.0 - rr[i]));
    }
    for (int n = 0; n < g.nt; ++n) {
        const double wt = detail::time_weight(g, n);
        const double ws = detail::slab_weight_window(g, n, 0, g.nt - 1);
        const double ws_v = detail::slab_weight_window(g, n, np, g.nt - 1);
        const double ws_f = detail::slab_weight_window(g, n, 0, np);
        auto f = u.f.slice(n);
        for (std::size_t i = 0; i < g.spatial_size(); ++i) {
            double sum_sir = 0.0, lam_rho = 0.0, lam_ctrl = 0.0;
            for (int pop : {S, I, R, V}) {
                const double rho = u.rho[pop].slice(n)[i];
                const double m1 = u.m[pop].c1.slice(n)[i];
                const double m2 = u.m[pop].c2.slice(n)[i];
                if (pop != V) sum_sir += rho;
                if (!mp.lambda_v_only || pop == V) {
                    lam_rho += rho * rho;
                    lam_ctrl += m1 * m1 + m2 * m2;
                }
                const double wk = pop == V ? ws_v : ws;
                if (wk > 0.0 && rho > 0.0)
                    smooth += w.alpha(pop) * (m1 * m1 + m2 * m2) / (2.0 * rho) * wk * cell;
            }
            lam_ctrl += f[i] * f[i];
            const double rv = u.rho[V].slice(n)[i];
            smooth += cell * (0.5 * w.d_p * sum_sir * sum_sir * wt + 0.5 * w.d_v * rv * rv * wt +
                              0.5 * w.d_0 * f[i] * f[i] * ws_f +
                              0.5 * w.lambda * (lam_rho * wt + lam_ctrl * ws));
        }
    }

    const ResidualSet r = apply_A(u, mp, kernel);
    const double wslab = g.dt() * cell;
    double pairing = 0.0;
    for (int pop : {S, I, R, V}) pairing += flat_dot(r[pop].v, p.phi[pop].v) * wslab;
    return smooth - pairing;
}

/// Quadrature-weighted squared L2 norm of the difference of two states, the
/// metric in which the cost is lambda-strongly convex.
inline double state_distance2(const StateVector& a, const StateVector& b) {
    const GridSpec& g = a.grid();
    const double cell = g.dx1() * g.dx2();
    double s = 0.0;
    for (int n = 0; n < g.nt; ++n) {
        const double wt = detail::time_weight(g, n);
        const double ws = detail::slab_weight_window(g, n, 0, g.nt - 1);
        for (int pop : {S, I, R, V}) {
            auto ra = a.rho[pop].slice(n), rb = b.rho[pop].slice(n);
            auto a1 = a.m[pop].c1.slice(n), b1 = b.m[pop].c1.slice(n);
            auto a2 = a.m[pop].c2.slice(n), b2 = b.m[pop].c2.slice(n);
            for (std::size_t i = 0; i < g.spatial_size(); ++i) {
                const double dr = ra[i] - rb[i], d1 = a1[i] - b1[i], d2 = a2[i] - b2[i];
                s += dr * dr * wt * cell + (d1 * d1 + d2 * d2) * ws * cell;
            }
        }
        auto fa = a.f.slice(n), fb = b.f.slice(n);
        for (std::size_t i = 0; i < g.spatial_size(); ++i) {
            const double df = fa[i] - fb[i];
            s += df * df * ws * cell;
        }
    }
    return s;
}

} // namespace sirv
