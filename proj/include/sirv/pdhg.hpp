#pragma once

#include <array>
#include <cmath>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "sirv/constraint.hpp"
#include "sirv/cost.hpp"
#include "sirv/cubic.hpp"
#include "sirv/errors.hpp"
#include "sirv/forward.hpp"
#include "sirv/grid.hpp"
#include "sirv/kernel.hpp"
#include "sirv/params.hpp"
#include "sirv/precond.hpp"
#include "sirv/state.hpp"

namespace sirv {

struct SolverConfig {
    double tau = 0.05;
    double sigma = 0.2;
    int max_iters = 3000;
    double tol = 1e-4;
    int diag_every = 1;
    bool capture_masses = false;

    // Which residual drives the dual ascent: the nonlinear constraint at the
    // extrapolated point (default) or its linearization around the previous
    // iterate.
    enum class DualResidual { Nonlinear, Linearized };
    DualResidual dual_residual = DualResidual::Nonlinear;

    std::vector<std::string> validate() const {
        std::vector<std::string> bad;
        if (!(tau > 0.0 && sigma > 0.0)) bad.push_back("solver.tau/sigma: must be positive");
        if (!(tau * sigma < 1.0)) bad.push_back("solver.tau*sigma: step-size product must be < 1");
        if (!(tol > 0.0)) bad.push_back("solver.tol: must be positive");
        if (max_iters < 1) bad.push_back("solver.max_iters: must be >= 1");
        if (diag_every < 1) bad.push_back("solver.diag_every: must be >= 1");
        return bad;
    }
};

struct IterationDiagnostics {
    int iteration = 0;
    double monitor_lagrangian = 0.0;
    double relative_error = 0.0;
    std::array<double, 4> constraint_residual_norms{};
    std::vector<double> masses; // nt values per population, flattened, when captured
};

struct SolveResult {
    StateVector u;
    DualVector p;
    std::vector<IterationDiagnostics> trace;
    bool converged = false;
    int iterations = 0;
    CostResult final_cost;
};

using DiagnosticsSink = std::function<void(const IterationDiagnostics&)>;

namespace detail {

inline double backward_dt(const ScalarField& phi, int n, std::size_t i, double dt_inv) {
    const std::size_t sp = phi.grid.spatial_size();
    return (phi.v[n * sp + i] - phi.v[(n - 1) * sp + i]) * dt_inv;
}

} // namespace detail

/// One proximal sweep over the primal block in the printed order: densities
/// by the closed-form positive cubic root (with the production-phase clamp
/// for the vaccine), then momenta by shrinkage, then the production rate by
/// the box projection. The initial density slab stays pinned; obstacle cells
/// are projected to zero.
///
/// The terminal density level is special: the terminal cost gradient enters
/// its prox implicitly (the a_i/dt slope lands in the denominator). Making it
/// an explicit force instead puts tau*a_i/dt > 1 of undamped feedback into
/// the loop and locks the iteration into a two-cycle. The momentum at the
/// last time level carries neither cost nor constraint and is held at zero.
inline StateVector primal_update(const StateVector& u, const DualVector& p,
                                 const std::array<std::vector<double>, 4>& initial,
                                 const ModelParams& mp, const KernelOp& kernel, double tau) {
    const GridSpec& g = u.grid();
    const int np = g.tprime_index();
    const double dt_inv = 1.0 / g.dt();
    const auto& ep = mp.epi;
    const auto& w = mp.w;

    StateVector out(g);
    const std::size_t sp = g.spatial_size();

    // pinned initial data
    for (int pop : {S, I, R, V}) {
        auto dst = out.rho[pop].slice(0);
        for (std::size_t i = 0; i < sp; ++i) dst[i] = initial[pop][i];
    }

    std::vector<double> conv_i(sp), conv_sd(sp), lap(sp), prod(sp);
    auto lam = [&](int pop) { return (!mp.lambda_v_only || pop == V) ? w.lambda : 0.0; };
    const int nT = g.nt - 1;

    // terminal level: linear prox with the terminal cost treated implicitly
    {
        auto ps = p.phi[S].slice(nT - 1);
        auto pi = p.phi[I].slice(nT - 1);
        auto pr = p.phi[R].slice(nT - 1);
        auto pv = p.phi[V].slice(nT - 1);
        auto rs = u.rho[S].slice(nT);
        auto ri = u.rho[I].slice(nT);
        auto rr = u.rho[R].slice(nT);
        auto rv = u.rho[V].slice(nT);
        const double two_dt = 2.0 * dt_inv;
        for (std::size_t i = 0; i < sp; ++i) {
            const double ds = 1.0 + tau * (w.d_p + lam(S) + two_dt * w.a_s);
            const double di = 1.0 + tau * (w.d_p + lam(I) + two_dt * w.a_i);
            const double dr = 1.0 + tau * (w.d_p + lam(R) + two_dt * w.a_r);
            const double dv = 1.0 + tau * (w.d_v + w.lambda + two_dt * w.a_v);
            out.rho[S].slice(nT)[i] = std::max(
                0.0, tau * (rs[i] / tau + two_dt * ps[i] - w.d_p * (ri[i] + rr[i])) / ds);
            out.rho[I].slice(nT)[i] = std::max(
                0.0, tau * (ri[i] / tau + two_dt * pi[i] - w.d_p * (rs[i] + rr[i])) / di);
            out.rho[R].slice(nT)[i] =
                std::max(0.0, tau * (rr[i] / tau + two_dt * pr[i] - w.d_p * (rs[i] + ri[i]) +
                                     two_dt * w.a_r) /
                                  dr);
            out.rho[V].slice(nT)[i] = std::max(0.0, tau * (rv[i] / tau + two_dt * pv[i]) / dv);
        }
    }

    for (int n = 1; n < nT; ++n) {
        kernel.convolve(u.rho[I].slice(n), conv_i);
        auto ps = p.phi[S].slice(n);
        auto pi = p.phi[I].slice(n);
        auto pr = p.phi[R].slice(n);
        auto pv = p.phi[V].slice(n);
        auto rs = u.rho[S].slice(n);
        auto ri = u.rho[I].slice(n);
        auto rr = u.rho[R].slice(n);
        auto rv = u.rho[V].slice(n);

        for (std::size_t i = 0; i < sp; ++i) prod[i] = rs[i] * (pi[i] - ps[i]);
        kernel.convolve(prod, conv_sd);

        // susceptible, infected, recovered: cubic prox
        for (int pop : {S, I, R}) {
            const double denom = 1.0 + tau * (w.d_p + lam(pop));
            const double eta2h = 0.5 * ep.eta(pop) * ep.eta(pop);
            laplacian_slice(g, p.phi[pop].slice(n), lap);
            auto rho_k = u.rho[pop].slice(n);
            auto m1 = u.m[pop].c1.slice(n);
            auto m2 = u.m[pop].c2.slice(n);
            auto dst = out.rho[pop].slice(n);
            for (std::size_t i = 0; i < sp; ++i) {
                double reaction = 0.0, congest = 0.0;
                if (pop == S) {
                    reaction = ep.beta * (pi[i] - ps[i]) * conv_i[i] +
                               rv[i] * (ep.theta1 * (pr[i] - ps[i]) - ep.theta2 * pv[i]);
                    congest = w.d_p * (ri[i] + rr[i]);
                } else if (pop == I) {
                    reaction = ep.beta * conv_sd[i] + ep.gamma * (pr[i] - pi[i]);
                    congest = w.d_p * (rs[i] + rr[i]);
                } else {
                    congest = w.d_p * (rs[i] + ri[i]);
                }
                const double a =
                    (tau / denom) * (detail::backward_dt(p.phi[pop], n, i, dt_inv) +
                                     eta2h * lap[i] + reaction + congest - rho_k[i] / tau);
                const double msq = m1[i] * m1[i] + m2[i] * m2[i];
                const double c = -tau * w.alpha(pop) * msq / (2.0 * denom);
                dst[i] = root_plus(a, 0.0, c);
            }
        }

        // vaccine density: clamped linear prox during production, cubic after
        {
            const double denom = 1.0 + tau * (w.d_v + w.lambda);
            auto rho_k = rv;
            auto m1 = u.m[V].c1.slice(n);
            auto m2 = u.m[V].c2.slice(n);
            auto dst = out.rho[V].slice(n);
            for (std::size_t i = 0; i < sp; ++i) {
                const double coupling = rs[i] * (ep.theta1 * (pr[i] - ps[i]) - ep.theta2 * pv[i]);
                const double dphi = detail::backward_dt(p.phi[V], n, i, dt_inv);
                if (n <= np) {
                    const double cand = (tau / denom) * (-dphi - coupling + rho_k[i] / tau);
                    dst[i] = std::max(0.0, std::min(mp.logistics.c_factory, cand));
                } else {
                    const double a = (tau / denom) * (dphi + coupling - rho_k[i] / tau);
                    const double msq = m1[i] * m1[i] + m2[i] * m2[i];
                    const double c = -tau * w.alpha_v * msq / (2.0 * denom);
                    dst[i] = root_plus(a, 0.0, c);
                }
            }
        }
    }

    // obstacle projection on every non-pinned slab
    if (mp.logistics.has_obstacle) {
        for (int n = 1; n < g.nt; ++n)
            for (int pop : {S, I, R, V}) {
                auto dst = out.rho[pop].slice(n);
                for (int k = 0; k < g.nx1; ++k)
                    for (int l = 0; l < g.nx2; ++l)
                        if (mp.logistics.obstacle.at(k, l)) dst[g.sidx(k, l)] = 0.0;
            }
    }

    // momenta: shrinkage against the dual gradient, using the new densities
    std::vector<double> g1(sp), g2(sp);
    for (int pop : {S, I, R, V}) {
        if (pop != V && !mp.move_sir) continue; // held at zero
        const double lam_m = (!mp.lambda_v_only || pop == V) ? w.lambda : 0.0;
        const double alpha = w.alpha(pop);
        for (int n = 0; n < g.nt - 1; ++n) { // last level is a gauge variable, kept at 0
            if (pop == V && n < np) continue; // no vaccine transport before tprime
            gradient_slice(g, p.phi[pop].slice(n), g1, g2);
            auto rho = out.rho[pop].slice(n);
            auto mk1 = u.m[pop].c1.slice(n);
            auto mk2 = u.m[pop].c2.slice(n);
            auto d1 = out.m[pop].c1.slice(n);
            auto d2 = out.m[pop].c2.slice(n);
            for (std::size_t i = 0; i < sp; ++i) {
                const double denom = tau * alpha + (1.0 + tau * lam_m) * rho[i];
                if (denom == 0.0 || rho[i] == 0.0) {
                    d1[i] = 0.0;
                    d2[i] = 0.0;
                } else {
                    const double scale = rho[i] / denom;
                    d1[i] = scale * (mk1[i] - tau * g1[i]);
                    d2[i] = scale * (mk2[i] - tau * g2[i]);
                }
            }
        }
    }

    // production rate: box projection onto [0, f_max], factory support only
    if (mp.optimize_production) {
        const double denom = 1.0 + tau * (w.d_0 + w.lambda);
        for (int n = 0; n < np; ++n) {
            auto fk = u.f.slice(n);
            auto pv = p.phi[V].slice(n);
            auto dst = out.f.slice(n);
            for (int k = 0; k < g.nx1; ++k)
                for (int l = 0; l < g.nx2; ++l) {
                    if (!mp.logistics.factory.at(k, l)) continue;
                    const std::size_t i = g.sidx(k, l);
                    const double cand = (tau / denom) * (fk[i] / tau - pv[i]);
                    dst[i] = std::max(0.0, std::min(mp.logistics.f_max, cand));
                }
        }
    } else {
        out.f = u.f; // held fixed
    }
    return out;
}

/// Close the gauge: the last dual level multiplies no constraint slab and no
/// update reads it, so it is set to the terminal cost gradient, which is the
/// value the continuous terminal condition assigns to phi(T).
inline void pin_terminal_duals(DualVector& p, const StateVector& u, const ControlWeights& w) {
    const GridSpec& g = u.grid();
    const int nT = g.nt - 1;
    for (int pop : {S, I, V}) {
        auto phi = p.phi[pop].slice(nT);
        auto rho = u.rho[pop].slice(nT);
        for (std::size_t i = 0; i < g.spatial_size(); ++i) phi[i] = w.a(pop) * rho[i];
    }
    auto phi = p.phi[R].slice(nT);
    auto rho = u.rho[R].slice(nT);
    for (std::size_t i = 0; i < g.spatial_size(); ++i) phi[i] = -w.a_r * (1.0 - rho[i]);
}

/// Preconditioned dual ascent: phi_i += sigma (A_i A_i^T)^{-1} (-residual_i).
inline DualVector dual_ascend(const DualVector& p, const ResidualSet& residual,
                              const Preconditioner& precond, double sigma) {
    DualVector out = p;
    for (int pop : {S, I, R, V}) {
        ScalarField neg(residual[pop].grid);
        for (std::size_t i = 0; i < neg.v.size(); ++i) neg.v[i] = -residual[pop].v[i];
        ScalarField step = precond.solve(pop, neg);
        for (std::size_t i = 0; i < out.phi[pop].v.size(); ++i)
            out.phi[pop].v[i] += sigma * step.v[i];
    }
    return out;
}

/// Builds the dual-ascent residual at the extrapolated point u_tilde =
/// 2 u_new - u_old, either through the nonlinear constraint or its
/// linearization at u_old.
inline ResidualSet dual_residual(const StateVector& u_new, const StateVector& u_old,
                                 const ModelParams& mp, const KernelOp& kernel,
                                 SolverConfig::DualResidual mode) {
    const GridSpec& g = u_new.grid();
    StateVector tilde(g);
    for (int pop : {S, I, R, V}) {
        for (std::size_t i = 0; i < tilde.rho[pop].v.size(); ++i) {
            tilde.rho[pop].v[i] = 2.0 * u_new.rho[pop].v[i] - u_old.rho[pop].v[i];
            tilde.m[pop].c1.v[i] = 2.0 * u_new.m[pop].c1.v[i] - u_old.m[pop].c1.v[i];
            tilde.m[pop].c2.v[i] = 2.0 * u_new.m[pop].c2.v[i] - u_old.m[pop].c2.v[i];
        }
    }
    for (std::size_t i = 0; i < tilde.f.v.size(); ++i)
        tilde.f.v[i] = 2.0 * u_new.f.v[i] - u_old.f.v[i];

    if (mode == SolverConfig::DualResidual::Nonlinear) return apply_A(tilde, mp, kernel);

    const LinearizationPoint ubar(u_old);
    ResidualSet base = apply_A(u_old, mp, kernel);
    StateVector diff(g);
    for (int pop : {S, I, R, V}) {
        for (std::size_t i = 0; i < diff.rho[pop].v.size(); ++i) {
            diff.rho[pop].v[i] = tilde.rho[pop].v[i] - u_old.rho[pop].v[i];
            diff.m[pop].c1.v[i] = tilde.m[pop].c1.v[i] - u_old.m[pop].c1.v[i];
            diff.m[pop].c2.v[i] = tilde.m[pop].c2.v[i] - u_old.m[pop].c2.v[i];
        }
    }
    for (std::size_t i = 0; i < diff.f.v.size(); ++i) diff.f.v[i] = tilde.f.v[i] - u_old.f.v[i];
    ResidualSet lin = apply_linearized(ubar, diff, mp, kernel);
    for (int pop : {S, I, R, V})
        for (std::size_t i = 0; i < base[pop].v.size(); ++i) base[pop].v[i] += lin[pop].v[i];
    return base;
}

/// Spec-shaped dual step: extrapolate, evaluate the residual, ascend.
inline DualVector dual_update(const StateVector& u_new, const StateVector& u_old,
                              const DualVector& p, const ModelParams& mp,
                              const KernelOp& kernel, const Preconditioner& precond,
                              double sigma,
                              SolverConfig::DualResidual mode = SolverConfig::DualResidual::Nonlinear) {
    return dual_ascend(p, dual_residual(u_new, u_old, mp, kernel, mode), precond, sigma);
}

/// One linearized backward sweep of the dual equations along a given primal
/// trajectory, starting from the terminal-cost gradients. The quadratic
/// |grad phi|^2 term is left out; this is a costate estimate, not a solve.
inline DualVector backward_costate(const StateVector& u, const ModelParams& mp,
                                   const KernelOp& kernel) {
    const GridSpec& g = u.grid();
    const auto& ep = mp.epi;
    const auto& w = mp.w;
    const double dt = g.dt();
    const std::size_t sp = g.spatial_size();
    DualVector p(g);
    pin_terminal_duals(p, u, w);
    std::vector<double> conv(sp), lap(sp), prod(sp), conv_sd(sp);
    for (int n = g.nt - 2; n >= 0; --n) {
        kernel.convolve(u.rho[I].slice(n + 1), conv);
        auto ps = p.phi[S].slice(n + 1);
        auto pi = p.phi[I].slice(n + 1);
        auto pr = p.phi[R].slice(n + 1);
        auto pv = p.phi[V].slice(n + 1);
        auto rs = u.rho[S].slice(n + 1);
        auto ri = u.rho[I].slice(n + 1);
        auto rr = u.rho[R].slice(n + 1);
        auto rv = u.rho[V].slice(n + 1);
        for (std::size_t i = 0; i < sp; ++i) prod[i] = rs[i] * (pi[i] - ps[i]);
        kernel.convolve(prod, conv_sd);
        for (int pop : {S, I, R, V}) {
            const double eta2h = 0.5 * ep.eta(pop) * ep.eta(pop);
            if (pop != V) laplacian_slice(g, p.phi[pop].slice(n + 1), lap);
            auto dst = p.phi[pop].slice(n);
            auto src = p.phi[pop].slice(n + 1);
            for (std::size_t i = 0; i < sp; ++i) {
                double rhs;
                if (pop == V)
                    rhs = w.d_v * rv[i] +
                          rs[i] * (ep.theta1 * (pr[i] - ps[i]) - ep.theta2 * pv[i]);
                else
                    rhs = w.d_p * (rs[i] + ri[i] + rr[i]) + eta2h * lap[i];
                if (pop == S)
                    rhs += ep.beta * (pi[i] - ps[i]) * conv[i] +
                           rv[i] * (ep.theta1 * (pr[i] - ps[i]) - ep.theta2 * pv[i]);
                else if (pop == I)
                    rhs += ep.beta * conv_sd[i] + ep.gamma * (pr[i] - pi[i]);
                dst[i] = src[i] + dt * rhs;
            }
        }
    }
    return p;
}

/// Warm start: densities follow the zero-control forward march of the same
/// stencils (falling back to the constant-in-time extension if the explicit
/// march rejects the grid), momenta start at rest, and the dual starts from a
/// backward costate sweep so that it leads the iteration.
inline StateVector initial_state(const GridSpec& g, const ModelParams& mp,
                                 const std::array<std::vector<double>, 4>& initial) {
    StateVector u(g);
    if (!mp.optimize_production) {
        const int np = g.tprime_index();
        for (int n = 0; n < np; ++n) {
            auto dst = u.f.slice(n);
            for (int k = 0; k < g.nx1; ++k)
                for (int l = 0; l < g.nx2; ++l)
                    if (mp.logistics.factory.at(k, l))
                        dst[g.sidx(k, l)] = mp.fixed_production_rate;
        }
    }
    try {
        std::array<VectorField, 4> m0{VectorField(g), VectorField(g), VectorField(g),
                                      VectorField(g)};
        StateVector fwd = forward_simulate(g, mp, initial, m0, u.f);
        for (int pop : {S, I, R, V}) u.rho[pop] = std::move(fwd.rho[pop]);
    } catch (const std::exception&) {
        for (int pop : {S, I, R, V})
            for (int n = 0; n < g.nt; ++n) {
                auto dst = u.rho[pop].slice(n);
                for (std::size_t i = 0; i < g.spatial_size(); ++i) dst[i] = initial[pop][i];
            }
    }
    return u;
}

/// The G-prox primal-dual iteration. Stops when the relative change of the
/// smooth cost drops below tol, or after max_iters sweeps.
inline SolveResult solve(const SolverConfig& cfg, const ModelParams& mp, const GridSpec& g,
                         const std::array<std::vector<double>, 4>& initial,
                         const DiagnosticsSink& sink = nullptr) {
    {
        auto bad = cfg.validate();
        auto more = mp.validate(g);
        bad.insert(bad.end(), more.begin(), more.end());
        for (int pop : {S, I, R, V})
            for (double x : initial[pop])
                if (x < 0.0) {
                    bad.push_back("initial data: negative density");
                    break;
                }
        if (!bad.empty()) throw ConfigError(bad);
    }

    const KernelOp kernel(g, mp.epi.kernel);
    const Preconditioner precond(g, mp.epi);

    SolveResult res;
    res.u = initial_state(g, mp, initial);
    res.p = backward_costate(res.u, mp, kernel);

    double g_prev = evaluate_cost(res.u, mp).smooth_total();
    bool converged = false;
    int iters = 0;

    for (int k = 0; k < cfg.max_iters; ++k) {
        StateVector u_new = primal_update(res.u, res.p, initial, mp, kernel, cfg.tau);
        for (int pop : {S, I, R, V})
            if (!field_finite(u_new.rho[pop]) || !field_finite(u_new.m[pop].c1) ||
                !field_finite(u_new.m[pop].c2))
                throw SolveError("solve: non-finite primal field at iteration " + std::to_string(k));

        const ResidualSet residual =
            dual_residual(u_new, res.u, mp, kernel, cfg.dual_residual);
        res.p = dual_ascend(res.p, residual, precond, cfg.sigma);
        pin_terminal_duals(res.p, u_new, mp.w);
        for (int pop : {S, I, R, V})
            if (!field_finite(res.p.phi[pop]))
                throw SolveError("solve: non-finite dual field at iteration " + std::to_string(k));

        const double g_now = evaluate_cost(u_new, mp).smooth_total();
        const double rel = std::abs(g_now - g_prev) / std::max(std::abs(g_prev), 1e-12);

        res.u = std::move(u_new);
        iters = k + 1;

        if ((k + 1) % cfg.diag_every == 0 || k + 1 == cfg.max_iters || rel < cfg.tol) {
            IterationDiagnostics d;
            d.iteration = k + 1;
            d.monitor_lagrangian = evaluate_monitor_lagrangian(res.u, res.p, mp, kernel);
            d.relative_error = rel;
            d.constraint_residual_norms = residual_norms(apply_A(res.u, mp, kernel));
            if (cfg.capture_masses) {
                d.masses.resize(4 * g.nt);
                const double cell = g.dx1() * g.dx2();
                for (int pop : {S, I, R, V})
                    for (int n = 0; n < g.nt; ++n) {
                        double m = 0.0;
                        for (double x : res.u.rho[pop].slice(n)) m += x;
                        d.masses[pop * g.nt + n] = m * cell;
                    }
            }
            if (!std::isfinite(d.monitor_lagrangian) || std::abs(d.monitor_lagrangian) > 1e12)
                throw SolveError("solve: monitored Lagrangian diverged at iteration " +
                                 std::to_string(k + 1));
            res.trace.push_back(d);
            if (sink) sink(d);
        }

        g_prev = g_now;
        if (rel < cfg.tol) {
            converged = true;
            break;
        }
    }

    res.converged = converged;
    res.iterations = iters;
    res.final_cost = evaluate_cost(res.u, mp);
    return res;
}

struct MPositivityReport {
    int trials = 0;
    int positive = 0;
    double min_rayleigh = 0.0;
    double max_rayleigh = 0.0;
    bool all_positive() const { return positive == trials; }
};

/// Monte-Carlo check that M = [[I/tau, -A^T],[-A, AA^T/sigma]] stays positive
/// definite at the given linearization point when tau*sigma < 1.
inline MPositivityReport check_M_positivity(const StateVector& ubar_state, const ModelParams& mp,
                                            double tau, double sigma, int trials,
                                            unsigned seed = 2024) {
    const GridSpec& g = ubar_state.grid();
    const KernelOp kernel(g, mp.epi.kernel);
    const LinearizationPoint ubar(ubar_state);
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);

    MPositivityReport rep;
    rep.trials = trials;
    rep.min_rayleigh = std::numeric_limits<double>::infinity();
    rep.max_rayleigh = -std::numeric_limits<double>::infinity();

    for (int t = 0; t < trials; ++t) {
        StateVector u(g);
        for (int pop : {S, I, R, V}) {
            for (auto& x : u.rho[pop].v) x = dist(rng);
            for (auto& x : u.m[pop].c1.v) x = dist(rng);
            for (auto& x : u.m[pop].c2.v) x = dist(rng);
        }
        for (auto& x : u.f.v) x = dist(rng);
        DualVector p(g);
        for (int pop : {S, I, R, V})
            for (int n = 0; n < g.nt - 1; ++n) // the last dual slab never couples
                for (auto& x : p.phi[pop].slice(n)) x = dist(rng);

        const StateVector atp = apply_adjoint(ubar, p, mp, kernel);
        double u2 = flat_norm2(u.f.v), p2 = 0.0;
        for (int pop : {S, I, R, V}) {
            u2 += flat_norm2(u.rho[pop].v) + flat_norm2(u.m[pop].c1.v) + flat_norm2(u.m[pop].c2.v);
            p2 += flat_norm2(p.phi[pop].v);
        }
        const double h2 = flat_dot_states(atp, atp);
        const double cross = flat_dot_states(u, atp);
        const double quad = u2 / tau + h2 / sigma - 2.0 * cross;
        const double rayleigh = quad / (u2 + p2);
        rep.min_rayleigh = std::min(rep.min_rayleigh, rayleigh);
        rep.max_rayleigh = std::max(rep.max_rayleigh, rayleigh);
        if (quad > 0.0) ++rep.positive;
    }
    return rep;
}

} // namespace sirv
