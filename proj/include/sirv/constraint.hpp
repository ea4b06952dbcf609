#pragma once

#include <array>
#include <cmath>
#include <vector>

#include "sirv/grid.hpp"
#include "sirv/kernel.hpp"
#include "sirv/ops.hpp"
#include "sirv/params.hpp"
#include "sirv/state.hpp"

namespace sirv {

// The nonlinear constraint A(u) and its exact discrete linear algebra.
//
// Discretization: the residual of each continuity equation lives on the nt-1
// time slabs n = 0..nt-2. Slab n pairs the forward time difference
// (rho^{n+1}-rho^n)/dt with transport, diffusion and reaction terms evaluated
// at node n, so an explicit Euler march of the same stencils zeroes the
// residual identically. The stored residual fields keep their last slab at 0.
//
// The production source f enters slabs with t_n < tprime, the vaccine
// divergence enters slabs with t_n >= tprime.

using ResidualSet = std::array<ScalarField, 4>;

inline void check_same_grid(const GridSpec& a, const GridSpec& b, const char* what) {
    if (!(a == b)) throw std::invalid_argument(std::string(what) + ": grid mismatch");
}

inline ResidualSet apply_A(const StateVector& u, const ModelParams& mp, const KernelOp& kernel) {
    const GridSpec& g = u.grid();
    check_same_grid(g, kernel.grid(), "apply_A");
    const double dt_inv = 1.0 / g.dt();
    const int np = g.tprime_index();
    const auto& ep = mp.epi;

    ResidualSet r{ScalarField(g), ScalarField(g), ScalarField(g), ScalarField(g)};
    std::vector<double> conv(g.spatial_size()), div(g.spatial_size()), lap(g.spatial_size());

    for (int n = 0; n < g.nt - 1; ++n) {
        kernel.convolve(u.rho[I].slice(n), conv);
        for (int pop : {S, I, R, V}) {
            auto out = r[pop].slice(n);
            auto cur = u.rho[pop].slice(n);
            auto nxt = u.rho[pop].slice(n + 1);
            const bool with_div = pop != V || n >= np;
            if (with_div)
                divergence_slice(g, u.m[pop].c1.slice(n), u.m[pop].c2.slice(n), div);
            const double eta2h = 0.5 * ep.eta(pop) * ep.eta(pop);
            if (pop != V) laplacian_slice(g, cur, lap);
            auto rs = u.rho[S].slice(n);
            auto ri = u.rho[I].slice(n);
            auto rv = u.rho[V].slice(n);
            auto fs = u.f.slice(n);
            for (std::size_t i = 0; i < g.spatial_size(); ++i) {
                double val = (nxt[i] - cur[i]) * dt_inv;
                if (with_div) val += div[i];
                if (pop != V) val -= eta2h * lap[i];
                switch (pop) {
                    case S: val += ep.beta * rs[i] * conv[i] + ep.theta1 * rs[i] * rv[i]; break;
                    case I: val += -ep.beta * rs[i] * conv[i] + ep.gamma * ri[i]; break;
                    case R: val += -ep.gamma * ri[i] - ep.theta1 * rs[i] * rv[i]; break;
                    case V:
                        val += ep.theta2 * rs[i] * rv[i];
                        if (n < np) val -= fs[i];
                        break;
                }
                out[i] = val;
            }
        }
    }
    return r;
}

inline ResidualSet apply_A(const StateVector& u, const ModelParams& mp) {
    return apply_A(u, mp, KernelOp(u.grid(), mp.epi.kernel));
}

/// The derivative of A at ubar, applied to u. A pure linear map: the bilinear
/// reaction terms differentiate into both factors, so
/// apply_linearized(ubar, ubar) = A(ubar) + Q(ubar) with Q the quadratic part.
inline ResidualSet apply_linearized(const LinearizationPoint& ubar, const StateVector& u,
                                    const ModelParams& mp, const KernelOp& kernel) {
    const GridSpec& g = u.grid();
    check_same_grid(g, ubar.grid(), "apply_linearized");
    const double dt_inv = 1.0 / g.dt();
    const int np = g.tprime_index();
    const auto& ep = mp.epi;

    ResidualSet r{ScalarField(g), ScalarField(g), ScalarField(g), ScalarField(g)};
    std::vector<double> conv_bar_i(g.spatial_size()), conv_h_i(g.spatial_size());
    std::vector<double> div(g.spatial_size()), lap(g.spatial_size());

    for (int n = 0; n < g.nt - 1; ++n) {
        kernel.convolve(ubar.rho_i.slice(n), conv_bar_i);
        kernel.convolve(u.rho[I].slice(n), conv_h_i);
        auto bs = ubar.rho_s.slice(n);
        auto bv = ubar.rho_v.slice(n);
        auto hs = u.rho[S].slice(n);
        auto hi = u.rho[I].slice(n);
        auto hv = u.rho[V].slice(n);
        auto hf = u.f.slice(n);
        for (int pop : {S, I, R, V}) {
            auto out = r[pop].slice(n);
            auto cur = u.rho[pop].slice(n);
            auto nxt = u.rho[pop].slice(n + 1);
            const bool with_div = pop != V || n >= np;
            if (with_div)
                divergence_slice(g, u.m[pop].c1.slice(n), u.m[pop].c2.slice(n), div);
            const double eta2h = 0.5 * ep.eta(pop) * ep.eta(pop);
            if (pop != V) laplacian_slice(g, cur, lap);
            for (std::size_t i = 0; i < g.spatial_size(); ++i) {
                double val = (nxt[i] - cur[i]) * dt_inv;
                if (with_div) val += div[i];
                if (pop != V) val -= eta2h * lap[i];
                const double infection = ep.beta * (hs[i] * conv_bar_i[i] + bs[i] * conv_h_i[i]);
                const double vacc = hs[i] * bv[i] + bs[i] * hv[i];
                switch (pop) {
                    case S: val += infection + ep.theta1 * vacc; break;
                    case I: val += -infection + ep.gamma * hi[i]; break;
                    case R: val += -ep.gamma * hi[i] - ep.theta1 * vacc; break;
                    case V:
                        val += ep.theta2 * vacc;
                        if (n < np) val -= hf[i];
                        break;
                }
                out[i] = val;
            }
        }
    }
    return r;
}

/// Exact transpose of apply_linearized under the flat (unweighted) inner
/// product over all stored entries. The last dual slab never couples.
inline StateVector apply_adjoint(const LinearizationPoint& ubar, const DualVector& p,
                                 const ModelParams& mp, const KernelOp& kernel) {
    const GridSpec& g = p.grid();
    check_same_grid(g, ubar.grid(), "apply_adjoint");
    const double dt_inv = 1.0 / g.dt();
    const int np = g.tprime_index();
    const auto& ep = mp.epi;

    StateVector out(g);
    std::vector<double> conv(g.spatial_size()), lap(g.spatial_size());
    std::vector<double> g1(g.spatial_size()), g2(g.spatial_size());
    std::vector<double> prod(g.spatial_size());

    // transpose of the forward time difference: (phi^{j-1} - phi^j)/dt with
    // phi^{-1} = phi^{nt-1} = 0
    for (int pop : {S, I, R, V})
        for (int j = 0; j < g.nt; ++j) {
            auto o = out.rho[pop].slice(j);
            auto cur = j <= g.nt - 2 ? p.phi[pop].slice(j) : std::span<const double>();
            auto prv = j >= 1 ? p.phi[pop].slice(j - 1) : std::span<const double>();
            for (std::size_t i = 0; i < g.spatial_size(); ++i) {
                double val = 0.0;
                if (j >= 1) val += prv[i] * dt_inv;
                if (j <= g.nt - 2) val -= cur[i] * dt_inv;
                o[i] = val;
            }
        }

    for (int j = 0; j <= g.nt - 2; ++j) {
        auto ps = p.phi[S].slice(j);
        auto pi = p.phi[I].slice(j);
        auto pr = p.phi[R].slice(j);
        auto pv = p.phi[V].slice(j);
        auto bs = ubar.rho_s.slice(j);
        auto bv = ubar.rho_v.slice(j);

        // rho_S slot: diffusion transpose plus the frozen reaction couplings
        kernel.convolve(ubar.rho_i.slice(j), conv);
        laplacian_slice(g, ps, lap);
        {
            auto o = out.rho[S].slice(j);
            const double eta2h = 0.5 * ep.eta_s * ep.eta_s;
            for (std::size_t i = 0; i < g.spatial_size(); ++i)
                o[i] += -eta2h * lap[i] + ep.beta * conv[i] * (ps[i] - pi[i]) +
                        bv[i] * (ep.theta1 * (ps[i] - pr[i]) + ep.theta2 * pv[i]);
        }
        // rho_I slot: the kernel moves onto the dual difference
        for (std::size_t i = 0; i < g.spatial_size(); ++i) prod[i] = bs[i] * (ps[i] - pi[i]);
        kernel.convolve(prod, conv);
        laplacian_slice(g, pi, lap);
        {
            auto o = out.rho[I].slice(j);
            const double eta2h = 0.5 * ep.eta_i * ep.eta_i;
            for (std::size_t i = 0; i < g.spatial_size(); ++i)
                o[i] += -eta2h * lap[i] + ep.beta * conv[i] + ep.gamma * (pi[i] - pr[i]);
        }
        laplacian_slice(g, pr, lap);
        {
            auto o = out.rho[R].slice(j);
            const double eta2h = 0.5 * ep.eta_r * ep.eta_r;
            for (std::size_t i = 0; i < g.spatial_size(); ++i) o[i] += -eta2h * lap[i];
        }
        {
            auto o = out.rho[V].slice(j);
            for (std::size_t i = 0; i < g.spatial_size(); ++i)
                o[i] += bs[i] * (ep.theta1 * (ps[i] - pr[i]) + ep.theta2 * pv[i]);
        }

        // momentum slots: divergence transposes to minus the gradient
        for (int pop : {S, I, R, V}) {
            if (pop == V && j < np) continue;
            gradient_slice(g, p.phi[pop].slice(j), g1, g2);
            auto o1 = out.m[pop].c1.slice(j);
            auto o2 = out.m[pop].c2.slice(j);
            for (std::size_t i = 0; i < g.spatial_size(); ++i) {
                o1[i] = -g1[i];
                o2[i] = -g2[i];
            }
        }

        // production slot
        if (j < np) {
            auto o = out.f.slice(j);
            for (std::size_t i = 0; i < g.spatial_size(); ++i) o[i] = -pv[i];
        }
    }
    return out;
}

inline double flat_dot_residuals(const ResidualSet& a, const DualVector& p) {
    double s = 0.0;
    for (int pop : {S, I, R, V}) s += flat_dot(a[pop].v, p.phi[pop].v);
    return s;
}

inline double flat_dot_states(const StateVector& a, const StateVector& b) {
    double s = 0.0;
    for (int pop : {S, I, R, V}) {
        s += flat_dot(a.rho[pop].v, b.rho[pop].v);
        s += flat_dot(a.m[pop].c1.v, b.m[pop].c1.v);
        s += flat_dot(a.m[pop].c2.v, b.m[pop].c2.v);
    }
    s += flat_dot(a.f.v, b.f.v);
    return s;
}

/// L2 norms (slab-weighted) of every residual component.
inline std::array<double, 4> residual_norms(const ResidualSet& r) {
    const GridSpec& g = r[0].grid;
    const double w = g.dt() * g.dx1() * g.dx2();
    std::array<double, 4> out{};
    for (int pop : {S, I, R, V}) out[pop] = std::sqrt(w * flat_norm2(r[pop].v));
    return out;
}

} // namespace sirv
