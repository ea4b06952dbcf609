#pragma once

#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "sirv/constraint.hpp"
#include "sirv/grid.hpp"
#include "sirv/kernel.hpp"
#include "sirv/ops.hpp"
#include "sirv/params.hpp"
#include "sirv/state.hpp"

namespace sirv {

/// L2 defect of each first-order optimality relation of the coupled
/// forward/backward system: four backward dual equations (the vaccine one in
/// two phases), five forward density equations with the optimal velocity
/// v = -grad(phi)/alpha substituted, the production stationarity relation on
/// the factory during the production window, and the terminal closures.
/// A convergence diagnostic, not a solver.
struct KktResiduals {
    double phi_s = 0.0, phi_i = 0.0, phi_r = 0.0;
    double phi_v_production = 0.0, phi_v_delivery = 0.0;
    double rho_s = 0.0, rho_i = 0.0, rho_r = 0.0;
    double rho_v_production = 0.0, rho_v_delivery = 0.0;
    double production_rate = 0.0;
    double terminal = 0.0;

    std::array<double, 12> as_array() const {
        return {phi_s,    phi_i,    phi_r, phi_v_production, phi_v_delivery,  rho_s,
                rho_i,    rho_r,    rho_v_production, rho_v_delivery, production_rate, terminal};
    }
    static std::array<const char*, 12> names() {
        return {"phi_S", "phi_I", "phi_R", "phi_V[0,T')", "phi_V[T',T]", "rho_S",
                "rho_I", "rho_R", "rho_V[0,T')", "rho_V[T',T]", "f", "terminal"};
    }
};

inline KktResiduals kkt_residuals(const StateVector& u, const DualVector& p,
                                  const ModelParams& mp) {
    const GridSpec& g = u.grid();
    const KernelOp kernel(g, mp.epi.kernel);
    const auto& ep = mp.epi;
    const auto& w = mp.w;
    const int np = g.tprime_index();
    const double dt = g.dt(), dt_inv = 1.0 / dt;
    const double cell = g.dx1() * g.dx2();
    const std::size_t sp = g.spatial_size();

    KktResiduals out;
    std::vector<double> conv(sp), lap(sp), g1(sp), g2(sp), div(sp), prod(sp);
    std::vector<double> m1(sp), m2(sp);

    // backward dual equations on the non-pinned nodes
    double acc[5] = {0, 0, 0, 0, 0};
    for (int n = 1; n < g.nt; ++n) {
        kernel.convolve(u.rho[I].slice(n), conv);
        auto ps = p.phi[S].slice(n);
        auto pi = p.phi[I].slice(n);
        auto pr = p.phi[R].slice(n);
        auto pv = p.phi[V].slice(n);
        auto rs = u.rho[S].slice(n);
        auto ri = u.rho[I].slice(n);
        auto rr = u.rho[R].slice(n);
        auto rv = u.rho[V].slice(n);
        for (std::size_t i = 0; i < sp; ++i) prod[i] = rs[i] * (pi[i] - ps[i]);
        std::vector<double> conv_sd = kernel.convolve(prod);

        for (int pop : {S, I, R}) {
            laplacian_slice(g, p.phi[pop].slice(n), lap);
            gradient_slice(g, p.phi[pop].slice(n), g1, g2);
            const double eta2h = 0.5 * ep.eta(pop) * ep.eta(pop);
            double a = 0.0;
            for (std::size_t i = 0; i < sp; ++i) {
                const double dphi = (p.phi[pop].slice(n)[i] - p.phi[pop].slice(n - 1)[i]) * dt_inv;
                const double kin = (g1[i] * g1[i] + g2[i] * g2[i]) / (2.0 * w.alpha(pop));
                const double congest = w.d_p * (rs[i] + ri[i] + rr[i]);
                double reaction = 0.0;
                if (pop == S)
                    reaction = ep.beta * (pi[i] - ps[i]) * conv[i] +
                               rv[i] * (ep.theta1 * (pr[i] - ps[i]) - ep.theta2 * pv[i]);
                else if (pop == I)
                    reaction = ep.beta * conv_sd[i] + ep.gamma * (pr[i] - pi[i]);
                const double rres = dphi - kin + eta2h * lap[i] + congest + reaction;
                a += rres * rres;
            }
            acc[pop] += a;
        }
        {
            gradient_slice(g, pv, g1, g2);
            double a = 0.0;
            for (std::size_t i = 0; i < sp; ++i) {
                const double dphi = (pv[i] - p.phi[V].slice(n - 1)[i]) * dt_inv;
                double rres = dphi + w.d_v * rv[i] +
                              rs[i] * (ep.theta1 * (pr[i] - ps[i]) - ep.theta2 * pv[i]);
                if (n > np) rres -= (g1[i] * g1[i] + g2[i] * g2[i]) / (2.0 * w.alpha_v);
                a += rres * rres;
            }
            acc[n <= np ? 3 : 4] += a;
        }
    }
    out.phi_s = std::sqrt(acc[0] * dt * cell);
    out.phi_i = std::sqrt(acc[1] * dt * cell);
    out.phi_r = std::sqrt(acc[2] * dt * cell);
    out.phi_v_production = std::sqrt(acc[3] * dt * cell);
    out.phi_v_delivery = std::sqrt(acc[4] * dt * cell);

    // forward density equations with the optimal velocity substituted
    double accr[5] = {0, 0, 0, 0, 0};
    for (int n = 0; n < g.nt - 1; ++n) {
        kernel.convolve(u.rho[I].slice(n), conv);
        auto rs = u.rho[S].slice(n);
        auto ri = u.rho[I].slice(n);
        auto rv = u.rho[V].slice(n);
        auto fs = u.f.slice(n);
        for (int pop : {S, I, R, V}) {
            auto rho = u.rho[pop].slice(n);
            auto nxt = u.rho[pop].slice(n + 1);
            gradient_slice(g, p.phi[pop].slice(n), g1, g2);
            for (std::size_t i = 0; i < sp; ++i) {
                m1[i] = -rho[i] * g1[i] / w.alpha(pop);
                m2[i] = -rho[i] * g2[i] / w.alpha(pop);
            }
            const bool with_div = pop != V || n >= np;
            if (with_div) divergence_slice(g, m1, m2, div);
            const double eta2h = 0.5 * ep.eta(pop) * ep.eta(pop);
            if (pop != V) laplacian_slice(g, rho, lap);
            double a = 0.0;
            for (std::size_t i = 0; i < sp; ++i) {
                double rres = (nxt[i] - rho[i]) * dt_inv;
                if (with_div) rres += div[i];
                if (pop != V) rres -= eta2h * lap[i];
                switch (pop) {
                    case S: rres += ep.beta * rs[i] * conv[i] + ep.theta1 * rs[i] * rv[i]; break;
                    case I: rres += -ep.beta * rs[i] * conv[i] + ep.gamma * ri[i]; break;
                    case R: rres += -ep.gamma * ri[i] - ep.theta1 * rs[i] * rv[i]; break;
                    case V:
                        rres += ep.theta2 * rs[i] * rv[i];
                        if (n < np) rres -= fs[i];
                        break;
                }
                a += rres * rres;
            }
            if (pop == V)
                accr[n < np ? 3 : 4] += a;
            else
                accr[pop] += a;
        }
    }
    out.rho_s = std::sqrt(accr[0] * dt * cell);
    out.rho_i = std::sqrt(accr[1] * dt * cell);
    out.rho_r = std::sqrt(accr[2] * dt * cell);
    out.rho_v_production = std::sqrt(accr[3] * dt * cell);
    out.rho_v_delivery = std::sqrt(accr[4] * dt * cell);

    // production stationarity where the box constraint is inactive
    {
        double a = 0.0;
        for (int n = 0; n < np; ++n) {
            auto fs = u.f.slice(n);
            auto pv = p.phi[V].slice(n);
            for (int k = 0; k < g.nx1; ++k)
                for (int l = 0; l < g.nx2; ++l) {
                    if (!mp.logistics.factory.at(k, l)) continue;
                    const std::size_t i = g.sidx(k, l);
                    if (fs[i] <= 0.0 || fs[i] >= mp.logistics.f_max) continue;
                    const double rres = w.d_0 * fs[i] + pv[i];
                    a += rres * rres;
                }
        }
        out.production_rate = std::sqrt(a * dt * cell);
    }

    // terminal closures phi_i(T) = dE_i/drho(T)
    {
        const int nT = g.nt - 1;
        double a = 0.0;
        for (int pop : {S, I, V}) {
            auto phi = p.phi[pop].slice(nT);
            auto rho = u.rho[pop].slice(nT);
            for (std::size_t i = 0; i < sp; ++i) {
                const double rres = phi[i] - w.a(pop) * rho[i];
                a += rres * rres;
            }
        }
        auto phi = p.phi[R].slice(nT);
        auto rho = u.rho[R].slice(nT);
        for (std::size_t i = 0; i < sp; ++i) {
            const double rres = phi[i] + w.a_r * (1.0 - rho[i]);
            a += rres * rres;
        }
        out.terminal = std::sqrt(a * cell);
    }
    return out;
}

} // namespace sirv
