#pragma once

#include <array>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "sirv/constraint.hpp"
#include "sirv/grid.hpp"
#include "sirv/kernel.hpp"
#include "sirv/params.hpp"
#include "sirv/state.hpp"

namespace sirv {

struct OdeState {
    double s = 0.0;
    double i = 0.0;
    double r = 0.0;
};

/// Classical SIR system integrated with RK4.
inline std::vector<OdeState> sir_ode(double beta, double gamma, const OdeState& y0, double T,
                                     int steps) {
    if (steps < 1) throw std::invalid_argument("sir_ode: steps must be >= 1");
    if (beta < 0.0 || gamma < 0.0 || y0.s < 0.0 || y0.i < 0.0 || y0.r < 0.0)
        throw std::invalid_argument("sir_ode: negative input");
    const double h = T / steps;
    auto rhs = [&](const OdeState& y) {
        return OdeState{-beta * y.i * y.s, beta * y.i * y.s - gamma * y.i, gamma * y.i};
    };
    auto axpy = [](const OdeState& y, const OdeState& d, double a) {
        return OdeState{y.s + a * d.s, y.i + a * d.i, y.r + a * d.r};
    };
    std::vector<OdeState> out;
    out.reserve(steps + 1);
    out.push_back(y0);
    OdeState y = y0;
    for (int n = 0; n < steps; ++n) {
        const OdeState k1 = rhs(y);
        const OdeState k2 = rhs(axpy(y, k1, 0.5 * h));
        const OdeState k3 = rhs(axpy(y, k2, 0.5 * h));
        const OdeState k4 = rhs(axpy(y, k3, h));
        y = OdeState{y.s + h / 6.0 * (k1.s + 2.0 * k2.s + 2.0 * k3.s + k4.s),
                     y.i + h / 6.0 * (k1.i + 2.0 * k2.i + 2.0 * k3.i + k4.i),
                     y.r + h / 6.0 * (k1.r + 2.0 * k2.r + 2.0 * k3.r + k4.r)};
        out.push_back(y);
    }
    return out;
}

/// Explicit Euler march of exactly the discrete operators behind apply_A:
/// the returned trajectory zeroes every constraint residual to round-off.
/// Controls are the momenta m_i and the production rate f; both are copied
/// into the returned state. Throws on CFL violation or if a density goes
/// negative (reporting the first offending cell).
inline StateVector forward_simulate(const GridSpec& g, const ModelParams& mp,
                                    const std::array<std::vector<double>, 4>& initial,
                                    const std::array<VectorField, 4>& m, const ScalarField& f) {
    const KernelOp kernel(g, mp.epi.kernel);
    const auto& ep = mp.epi;
    const int np = g.tprime_index();
    const double dt = g.dt();
    const std::size_t sp = g.spatial_size();

    // CFL-type bound: dt * (max|v|/dx + 2 eta^2/dx^2) < 0.9, with v = m/rho
    {
        const double dx = std::min(g.dx1(), g.dx2());
        double eta_max = std::max({ep.eta_s, ep.eta_i, ep.eta_r});
        double vmax = 0.0;
        for (int pop : {S, I, R, V}) {
            // velocity read off the initial slab only; later slabs are checked
            // implicitly by the negative-density guard
            for (std::size_t i = 0; i < sp; ++i) {
                const double rho = initial[pop][i];
                if (rho > 1e-12) {
                    const double mm = std::hypot(m[pop].c1.v[i], m[pop].c2.v[i]);
                    vmax = std::max(vmax, mm / rho);
                }
            }
        }
        const double cfl = dt * (vmax / dx + 2.0 * eta_max * eta_max / (dx * dx));
        if (cfl >= 0.9)
            throw std::invalid_argument("forward_simulate: CFL bound violated, " +
                                        std::to_string(cfl) + " >= 0.9");
    }

    StateVector u(g);
    for (int pop : {S, I, R, V}) {
        u.m[pop] = m[pop];
        auto dst = u.rho[pop].slice(0);
        for (std::size_t i = 0; i < sp; ++i) dst[i] = initial[pop][i];
    }
    u.f = f;

    std::vector<double> conv(sp), div(sp), lap(sp);
    for (int n = 0; n < g.nt - 1; ++n) {
        kernel.convolve(u.rho[I].slice(n), conv);
        for (int pop : {S, I, R, V}) {
            auto cur = u.rho[pop].slice(n);
            auto nxt = u.rho[pop].slice(n + 1);
            const bool with_div = pop != V || n >= np;
            if (with_div) divergence_slice(g, u.m[pop].c1.slice(n), u.m[pop].c2.slice(n), div);
            const double eta2h = 0.5 * ep.eta(pop) * ep.eta(pop);
            if (pop != V) laplacian_slice(g, cur, lap);
            auto rs = u.rho[S].slice(n);
            auto ri = u.rho[I].slice(n);
            auto rv = u.rho[V].slice(n);
            auto fs = u.f.slice(n);
            for (std::size_t i = 0; i < sp; ++i) {
                double rate = 0.0;
                if (with_div) rate -= div[i];
                if (pop != V) rate += eta2h * lap[i];
                switch (pop) {
                    case S: rate -= ep.beta * rs[i] * conv[i] + ep.theta1 * rs[i] * rv[i]; break;
                    case I: rate += ep.beta * rs[i] * conv[i] - ep.gamma * ri[i]; break;
                    case R: rate += ep.gamma * ri[i] + ep.theta1 * rs[i] * rv[i]; break;
                    case V:
                        rate -= ep.theta2 * rs[i] * rv[i];
                        if (n < np) rate += fs[i];
                        break;
                }
                nxt[i] = cur[i] + dt * rate;
                if (nxt[i] < 0.0)
                    throw std::runtime_error(
                        "forward_simulate: negative density for " + std::string(kPopNames[pop]) +
                        " at (n=" + std::to_string(n + 1) + ", cell=" + std::to_string(i) + ")");
            }
        }
    }
    return u;
}

/// Spatially homogeneous version of the same Euler recursion, O(1) memory.
/// Returns (S, I, R, V) at the requested sample count (including both ends).
inline std::vector<std::array<double, 4>> integrate_homogeneous(const EpidemicParams& ep,
                                                                const std::array<double, 4>& y0,
                                                                double T, long steps,
                                                                int samples) {
    const double dt = T / steps;
    std::array<double, 4> y = y0;
    std::vector<std::array<double, 4>> out;
    out.reserve(samples + 1);
    out.push_back(y);
    long next_sample = 1;
    for (long n = 0; n < steps; ++n) {
        const double infect = ep.beta * y[S] * y[I]; // K * uniform = uniform
        const double vacc = ep.theta1 * y[V] * y[S];
        const std::array<double, 4> rate{-infect - vacc, infect - ep.gamma * y[I],
                                         ep.gamma * y[I] + vacc, -ep.theta2 * y[V] * y[S]};
        for (int pop : {S, I, R, V}) y[pop] += dt * rate[pop];
        if (n + 1 == next_sample * steps / samples) {
            out.push_back(y);
            ++next_sample;
        }
    }
    return out;
}

struct CrossValidationReport {
    std::array<double, 4> max_abs{}; // per constraint component

    double worst() const { return std::max({max_abs[0], max_abs[1], max_abs[2], max_abs[3]}); }
};

/// Feed a trajectory back through the constraint operator and report the
/// largest residual per component. The consistency gate between the forward
/// integrator and the optimizer discretization.
inline CrossValidationReport cross_validate(const StateVector& u, const ModelParams& mp) {
    const ResidualSet r = apply_A(u, mp);
    CrossValidationReport rep;
    for (int pop : {S, I, R, V}) {
        double m = 0.0;
        for (double x : r[pop].v) m = std::max(m, std::abs(x));
        rep.max_abs[pop] = m;
    }
    return rep;
}

} // namespace sirv
