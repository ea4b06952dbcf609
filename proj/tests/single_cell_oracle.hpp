#pragma once

// Independent scalar transcription of the solver iteration on a 1x1 spatial
// grid, where every spatial stencil degenerates to zero and the kernel to the
// identity. Used to cross-check the full solver against plainly written
// formulas: its own bisection cubic solve and its own direct cosine
// transforms, no library code paths.

#include <array>
#include <cmath>
#include <vector>

#include "sirv/pdhg.hpp"
#include "sirv/region.hpp"

namespace sirv_test {

/// Runs both the library solver and the scalar transcription for `iters`
/// sweeps on a 1 x 1 x nt grid and returns the largest absolute difference
/// across every stored density, dual, and production value.
inline double single_cell_max_diff(int nt, int iters) {
    using namespace sirv;
    GridSpec g(1, 1, nt, 0.5);
    ModelParams mp;
    mp.epi.kernel = KernelSpec{0.6, 0.6};
    mp.logistics.factory = make_ball(g, 0.5, 0.5, 0.4);
    mp.logistics.factory_components = {mp.logistics.factory};
    mp.logistics.f_max = 1.5;
    mp.logistics.c_factory = 0.8;
    const int np = g.tprime_index();
    const double tau = 0.05, sigma = 0.2, dt = g.dt();

    std::array<std::vector<double>, 4> init;
    init[S] = {0.9};
    init[I] = {0.1};
    init[R] = {0.0};
    init[V] = {0.0};

    SolverConfig cfg;
    cfg.tau = tau;
    cfg.sigma = sigma;
    cfg.max_iters = iters;
    cfg.tol = 1e-300;
    cfg.diag_every = iters;
    SolveResult got = solve(cfg, mp, g, init);

    const auto& ep = mp.epi;
    const auto& w = mp.w;
    std::array<std::vector<double>, 4> rho, phi;
    std::vector<double> f(nt, 0.0);
    for (int pop : {S, I, R, V}) {
        rho[pop].assign(nt, init[pop][0]);
        phi[pop].assign(nt, 0.0);
    }
    // warm start: zero-control forward march, then a backward costate sweep
    for (int n = 0; n < nt - 1; ++n) {
        const double s = rho[S][n], i = rho[I][n], v = rho[V][n];
        rho[S][n + 1] = s + dt * (-ep.beta * s * i - ep.theta1 * v * s);
        rho[I][n + 1] = i + dt * (ep.beta * s * i - ep.gamma * i);
        rho[R][n + 1] = rho[R][n] + dt * (ep.gamma * i + ep.theta1 * v * s);
        rho[V][n + 1] = v + dt * (-ep.theta2 * v * s);
    }
    auto pin = [&] {
        phi[S][nt - 1] = w.a_s * rho[S][nt - 1];
        phi[I][nt - 1] = w.a_i * rho[I][nt - 1];
        phi[V][nt - 1] = w.a_v * rho[V][nt - 1];
        phi[R][nt - 1] = -w.a_r * (1.0 - rho[R][nt - 1]);
    };
    pin();
    for (int n = nt - 2; n >= 0; --n) {
        const double s = rho[S][n + 1], i = rho[I][n + 1], r = rho[R][n + 1], v = rho[V][n + 1];
        const double ps = phi[S][n + 1], pi = phi[I][n + 1], pr = phi[R][n + 1],
                     pv = phi[V][n + 1];
        const double congest = w.d_p * (s + i + r);
        const double vacc = ep.theta1 * (pr - ps) - ep.theta2 * pv;
        phi[S][n] = ps + dt * (congest + ep.beta * (pi - ps) * i + v * vacc);
        phi[I][n] = pi + dt * (congest + ep.beta * s * (pi - ps) + ep.gamma * (pr - pi));
        phi[R][n] = pr + dt * congest;
        phi[V][n] = pv + dt * (w.d_v * v + s * vacc);
    }

    auto dct_f = [&](const std::vector<double>& x) {
        std::vector<double> c(nt, 0.0);
        for (int p = 0; p < nt; ++p) {
            double s = 0.0;
            for (int k = 0; k < nt; ++k) s += x[k] * std::cos(M_PI * p * (k + 0.5) / nt);
            c[p] = s * (p == 0 ? std::sqrt(1.0 / nt) : std::sqrt(2.0 / nt));
        }
        return c;
    };
    auto dct_i = [&](const std::vector<double>& c) {
        std::vector<double> x(nt, 0.0);
        for (int k = 0; k < nt; ++k) {
            double s = 0.0;
            for (int p = 0; p < nt; ++p)
                s += c[p] * (p == 0 ? std::sqrt(1.0 / nt) : std::sqrt(2.0 / nt)) *
                     std::cos(M_PI * p * (k + 0.5) / nt);
            x[k] = s;
        }
        return x;
    };
    std::array<std::vector<double>, 4> sym;
    for (int pop : {S, I, R, V}) {
        sym[pop].assign(nt, 0.0);
        double cnst = 0.0;
        if (pop == S) cnst = (ep.beta + ep.theta1) * (ep.beta + ep.theta1);
        if (pop == I) cnst = (ep.gamma + ep.beta) * (ep.gamma + ep.beta);
        if (pop == V) cnst = ep.theta2 * ep.theta2;
        for (int p = 0; p < nt; ++p)
            sym[pop][p] = (2.0 / (dt * dt)) * (1.0 - std::cos(M_PI * p / nt)) + cnst;
        if (sym[pop][0] == 0.0) sym[pop][0] = (2.0 / (dt * dt)) * (1.0 - std::cos(M_PI / nt));
    }
    auto cubic_root = [](double a, double c) {
        auto pfun = [&](double x) { return ((x + a) * x) * x + c; };
        if (pfun(0.0) > 0.0) return std::max(0.0, -a); // roots {0, 0, -a}
        double lo = 0.0, hi = 1.0 + std::abs(a) + std::abs(c);
        for (int it = 0; it < 200; ++it) {
            const double mid = 0.5 * (lo + hi);
            if (mid == lo || mid == hi) break;
            (pfun(mid) < 0.0 ? lo : hi) = mid;
        }
        return 0.5 * (lo + hi);
    };

    for (int it = 0; it < iters; ++it) {
        std::array<std::vector<double>, 4> rn = rho;
        std::vector<double> fn = f;
        {
            const double two_dt = 2.0 / dt;
            const double ds = 1.0 + tau * (w.d_p + w.lambda + two_dt * w.a_s);
            const double di = 1.0 + tau * (w.d_p + w.lambda + two_dt * w.a_i);
            const double dr = 1.0 + tau * (w.d_p + w.lambda + two_dt * w.a_r);
            const double dv = 1.0 + tau * (w.d_v + w.lambda + two_dt * w.a_v);
            rn[S][nt - 1] = std::max(0.0, tau * (rho[S][nt - 1] / tau + two_dt * phi[S][nt - 2] -
                                                 w.d_p * (rho[I][nt - 1] + rho[R][nt - 1])) /
                                              ds);
            rn[I][nt - 1] = std::max(0.0, tau * (rho[I][nt - 1] / tau + two_dt * phi[I][nt - 2] -
                                                 w.d_p * (rho[S][nt - 1] + rho[R][nt - 1])) /
                                              di);
            rn[R][nt - 1] = std::max(0.0, tau * (rho[R][nt - 1] / tau + two_dt * phi[R][nt - 2] -
                                                 w.d_p * (rho[S][nt - 1] + rho[I][nt - 1]) +
                                                 two_dt * w.a_r) /
                                              dr);
            rn[V][nt - 1] =
                std::max(0.0, tau * (rho[V][nt - 1] / tau + two_dt * phi[V][nt - 2]) / dv);
        }
        for (int n = 1; n < nt - 1; ++n) {
            const double dphi_s = (phi[S][n] - phi[S][n - 1]) / dt;
            const double dphi_i = (phi[I][n] - phi[I][n - 1]) / dt;
            const double dphi_r = (phi[R][n] - phi[R][n - 1]) / dt;
            const double dphi_v = (phi[V][n] - phi[V][n - 1]) / dt;
            const double den3 = 1.0 + tau * (w.d_p + w.lambda);
            const double react_s =
                ep.beta * (phi[I][n] - phi[S][n]) * rho[I][n] +
                rho[V][n] * (ep.theta1 * (phi[R][n] - phi[S][n]) - ep.theta2 * phi[V][n]);
            const double react_i = ep.beta * rho[S][n] * (phi[I][n] - phi[S][n]) +
                                   ep.gamma * (phi[R][n] - phi[I][n]);
            rn[S][n] = cubic_root(
                (tau / den3) * (dphi_s + react_s + w.d_p * (rho[I][n] + rho[R][n]) - rho[S][n] / tau),
                0.0);
            rn[I][n] = cubic_root(
                (tau / den3) * (dphi_i + react_i + w.d_p * (rho[S][n] + rho[R][n]) - rho[I][n] / tau),
                0.0);
            rn[R][n] = cubic_root(
                (tau / den3) * (dphi_r + w.d_p * (rho[S][n] + rho[I][n]) - rho[R][n] / tau), 0.0);
            const double denv = 1.0 + tau * (w.d_v + w.lambda);
            const double coup =
                rho[S][n] * (ep.theta1 * (phi[R][n] - phi[S][n]) - ep.theta2 * phi[V][n]);
            if (n <= np) {
                const double cand = (tau / denv) * (-dphi_v - coup + rho[V][n] / tau);
                rn[V][n] = std::max(0.0, std::min(mp.logistics.c_factory, cand));
            } else {
                rn[V][n] = cubic_root((tau / denv) * (dphi_v + coup - rho[V][n] / tau), 0.0);
            }
        }
        const double denf = 1.0 + tau * (w.d_0 + w.lambda);
        for (int n = 0; n < np; ++n)
            fn[n] = std::max(0.0,
                             std::min(mp.logistics.f_max, (tau / denf) * (f[n] / tau - phi[V][n])));

        std::array<std::vector<double>, 4> res;
        for (int pop : {S, I, R, V}) res[pop].assign(nt, 0.0);
        for (int n = 0; n < nt - 1; ++n) {
            auto til = [&](const std::vector<double>& nw, const std::vector<double>& od, int j) {
                return 2.0 * nw[j] - od[j];
            };
            const double ts = til(rn[S], rho[S], n), ti = til(rn[I], rho[I], n);
            const double tr = til(rn[R], rho[R], n), tv = til(rn[V], rho[V], n);
            const double tf = til(fn, f, n);
            res[S][n] =
                (til(rn[S], rho[S], n + 1) - ts) / dt + ep.beta * ts * ti + ep.theta1 * ts * tv;
            res[I][n] = (til(rn[I], rho[I], n + 1) - ti) / dt - ep.beta * ts * ti + ep.gamma * ti;
            res[R][n] =
                (til(rn[R], rho[R], n + 1) - tr) / dt - ep.gamma * ti - ep.theta1 * ts * tv;
            res[V][n] = (til(rn[V], rho[V], n + 1) - tv) / dt + ep.theta2 * ts * tv -
                        (n < np ? tf : 0.0);
        }
        for (int pop : {S, I, R, V}) {
            auto c = dct_f(res[pop]);
            for (int p = 0; p < nt; ++p) c[p] /= sym[pop][p];
            auto step = dct_i(c);
            for (int n = 0; n < nt; ++n) phi[pop][n] -= sigma * step[n];
        }
        rho = rn;
        f = fn;
        pin();
    }

    double diff = 0.0;
    for (int pop : {S, I, R, V})
        for (int n = 0; n < nt; ++n) {
            diff = std::max(diff, std::abs(got.u.rho[pop].at(n, 0, 0) - rho[pop][n]));
            diff = std::max(diff, std::abs(got.p.phi[pop].at(n, 0, 0) - phi[pop][n]));
        }
    for (int n = 0; n < nt; ++n) diff = std::max(diff, std::abs(got.u.f.at(n, 0, 0) - f[n]));
    return diff;
}

} // namespace sirv_test
