#pragma once

#include <string>
#include <vector>

#include "sirv/config.hpp"
#include "sirv/errors.hpp"

namespace sirv {

inline std::vector<std::string> preset_names() {
    return {"exp1",       "exp2a",          "exp2b",          "exp3-single", "exp3-single-obs",
            "exp3-multi", "exp3-multi-obs", "exp4-controlled", "exp4-fixed"};
}

/// Built-in experiment configurations. Passing nx/nt overrides the default
/// resolution; the infection-kernel width is floored at dx/2 so every preset
/// stays runnable on coarse grids.
inline ExperimentConfig preset(const std::string& name, int nx = 0, int nt = 0) {
    ExperimentConfig cfg;
    cfg.name = name;
    cfg.nt = 32;
    cfg.tprime = 0.5;
    cfg.epi = EpidemicParams{};
    cfg.weights = ControlWeights{};
    cfg.solver.tau = 0.05;
    cfg.solver.sigma = 0.2;
    cfg.solver.max_iters = 3000;
    cfg.solver.tol = 1e-4;

    auto bump = [](double amp, double decay, double c1, double c2, double floor) {
        return InitialBump{amp, decay, c1, c2, floor};
    };

    if (name == "exp1") {
        cfg.nx1 = cfg.nx2 = 64;
        cfg.weights.alpha_r = 1e4; // recovered population held immobile
        cfg.initial.bumps[S] = {bump(2.0, 5.0, 0.7, 0.7, 1.5)};
        cfg.initial.bumps[I] = {bump(2.0, 5.0, 0.7, 0.7, 1.8)};
        cfg.factory_balls = {{0.3, 0.3, 0.1}};
        cfg.epi.theta1 = 0.9;
        cfg.f_max = 10.0;
        cfg.c_factory = 2.0;
    } else if (name == "exp2a" || name == "exp2b") {
        cfg.nx1 = cfg.nx2 = 32;
        cfg.initial.bumps[S] = {bump(2.0, 5.0, 0.7, 0.7, 1.5)};
        cfg.initial.bumps[I] = {bump(2.0, 5.0, 0.7, 0.7, 1.8)};
        cfg.factory_balls = {{0.3, 0.3, 0.1}};
        if (name == "exp2a") {
            cfg.epi.theta1 = 0.5;
            cfg.f_max = 0.5;
            cfg.c_factory = 0.5;
        } else {
            cfg.epi.theta1 = 0.9;
            cfg.f_max = 10.0;
            cfg.c_factory = 2.0;
        }
    } else if (name == "exp3-single" || name == "exp3-single-obs") {
        cfg.nx1 = cfg.nx2 = 32;
        cfg.initial.bumps[S] = {bump(2.0, 15.0, 0.2, 0.5, 1.6), bump(2.0, 15.0, 0.8, 0.5, 1.6)};
        cfg.initial.bumps[I] = {bump(2.0, 15.0, 0.2, 0.5, 1.8)};
        cfg.factory_balls = {{0.5, 0.5, 0.075}};
        cfg.epi.theta1 = 0.9;
        cfg.f_max = 10.0;
        cfg.c_factory = 2.0;
        if (name == "exp3-single-obs")
            // vertical bar between the central factory and the right cluster
            cfg.obstacle_rects = {{0.59, 0.65, 0.25, 0.75}};
    } else if (name == "exp3-multi" || name == "exp3-multi-obs") {
        cfg.nx1 = cfg.nx2 = 32;
        cfg.initial.bumps[S] = {bump(2.0, 15.0, 0.8, 0.8, 1.6), bump(2.0, 15.0, 0.2, 0.7, 1.6),
                                bump(2.0, 15.0, 0.8, 0.3, 1.6), bump(2.0, 15.0, 0.2, 0.2, 1.6)};
        cfg.initial.bumps[I] = {bump(2.0, 15.0, 0.2, 0.7, 1.8), bump(2.0, 15.0, 0.2, 0.2, 1.8)};
        cfg.factory_balls = {{0.5, 0.2, 0.075}, {0.5, 0.5, 0.075}, {0.5, 0.8, 0.075}};
        cfg.epi.theta1 = 0.9;
        cfg.f_max = 10.0;
        cfg.c_factory = 2.0;
        if (name == "exp3-multi-obs")
            // bars flanking the top and bottom factories; the middle corridor stays open
            cfg.obstacle_rects = {{0.34, 0.40, 0.66, 0.95},
                                  {0.60, 0.66, 0.66, 0.95},
                                  {0.34, 0.40, 0.05, 0.34},
                                  {0.60, 0.66, 0.05, 0.34}};
    } else if (name == "exp4-controlled" || name == "exp4-fixed") {
        cfg.nx1 = cfg.nx2 = 32;
        cfg.initial.bumps[S] = {bump(4.0, 15.0, 0.5, 0.55, 1.6)};
        cfg.initial.bumps[I] = {bump(4.0, 15.0, 0.5, 0.55, 1.8)};
        cfg.factory_balls = {{0.1, 0.3, 0.04}, {0.5, 0.3, 0.04}, {0.9, 0.4, 0.04}};
        cfg.epi.theta1 = 0.9;
        cfg.f_max = 5.0;
        cfg.c_factory = 1.0;
        // bar between the middle factory and the population above it
        cfg.obstacle_rects = {{0.40, 0.60, 0.375, 0.425}};
        // movement of S, I, R disabled and their cost terms dropped
        cfg.move_sir = false;
        cfg.lambda_v_only = true;
        cfg.weights.a_s = cfg.weights.a_i = cfg.weights.a_r = 0.0;
        cfg.weights.d_p = 0.0;
        if (name == "exp4-fixed") {
            cfg.optimize_production = false;
            cfg.fixed_production_rate = 1.2;
        }
    } else {
        throw ConfigError("preset: unknown name '" + name + "'");
    }

    if (nx > 0) cfg.nx1 = cfg.nx2 = nx;
    if (nt > 0) cfg.nt = nt;

    // keep the infection kernel resolvable on the chosen grid
    const double floor1 = 0.5 / cfg.nx1, floor2 = 0.5 / cfg.nx2;
    cfg.epi.kernel.sigma1 = std::max(cfg.epi.kernel.sigma1, floor1);
    cfg.epi.kernel.sigma2 = std::max(cfg.epi.kernel.sigma2, floor2);

    cfg.output.dir = "out/" + name;
    cfg.output.snapshot_times = {0, cfg.nt / 4, cfg.nt / 2, 3 * cfg.nt / 4, cfg.nt - 1};
    return cfg;
}

} // namespace sirv
