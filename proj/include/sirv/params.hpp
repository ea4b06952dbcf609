#pragma once

#include <array>
#include <string>
#include <vector>

#include "sirv/errors.hpp"
#include "sirv/grid.hpp"
#include "sirv/kernel.hpp"
#include "sirv/region.hpp"

namespace sirv {

enum Pop : int { S = 0, I = 1, R = 2, V = 3 };

inline constexpr std::array<const char*, 4> kPopNames{"S", "I", "R", "V"};

struct EpidemicParams {
    double beta = 0.8;    // infection rate
    double gamma = 0.1;   // recovery rate
    double theta1 = 0.9;  // vaccine efficiency
    double theta2 = 0.9;  // vaccine utilization rate
    double eta_s = 0.01;  // diffusion coefficients
    double eta_i = 0.01;
    double eta_r = 0.01;
    KernelSpec kernel;

    double eta(int pop) const {
        switch (pop) {
            case S: return eta_s;
            case I: return eta_i;
            case R: return eta_r;
            default: return 0.0; // the vaccine density does not diffuse
        }
    }
};

struct ControlWeights {
    double alpha_s = 10.0, alpha_i = 30.0, alpha_r = 20.0, alpha_v = 0.005;
    double a_s = 2.0, a_i = 2.0, a_r = 0.001, a_v = 0.1;
    double d_p = 0.4, d_v = 0.4, d_0 = 0.01;
    double lambda = 0.01;

    double alpha(int pop) const {
        switch (pop) {
            case S: return alpha_s;
            case I: return alpha_i;
            case R: return alpha_r;
            default: return alpha_v;
        }
    }
    double a(int pop) const {
        switch (pop) {
            case S: return a_s;
            case I: return a_i;
            case R: return a_r;
            default: return a_v;
        }
    }
};

struct VaccineLogistics {
    double f_max = 10.0;
    double c_factory = 2.0;
    RegionMask factory;                          // union of all factory sites
    std::vector<RegionMask> factory_components;  // one mask per site, for reporting
    RegionMask obstacle;
    bool has_obstacle = false;
};

/// One truncated-Gaussian bump: (amplitude * exp(-decay*|x-c|^2) - floor)_+.
struct InitialBump {
    double amplitude = 0.0;
    double decay = 0.0;
    double c1 = 0.5;
    double c2 = 0.5;
    double floor = 0.0;
};

struct InitialData {
    std::array<std::vector<InitialBump>, 4> bumps;
    std::array<double, 4> constant{0.0, 0.0, 0.0, 0.0};

    /// Evaluate one population's initial density on the spatial grid,
    /// zeroed on obstacle cells so the pinned initial slab stays feasible.
    std::vector<double> build(const GridSpec& g, int pop, const RegionMask* obstacle) const {
        std::vector<double> out(g.spatial_size(), constant[pop]);
        for (const auto& b : bumps[pop])
            for (int k = 0; k < g.nx1; ++k)
                for (int l = 0; l < g.nx2; ++l) {
                    const double d1 = g.x1(k) - b.c1, d2 = g.x2(l) - b.c2;
                    const double v = b.amplitude * std::exp(-b.decay * (d1 * d1 + d2 * d2)) - b.floor;
                    if (v > 0.0) out[g.sidx(k, l)] += v;
                }
        if (obstacle)
            for (int k = 0; k < g.nx1; ++k)
                for (int l = 0; l < g.nx2; ++l)
                    if (obstacle->at(k, l)) out[g.sidx(k, l)] = 0.0;
        return out;
    }
};

/// Everything the solver needs besides the grid and the initial data.
struct ModelParams {
    EpidemicParams epi;
    ControlWeights w;
    VaccineLogistics logistics;

    // Variant switches for the reduced no-movement comparison runs: when
    // move_sir is false the S,I,R momenta are held at zero, and when
    // lambda_v_only is set the strong-convexity term covers only (rho_V, m_V, f).
    bool move_sir = true;
    bool lambda_v_only = false;
    bool optimize_production = true;
    double fixed_production_rate = 0.0; // used when optimize_production == false

    std::vector<std::string> validate(const GridSpec& g) const {
        std::vector<std::string> bad;
        auto nonneg = [&](double x, const char* path) {
            if (!(x >= 0.0)) bad.push_back(std::string(path) + ": must be nonnegative");
        };
        nonneg(epi.beta, "epidemic.beta");
        nonneg(epi.gamma, "epidemic.gamma");
        nonneg(epi.theta1, "epidemic.theta1");
        nonneg(epi.theta2, "epidemic.theta2");
        nonneg(epi.eta_s, "epidemic.eta_s");
        nonneg(epi.eta_i, "epidemic.eta_i");
        nonneg(epi.eta_r, "epidemic.eta_r");
        for (double x : {epi.beta, epi.gamma, epi.theta1, epi.theta2})
            if (x > 10.0) bad.push_back("epidemic rates: sanity bound 10 exceeded");
        nonneg(w.alpha_s, "weights.alpha_s");
        nonneg(w.alpha_i, "weights.alpha_i");
        nonneg(w.alpha_r, "weights.alpha_r");
        nonneg(w.alpha_v, "weights.alpha_v");
        nonneg(w.a_s, "weights.a_s");
        nonneg(w.a_i, "weights.a_i");
        nonneg(w.a_r, "weights.a_r");
        nonneg(w.a_v, "weights.a_v");
        nonneg(w.d_p, "weights.d_p");
        nonneg(w.d_v, "weights.d_v");
        nonneg(w.d_0, "weights.d_0");
        if (!(w.lambda > 0.0)) bad.push_back("weights.lambda: must be positive");
        nonneg(logistics.f_max, "logistics.f_max");
        nonneg(logistics.c_factory, "logistics.c_factory");
        if (logistics.factory.empty()) bad.push_back("logistics.factory: mask must be nonempty");
        if (logistics.has_obstacle && !logistics.factory.disjoint_from(logistics.obstacle))
            bad.push_back("logistics.obstacle: must be disjoint from the factory mask");
        if (epi.kernel.sigma1 < 0.5 * g.dx1())
            bad.push_back("epidemic.kernel.sigma1: narrower than dx1/2 on this grid");
        if (epi.kernel.sigma2 < 0.5 * g.dx2())
            bad.push_back("epidemic.kernel.sigma2: narrower than dx2/2 on this grid");
        return bad;
    }
};

} // namespace sirv
