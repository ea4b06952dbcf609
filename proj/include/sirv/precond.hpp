#pragma once

#include <array>
#include <cmath>
#include <vector>

#include "sirv/dct.hpp"
#include "sirv/errors.hpp"
#include "sirv/grid.hpp"
#include "sirv/params.hpp"

namespace sirv {

/// Constant-coefficient space-time surrogates of the normal operators
/// A_i A_i^T, diagonal in the cosine basis:
///
///   S: -dtt + (eta_S^4/4) lap^2 - (1 + (beta+theta1) eta_S^2) lap + (beta+theta1)^2
///   I: -dtt + (eta_I^4/4) lap^2 - (1 + (gamma+beta) eta_I^2) lap + (gamma+beta)^2
///   R: -dtt + (eta_R^4/4) lap^2 - lap
///   V: -dtt - lap + theta2^2
///
/// The R symbol vanishes on the constant space-time mode; that single mode is
/// replaced by the smallest nonzero time eigenvalue (~pi^2/T^2), which is the
/// scale the exact normal operator assigns to its slowest mode. A tiny
/// epsilon there would turn the dual ascent into a 1e8-fold amplifier of the
/// residual mean and blow the iteration up within two sweeps.
/// Solving divides cosine coefficients by the strictly positive symbol.
class Preconditioner {
public:

    Preconditioner(const GridSpec& g, const EpidemicParams& ep) : grid_(g) {
        struct Coef {
            double bih, lap, cnst;
        };
        const std::array<Coef, 4> coef{
            Coef{std::pow(ep.eta_s, 4) / 4.0, 1.0 + (ep.beta + ep.theta1) * ep.eta_s * ep.eta_s,
                 (ep.beta + ep.theta1) * (ep.beta + ep.theta1)},
            Coef{std::pow(ep.eta_i, 4) / 4.0, 1.0 + (ep.gamma + ep.beta) * ep.eta_i * ep.eta_i,
                 (ep.gamma + ep.beta) * (ep.gamma + ep.beta)},
            Coef{std::pow(ep.eta_r, 4) / 4.0, 1.0, 0.0},
            Coef{0.0, 1.0, ep.theta2 * ep.theta2}};

        std::vector<double> st(g.nt), s1(g.nx1), s2(g.nx2);
        for (int p = 0; p < g.nt; ++p) st[p] = lap_symbol_axis(p, g.nt, g.dt());
        for (int p = 0; p < g.nx1; ++p) s1[p] = lap_symbol_axis(p, g.nx1, g.dx1());
        for (int p = 0; p < g.nx2; ++p) s2[p] = lap_symbol_axis(p, g.nx2, g.dx2());

        for (int pop : {S, I, R, V}) {
            auto& sym = symbol_[pop];
            sym.resize(g.size());
            const Coef& c = coef[pop];
            std::size_t i = 0;
            for (int n = 0; n < g.nt; ++n)
                for (int p = 0; p < g.nx1; ++p)
                    for (int q = 0; q < g.nx2; ++q, ++i) {
                        const double lap = s1[p] + s2[q]; // symbol of -Laplacian
                        sym[i] = st[n] + c.bih * lap * lap + c.lap * lap + c.cnst;
                    }
            if (sym[0] == 0.0) sym[0] = st[1];
            for (double s : sym)
                if (!(s > 0.0))
                    throw ConfigError("preconditioner: nonpositive spectral symbol for population " +
                                      std::string(kPopNames[pop]));
        }
    }

    /// (A_i A_i^T)^{-1} r via division in the cosine basis.
    ScalarField solve(int pop, const ScalarField& r) const {
        ScalarField c = dct_forward(r);
        const auto& sym = symbol_[pop];
        for (std::size_t i = 0; i < c.v.size(); ++i) c.v[i] /= sym[i];
        return dct_inverse(c);
    }

    /// Forward application of the surrogate, for round-trip checks.
    ScalarField apply(int pop, const ScalarField& u) const {
        ScalarField c = dct_forward(u);
        const auto& sym = symbol_[pop];
        for (std::size_t i = 0; i < c.v.size(); ++i) c.v[i] *= sym[i];
        return dct_inverse(c);
    }

    double symbol(int pop, int n, int p, int q) const {
        return symbol_[pop][grid_.idx(n, p, q)];
    }

    const GridSpec& grid() const { return grid_; }

private:
    GridSpec grid_;
    std::array<std::vector<double>, 4> symbol_;
};

} // namespace sirv
