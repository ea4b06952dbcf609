#pragma once

#include <cmath>
#include <functional>
#include <random>
#include <vector>

#include "sirv/errors.hpp"
#include "sirv/grid.hpp"
#include "sirv/ops.hpp"

namespace sirv {

/// A linear operator handle: forward application plus its exact transpose.
struct LinearOperator {
    std::size_t input_size = 0;
    std::size_t output_size = 0;
    std::function<std::vector<double>(const std::vector<double>&)> apply;
    std::function<std::vector<double>(const std::vector<double>&)> apply_transpose;
};

/// Power iteration on op^T op. Stops once the eigenvalue estimate changes by
/// less than 1e-8 (relative to max(1, lambda)); throws after 10^4 iterations.
inline double estimate_operator_norm(const LinearOperator& op, int max_iters = 10000) {
    std::mt19937 rng(12345);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    std::vector<double> v(op.input_size);
    for (auto& x : v) x = dist(rng);
    double nv = std::sqrt(flat_norm2(v));
    for (auto& x : v) x /= nv;

    double lambda_prev = 0.0;
    for (int it = 0; it < max_iters; ++it) {
        std::vector<double> w = op.apply(v);
        const double lambda = flat_norm2(w); // Rayleigh quotient of op^T op at unit v
        std::vector<double> y = op.apply_transpose(w);
        double ny = std::sqrt(flat_norm2(y));
        if (ny == 0.0) return 0.0;
        for (auto& x : y) x /= ny;
        v = std::move(y);
        if (it > 0 && std::abs(lambda - lambda_prev) < 1e-8 * std::max(1.0, std::abs(lambda)))
            return std::sqrt(lambda);
        lambda_prev = lambda;
    }
    throw SolveError("estimate_operator_norm: power iteration did not converge in 10^4 iterations");
}

/// The discrete gradient on spatial slices of an N1 x N2 grid, with its
/// transpose built from the divergence (div = -grad^T by construction).
inline LinearOperator gradient_operator(const GridSpec& g) {
    LinearOperator op;
    op.input_size = g.spatial_size();
    op.output_size = 2 * g.spatial_size();
    op.apply = [g](const std::vector<double>& u) {
        std::vector<double> out(2 * g.spatial_size());
        std::span<double> g1(out.data(), g.spatial_size());
        std::span<double> g2(out.data() + g.spatial_size(), g.spatial_size());
        gradient_slice(g, u, g1, g2);
        return out;
    };
    op.apply_transpose = [g](const std::vector<double>& w) {
        std::span<const double> m1(w.data(), g.spatial_size());
        std::span<const double> m2(w.data() + g.spatial_size(), g.spatial_size());
        std::vector<double> out(g.spatial_size());
        divergence_slice(g, m1, m2, out);
        for (auto& x : out) x = -x;
        return out;
    };
    return op;
}

inline LinearOperator identity_operator(std::size_t n) {
    LinearOperator op;
    op.input_size = op.output_size = n;
    op.apply = [](const std::vector<double>& u) { return u; };
    op.apply_transpose = [](const std::vector<double>& u) { return u; };
    return op;
}

inline LinearOperator laplacian_operator(const GridSpec& g) {
    LinearOperator op;
    op.input_size = op.output_size = g.spatial_size();
    auto f = [g](const std::vector<double>& u) {
        std::vector<double> out(g.spatial_size());
        laplacian_slice(g, u, out);
        return out;
    };
    op.apply = f;
    op.apply_transpose = f; // symmetric stencil
    return op;
}

} // namespace sirv
