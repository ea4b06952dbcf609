#pragma once

#include <cmath>
#include <span>
#include <vector>

#include "sirv/dct.hpp"
#include "sirv/errors.hpp"
#include "sirv/grid.hpp"

namespace sirv {

/// Gaussian infection kernel widths, one per axis, in domain units.
struct KernelSpec {
    double sigma1 = 0.01;
    double sigma2 = 0.01;
};

namespace detail {

// Truncated Gaussian weights at cell offsets, normalized to sum exactly 1 so
// uniform fields are fixed points of the convolution.
inline std::vector<double> kernel_weights(double sigma, double dx) {
    const int r = std::max(1, static_cast<int>(std::ceil(5.0 * sigma / dx)));
    std::vector<double> w(r + 1);
    double total = 0.0;
    for (int a = -r; a <= r; ++a) total += std::exp(-(a * dx) * (a * dx) / (2.0 * sigma * sigma));
    for (int a = 0; a <= r; ++a) w[a] = std::exp(-(a * dx) * (a * dx) / (2.0 * sigma * sigma)) / total;
    return w; // w[0] center, w[a] = weight at offset +-a
}

// Symbol of the mirror-extension convolution in the DCT-II basis.
inline std::vector<double> kernel_symbol(const std::vector<double>& w, int n) {
    std::vector<double> sym(n);
    const int r = static_cast<int>(w.size()) - 1;
    for (int p = 0; p < n; ++p) {
        double s = w[0];
        for (int a = 1; a <= r; ++a) s += 2.0 * w[a] * std::cos(M_PI * p * a / n);
        sym[p] = s;
    }
    return sym;
}

} // namespace detail

/// Separable mirror-extension Gaussian convolution on spatial slices,
/// applied spectrally. The symmetric kernel plus even extension make the
/// convolution matrix symmetric and row-stochastic, so constants are fixed
/// points and total mass is preserved.
class KernelOp {
public:
    KernelOp(const GridSpec& g, const KernelSpec& spec) : grid_(g) {
        std::vector<std::string> bad;
        if (!(spec.sigma1 > 0.0)) bad.push_back("kernel.sigma1: must be positive");
        if (!(spec.sigma2 > 0.0)) bad.push_back("kernel.sigma2: must be positive");
        if (!bad.empty()) throw ConfigError(bad);
        if (spec.sigma1 < 0.5 * g.dx1())
            bad.push_back("kernel.sigma1: narrower than dx1/2, unresolvable on this grid");
        if (spec.sigma2 < 0.5 * g.dx2())
            bad.push_back("kernel.sigma2: narrower than dx2/2, unresolvable on this grid");
        if (!bad.empty()) throw ConfigError(bad);
        sym1_ = detail::kernel_symbol(detail::kernel_weights(spec.sigma1, g.dx1()), g.nx1);
        sym2_ = detail::kernel_symbol(detail::kernel_weights(spec.sigma2, g.dx2()), g.nx2);
    }

    void convolve(std::span<const double> in, std::span<double> out) const {
        std::vector<double> c(grid_.spatial_size());
        dct2_forward(grid_.nx1, grid_.nx2, in.data(), c.data());
        for (int p = 0; p < grid_.nx1; ++p)
            for (int q = 0; q < grid_.nx2; ++q) c[grid_.sidx(p, q)] *= sym1_[p] * sym2_[q];
        dct2_inverse(grid_.nx1, grid_.nx2, c.data(), out.data());
    }

    std::vector<double> convolve(std::span<const double> in) const {
        std::vector<double> out(grid_.spatial_size());
        convolve(in, out);
        return out;
    }

    const GridSpec& grid() const { return grid_; }

private:
    GridSpec grid_;
    std::vector<double> sym1_, sym2_;
};

/// One-shot convenience wrapper over KernelOp.
inline std::vector<double> kernel_convolve(const KernelSpec& spec, const GridSpec& g,
                                           std::span<const double> slice) {
    return KernelOp(g, spec).convolve(slice);
}

} // namespace sirv
