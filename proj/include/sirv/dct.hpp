#pragma once

#include <fftw3.h>

#include <array>
#include <cmath>
#include <map>
#include <mutex>
#include <vector>

#include "sirv/grid.hpp"

namespace sirv {
namespace detail {

// Plan creation is not thread-safe in FFTW; executions on distinct buffers are.
// Plans are cached per (rank, dims, kind) and created with FFTW_UNALIGNED so
// they can run on any caller buffer via the new-array interface.
struct PlanKey {
    std::array<int, 3> dims;
    int rank;
    int kind;
    bool operator<(const PlanKey& o) const {
        if (dims != o.dims) return dims < o.dims;
        if (rank != o.rank) return rank < o.rank;
        return kind < o.kind;
    }
};

inline fftw_plan get_plan(int rank, const std::array<int, 3>& dims, fftw_r2r_kind kind) {
    static std::map<PlanKey, fftw_plan> cache;
    static std::mutex mtx;
    std::lock_guard<std::mutex> lock(mtx);
    PlanKey key{dims, rank, static_cast<int>(kind)};
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;

    std::size_t n = 1;
    for (int d = 0; d < rank; ++d) n *= dims[d];
    std::vector<double> in(n), out(n);
    std::array<fftw_r2r_kind, 3> kinds{kind, kind, kind};
    fftw_plan p = fftw_plan_r2r(rank, dims.data(), in.data(), out.data(), kinds.data(),
                                FFTW_ESTIMATE | FFTW_UNALIGNED);
    cache.emplace(key, p);
    return p;
}

// Orthonormal axis scale: sqrt(1/N) for the zero mode, sqrt(2/N) otherwise.
inline double ortho_scale(int p, int n) {
    return p == 0 ? std::sqrt(1.0 / n) : std::sqrt(2.0 / n);
}

inline void scale_forward(int rank, const std::array<int, 3>& dims, double* x) {
    // FFTW REDFT10 returns 2*sum(x_k cos(...)) per axis; fold in s_p/2 per axis.
    const int n0 = dims[0], n1 = rank > 1 ? dims[1] : 1, n2 = rank > 2 ? dims[2] : 1;
    std::size_t i = 0;
    for (int p = 0; p < n0; ++p) {
        const double f0 = ortho_scale(p, n0) * 0.5;
        for (int q = 0; q < n1; ++q) {
            const double f1 = rank > 1 ? ortho_scale(q, n1) * 0.5 : 1.0;
            for (int r = 0; r < n2; ++r, ++i) {
                const double f2 = rank > 2 ? ortho_scale(r, n2) * 0.5 : 1.0;
                x[i] *= f0 * f1 * f2;
            }
        }
    }
}

inline void scale_inverse(int rank, const std::array<int, 3>& dims, double* x) {
    // REDFT01 wants X_0 = s_0 c_0 and X_p = s_p c_p / 2.
    const int n0 = dims[0], n1 = rank > 1 ? dims[1] : 1, n2 = rank > 2 ? dims[2] : 1;
    auto pre = [](int p, int n) { return p == 0 ? ortho_scale(0, n) : ortho_scale(p, n) * 0.5; };
    std::size_t i = 0;
    for (int p = 0; p < n0; ++p) {
        const double f0 = pre(p, n0);
        for (int q = 0; q < n1; ++q) {
            const double f1 = rank > 1 ? pre(q, n1) : 1.0;
            for (int r = 0; r < n2; ++r, ++i) {
                const double f2 = rank > 2 ? pre(r, n2) : 1.0;
                x[i] *= f0 * f1 * f2;
            }
        }
    }
}

inline void dct_forward_nd(int rank, const std::array<int, 3>& dims, const double* in, double* out) {
    std::size_t n = 1;
    for (int d = 0; d < rank; ++d) n *= dims[d];
    std::vector<double> tmp(in, in + n);
    fftw_plan p = get_plan(rank, dims, FFTW_REDFT10);
    fftw_execute_r2r(p, tmp.data(), out);
    scale_forward(rank, dims, out);
}

inline void dct_inverse_nd(int rank, const std::array<int, 3>& dims, const double* in, double* out) {
    std::size_t n = 1;
    for (int d = 0; d < rank; ++d) n *= dims[d];
    std::vector<double> tmp(in, in + n);
    scale_inverse(rank, dims, tmp.data());
    fftw_plan p = get_plan(rank, dims, FFTW_REDFT01);
    fftw_execute_r2r(p, tmp.data(), out);
}

} // namespace detail

/// Orthonormal DCT-II over all three axes (time, x1, x2). Inverse of dct_inverse.
inline ScalarField dct_forward(const ScalarField& u) {
    ScalarField out(u.grid);
    detail::dct_forward_nd(3, {u.grid.nt, u.grid.nx1, u.grid.nx2}, u.v.data(), out.v.data());
    return out;
}

/// Orthonormal DCT-III over all three axes; dct_inverse(dct_forward(u)) == u.
inline ScalarField dct_inverse(const ScalarField& coeffs) {
    ScalarField out(coeffs.grid);
    detail::dct_inverse_nd(3, {coeffs.grid.nt, coeffs.grid.nx1, coeffs.grid.nx2},
                           coeffs.v.data(), out.v.data());
    return out;
}

inline void dct2_forward(int nx1, int nx2, const double* in, double* out) {
    detail::dct_forward_nd(2, {nx1, nx2, 1}, in, out);
}

inline void dct2_inverse(int nx1, int nx2, const double* in, double* out) {
    detail::dct_inverse_nd(2, {nx1, nx2, 1}, in, out);
}

/// Eigenvalue of the mirrored 1-D second difference on cosine mode p: the
/// 5-point Neumann Laplacian acts as -lap_symbol per axis in the DCT-II basis.
inline double lap_symbol_axis(int p, int n, double dx) {
    return (2.0 / (dx * dx)) * (1.0 - std::cos(M_PI * p / n));
}

} // namespace sirv
