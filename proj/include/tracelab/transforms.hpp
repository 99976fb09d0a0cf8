#pragma once

#include <complex>
#include <vector>

#include "tracelab/errors.hpp"
#include "tracelab/field.hpp"

namespace tracelab {

namespace detail {

inline size_t next_pow2(size_t n) {
    size_t m = 1;
    while (m < n) m <<= 1;
    return m;
}

inline void fft_pow2(std::vector<cplx>& a, bool invert) {
    const size_t n = a.size();
    for (size_t i = 1, j = 0; i < n; ++i) {
        size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    for (size_t len = 2; len <= n; len <<= 1) {
        const double ang = (invert ? kTau : -kTau) / static_cast<double>(len);
        const cplx wl{std::cos(ang), std::sin(ang)};
        for (size_t i = 0; i < n; i += len) {
            cplx w{1.0, 0.0};
            for (size_t j = 0; j < len / 2; ++j) {
                cplx u = a[i + j];
                cplx v = a[i + j + len / 2] * w;
                a[i + j] = u + v;
                a[i + j + len / 2] = u - v;
                w *= wl;
            }
        }
    }
    if (invert) {
        for (auto& x : a) x /= static_cast<double>(n);
    }
}

} // namespace detail

/// Length-n DFT for arbitrary n: X[k] = sum_j x[j] e(sign * jk / n).
/// Bluestein chirp reduction to a power-of-two convolution; direct O(n^2)
/// below a small threshold. The chirp exponents j^2/2 are reduced mod n
/// exactly in integers before the trig call, which keeps the phase error
/// flat as n grows.
inline std::vector<cplx> dft_any_length(const std::vector<cplx>& x, int sign) {
    const size_t n = x.size();
    if (n == 0) return {};
    if (n < 48) {
        std::vector<cplx> out(n);
        for (size_t k = 0; k < n; ++k) {
            cplx acc{0.0, 0.0};
            for (size_t j = 0; j < n; ++j) {
                u64 t = (static_cast<u64>(j) * k) % n;
                acc += x[j] * e_of(sign * static_cast<double>(t) / static_cast<double>(n));
            }
            out[k] = acc;
        }
        return out;
    }
    // chirp[j] = e(sign * j^2 / (2n)), with j^2 reduced mod 2n in exact integers
    const u64 two_n = 2 * static_cast<u64>(n);
    auto chirp = [&](u64 j) {
        u64 jm = j % two_n;
        u64 q = (jm * jm) % two_n;
        return e_of(sign * static_cast<double>(q) / static_cast<double>(two_n));
    };
    const size_t L = detail::next_pow2(2 * n - 1);
    std::vector<cplx> a(L, cplx{0.0, 0.0}), b(L, cplx{0.0, 0.0});
    for (size_t j = 0; j < n; ++j) a[j] = x[j] * chirp(j);
    for (size_t j = 0; j < n; ++j) {
        cplx c = std::conj(chirp(j));
        b[j] = c;
        if (j != 0) b[L - j] = c;
    }
    detail::fft_pow2(a, false);
    detail::fft_pow2(b, false);
    for (size_t i = 0; i < L; ++i) a[i] *= b[i];
    detail::fft_pow2(a, true);
    std::vector<cplx> out(n);
    for (size_t k = 0; k < n; ++k) out[k] = a[k] * chirp(k);
    return out;
}

/// Multiplicative-group DFT. Input f is indexed by x in F_p^x as f[x-1];
/// output is indexed by character exponent a: out[a] = sum_x f(x) conj(chi_a(x)).
inline std::vector<cplx> mult_dft(const FieldContext& ctx, const std::vector<cplx>& f) {
    const size_t n = static_cast<size_t>(ctx.p - 1);
    if (f.size() != n)
        throw LengthMismatchError("mult_dft: expected length p-1 = " + std::to_string(n) +
                                  ", got " + std::to_string(f.size()));
    // reorder by discrete log: h[k] = f(g^k), then a plain DFT with sign -1
    std::vector<cplx> h(n);
    for (size_t k = 0; k < n; ++k) h[k] = f[static_cast<size_t>(ctx.pow_g[k]) - 1];
    return dft_any_length(h, -1);
}

/// Inverse of mult_dft: f(x) = (1/(p-1)) sum_a spec[a] chi_a(x).
inline std::vector<cplx> mult_idft(const FieldContext& ctx, const std::vector<cplx>& spec) {
    const size_t n = static_cast<size_t>(ctx.p - 1);
    if (spec.size() != n)
        throw LengthMismatchError("mult_idft: expected length p-1 = " + std::to_string(n) +
                                  ", got " + std::to_string(spec.size()));
    std::vector<cplx> h = dft_any_length(spec, +1);
    std::vector<cplx> f(n);
    const double scale = 1.0 / static_cast<double>(n);
    for (size_t k = 0; k < n; ++k) f[static_cast<size_t>(ctx.pow_g[k]) - 1] = h[k] * scale;
    return f;
}

/// Full-field additive transform: out[x] = sum_y f[y] e(sign * x*y / p).
inline std::vector<cplx> additive_dft(const FieldContext& ctx, const std::vector<cplx>& f,
                                      int sign) {
    if (f.size() != static_cast<size_t>(ctx.p))
        throw LengthMismatchError("additive_dft: expected length p = " + std::to_string(ctx.p) +
                                  ", got " + std::to_string(f.size()));
    return dft_any_length(f, sign);
}

/// All Gauss sums at once: out[b] = g(psi, chi_b) for b in Z/(p-1).
inline std::vector<cplx> gauss_sum_table(const FieldContext& ctx) {
    const size_t n = static_cast<size_t>(ctx.p - 1);
    std::vector<cplx> psi_units(n);
    for (size_t x = 1; x < static_cast<size_t>(ctx.p); ++x) psi_units[x - 1] = ctx.psi[x];
    // mult_dft gives sum_x psi(x) conj(chi_a(x)) = g(psi, chi_{-a})
    std::vector<cplx> spec = mult_dft(ctx, psi_units);
    std::vector<cplx> out(n);
    for (size_t b = 0; b < n; ++b) out[b] = spec[(n - b) % n];
    return out;
}

} // namespace tracelab
