#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <vector>

#include "tracelab/errors.hpp"
#include "tracelab/numeric.hpp"

namespace tracelab {

using cplx = std::complex<double>;

inline constexpr double kTau = 6.283185307179586476925286766559;
inline constexpr i64 kDefaultPrimeCap = 1'000'000;

// e(z) = exp(2*pi*i*z)
inline cplx e_of(double z) { return {std::cos(kTau * z), std::sin(kTau * z)}; }

/// Prime-field substrate: p, the smallest primitive root g, a full discrete-log
/// table for F_p^x, the additive character table psi[x] = e(x/p), and the
/// (p-1)-st roots of unity used to evaluate multiplicative characters.
/// Immutable after construction; safe to share across threads.
struct FieldContext {
    i64 p = 0;
    i64 g = 0;
    std::vector<std::uint32_t> dlog;    // size p; dlog[g^k mod p] = k, dlog[0] unused
    std::vector<std::uint32_t> pow_g;   // size p-1; pow_g[k] = g^k mod p
    std::vector<cplx> psi;              // size p; psi[x] = e(x/p)
    std::vector<cplx> char_root;        // size p-1; char_root[k] = e(k/(p-1))

    i64 unit_count() const { return p - 1; }

    i64 dlog_of(i64 x) const { return static_cast<i64>(dlog[static_cast<size_t>(x)]); }

    i64 inv(i64 x) const {
        return pow_g[(p - 1 - dlog_of(x)) % (p - 1)];
    }

    cplx psi_at(i64 x) const { return psi[static_cast<size_t>(mod_reduce(x, p))]; }
};

/// Multiplicative character of F_p^x given by its exponent a modulo p-1:
/// chi(g^k) = e(a*k/(p-1)). Evaluated at 0 the value is defined as 0.
struct MultCharacter {
    i64 exponent = 0;
    i64 modulus = 0;    // p-1

    bool trivial() const { return exponent == 0; }

    i64 order() const { return modulus / std::gcd(exponent, modulus); }

    MultCharacter conj() const { return {mod_reduce(-exponent, modulus), modulus}; }

    MultCharacter times(const MultCharacter& other) const {
        return {mod_reduce(exponent + other.exponent, modulus), modulus};
    }

    bool operator==(const MultCharacter& other) const {
        return exponent == other.exponent && modulus == other.modulus;
    }

    cplx at(const FieldContext& ctx, i64 x) const {
        x = mod_reduce(x, ctx.p);
        if (x == 0) return {0.0, 0.0};
        i64 k = mul_mod(exponent, ctx.dlog_of(x), modulus);
        return ctx.char_root[static_cast<size_t>(k)];
    }

    // chi(-1) = (-1)^exponent for odd p.
    double sign_at_minus_one() const { return (exponent & 1) ? -1.0 : 1.0; }
};

inline MultCharacter make_character(const FieldContext& ctx, i64 exponent) {
    return {mod_reduce(exponent, ctx.p - 1), ctx.p - 1};
}

inline i64 smallest_primitive_root(i64 p) {
    std::vector<i64> qs = prime_factors(p - 1);
    for (i64 cand = 2; cand < p; ++cand) {
        bool ok = true;
        for (i64 q : qs) {
            if (pow_mod(cand, (p - 1) / q, p) == 1) { ok = false; break; }
        }
        if (ok) return cand;
    }
    return 0; // unreachable for prime p >= 3
}

/// Builds the full context. Deterministic: the primitive root is the smallest.
/// Throws NotPrimeError for composite (or p = 2) input, TooLargeError above cap.
inline FieldContext build_context(i64 p, i64 cap = kDefaultPrimeCap) {
    if (p > cap) throw TooLargeError("build_context: p=" + std::to_string(p) +
                                     " exceeds cap " + std::to_string(cap));
    if (!is_prime(p) || p < 3)
        throw NotPrimeError("build_context: p=" + std::to_string(p) +
                            " is not an odd prime >= 3");
    FieldContext ctx;
    ctx.p = p;
    ctx.g = smallest_primitive_root(p);
    ctx.dlog.assign(static_cast<size_t>(p), 0);
    ctx.pow_g.assign(static_cast<size_t>(p - 1), 0);
    i64 acc = 1;
    for (i64 k = 0; k < p - 1; ++k) {
        ctx.pow_g[static_cast<size_t>(k)] = static_cast<std::uint32_t>(acc);
        ctx.dlog[static_cast<size_t>(acc)] = static_cast<std::uint32_t>(k);
        acc = mul_mod(acc, ctx.g, p);
    }
    ctx.psi.resize(static_cast<size_t>(p));
    for (i64 x = 0; x < p; ++x)
        ctx.psi[static_cast<size_t>(x)] = e_of(static_cast<double>(x) / static_cast<double>(p));
    ctx.char_root.resize(static_cast<size_t>(p - 1));
    for (i64 k = 0; k < p - 1; ++k)
        ctx.char_root[static_cast<size_t>(k)] =
            e_of(static_cast<double>(k) / static_cast<double>(p - 1));
    return ctx;
}

/// g(psi, chi) = sum over x in F_p^x of chi(x) psi(x).
inline cplx gauss_sum(const FieldContext& ctx, const MultCharacter& chi) {
    cplx acc{0.0, 0.0};
    for (i64 x = 1; x < ctx.p; ++x) acc += chi.at(ctx, x) * ctx.psi[static_cast<size_t>(x)];
    return acc;
}

} // namespace tracelab
