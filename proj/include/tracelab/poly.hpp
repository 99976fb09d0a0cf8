#pragma once

#include <utility>
#include <vector>

#include "tracelab/numeric.hpp"

namespace tracelab {

/// Dense polynomial over F_p, little-endian coefficients, trailing zeros trimmed.
struct FpPoly {
    std::vector<i64> coeff; // coeff[i] multiplies X^i, values in [0, p)

    static FpPoly from(std::vector<i64> c, i64 p) {
        for (auto& v : c) v = mod_reduce(v, p);
        FpPoly f{std::move(c)};
        f.trim();
        return f;
    }

    void trim() {
        while (!coeff.empty() && coeff.back() == 0) coeff.pop_back();
    }

    bool zero() const { return coeff.empty(); }

    i64 degree() const { return zero() ? -1 : static_cast<i64>(coeff.size()) - 1; }

    i64 eval(i64 x, i64 p) const {
        i64 acc = 0;
        for (size_t i = coeff.size(); i-- > 0;) acc = (mul_mod(acc, x, p) + coeff[i]) % p;
        return acc;
    }

    FpPoly derivative(i64 p) const {
        if (coeff.size() <= 1) return {};
        std::vector<i64> d(coeff.size() - 1);
        for (size_t i = 1; i < coeff.size(); ++i)
            d[i - 1] = mul_mod(coeff[i], static_cast<i64>(i) % p, p);
        FpPoly f{std::move(d)};
        f.trim();
        return f;
    }

    // Divides by the monic linear factor (X - root); quotient returned,
    // requires eval(root) == 0.
    FpPoly deflate(i64 root, i64 p) const {
        std::vector<i64> q(coeff.size() - 1, 0);
        i64 carry = coeff.back();
        for (size_t i = coeff.size() - 1; i-- > 0;) {
            q[i] = carry;
            carry = (coeff[i] + mul_mod(carry, root, p)) % p;
        }
        FpPoly f{std::move(q)};
        f.trim();
        return f;
    }
};

inline FpPoly poly_mod(FpPoly a, const FpPoly& b, i64 p) {
    const i64 db = b.degree();
    const i64 lead_inv = inv_mod(b.coeff.back(), p);
    while (a.degree() >= db) {
        i64 shift = a.degree() - db;
        i64 factor = mul_mod(a.coeff.back(), lead_inv, p);
        for (i64 i = 0; i <= db; ++i) {
            i64& c = a.coeff[static_cast<size_t>(i + shift)];
            c = mod_reduce(c - mul_mod(factor, b.coeff[static_cast<size_t>(i)], p), p);
        }
        a.trim();
        if (a.zero()) break;
    }
    return a;
}

inline FpPoly poly_gcd(FpPoly a, FpPoly b, i64 p) {
    while (!b.zero()) {
        FpPoly r = poly_mod(a, b, p);
        a = std::exchange(b, r);
    }
    if (!a.zero()) {
        i64 s = inv_mod(a.coeff.back(), p);
        for (auto& c : a.coeff) c = mul_mod(c, s, p);
    }
    return a;
}

/// F_p-rational roots with multiplicities, found by exhaustive evaluation
/// and repeated deflation. Fine at desk scale (p <= 10^6, small degrees).
inline std::vector<std::pair<i64, int>> rational_roots(const FpPoly& f, i64 p) {
    std::vector<std::pair<i64, int>> out;
    if (f.zero()) return out;
    for (i64 x = 0; x < p; ++x) {
        if (f.eval(x, p) != 0) continue;
        FpPoly g = f;
        int mult = 0;
        while (!g.zero() && g.degree() >= 1 && g.eval(x, p) == 0) {
            g = g.deflate(x, p);
            ++mult;
        }
        out.emplace_back(x, mult);
    }
    return out;
}

/// Number of distinct roots of f in an algebraic closure: deg(f) - deg(gcd(f, f')).
/// Valid at desk scale where p exceeds deg(f).
inline i64 distinct_root_count(const FpPoly& f, i64 p) {
    if (f.degree() <= 0) return 0;
    FpPoly d = f.derivative(p);
    if (d.zero()) return 0;
    return f.degree() - poly_gcd(f, d, p).degree();
}

} // namespace tracelab
