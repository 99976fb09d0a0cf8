#pragma once

#include <cstdint>
#include <numeric>
#include <vector>

namespace tracelab {

using i64 = std::int64_t;
using u64 = std::uint64_t;

inline i64 mod_reduce(i64 a, i64 m) {
    i64 r = a % m;
    return r < 0 ? r + m : r;
}

inline i64 mul_mod(i64 a, i64 b, i64 m) {
    return static_cast<i64>(static_cast<__int128>(a) * b % m);
}

inline i64 pow_mod(i64 base, i64 exp, i64 m) {
    base = mod_reduce(base, m);
    i64 result = 1 % m;
    while (exp > 0) {
        if (exp & 1) result = mul_mod(result, base, m);
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    return result;
}

// Extended Euclid. Requires gcd(a, m) = 1.
inline i64 inv_mod(i64 a, i64 m) {
    i64 t = 0, new_t = 1;
    i64 r = m, new_r = mod_reduce(a, m);
    while (new_r != 0) {
        i64 q = r / new_r;
        t = std::exchange(new_t, t - q * new_t);
        r = std::exchange(new_r, r - q * new_r);
    }
    return mod_reduce(t, m);
}

// Deterministic for the desk-scale range we care about (p <= 10^6 by default,
// but correct for any 63-bit input).
inline bool is_prime(i64 n) {
    if (n < 2) return false;
    for (i64 q : {2, 3, 5, 7, 11, 13}) {
        if (n == q) return true;
        if (n % q == 0) return false;
    }
    for (i64 d = 17; d * d <= n; d += 2) {
        if (n % d == 0) return false;
    }
    return true;
}

// Distinct prime factors by trial division.
inline std::vector<i64> prime_factors(i64 n) {
    std::vector<i64> out;
    for (i64 d = 2; d * d <= n; d += (d == 2 ? 1 : 2)) {
        if (n % d == 0) {
            out.push_back(d);
            while (n % d == 0) n /= d;
        }
    }
    if (n > 1) out.push_back(n);
    return out;
}

} // namespace tracelab
