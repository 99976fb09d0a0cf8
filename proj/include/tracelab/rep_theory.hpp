#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numeric>
#include <string>
#include <tuple>
#include <vector>

#include "tracelab/errors.hpp"
#include "tracelab/numeric.hpp"

namespace tracelab {

/// Sp(2g) or SL(r); parameter is the dimension of the standard representation.
struct GroupLabel {
    enum class Family { Sp, SL };
    Family family = Family::Sp;
    i64 parameter = 2;
};

inline GroupLabel sp_group(i64 two_g) { return {GroupLabel::Family::Sp, two_g}; }
inline GroupLabel sl_group(i64 r) { return {GroupLabel::Family::SL, r}; }

inline void validate_group(const GroupLabel& g) {
    if (g.parameter < 2)
        throw ValidationError("group parameter must be >= 2");
    if (g.family == GroupLabel::Family::Sp && g.parameter % 2 != 0)
        throw ValidationError("Sp parameter must be even");
}

namespace rep_detail {

using Weight = std::vector<int>;
using WeightMultiset = std::map<Weight, long long>;

// --- Klimyk route: iterate tensor-by-standard over dominant weights. ---
//
// One step adds each weight of std (or dual std) to each dominant summand,
// shifts by rho, discards wall hits, reflects into the dominant chamber with
// the sign of the reflecting Weyl element, and accumulates.

// Type C_g: dominant weights are weakly decreasing nonnegative integer
// vectors of length g; rho = (g, g-1, ..., 1); Weyl group = signed
// permutations; std has weights {+-e_i}.
inline void klimyk_step_sp(const WeightMultiset& in, WeightMultiset& out, int g) {
    std::vector<int> rho(static_cast<size_t>(g));
    for (int i = 0; i < g; ++i) rho[static_cast<size_t>(i)] = g - i;
    for (const auto& [lambda, mult] : in) {
        for (int i = 0; i < g; ++i) {
            for (int dir : {+1, -1}) {
                Weight v = lambda;
                v[static_cast<size_t>(i)] += dir;
                for (int j = 0; j < g; ++j) v[static_cast<size_t>(j)] += rho[static_cast<size_t>(j)];
                // dominantize for C_g: |.|, sort desc; sign = sgn(perm) * (-1)^#negatives
                int sign = 1;
                bool wall = false;
                for (auto& c : v) {
                    if (c == 0) { wall = true; break; }
                    if (c < 0) { c = -c; sign = -sign; }
                }
                if (wall) continue;
                // insertion sort desc, tracking parity; equal entries = wall
                for (size_t a = 1; a < v.size() && !wall; ++a) {
                    for (size_t b = a; b > 0; --b) {
                        if (v[b] > v[b - 1]) { std::swap(v[b], v[b - 1]); sign = -sign; }
                        else if (v[b] == v[b - 1]) { wall = true; break; }
                        else break;
                    }
                }
                if (wall) continue;
                for (int j = 0; j < g; ++j) v[static_cast<size_t>(j)] -= rho[static_cast<size_t>(j)];
                out[v] += sign * mult;
            }
        }
    }
    for (auto it = out.begin(); it != out.end();) {
        it = (it->second == 0) ? out.erase(it) : std::next(it);
    }
}

// Type A_{r-1} via length-r integer vectors, normalized so the minimum entry
// is 0 (SL weights are classes modulo (1,...,1)); rho = (r-1, ..., 0);
// std adds +e_i, dual std adds -e_i.
inline void klimyk_step_sl(const WeightMultiset& in, WeightMultiset& out, int r, int dir) {
    std::vector<int> rho(static_cast<size_t>(r));
    for (int i = 0; i < r; ++i) rho[static_cast<size_t>(i)] = r - 1 - i;
    for (const auto& [lambda, mult] : in) {
        for (int i = 0; i < r; ++i) {
            Weight v = lambda;
            v[static_cast<size_t>(i)] += dir;
            for (int j = 0; j < r; ++j) v[static_cast<size_t>(j)] += rho[static_cast<size_t>(j)];
            int sign = 1;
            bool wall = false;
            for (size_t a = 1; a < v.size() && !wall; ++a) {
                for (size_t b = a; b > 0; --b) {
                    if (v[b] > v[b - 1]) { std::swap(v[b], v[b - 1]); sign = -sign; }
                    else if (v[b] == v[b - 1]) { wall = true; break; }
                    else break;
                }
            }
            if (wall) continue;
            for (int j = 0; j < r; ++j) v[static_cast<size_t>(j)] -= rho[static_cast<size_t>(j)];
            int mn = *std::min_element(v.begin(), v.end());
            for (auto& c : v) c -= mn;
            out[v] += sign * mult;
        }
    }
    for (auto it = out.begin(); it != out.end();) {
        it = (it->second == 0) ? out.erase(it) : std::next(it);
    }
}

// --- Weyl constant-term route: exact Laurent-polynomial integration. ---
//
// multiplicity of the trivial rep = (1/|W|) CT[ char^m * char_dual^n * (-1)^N D^2 ]
// where D = sum_w sgn(w) x^{w(rho)} is the Weyl denominator and N the number
// of positive roots. For SL the torus constant term keeps monomials
// proportional to (1,...,1); for Sp it is the plain constant term.

struct LaurentPoly {
    std::map<std::vector<int>, long long> terms;
};

inline LaurentPoly weyl_denominator_sl(int r) {
    // det(x_i^{r-j}) expanded over permutations: r! signed monomials
    LaurentPoly d;
    std::vector<int> perm(static_cast<size_t>(r));
    std::iota(perm.begin(), perm.end(), 0);
    do {
        int sign = 1;
        for (size_t i = 0; i < perm.size(); ++i)
            for (size_t j = i + 1; j < perm.size(); ++j)
                if (perm[i] > perm[j]) sign = -sign;
        std::vector<int> mono(static_cast<size_t>(r));
        for (int i = 0; i < r; ++i) mono[static_cast<size_t>(i)] = r - 1 - perm[static_cast<size_t>(i)];
        d.terms[mono] += sign;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return d;
}

inline LaurentPoly weyl_denominator_sp(int g) {
    // sum over signed permutations w of sgn(w) x^{w(rho)}, rho = (g, ..., 1)
    LaurentPoly d;
    std::vector<int> perm(static_cast<size_t>(g));
    std::iota(perm.begin(), perm.end(), 0);
    do {
        int psign = 1;
        for (size_t i = 0; i < perm.size(); ++i)
            for (size_t j = i + 1; j < perm.size(); ++j)
                if (perm[i] > perm[j]) psign = -psign;
        for (unsigned mask = 0; mask < (1u << g); ++mask) {
            int sign = psign;
            std::vector<int> mono(static_cast<size_t>(g));
            for (int i = 0; i < g; ++i) {
                int val = g - perm[static_cast<size_t>(i)];
                if (mask & (1u << i)) { val = -val; sign = -sign; }
                mono[static_cast<size_t>(i)] = val;
            }
            d.terms[mono] += sign;
        }
    } while (std::next_permutation(perm.begin(), perm.end()));
    return d;
}

inline LaurentPoly square(const LaurentPoly& d) {
    LaurentPoly out;
    for (const auto& [ma, ca] : d.terms)
        for (const auto& [mb, cb] : d.terms) {
            std::vector<int> m(ma.size());
            for (size_t i = 0; i < m.size(); ++i) m[i] = ma[i] + mb[i];
            out.terms[m] += ca * cb;
        }
    return out;
}

// Exponent-vector table of char(std)^m * char(dual std)^n with multinomial
// coefficients, built by repeated multiplication by sum_i x_i^{+-1}.
inline std::map<std::vector<int>, long long> char_power_table(int rank, i64 m, i64 n,
                                                              bool self_dual_fold) {
    std::map<std::vector<int>, long long> table;
    table[std::vector<int>(static_cast<size_t>(rank), 0)] = 1;
    auto step = [&](int dir, bool both_signs) {
        std::map<std::vector<int>, long long> next;
        for (const auto& [mono, coef] : table) {
            for (int i = 0; i < rank; ++i) {
                std::vector<int> m2 = mono;
                m2[static_cast<size_t>(i)] += dir;
                next[m2] += coef;
                if (both_signs) {
                    std::vector<int> m3 = mono;
                    m3[static_cast<size_t>(i)] -= dir;
                    next[m3] += coef;
                }
            }
        }
        table = std::move(next);
    };
    if (self_dual_fold) {
        for (i64 k = 0; k < m + n; ++k) step(+1, true); // char of Sp std: sum (x_i + 1/x_i)
    } else {
        for (i64 k = 0; k < m; ++k) step(+1, false);
        for (i64 k = 0; k < n; ++k) step(-1, false);
    }
    return table;
}

} // namespace rep_detail

inline constexpr i64 kTensorPowerCap = 12;
inline constexpr i64 kGroupParameterCap = 8;

/// Multiplicity of the trivial representation in std^(x)m tensor
/// dual(std)^(x)n, by iterated tensor-by-standard decomposition over dominant
/// weights. For Sp the standard representation is self-dual, so (m, n) folds
/// to (m+n, 0) on entry. Exact integers throughout.
inline long long trivial_multiplicity(const GroupLabel& group, i64 m, i64 n,
                                      i64 power_cap = kTensorPowerCap) {
    validate_group(group);
    if (m < 0 || n < 0) throw ValidationError("tensor powers must be >= 0");
    if (m + n > power_cap)
        throw CapExceededError("trivial_multiplicity: m + n = " + std::to_string(m + n) +
                               " exceeds cap " + std::to_string(power_cap));
    if (group.parameter > kGroupParameterCap)
        throw CapExceededError("trivial_multiplicity: parameter " +
                               std::to_string(group.parameter) + " exceeds cap " +
                               std::to_string(kGroupParameterCap));

    struct CacheKey {
        int family; i64 param; i64 m; i64 n;
        bool operator<(const CacheKey& o) const {
            return std::tie(family, param, m, n) < std::tie(o.family, o.param, o.m, o.n);
        }
    };
    static std::map<CacheKey, long long> cache;
    static std::mutex cache_mutex;
    CacheKey key{static_cast<int>(group.family), group.parameter, m, n};
    {
        std::lock_guard<std::mutex> lock(cache_mutex);
        auto it = cache.find(key);
        if (it != cache.end()) return it->second;
    }

    using namespace rep_detail;
    WeightMultiset state;
    long long result = 0;
    if (group.family == GroupLabel::Family::Sp) {
        const int g = static_cast<int>(group.parameter / 2);
        state[Weight(static_cast<size_t>(g), 0)] = 1;
        for (i64 k = 0; k < m + n; ++k) {
            WeightMultiset next;
            klimyk_step_sp(state, next, g);
            state = std::move(next);
        }
        auto it = state.find(Weight(static_cast<size_t>(g), 0));
        result = (it == state.end()) ? 0 : it->second;
    } else {
        const int r = static_cast<int>(group.parameter);
        state[Weight(static_cast<size_t>(r), 0)] = 1;
        for (i64 k = 0; k < m; ++k) {
            WeightMultiset next;
            klimyk_step_sl(state, next, r, +1);
            state = std::move(next);
        }
        for (i64 k = 0; k < n; ++k) {
            WeightMultiset next;
            klimyk_step_sl(state, next, r, -1);
            state = std::move(next);
        }
        auto it = state.find(Weight(static_cast<size_t>(r), 0));
        result = (it == state.end()) ? 0 : it->second;
    }
    std::lock_guard<std::mutex> lock(cache_mutex);
    cache[key] = result;
    return result;
}

/// Independent oracle for the same quantity by Weyl integration as exact
/// constant-term extraction of integer Laurent polynomials. Shares nothing
/// with the Klimyk route.
inline long long weyl_constant_term_oracle(const GroupLabel& group, i64 m, i64 n,
                                           i64 power_cap = 14) {
    validate_group(group);
    if (m < 0 || n < 0) throw ValidationError("tensor powers must be >= 0");
    if (m + n > power_cap)
        throw CapExceededError("weyl_constant_term_oracle: m + n exceeds cap");
    using namespace rep_detail;

    if (group.family == GroupLabel::Family::Sp) {
        const int g = static_cast<int>(group.parameter / 2);
        double order_w = std::pow(2.0, g);
        for (int i = 2; i <= g; ++i) order_w *= i;
        if (order_w * order_w > 4.0e6)
            throw CapExceededError("weyl_constant_term_oracle: Weyl group too large");
        LaurentPoly d2 = square(weyl_denominator_sp(g));
        auto table = char_power_table(g, m, n, /*self_dual_fold=*/true);
        const int num_pos_roots = g * g;
        long long acc = 0;
        for (const auto& [mono, coef] : d2.terms) {
            std::vector<int> want(mono.size());
            for (size_t i = 0; i < mono.size(); ++i) want[i] = -mono[i];
            auto it = table.find(want);
            if (it != table.end()) acc += coef * it->second;
        }
        if (num_pos_roots % 2 != 0) acc = -acc;
        long long w = 1;
        for (int i = 1; i <= g; ++i) w *= 2 * i;
        return acc / w;
    }

    const int r = static_cast<int>(group.parameter);
    double order_w = 1.0;
    for (int i = 2; i <= r; ++i) order_w *= i;
    if (order_w * order_w > 4.0e6)
        throw CapExceededError("weyl_constant_term_oracle: Weyl group too large");
    LaurentPoly d2 = square(weyl_denominator_sl(r));
    auto table = char_power_table(r, m, n, /*self_dual_fold=*/false);
    // On the SL torus a monomial is trivial iff all exponents are equal;
    // total degree forces the common value c: r*c = (m - n) + r(r-1).
    const i64 total = (m - n) + static_cast<i64>(r) * (r - 1);
    if (total % r != 0) return 0;
    const int c = static_cast<int>(total / r);
    const int num_pos_roots = r * (r - 1) / 2;
    long long acc = 0;
    for (const auto& [mono, coef] : d2.terms) {
        std::vector<int> want(mono.size());
        for (size_t i = 0; i < mono.size(); ++i) want[i] = c - mono[i];
        auto it = table.find(want);
        if (it != table.end()) acc += coef * it->second;
    }
    if (num_pos_roots % 2 != 0) acc = -acc;
    long long w = 1;
    for (int i = 2; i <= r; ++i) w *= i;
    return acc / w;
}

} // namespace tracelab
