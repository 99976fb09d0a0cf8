#pragma once

#include <algorithm>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "tracelab/field.hpp"
#include "tracelab/hypergeometric.hpp"

namespace tracelab {

enum class AuttKind { Empty, SpecialInvolutionNegation, SubsetOfGamma };

/// Structural verdicts for a character-tuple pair: induction degeneracies,
/// the product character Lambda (balanced case), candidate identity
/// components for the symmetry group, and the duality-automorphism verdict.
struct HypClassification {
    bool disjoint = false;
    std::vector<i64> kummer_d;
    std::vector<std::pair<i64, i64>> belyi;
    std::vector<std::pair<i64, i64>> inverse_belyi;
    std::optional<MultCharacter> lambda; // n == m only
    std::vector<std::string> g0_candidates; // subset of {trivial, SL, SO, Sp}
    AuttKind autt = AuttKind::Empty;
    std::vector<std::string> warnings;
};

namespace hyp_detail {

inline std::vector<i64> sorted_exponents(const std::vector<MultCharacter>& chars) {
    std::vector<i64> v;
    v.reserve(chars.size());
    for (const auto& c : chars) v.push_back(c.exponent);
    std::sort(v.begin(), v.end());
    return v;
}

// all solutions x of d*x = target (mod q)
inline std::vector<i64> power_preimages(i64 d, i64 target, i64 q) {
    i64 e = std::gcd(d, q);
    if (mod_reduce(target, q) % e != 0) return {};
    // one solution of (d/e) x = (target/e) mod (q/e)
    i64 qe = q / e;
    i64 x0 = mul_mod(target / e % qe, inv_mod(d / e, qe), qe);
    std::vector<i64> out;
    out.reserve(static_cast<size_t>(e));
    for (i64 k = 0; k < e; ++k) out.push_back(mod_reduce(x0 + k * qe, q));
    std::sort(out.begin(), out.end());
    return out;
}

// Does the exponent multiset consist of all d-th-root fibers of a tuple of
// size total/d, each fiber fully present with one uniform multiplicity?
// A component of the inner tuple with multiplicity u contributes its whole
// fiber, u times; fibers have gcd(d, q) elements, so a nonempty side forces
// fiber size exactly d.
inline bool kummer_side_ok(const std::vector<i64>& exps, i64 d, i64 q) {
    if (exps.empty()) return true;
    const i64 total = static_cast<i64>(exps.size());
    std::map<i64, i64> mult;
    for (i64 a : exps) ++mult[mod_reduce(a, q)];
    std::set<i64> seen;
    i64 star_components = 0;
    for (const auto& [a, cnt] : mult) {
        if (seen.count(a)) continue;
        std::vector<i64> fiber = power_preimages(d, mul_mod(d, a, q), q);
        if (static_cast<i64>(fiber.size()) != d) return false;
        i64 uniform = cnt;
        for (i64 b : fiber) {
            auto it = mult.find(b);
            if (it == mult.end() || it->second != uniform) return false;
            seen.insert(b);
        }
        star_components += uniform;
    }
    return star_components == total / d;
}

} // namespace hyp_detail

/// d-Kummer induction: d divides gcd(n, m) and both tuples are unions of
/// complete d-th-root fibers over smaller tuples. Decided by grouping the
/// exponent multisets modulo the index-d subgroup.
inline bool is_kummer_induced(const FieldContext& ctx, const CharTuplePair& pair, i64 d) {
    if (d < 1) return false;
    const i64 n = pair.n(), m = pair.m();
    const i64 g = std::gcd(n, m); // gcd(x, 0) = x
    if (g == 0 || g % d != 0) return false;
    const i64 q = ctx.p - 1;
    return hyp_detail::kummer_side_ok(hyp_detail::sorted_exponents(pair.chi), d, q) &&
           hyp_detail::kummer_side_ok(hyp_detail::sorted_exponents(pair.rho), d, q);
}

/// (a,b)-Belyi induction (balanced case n = m, a + b = n): existence of
/// characters alpha, beta with beta nontrivial such that chi is exactly the
/// solution multiset of chi^a = alpha joined with that of chi^b = beta, and
/// rho is exactly the solution set of rho^n = alpha*beta. Candidate alphas
/// and betas are read off the tuple itself.
inline bool is_belyi_induced(const FieldContext& ctx, const CharTuplePair& pair, i64 a, i64 b) {
    const i64 n = pair.n(), m = pair.m();
    if (n != m || a < 1 || b < 1 || a + b != n) return false;
    const i64 q = ctx.p - 1;
    const std::vector<i64> chi_sorted = hyp_detail::sorted_exponents(pair.chi);
    const std::vector<i64> rho_sorted = hyp_detail::sorted_exponents(pair.rho);
    std::set<i64> alpha_cands, beta_cands;
    for (i64 c : chi_sorted) {
        alpha_cands.insert(mul_mod(mod_reduce(a, q), c, q));
        beta_cands.insert(mul_mod(mod_reduce(b, q), c, q));
    }
    for (i64 alpha : alpha_cands) {
        std::vector<i64> sa = hyp_detail::power_preimages(a, alpha, q);
        if (sa.empty()) continue;
        for (i64 beta : beta_cands) {
            if (beta == 0) continue; // beta must be nontrivial
            std::vector<i64> sb = hyp_detail::power_preimages(b, beta, q);
            if (sb.empty()) continue;
            std::vector<i64> joined;
            joined.reserve(sa.size() + sb.size());
            joined.insert(joined.end(), sa.begin(), sa.end());
            joined.insert(joined.end(), sb.begin(), sb.end());
            std::sort(joined.begin(), joined.end());
            if (joined != chi_sorted) continue;
            std::vector<i64> sr = hyp_detail::power_preimages(n, mod_reduce(alpha + beta, q), q);
            if (sr == rho_sorted) return true;
        }
    }
    return false;
}

/// Delegates to the Belyi predicate on the conjugated, swapped pair.
inline bool is_inverse_belyi_induced(const FieldContext& ctx, const CharTuplePair& pair,
                                     i64 a, i64 b) {
    CharTuplePair swapped;
    for (const auto& r : pair.rho) swapped.chi.push_back(r.conj());
    for (const auto& c : pair.chi) swapped.rho.push_back(c.conj());
    return is_belyi_induced(ctx, swapped, a, b);
}

/// Face-value inversion invariance: each exponent multiset equals its own
/// negation mod p-1.
inline bool tuples_inversion_invariant(const FieldContext& ctx, const CharTuplePair& pair) {
    const i64 q = ctx.p - 1;
    auto closed = [&](const std::vector<MultCharacter>& chars) {
        std::vector<i64> e = hyp_detail::sorted_exponents(chars), neg;
        neg.reserve(e.size());
        for (i64 a : e) neg.push_back(mod_reduce(-a, q));
        std::sort(neg.begin(), neg.end());
        return e == neg;
    };
    return closed(pair.chi) && closed(pair.rho);
}

/// The twisted reading: some character Lambda with Lambda*conj(chi) ~ chi and
/// Lambda*conj(rho) ~ rho. Exposed for study; predict uses the face-value
/// predicate only.
inline bool inversion_invariant_up_to_twist(const FieldContext& ctx, const CharTuplePair& pair) {
    const i64 q = ctx.p - 1;
    auto matches = [&](const std::vector<MultCharacter>& chars, i64 lam) {
        std::vector<i64> e = hyp_detail::sorted_exponents(chars), twisted;
        twisted.reserve(e.size());
        for (i64 a : e) twisted.push_back(mod_reduce(lam - a, q));
        std::sort(twisted.begin(), twisted.end());
        return e == twisted;
    };
    std::set<i64> candidates;
    const auto& source = pair.chi.empty() ? pair.rho : pair.chi;
    for (const auto& x : source)
        for (const auto& y : source)
            candidates.insert(mod_reduce(x.exponent + y.exponent, q));
    for (i64 lam : candidates)
        if (matches(pair.chi, lam) && matches(pair.rho, lam)) return true;
    return false;
}

/// Fills the whole classification:
///  - induction degeneracies (Kummer for d | gcd(n,m); Belyi both ways when
///    n = m),
///  - candidate identity components of the symmetry group, refined by the
///    product character Lambda in the balanced case and by the parity of
///    n - m otherwise (with the rank 7..9, |n-m| = 6 carve-out),
///  - the duality-automorphism verdict: negation involution iff n - m is odd
///    and both tuples are inversion-invariant; contained in the order-6
///    triangle group when n = m; empty otherwise.
inline HypClassification predict(const FieldContext& ctx, const CharTuplePair& pair) {
    HypClassification out;
    out.disjoint = pair.disjoint();
    if (!out.disjoint)
        throw NotDisjointError("predict: chi and rho tuples must be disjoint");
    const i64 n = pair.n(), m = pair.m();
    const i64 q = ctx.p - 1;

    const i64 g = std::gcd(n, m);
    for (i64 d = 2; d <= g; ++d)
        if (g % d == 0 && is_kummer_induced(ctx, pair, d)) out.kummer_d.push_back(d);

    if (n == m) {
        for (i64 a = 1; a < n; ++a) {
            if (is_belyi_induced(ctx, pair, a, n - a)) out.belyi.emplace_back(a, n - a);
            if (is_inverse_belyi_induced(ctx, pair, a, n - a))
                out.inverse_belyi.emplace_back(a, n - a);
        }
        i64 lam = 0;
        for (const auto& c : pair.chi) lam += c.exponent;
        for (const auto& r : pair.rho) lam -= r.exponent;
        out.lambda = MultCharacter{mod_reduce(lam, q), q};
    }

    // candidate identity components
    if (n == m) {
        if (out.kummer_d.empty() && out.belyi.empty() && out.inverse_belyi.empty()) {
            const MultCharacter& lam = *out.lambda;
            if (lam.trivial()) {
                out.g0_candidates = {"SL", "Sp"};
            } else if (lam.order() == 2) {
                out.g0_candidates = {"trivial", "SO", "SL"};
            } else {
                out.g0_candidates = {"trivial", "SL"};
            }
        } else {
            out.warnings.push_back("induced pair: the symmetry-group criteria do not apply");
        }
    } else {
        const i64 r = std::max(n, m);
        if (ctx.p <= 2 * r + 1)
            throw PrimeTooSmallError("predict: unbalanced criteria need p > 2*max(n,m)+1");
        if (out.kummer_d.empty()) {
            out.warnings.push_back(
                "unbalanced case carries an unevaluated divisibility side-condition on p");
            const i64 diff = n - m;
            if (mod_reduce(diff, 2) == 1) {
                out.g0_candidates = {"SL"};
                if (diff == 1 || diff == -1)
                    out.warnings.push_back("full symmetry group exceeds its identity component");
            } else {
                if ((r == 7 || r == 8 || r == 9) && (diff == 6 || diff == -6)) {
                    out.g0_candidates = {"SL", "SO", "Sp"};
                    out.warnings.push_back("rank 7..9 with |n-m| = 6: exceptional cases possible");
                } else if (tuples_inversion_invariant(ctx, pair)) {
                    // self-dual table: the standard representation carries a
                    // bilinear form, which rules out plain SL
                    out.g0_candidates = {"SO", "Sp"};
                } else {
                    out.g0_candidates = {"SL", "SO", "Sp"};
                }
            }
        } else {
            out.warnings.push_back("Kummer-induced pair: the symmetry-group criteria do not apply");
        }
    }

    // duality automorphisms
    if (n == m) {
        out.autt = AuttKind::SubsetOfGamma;
    } else if (mod_reduce(n - m, 2) == 1 && tuples_inversion_invariant(ctx, pair)) {
        out.autt = AuttKind::SpecialInvolutionNegation;
    } else {
        out.autt = AuttKind::Empty;
    }
    return out;
}

inline std::string autt_name(AuttKind k) {
    switch (k) {
        case AuttKind::Empty: return "Empty";
        case AuttKind::SpecialInvolutionNegation: return "SpecialInvolutionNegation";
        default: return "SubsetOfGamma";
    }
}

} // namespace tracelab
