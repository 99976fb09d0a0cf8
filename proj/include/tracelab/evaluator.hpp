#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "tracelab/classifier.hpp"
#include "tracelab/ft_mult_char.hpp"
#include "tracelab/hypergeometric.hpp"
#include "tracelab/kloosterman.hpp"
#include "tracelab/parallel.hpp"
#include "tracelab/trace_table.hpp"

namespace tracelab {

/// Restricted sum of products: sum over x in F_p such that every gamma_i . x
/// is defined (no pole) and nonsingular for K, of
/// prod_i K(gamma_i . x)^{sigma_i} * psi(h x), where ^conj conjugates.
inline cplx sum_of_products(const TraceTable& K, const SumPattern& pattern) {
    const i64 p = K.p();
    if (pattern.gammas.empty() || pattern.gammas.size() != pattern.sigmas.size())
        throw ValidationError("sum_of_products: bad pattern shape");
    for (const auto& g : pattern.gammas)
        if (g.p != p) throw ContextMismatchError("sum_of_products: pattern/table prime mismatch");
    const i64 h = mod_reduce(pattern.h, p);
    cplx acc{0.0, 0.0};
    for (i64 x = 0; x < p; ++x) {
        cplx term{1.0, 0.0};
        bool ok = true;
        for (size_t i = 0; i < pattern.gammas.size(); ++i) {
            auto y = act(pattern.gammas[i], x);
            if (!y || K.is_singular(*y)) { ok = false; break; }
            cplx v = K.at(*y);
            term *= (pattern.sigmas[i] == Sigma::Conj) ? std::conj(v) : v;
        }
        if (!ok) continue;
        acc += term * K.ctx->psi[static_cast<size_t>(mul_mod(h, x, p))];
    }
    return acc;
}

// ---------------------------------------------------------------------------
// Prime-range verification
// ---------------------------------------------------------------------------

/// Prime-independent description of a trace-function builder.
struct TableSpec {
    enum class Kind { Kloosterman, Hypergeometric, FtMultChar };
    Kind kind = Kind::Kloosterman;
    i64 r = 2;                       // Kloosterman rank
    std::vector<i64> chi_exps, rho_exps; // hypergeometric exponents (mod p-1 per prime)
    i64 ft_chi_exp = 0;              // ft table character exponent
    std::vector<i64> ft_poly;        // ft table polynomial coefficients

    TraceTable build(const FieldContext& ctx) const {
        switch (kind) {
            case Kind::Kloosterman:
                return kloosterman_batch(ctx, r);
            case Kind::Hypergeometric:
                return hyp_batch(ctx, make_pair_from_exponents(ctx, chi_exps, rho_exps));
            default:
                return ft_mult_char(ctx, make_character(ctx, ft_chi_exp),
                                    FpPoly::from(ft_poly, ctx.p));
        }
    }

    std::string name() const {
        if (kind == Kind::Kloosterman) return "kloos:" + std::to_string(r);
        if (kind == Kind::Hypergeometric)
            return "hyp:n=" + std::to_string(chi_exps.size()) +
                   ",m=" + std::to_string(rho_exps.size());
        return "ftchar";
    }
};

/// Prime-independent pattern: integer matrix entries reduced mod p per prime.
struct PatternSpec {
    std::string id;
    std::vector<std::array<i64, 4>> gammas;
    std::vector<Sigma> sigmas;
    i64 h = 0;

    SumPattern instantiate(i64 p) const {
        std::vector<Pgl2Element> gs;
        gs.reserve(gammas.size());
        for (const auto& m : gammas) gs.push_back(make_pgl2(m[0], m[1], m[2], m[3], p));
        return make_pattern(gs, sigmas, h);
    }
};

struct VerificationRow {
    i64 p = 0;
    std::string pattern_id;
    cplx S{0.0, 0.0};
    PredictionKind kind = PredictionKind::Cancellation;
    std::optional<i64> m;
    double residual = 0.0; // |S|/sqrt(p) or |S - m p|/sqrt(p)
};

struct VerifyOutcome {
    std::vector<VerificationRow> rows; // ordered by the prime list
    double max_residual = 0.0;
    // residual at the largest prime / residual at the smallest prime
    double growth_indicator = 0.0;
};

inline VerificationRow evaluate_pattern_at(const TraceTable& table, const PatternSpec& spec,
                                           const SheafProfile& profile) {
    const i64 p = table.p();
    SumPattern pat = spec.instantiate(p);
    Prediction pred = classify(pat, profile, p);
    cplx S = sum_of_products(table, pat);
    VerificationRow row;
    row.p = p;
    row.pattern_id = spec.id;
    row.S = S;
    row.kind = pred.kind;
    const double sqrt_p = std::sqrt(static_cast<double>(p));
    if (pred.kind == PredictionKind::MainTerm) {
        row.m = pred.m;
        row.residual = std::abs(S - cplx{static_cast<double>(pred.m) * p, 0.0}) / sqrt_p;
    } else {
        row.residual = std::abs(S) / sqrt_p;
    }
    return row;
}

/// One row per prime, computed independently (parallel over primes) and
/// reported in prime order regardless of thread count.
inline VerifyOutcome verify_pattern(const TableSpec& table_spec, const PatternSpec& pattern,
                                    const std::vector<i64>& primes, const SheafProfile& profile,
                                    int threads = 0) {
    VerifyOutcome out;
    out.rows.resize(primes.size());
    parallel_for(primes.size(), [&](size_t i) {
        FieldContext ctx = build_context(primes[i]);
        TraceTable table = table_spec.build(ctx);
        out.rows[i] = evaluate_pattern_at(table, pattern, profile);
    }, threads);
    for (const auto& r : out.rows) out.max_residual = std::max(out.max_residual, r.residual);
    if (!out.rows.empty()) {
        size_t lo = 0, hi = 0;
        for (size_t i = 1; i < out.rows.size(); ++i) {
            if (out.rows[i].p < out.rows[lo].p) lo = i;
            if (out.rows[i].p > out.rows[hi].p) hi = i;
        }
        double denom = out.rows[lo].residual;
        out.growth_indicator = denom > 0 ? out.rows[hi].residual / denom
                                         : (out.rows[hi].residual > 0 ? 1e300 : 1.0);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Dilation-tuple machinery
// ---------------------------------------------------------------------------

/// T(rho) = sum over x in F_p^x of A(x) B(rho x), for every rho at once,
/// through multiplicative spectra. Inputs are unit-indexed ([x-1]) with
/// singular points zeroed.
inline std::vector<cplx> mult_correlation_all(const FieldContext& ctx,
                                              const std::vector<cplx>& a_units,
                                              const std::vector<cplx>& b_units) {
    const i64 q = ctx.p - 1;
    std::vector<cplx> ah = mult_dft(ctx, a_units);
    std::vector<cplx> bh = mult_dft(ctx, b_units);
    std::vector<cplx> spec(static_cast<size_t>(q));
    for (i64 t = 0; t < q; ++t)
        spec[static_cast<size_t>(t)] =
            ah[static_cast<size_t>((q - t) % q)] * bh[static_cast<size_t>(t)];
    return mult_idft(ctx, spec);
}

struct ScanWitness {
    std::vector<i64> a, b;
    double modulus = 0.0;
};

struct ScanResult {
    bool exhaustive = true;
    i64 total_tuples = 0;
    i64 exceptional_count = 0;       // exact when exhaustive, extrapolated otherwise
    double estimate_low = 0.0, estimate_high = 0.0; // 95% interval, sampled mode
    std::vector<ScanWitness> witnesses;             // up to 100
    std::vector<std::string> notes;
};

namespace scan_detail {

inline cplx direct_tuple_sum(const FieldContext& ctx, const std::vector<cplx>& k_units,
                             const std::vector<cplx>& m_units, const std::vector<i64>& a,
                             const std::vector<i64>& b) {
    const i64 p = ctx.p;
    cplx acc{0.0, 0.0};
    for (i64 x = 1; x < p; ++x) {
        cplx term = m_units[static_cast<size_t>(x - 1)];
        for (i64 ai : a) term *= k_units[static_cast<size_t>(mul_mod(ai, x, p) - 1)];
        for (i64 bj : b) term *= std::conj(k_units[static_cast<size_t>(mul_mod(bj, x, p) - 1)]);
        acc += term;
    }
    return acc;
}

} // namespace scan_detail

/// Counts dilation tuples (a_1..a_k, b_1..b_l) in (F_p^x)^(k+l) whose
/// restricted sum over x in F_p^x of
///   prod_i K(a_i x) * prod_j conj(K(b_j x)) * M(x)
/// exceeds c * sqrt(p) in modulus. Exhaustive mode exploits dilation
/// invariance: the sum depends on the ratio tuple and an overall dilation of
/// M, handled per ratio slice by spectrum-side products in O(p log p).
/// Exhaustive limits: k+l <= 2 for arbitrary M; k+l = 3 when M is constant
/// on F_p^x; p <= 512. Sampled mode draws tuples with a fixed seeded
/// generator and extrapolates with a 95% interval.
inline ScanResult exceptional_scan(const TraceTable& K, i64 k, i64 l, const TraceTable& M,
                                   double threshold_multiplier, bool exhaustive,
                                   i64 samples = 20000, u64 seed = 0x5eedf00dULL,
                                   int threads = 0) {
    if (K.p() != M.p())
        throw ContextMismatchError("exceptional_scan: K and M over different primes");
    if (k < 0 || l < 0 || k + l < 1)
        throw ValidationError("exceptional_scan: need k + l >= 1");
    const FieldContext& ctx = *K.ctx;
    const i64 p = ctx.p;
    const i64 q = p - 1;
    const double cut = threshold_multiplier * std::sqrt(static_cast<double>(p));
    const std::vector<cplx> k_units = K.unit_values_zeroed();
    const std::vector<cplx> m_units = M.unit_values_zeroed();

    ScanResult result;
    if (l > 0 && K.profile && K.profile->family == SymmetryFamily::Sp)
        result.notes.push_back("conjugated factors over a self-dual table: outside the "
                               "guaranteed range of the count bounds");

    if (exhaustive) {
        if (k + l > 3 || p > 512)
            throw CostCapExceededError("exceptional_scan: exhaustive mode limited to k+l <= 3, p <= 512");
        result.exhaustive = true;
        result.total_tuples = 1;
        for (i64 i = 0; i < k + l; ++i) result.total_tuples *= q;

        if (k + l == 1) {
            std::vector<cplx> conj_k(k_units.size());
            for (size_t i = 0; i < k_units.size(); ++i) conj_k[i] = std::conj(k_units[i]);
            // S(y) = sum_x M(x) K(yx)  (or conj K)
            std::vector<cplx> vals =
                mult_correlation_all(ctx, m_units, k >= 1 ? k_units : conj_k);
            for (i64 y = 1; y <= q; ++y) {
                double mod_val = std::abs(vals[static_cast<size_t>(y - 1)]);
                if (mod_val > cut) {
                    ++result.exceptional_count;
                    if (result.witnesses.size() < 100) {
                        ScanWitness w;
                        (k >= 1 ? w.a : w.b).push_back(y);
                        w.modulus = mod_val;
                        result.witnesses.push_back(std::move(w));
                    }
                }
            }
            return result;
        }

        if (k + l == 2) {
            // slice by the ratio rho; tuple = (y, rho*y) across the k/l split
            std::vector<cplx> mh = mult_dft(ctx, m_units);
            std::vector<cplx> mh_neg(static_cast<size_t>(q));
            for (i64 t = 0; t < q; ++t)
                mh_neg[static_cast<size_t>(t)] = mh[static_cast<size_t>((q - t) % q)];
            std::vector<i64> slice_counts(static_cast<size_t>(q), 0);
            std::vector<std::vector<ScanWitness>> slice_wit(static_cast<size_t>(q));
            parallel_for(static_cast<size_t>(q), [&](size_t slice) {
                const i64 rho = ctx.pow_g[slice]; // enumerate ratios in generator order
                std::vector<cplx> g_units(static_cast<size_t>(q));
                for (i64 x = 1; x <= q; ++x) {
                    i64 rx = mul_mod(rho, x, p);
                    cplx first = (k >= 1) ? k_units[static_cast<size_t>(x - 1)]
                                          : std::conj(k_units[static_cast<size_t>(x - 1)]);
                    cplx second = (k == 2) ? k_units[static_cast<size_t>(rx - 1)]
                                           : std::conj(k_units[static_cast<size_t>(rx - 1)]);
                    g_units[static_cast<size_t>(x - 1)] = first * second;
                }
                // C(y) = sum_u G(u) M(u / y) = idft(Ghat[t] * Mhat[-t])(y)
                std::vector<cplx> gh = mult_dft(ctx, g_units);
                for (i64 t = 0; t < q; ++t)
                    gh[static_cast<size_t>(t)] *= mh_neg[static_cast<size_t>(t)];
                std::vector<cplx> c_vals = mult_idft(ctx, gh);
                for (i64 y = 1; y <= q; ++y) {
                    double mod_val = std::abs(c_vals[static_cast<size_t>(y - 1)]);
                    if (mod_val > cut) {
                        ++slice_counts[slice];
                        if (slice_wit[slice].size() < 100) {
                            ScanWitness w;
                            i64 second = mul_mod(rho, y, p);
                            if (k == 2) w.a = {y, second};
                            else if (k == 1) { w.a = {y}; w.b = {second}; }
                            else w.b = {y, second};
                            w.modulus = mod_val;
                            slice_wit[slice].push_back(std::move(w));
                        }
                    }
                }
            }, threads);
            for (i64 s = 0; s < q; ++s) {
                result.exceptional_count += slice_counts[static_cast<size_t>(s)];
                for (auto& w : slice_wit[static_cast<size_t>(s)]) {
                    if (result.witnesses.size() >= 100) break;
                    result.witnesses.push_back(std::move(w));
                }
            }
            return result;
        }

        // k + l == 3: requires M constant on F_p^x (no x-dependence to dilate)
        cplx m_const = m_units[0];
        for (const auto& v : m_units)
            if (std::abs(v - m_const) > 1e-12)
                throw CostCapExceededError(
                    "exceptional_scan: exhaustive k+l=3 needs M constant on F_p^x");
        std::vector<i64> slice_counts(static_cast<size_t>(q), 0);
        std::vector<std::vector<ScanWitness>> slice_wit(static_cast<size_t>(q));
        parallel_for(static_cast<size_t>(q), [&](size_t s2) {
            const i64 rho2 = static_cast<i64>(s2) + 1;
            for (i64 rho3 = 1; rho3 <= q; ++rho3) {
                cplx acc{0.0, 0.0};
                for (i64 x = 1; x <= q; ++x) {
                    i64 x2 = mul_mod(rho2, x, p), x3 = mul_mod(rho3, x, p);
                    cplx t1 = k_units[static_cast<size_t>(x - 1)];
                    cplx t2 = k_units[static_cast<size_t>(x2 - 1)];
                    cplx t3 = k_units[static_cast<size_t>(x3 - 1)];
                    if (k == 0) t1 = std::conj(t1);
                    if (k <= 1) t2 = std::conj(t2);
                    if (k <= 2) t3 = std::conj(t3);
                    acc += t1 * t2 * t3;
                }
                double mod_val = std::abs(acc * m_const);
                if (mod_val > cut) {
                    // every base point y gives the tuple (y, rho2 y, rho3 y)
                    slice_counts[s2] += q;
                    if (slice_wit[s2].size() < 100) {
                        ScanWitness w;
                        std::vector<i64> tup = {1, rho2, rho3};
                        w.a.assign(tup.begin(), tup.begin() + k);
                        w.b.assign(tup.begin() + k, tup.end());
                        w.modulus = mod_val;
                        slice_wit[s2].push_back(std::move(w));
                    }
                }
            }
        }, threads);
        for (i64 s = 0; s < q; ++s) {
            result.exceptional_count += slice_counts[static_cast<size_t>(s)];
            for (auto& w : slice_wit[static_cast<size_t>(s)]) {
                if (result.witnesses.size() >= 100) break;
                result.witnesses.push_back(std::move(w));
            }
        }
        return result;
    }

    // sampled mode
    result.exhaustive = false;
    result.total_tuples = 1;
    for (i64 i = 0; i < k + l; ++i) result.total_tuples *= q;
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<i64> unit(1, q);
    i64 hits = 0;
    for (i64 s = 0; s < samples; ++s) {
        std::vector<i64> a(static_cast<size_t>(k)), b(static_cast<size_t>(l));
        for (auto& v : a) v = unit(rng);
        for (auto& v : b) v = unit(rng);
        cplx S = scan_detail::direct_tuple_sum(ctx, k_units, m_units, a, b);
        double mod_val = std::abs(S);
        if (mod_val > cut) {
            ++hits;
            if (result.witnesses.size() < 100)
                result.witnesses.push_back({a, b, mod_val});
        }
    }
    const double phat = static_cast<double>(hits) / static_cast<double>(samples);
    const double half = 1.96 * std::sqrt(std::max(phat * (1.0 - phat), 0.0) /
                                         static_cast<double>(samples));
    result.exceptional_count =
        static_cast<i64>(std::llround(phat * static_cast<double>(result.total_tuples)));
    result.estimate_low = std::max(0.0, phat - half) * static_cast<double>(result.total_tuples);
    result.estimate_high = std::min(1.0, phat + half) * static_cast<double>(result.total_tuples);
    result.notes.push_back("sampled: " + std::to_string(samples) + " tuples, count extrapolated");
    return result;
}

// ---------------------------------------------------------------------------
// Application sums
// ---------------------------------------------------------------------------

/// The four-factor Kl_2 sum over t in F_p^x minus {1, beta/alpha}:
///   Kl2(alpha (t-1)^2) Kl2((t-1)(alpha t - beta))
///   Kl2(beta (1/t - 1)^2) Kl2((1/t - 1)(beta/t - alpha)).
inline cplx fouvry_iwaniec(const TraceTable& kl2, i64 alpha, i64 beta) {
    const FieldContext& ctx = *kl2.ctx;
    const i64 p = ctx.p;
    alpha = mod_reduce(alpha, p);
    beta = mod_reduce(beta, p);
    if (alpha == 0 || beta == 0)
        throw ValidationError("fouvry_iwaniec: alpha, beta must be nonzero");
    const i64 ratio = mul_mod(beta, inv_mod(alpha, p), p);
    cplx acc{0.0, 0.0};
    for (i64 t = 1; t < p; ++t) {
        if (t == 1 || t == ratio) continue;
        const i64 tinv = ctx.inv(t);
        const i64 t1 = mod_reduce(t - 1, p);
        const i64 s1 = mod_reduce(tinv - 1, p);
        const i64 arg1 = mul_mod(alpha, mul_mod(t1, t1, p), p);
        const i64 arg2 = mul_mod(t1, mod_reduce(mul_mod(alpha, t, p) - beta, p), p);
        const i64 arg3 = mul_mod(beta, mul_mod(s1, s1, p), p);
        const i64 arg4 = mul_mod(s1, mod_reduce(mul_mod(beta, tinv, p) - alpha, p), p);
        if (kl2.is_singular(arg1) || kl2.is_singular(arg2) || kl2.is_singular(arg3) ||
            kl2.is_singular(arg4))
            continue;
        acc += kl2.at(arg1) * kl2.at(arg2) * kl2.at(arg3) * kl2.at(arg4);
    }
    return acc;
}

inline cplx fouvry_iwaniec(const FieldContext& ctx, i64 alpha, i64 beta) {
    TraceTable kl2 = kloosterman_batch(ctx, 2);
    return fouvry_iwaniec(kl2, alpha, beta);
}

/// S = sum over x in F_p of prod_i K_i(x + a_i) * M(x) with
///   K_i(x) = -p^{-1/2} sum_y chi_i(f_i(y)) psi(g_i(y)) psi(x y)
///   M(x) = psi(b x + G(x)) chi(g(x)).
/// Each K_i is one additive transform; zero polynomials for g_i and G are
/// allowed, chi and the chi_i must be nontrivial, f_i and g nonzero.
inline cplx bombieri_bourgain(const FieldContext& ctx, i64 b, const std::vector<i64>& shifts,
                              const MultCharacter& chi, const std::vector<MultCharacter>& chis,
                              const std::vector<FpPoly>& f_polys, const FpPoly& g_poly,
                              const std::vector<FpPoly>& g_adds, const FpPoly& G_add) {
    const i64 p = ctx.p;
    const size_t kk = f_polys.size();
    if (shifts.size() != kk || chis.size() != kk || g_adds.size() != kk)
        throw ValidationError("bombieri_bourgain: mismatched factor lists");
    if (chi.trivial()) throw ValidationError("bombieri_bourgain: chi must be nontrivial");
    if (g_poly.zero()) throw ValidationError("bombieri_bourgain: g must be nonzero");
    for (const auto& c : chis)
        if (c.trivial()) throw ValidationError("bombieri_bourgain: each chi_i must be nontrivial");
    for (const auto& f : f_polys)
        if (f.zero()) throw ValidationError("bombieri_bourgain: each f_i must be nonzero");

    const double norm = -1.0 / std::sqrt(static_cast<double>(p));
    std::vector<std::vector<cplx>> factors(kk);
    for (size_t i = 0; i < kk; ++i) {
        std::vector<cplx> h(static_cast<size_t>(p));
        for (i64 y = 0; y < p; ++y)
            h[static_cast<size_t>(y)] = chis[i].at(ctx, f_polys[i].eval(y, p)) *
                                        ctx.psi[static_cast<size_t>(g_adds[i].eval(y, p))];
        factors[i] = additive_dft(ctx, h, +1);
        for (auto& v : factors[i]) v *= norm;
    }
    cplx acc{0.0, 0.0};
    for (i64 x = 0; x < p; ++x) {
        i64 phase = mod_reduce(mul_mod(mod_reduce(b, p), x, p) + G_add.eval(x, p), p);
        cplx term = ctx.psi[static_cast<size_t>(phase)] * chi.at(ctx, g_poly.eval(x, p));
        if (term == cplx{0.0, 0.0}) continue;
        for (size_t i = 0; i < kk; ++i)
            term *= factors[i][static_cast<size_t>(mod_reduce(x + shifts[i], p))];
        acc += term;
    }
    return acc;
}

/// Single-character specialization chi_i = chi, zero additive twists.
inline cplx bombieri_bourgain(const FieldContext& ctx, i64 b, const std::vector<i64>& shifts,
                              const MultCharacter& chi, const std::vector<FpPoly>& f_polys,
                              const FpPoly& g_poly) {
    std::vector<MultCharacter> chis(f_polys.size(), chi);
    std::vector<FpPoly> zeros(f_polys.size());
    return bombieri_bourgain(ctx, b, shifts, chi, chis, f_polys, g_poly, zeros, FpPoly{});
}

} // namespace tracelab
