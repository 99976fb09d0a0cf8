#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "tracelab/kloosterman.hpp"
#include "tracelab/trace_table.hpp"
#include "tracelab/transforms.hpp"

namespace tracelab {

/// The two disjoint-or-not tuples of multiplicative characters parametrizing
/// a hypergeometric sum: chi has length n, rho has length m.
struct CharTuplePair {
    std::vector<MultCharacter> chi;
    std::vector<MultCharacter> rho;

    i64 n() const { return static_cast<i64>(chi.size()); }
    i64 m() const { return static_cast<i64>(rho.size()); }

    bool disjoint() const {
        for (const auto& c : chi)
            for (const auto& r : rho)
                if (c == r) return false;
        return true;
    }

    std::vector<i64> chi_exponents() const {
        std::vector<i64> v;
        v.reserve(chi.size());
        for (const auto& c : chi) v.push_back(c.exponent);
        return v;
    }
    std::vector<i64> rho_exponents() const {
        std::vector<i64> v;
        v.reserve(rho.size());
        for (const auto& r : rho) v.push_back(r.exponent);
        return v;
    }
};

inline CharTuplePair make_pair_from_exponents(const FieldContext& ctx,
                                              const std::vector<i64>& chi_exps,
                                              const std::vector<i64>& rho_exps) {
    if (chi_exps.empty() && rho_exps.empty())
        throw ValidationError("character pair: n + m must be >= 1");
    CharTuplePair pair;
    for (i64 e : chi_exps) pair.chi.push_back(make_character(ctx, e));
    for (i64 e : rho_exps) pair.rho.push_back(make_character(ctx, e));
    return pair;
}

inline double hyp_norm(i64 p, i64 n, i64 m) {
    double sign = ((n + m - 1) % 2 == 0) ? 1.0 : -1.0;
    return sign * std::pow(static_cast<double>(p), -(static_cast<double>(n + m) - 1.0) / 2.0);
}

/// Hyp(chi, rho, t) by the literal constrained sum over
/// (x_1..x_n, y_1..y_m) in (F_p^x)^(n+m) with x_1...x_n = t y_1...y_m,
/// of prod chi_i(x_i) * conj(prod rho_j(y_j)) * psi(T(x) - T(y)),
/// times (-1)^(n+m-1) p^(-(n+m-1)/2). Oracle use only; cost p^(n+m-1).
inline cplx hyp_direct(const FieldContext& ctx, const CharTuplePair& pair, i64 t,
                       i64 cost_cap = kDefaultCostCap) {
    const i64 p = ctx.p;
    const i64 n = pair.n(), m = pair.m();
    t = mod_reduce(t, p);
    if (t == 0) throw ValidationError("hyp_direct: t must be nonzero");
    double cost = 1.0;
    for (i64 i = 0; i < n + m - 1; ++i) cost *= static_cast<double>(p - 1);
    if (cost > static_cast<double>(cost_cap))
        throw CostCapExceededError("hyp_direct: (n,m)=(" + std::to_string(n) + "," +
                                   std::to_string(m) + "), p=" + std::to_string(p) +
                                   " exceeds the cost cap");
    // free variables: x_1..x_{n-1}, y_1..y_m when n >= 1 (x_n forced),
    // otherwise y_1..y_{m-1} (y_m forced).
    const i64 free_count = n + m - 1;
    std::vector<i64> v(static_cast<size_t>(free_count), 1);
    cplx acc{0.0, 0.0};
    while (true) {
        i64 prod_x = 1, sum_x = 0, prod_y = 1, sum_y = 0;
        cplx w{1.0, 0.0};
        for (i64 i = 0; i < free_count; ++i) {
            i64 val = v[static_cast<size_t>(i)];
            if (n >= 1 && i < n - 1) {
                prod_x = mul_mod(prod_x, val, p);
                sum_x += val;
                w *= pair.chi[static_cast<size_t>(i)].at(ctx, val);
            } else {
                i64 j = (n >= 1) ? i - (n - 1) : i;
                prod_y = mul_mod(prod_y, val, p);
                sum_y += val;
                w *= std::conj(pair.rho[static_cast<size_t>(j)].at(ctx, val));
            }
        }
        if (n >= 1) {
            i64 xn = mul_mod(mul_mod(t, prod_y, p), ctx.inv(prod_x), p);
            w *= pair.chi[static_cast<size_t>(n - 1)].at(ctx, xn);
            sum_x += xn;
        } else {
            i64 ym = mul_mod(mul_mod(prod_x, ctx.inv(t), p), ctx.inv(prod_y), p);
            w *= std::conj(pair.rho[static_cast<size_t>(m - 1)].at(ctx, ym));
            sum_y += ym;
        }
        acc += w * ctx.psi_at(sum_x - sum_y);
        size_t i = 0;
        for (; i < v.size(); ++i) {
            if (v[i] < p - 1) { ++v[i]; break; }
            v[i] = 1;
        }
        if (i == v.size()) break;
    }
    return hyp_norm(p, n, m) * acc;
}

/// Mellin spectrum of the unnormalized hypergeometric table:
/// Uhat(Lambda_a) = prod_i g(psi, chi_i * conj(Lambda_a))
///                * prod_j (conj(rho_j) Lambda_a)(-1) g(psi, conj(rho_j) Lambda_a).
inline std::vector<cplx> hyp_mellin_spectrum(const FieldContext& ctx, const CharTuplePair& pair,
                                             const std::vector<cplx>& gauss_table) {
    const i64 q = ctx.p - 1;
    std::vector<cplx> spec(static_cast<size_t>(q));
    const std::vector<i64> ce = pair.chi_exponents();
    const std::vector<i64> re = pair.rho_exponents();
    for (i64 a = 0; a < q; ++a) {
        cplx w{1.0, 0.0};
        for (i64 c : ce) w *= gauss_table[static_cast<size_t>(mod_reduce(c - a, q))];
        for (i64 r : re) {
            i64 b = mod_reduce(a - r, q);
            double sgn = (b & 1) ? -1.0 : 1.0; // (conj(rho) Lambda)(-1)
            w *= sgn * gauss_table[static_cast<size_t>(b)];
        }
        spec[static_cast<size_t>(a)] = w;
    }
    return spec;
}

/// Fast batch evaluation by Mellin inversion: every spectral coefficient is a
/// product of Gauss sums, one inverse multiplicative transform recovers the
/// table. Matches hyp_direct exactly on F_p^x (finite Fourier identity).
/// Singular set: {0} when n != m, {0, 1} when n == m. Rank max(n, m).
inline TraceTable hyp_batch(const FieldContext& ctx, const CharTuplePair& pair) {
    if (!pair.disjoint())
        throw NotDisjointError("hyp_batch: chi and rho tuples must be disjoint");
    const i64 p = ctx.p;
    const i64 n = pair.n(), m = pair.m();
    std::vector<cplx> gauss = gauss_sum_table(ctx);
    std::vector<cplx> spec = hyp_mellin_spectrum(ctx, pair, gauss);
    std::vector<cplx> units = mult_idft(ctx, spec);
    const double norm = hyp_norm(p, n, m);
    std::vector<cplx> values(static_cast<size_t>(p), cplx{0.0, 0.0});
    for (i64 x = 1; x < p; ++x)
        values[static_cast<size_t>(x)] = norm * units[static_cast<size_t>(x - 1)];
    std::vector<i64> sing = {0};
    if (n == m) sing.push_back(1);
    std::string label = "Hyp(n=" + std::to_string(n) + ",m=" + std::to_string(m) + ")";
    TraceTable table = make_table(ctx, std::move(values), std::move(sing), std::move(label));
    table.asserted_rank = std::max(n, m);
    return table;
}

/// Both sides of the autocorrelation identity
///   sum_t |U(t)|^2 = (1/(p-1)) sum_Lambda prod_i |g(psi, Lambda chi_i)|^2
///                                        prod_j |g(psi, Lambda rho_j)|^2
/// for the unnormalized table. The right side touches only Gauss sums.
inline double hyp_autocorrelation_gauss_side(const FieldContext& ctx,
                                             const CharTuplePair& pair) {
    const i64 q = ctx.p - 1;
    std::vector<cplx> gauss = gauss_sum_table(ctx);
    const std::vector<i64> ce = pair.chi_exponents();
    const std::vector<i64> re = pair.rho_exponents();
    double total = 0.0;
    for (i64 a = 0; a < q; ++a) {
        double w = 1.0;
        for (i64 c : ce) w *= std::norm(gauss[static_cast<size_t>(mod_reduce(c + a, q))]);
        for (i64 r : re) w *= std::norm(gauss[static_cast<size_t>(mod_reduce(r + a, q))]);
        total += w;
    }
    return total / static_cast<double>(q);
}

} // namespace tracelab
