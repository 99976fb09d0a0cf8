#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "tracelab/trace_table.hpp"
#include "tracelab/transforms.hpp"

namespace tracelab {

inline constexpr i64 kDefaultCostCap = 200'000'000;

inline double kloosterman_norm(i64 p, i64 r) {
    double sign = (r % 2 == 0) ? -1.0 : 1.0; // (-1)^(r-1)
    return sign * std::pow(static_cast<double>(p), -(static_cast<double>(r) - 1.0) / 2.0);
}

/// Kl_r(x) by the literal (r-1)-fold sum over t_i in F_p^x with product x,
/// normalized by (-1)^(r-1) p^(-(r-1)/2). Oracle use only; cost (p-1)^(r-1).
inline cplx kloosterman_direct(const FieldContext& ctx, i64 r, i64 x,
                               i64 cost_cap = kDefaultCostCap) {
    const i64 p = ctx.p;
    x = mod_reduce(x, p);
    if (x == 0) throw ValidationError("kloosterman_direct: x must be nonzero");
    if (r < 1) throw ValidationError("kloosterman_direct: r must be >= 1");
    double cost = static_cast<double>(r);
    for (i64 i = 0; i < r - 1; ++i) cost *= static_cast<double>(p - 1);
    if (cost > static_cast<double>(cost_cap))
        throw CostCapExceededError("kloosterman_direct: r=" + std::to_string(r) +
                                   ", p=" + std::to_string(p) + " exceeds the cost cap");
    if (r == 1) return ctx.psi_at(x);
    // iterate over (t_1, ..., t_{r-1}) in (F_p^x)^(r-1); t_r is forced
    std::vector<i64> t(static_cast<size_t>(r - 1), 1);
    cplx acc{0.0, 0.0};
    while (true) {
        i64 prod = 1, sum = 0;
        for (i64 v : t) { prod = mul_mod(prod, v, p); sum += v; }
        i64 last = mul_mod(x, ctx.inv(prod), p);
        acc += ctx.psi_at(sum % p + last);
        size_t i = 0;
        for (; i < t.size(); ++i) {
            if (t[i] < p - 1) { ++t[i]; break; }
            t[i] = 1;
        }
        if (i == t.size()) break;
    }
    return kloosterman_norm(p, r) * acc;
}

/// The same definitional sum for all x at once, evaluated by associativity:
/// U_1 = psi restricted to F_p^x, U_r(x) = sum_t psi(t) U_{r-1}(x/t).
/// No transforms involved; this is the affordable form of the direct oracle
/// at larger (r, p). Indexed by x in F_p^x as [x-1]; normalized.
inline std::vector<cplx> kloosterman_direct_table(const FieldContext& ctx, i64 r) {
    const i64 p = ctx.p;
    std::vector<cplx> u(static_cast<size_t>(p - 1));
    for (i64 x = 1; x < p; ++x) u[static_cast<size_t>(x - 1)] = ctx.psi[static_cast<size_t>(x)];
    for (i64 level = 2; level <= r; ++level) {
        std::vector<cplx> next(static_cast<size_t>(p - 1), cplx{0.0, 0.0});
        for (i64 t = 1; t < p; ++t) {
            const cplx w = ctx.psi[static_cast<size_t>(t)];
            const i64 tinv = ctx.inv(t);
            for (i64 x = 1; x < p; ++x) {
                i64 y = mul_mod(x, tinv, p);
                next[static_cast<size_t>(x - 1)] += w * u[static_cast<size_t>(y - 1)];
            }
        }
        u = std::move(next);
    }
    const double norm = kloosterman_norm(p, r);
    for (auto& v : u) v *= norm;
    return u;
}

/// Fast batch evaluation: transform psi restricted to F_p^x, raise the
/// multiplicative spectrum to the r-th power (each spectral coefficient is a
/// Gauss sum), invert, normalize. O(p log p). Attaches the standard profile:
/// Sp(r) for even r; SL(r) with special involution x -> -x, untwisted, for
/// odd r. Arithmetic monodromy matches geometric for these tables.
inline TraceTable kloosterman_batch(const FieldContext& ctx, i64 r) {
    if (r < 2) throw ValidationError("kloosterman_batch: r must be >= 2");
    const i64 p = ctx.p;
    std::vector<cplx> psi_units(static_cast<size_t>(p - 1));
    for (i64 x = 1; x < p; ++x)
        psi_units[static_cast<size_t>(x - 1)] = ctx.psi[static_cast<size_t>(x)];
    std::vector<cplx> spec = mult_dft(ctx, psi_units);
    for (auto& s : spec) {
        cplx base = s;
        cplx acc{1.0, 0.0};
        for (i64 i = 0; i < r; ++i) acc *= base;
        s = acc;
    }
    std::vector<cplx> units = mult_idft(ctx, spec);
    const double norm = kloosterman_norm(p, r);
    std::vector<cplx> values(static_cast<size_t>(p), cplx{0.0, 0.0});
    for (i64 x = 1; x < p; ++x) values[static_cast<size_t>(x)] = norm * units[static_cast<size_t>(x - 1)];

    SheafProfile prof;
    if (r % 2 == 0) {
        prof = sp_profile(r);
    } else {
        prof = sl_profile(r, negation_involution(p), /*untwisted=*/true);
    }
    prof.conductor_bound = r + 2;
    TraceTable table =
        make_table(ctx, std::move(values), {0}, "Kl" + std::to_string(r), prof);
    table.asserted_rank = r;
    return table;
}

/// Closed form for the unnormalized second moment:
/// sum_x |U_r(x)|^2 = ((p-2) p^r + 1) / (p-1).
inline double kloosterman_parseval_closed_form(i64 p, i64 r) {
    double pr = std::pow(static_cast<double>(p), static_cast<double>(r));
    return (static_cast<double>(p - 2) * pr + 1.0) / static_cast<double>(p - 1);
}

} // namespace tracelab
