#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "tracelab/field.hpp"
#include "tracelab/profile.hpp"

namespace tracelab {

/// Tabulated complex values of one trace function on F_p, with the set of
/// singular points (excluded from restricted sums) and an optional asserted
/// symmetry profile. Immutable after construction, shareable across threads.
struct TraceTable {
    const FieldContext* ctx = nullptr;
    std::vector<cplx> values;          // size p, indexed by x in F_p
    std::vector<std::uint8_t> singular; // size p, 1 where the value is not a trace value
    std::optional<SheafProfile> profile;
    std::optional<i64> asserted_rank;  // recorded even when no full profile applies
    std::string label;

    i64 p() const { return ctx->p; }

    bool is_singular(i64 x) const { return singular[static_cast<size_t>(x)] != 0; }

    cplx at(i64 x) const { return values[static_cast<size_t>(mod_reduce(x, ctx->p))]; }

    /// Values with singular points zeroed out, indexed by x in F_p^x as [x-1].
    /// Restricted sums and spectra run over this.
    std::vector<cplx> unit_values_zeroed() const {
        std::vector<cplx> out(static_cast<size_t>(ctx->p - 1));
        for (i64 x = 1; x < ctx->p; ++x)
            out[static_cast<size_t>(x - 1)] =
                is_singular(x) ? cplx{0.0, 0.0} : values[static_cast<size_t>(x)];
        return out;
    }
};

inline TraceTable make_table(const FieldContext& ctx, std::vector<cplx> values,
                             std::vector<i64> singular_points, std::string label,
                             std::optional<SheafProfile> profile = std::nullopt) {
    TraceTable t;
    t.ctx = &ctx;
    t.values = std::move(values);
    t.singular.assign(static_cast<size_t>(ctx.p), 0);
    for (i64 x : singular_points) t.singular[static_cast<size_t>(mod_reduce(x, ctx.p))] = 1;
    t.profile = std::move(profile);
    t.label = std::move(label);
    return t;
}

/// Constant table M = 1 on all of F_p (no singular points).
inline TraceTable trivial_table(const FieldContext& ctx) {
    return make_table(ctx, std::vector<cplx>(static_cast<size_t>(ctx.p), cplx{1.0, 0.0}), {},
                      "1");
}

/// M(x) = psi(h x); rank-1 additive phase table.
inline TraceTable psi_table(const FieldContext& ctx, i64 h) {
    std::vector<cplx> v(static_cast<size_t>(ctx.p));
    for (i64 x = 0; x < ctx.p; ++x)
        v[static_cast<size_t>(x)] = ctx.psi[static_cast<size_t>(mul_mod(mod_reduce(h, ctx.p), x, ctx.p))];
    return make_table(ctx, std::move(v), {}, "psi(" + std::to_string(mod_reduce(h, ctx.p)) + "x)");
}

} // namespace tracelab
