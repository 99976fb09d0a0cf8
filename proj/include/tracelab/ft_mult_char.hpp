#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "tracelab/poly.hpp"
#include "tracelab/trace_table.hpp"
#include "tracelab/transforms.hpp"

namespace tracelab {

/// Side information recorded while building a Fourier-transform table:
/// the distinct-root count (the asserted rank), whether the additive
/// root-energy condition x1 - x2 = x3 - x4 admits only trivial solutions
/// among the F_p-rational roots, and whether all roots are rational (the
/// energy check is only conclusive in that case).
struct FtCharInfo {
    i64 rank = 0;
    bool roots_all_rational = false;
    bool energy_condition_holds = false; // over the rational roots
};

namespace ft_detail {

inline bool root_energy_trivial_only(const std::vector<i64>& roots, i64 p) {
    const size_t r = roots.size();
    for (size_t i1 = 0; i1 < r; ++i1)
        for (size_t i2 = 0; i2 < r; ++i2)
            for (size_t i3 = 0; i3 < r; ++i3)
                for (size_t i4 = 0; i4 < r; ++i4) {
                    i64 lhs = mod_reduce(roots[i1] - roots[i2], p);
                    i64 rhs = mod_reduce(roots[i3] - roots[i4], p);
                    if (lhs != rhs) continue;
                    bool trivial = (i3 == i1 && i4 == i2) ||
                                   (roots[i1] == roots[i2] && roots[i3] == roots[i4]);
                    if (!trivial) return false;
                }
    return true;
}

} // namespace ft_detail

/// K_{chi,g}(x) = -p^{-1/2} sum_y chi(g(y)) psi(x y), tabulated by one
/// length-p transform. chi must be nontrivial, g nonzero, and no F_p-root of
/// g may have multiplicity divisible by ord(chi) (OrderViolation otherwise;
/// roots outside F_p are noted as unverified via the info block).
/// Singular set {0}. The attached profile records the asserted rank
/// (distinct roots of g in a closure) with family SL for rank >= 3 (Sp for
/// rank 2), flagged as a containment label, when the rational-root energy
/// condition is conclusive.
inline TraceTable ft_mult_char(const FieldContext& ctx, const MultCharacter& chi,
                               const FpPoly& g, FtCharInfo* info_out = nullptr) {
    if (chi.trivial()) throw ValidationError("ft_mult_char: chi must be nontrivial");
    if (g.zero()) throw ValidationError("ft_mult_char: g must be nonzero");
    const i64 p = ctx.p;

    auto roots = rational_roots(g, p);
    const i64 ord = chi.order();
    i64 rational_degree = 0;
    std::vector<i64> root_points;
    for (const auto& [x, mult] : roots) {
        if (mult % ord == 0)
            throw OrderViolationError("ft_mult_char: root " + std::to_string(x) +
                                      " has multiplicity " + std::to_string(mult) +
                                      " divisible by ord(chi) = " + std::to_string(ord));
        rational_degree += mult;
        root_points.push_back(x);
    }

    FtCharInfo info;
    info.rank = distinct_root_count(g, p);
    info.roots_all_rational = (rational_degree == g.degree());
    info.energy_condition_holds = ft_detail::root_energy_trivial_only(root_points, p);
    if (info_out) *info_out = info;

    std::vector<cplx> h(static_cast<size_t>(p));
    for (i64 y = 0; y < p; ++y) h[static_cast<size_t>(y)] = chi.at(ctx, g.eval(y, p));
    std::vector<cplx> ft = additive_dft(ctx, h, +1);
    const double norm = -1.0 / std::sqrt(static_cast<double>(p));
    for (auto& v : ft) v *= norm;

    std::optional<SheafProfile> prof;
    if (info.rank >= 2 && info.roots_all_rational && info.energy_condition_holds &&
        p > 2 * info.rank + 1) {
        SheafProfile sp;
        sp.family = (info.rank == 2) ? SymmetryFamily::Sp : SymmetryFamily::SL;
        sp.parameter = info.rank;
        sp.rank = info.rank;
        sp.monodromy_contains_only = true;
        prof = sp;
    }
    TraceTable table = make_table(ctx, std::move(ft), {0}, "FT[chi(g)]", std::move(prof));
    table.asserted_rank = info.rank;
    return table;
}

/// Necessary condition for unit-proportionality of two tables: equal moduli
/// at every common nonsingular point, and not identically ~0 there.
inline bool detect_proportionality(const TraceTable& A, const TraceTable& B,
                                   double tol = 1e-6) {
    if (A.p() != B.p())
        throw ContextMismatchError("detect_proportionality: tables over different primes");
    double max_abs = 0.0;
    for (i64 x = 0; x < A.p(); ++x) {
        if (A.is_singular(x) || B.is_singular(x)) continue;
        double ma = std::abs(A.at(x)), mb = std::abs(B.at(x));
        if (std::abs(ma - mb) > tol) return false;
        max_abs = std::max(max_abs, ma);
    }
    return max_abs > tol;
}

} // namespace tracelab
