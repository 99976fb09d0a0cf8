#pragma once

#include <optional>
#include <string>

#include "tracelab/errors.hpp"
#include "tracelab/pgl2.hpp"

namespace tracelab {

enum class SymmetryFamily { Sp, SL };

/// Asserted symmetry data attached to a trace table: the monodromy label,
/// optional special involution, and the flags that gate main-term
/// prediction. Labels are taken on trust (stored, not proved); the
/// numerical suites corroborate their consequences.
struct SheafProfile {
    SymmetryFamily family = SymmetryFamily::Sp;
    i64 parameter = 2;   // 2g for Sp, r for SL
    i64 rank = 2;        // dimension of the standard representation, == parameter
    std::optional<Pgl2Element> special_involution;
    bool arithmetic_equals_geometric = false;
    bool involution_untwisted = false;
    // Set when the label is only "monodromy contains this group" rather than
    // an exact determination (Fourier transforms of Kummer-type tables).
    bool monodromy_contains_only = false;
    std::optional<i64> conductor_bound;
};

inline void validate_profile(const SheafProfile& prof) {
    if (prof.rank != prof.parameter)
        throw ProfileMismatchError("profile: rank must equal the symmetry parameter");
    if (prof.family == SymmetryFamily::Sp) {
        if (prof.parameter < 2 || prof.parameter % 2 != 0)
            throw ProfileMismatchError("profile: Sp parameter must be even and >= 2");
    } else {
        if (prof.parameter < 3)
            throw ProfileMismatchError("profile: SL parameter must be >= 3 (Sp covers rank 2)");
    }
    if (prof.special_involution) {
        if (prof.family == SymmetryFamily::Sp)
            throw ProfileMismatchError("profile: special involution only applies to SL");
        if (!is_involution(*prof.special_involution))
            throw NotInvolutionError("profile: special_involution fails the involution check");
        if (*prof.special_involution == pgl2_identity(prof.special_involution->p))
            throw ProfileMismatchError("profile: the identity is not a special involution");
    }
}

inline SheafProfile sp_profile(i64 two_g, bool arith_eq_geom = true) {
    SheafProfile prof;
    prof.family = SymmetryFamily::Sp;
    prof.parameter = two_g;
    prof.rank = two_g;
    prof.arithmetic_equals_geometric = arith_eq_geom;
    return prof;
}

inline SheafProfile sl_profile(i64 r, std::optional<Pgl2Element> xi = std::nullopt,
                               bool untwisted = false, bool arith_eq_geom = true) {
    SheafProfile prof;
    prof.family = SymmetryFamily::SL;
    prof.parameter = r;
    prof.rank = r;
    prof.special_involution = xi;
    prof.involution_untwisted = untwisted;
    prof.arithmetic_equals_geometric = arith_eq_geom;
    return prof;
}

inline std::string family_name(SymmetryFamily f) {
    return f == SymmetryFamily::Sp ? "Sp" : "SL";
}

} // namespace tracelab
