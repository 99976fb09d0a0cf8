#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "tracelab/pgl2.hpp"
#include "tracelab/profile.hpp"
#include "tracelab/rep_theory.hpp"

namespace tracelab {

enum class PredictionKind { Cancellation, MainTerm };

/// Outcome of classifying a sum pattern: square-root cancellation, or a main
/// term m*p with the integer multiplicity m.
struct Prediction {
    PredictionKind kind = PredictionKind::Cancellation;
    i64 m = 0;                        // defined iff kind == MainTerm
    std::string reason;               // which test fired
    bool character_twist_possible = false; // arithmetic monodromy not pinned down
    bool sigma_normalized = false;    // conj flags dropped under a self-dual profile
};

inline std::string prediction_kind_name(PredictionKind k) {
    return k == PredictionKind::Cancellation ? "Cancellation" : "MainTerm";
}

namespace classify_detail {

struct GammaCounts {
    i64 id_count = 0;
    i64 conj_count = 0;
};

inline std::map<Pgl2Element, GammaCounts> tally(const std::vector<Pgl2Element>& gammas,
                                                const std::vector<Sigma>& sigmas) {
    std::map<Pgl2Element, GammaCounts> counts;
    for (size_t i = 0; i < gammas.size(); ++i) {
        auto& c = counts[gammas[i]];
        if (sigmas[i] == Sigma::Id) ++c.id_count;
        else ++c.conj_count;
    }
    return counts;
}

} // namespace classify_detail

/// True iff some element of the tuple occurs an odd number of times.
inline bool is_normal(const std::vector<Pgl2Element>& gammas) {
    std::map<Pgl2Element, i64> mult;
    for (const auto& g : gammas) ++mult[g];
    for (const auto& [g, n] : mult)
        if (n % 2 != 0) return true;
    return false;
}

/// True iff some element gamma present in the tuple has
/// #(gamma, id) - #(gamma, conj) not congruent to 0 mod r.
inline bool is_r_normal(const std::vector<Pgl2Element>& gammas,
                        const std::vector<Sigma>& sigmas, i64 r) {
    if (gammas.size() != sigmas.size())
        throw ValidationError("is_r_normal: tuple lengths differ");
    auto counts = classify_detail::tally(gammas, sigmas);
    for (const auto& [g, c] : counts)
        if (mod_reduce(c.id_count - c.conj_count, r) != 0) return true;
    return false;
}

/// True iff some element gamma present in the tuple has signed count
/// (#(gamma,id) + #(xi gamma,conj)) - (#(gamma,conj) + #(xi gamma,id))
/// not congruent to 0 mod r.
inline bool is_r_normal_wrt(const std::vector<Pgl2Element>& gammas,
                            const std::vector<Sigma>& sigmas, i64 r,
                            const Pgl2Element& xi) {
    if (gammas.size() != sigmas.size())
        throw ValidationError("is_r_normal_wrt: tuple lengths differ");
    if (!is_involution(xi))
        throw NotInvolutionError("is_r_normal_wrt: xi is not an involution");
    auto counts = classify_detail::tally(gammas, sigmas);
    for (const auto& [g, c] : counts) {
        classify_detail::GammaCounts partner; // counts at xi*gamma
        auto it = counts.find(pgl2_mul(xi, g));
        if (it != counts.end()) partner = it->second;
        i64 signed_count = (c.id_count + partner.conj_count) -
                           (c.conj_count + partner.id_count);
        if (mod_reduce(signed_count, r) != 0) return true;
    }
    return false;
}

/// Decides cancellation vs main term for a pattern under a profile, and
/// computes the main-term multiplicity as a product over (folded) classes of
/// trivial-representation multiplicities in tensor powers of the standard
/// representation.
inline Prediction classify(const SumPattern& pattern, const SheafProfile& profile, i64 p) {
    validate_profile(profile);
    if (pattern.gammas.empty() || pattern.gammas.size() != pattern.sigmas.size())
        throw ValidationError("classify: need k >= 1 with matching tuple lengths");

    Prediction pred;
    std::vector<Sigma> sigmas = pattern.sigmas;

    if (profile.family == SymmetryFamily::Sp) {
        // self-dual trace is real; conj flags carry no information
        for (auto& s : sigmas) {
            if (s == Sigma::Conj) { s = Sigma::Id; pred.sigma_normalized = true; }
        }
    } else if (profile.special_involution && !profile.involution_untwisted &&
               p <= profile.parameter) {
        throw PrimeTooSmallError("classify: SL profile with twisted special involution needs p > r");
    }

    const i64 h = mod_reduce(pattern.h, p);
    if (h != 0) {
        pred.kind = PredictionKind::Cancellation;
        pred.reason = "nonzero frequency";
        return pred;
    }

    if (profile.family == SymmetryFamily::Sp) {
        if (is_normal(pattern.gammas)) {
            pred.kind = PredictionKind::Cancellation;
            pred.reason = "normal tuple";
            return pred;
        }
        pred.kind = PredictionKind::MainTerm;
        pred.reason = "no odd multiplicity; m = product of invariant multiplicities";
        pred.m = 1;
        std::map<Pgl2Element, i64> mult;
        for (const auto& g : pattern.gammas) ++mult[g];
        for (const auto& [g, n] : mult)
            pred.m *= trivial_multiplicity(sp_group(profile.parameter), n, 0);
    } else {
        const i64 r = profile.parameter;
        if (profile.special_involution) {
            if (is_r_normal_wrt(pattern.gammas, sigmas, r, *profile.special_involution)) {
                pred.kind = PredictionKind::Cancellation;
                pred.reason = "r-normal with respect to the special involution";
                return pred;
            }
        } else {
            if (is_r_normal(pattern.gammas, sigmas, r)) {
                pred.kind = PredictionKind::Cancellation;
                pred.reason = "r-normal";
                return pred;
            }
        }
        pred.kind = PredictionKind::MainTerm;
        pred.reason = "no r-normality; m = product of folded invariant multiplicities";
        pred.m = 1;
        auto counts = classify_detail::tally(pattern.gammas, sigmas);
        if (profile.special_involution) {
            // fold classes gamma ~ xi*gamma; representative contributes
            // n1 = #(gamma,id) + #(xi gamma,conj), nc = #(gamma,conj) + #(xi gamma,id)
            const Pgl2Element& xi = *profile.special_involution;
            std::map<Pgl2Element, bool> used;
            for (const auto& [g, c] : counts) {
                if (used[g]) continue;
                used[g] = true;
                classify_detail::GammaCounts partner;
                Pgl2Element mate = pgl2_mul(xi, g);
                auto it = counts.find(mate);
                if (it != counts.end() && !(mate == g)) {
                    partner = it->second;
                    used[mate] = true;
                }
                i64 n1 = c.id_count + partner.conj_count;
                i64 nc = c.conj_count + partner.id_count;
                pred.m *= trivial_multiplicity(sl_group(r), n1, nc);
            }
        } else {
            for (const auto& [g, c] : counts)
                pred.m *= trivial_multiplicity(sl_group(r), c.id_count, c.conj_count);
        }
    }
    if (!profile.arithmetic_equals_geometric) {
        pred.character_twist_possible = true;
        pred.reason += "; character twist possible";
    }
    return pred;
}

} // namespace tracelab
