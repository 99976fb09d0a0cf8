#pragma once

#include <array>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "tracelab/errors.hpp"
#include "tracelab/numeric.hpp"

namespace tracelab {

/// Element of PGL_2(F_p) in canonical scaling: the first nonzero entry in
/// reading order (a, b, c, d) is scaled to 1, so equality is entry-wise.
struct Pgl2Element {
    i64 a = 1, b = 0, c = 0, d = 1;
    i64 p = 0;

    std::array<i64, 4> entries() const { return {a, b, c, d}; }

    bool operator==(const Pgl2Element& o) const {
        return a == o.a && b == o.b && c == o.c && d == o.d;
    }
    bool operator<(const Pgl2Element& o) const {
        return entries() < o.entries();
    }
};

inline Pgl2Element pgl2_normalize(i64 a, i64 b, i64 c, i64 d, i64 p) {
    a = mod_reduce(a, p); b = mod_reduce(b, p);
    c = mod_reduce(c, p); d = mod_reduce(d, p);
    i64 lead = a ? a : b ? b : c ? c : d;
    i64 s = inv_mod(lead, p);
    return {mul_mod(a, s, p), mul_mod(b, s, p), mul_mod(c, s, p), mul_mod(d, s, p), p};
}

inline Pgl2Element make_pgl2(i64 a, i64 b, i64 c, i64 d, i64 p) {
    i64 det = mod_reduce(mul_mod(mod_reduce(a, p), mod_reduce(d, p), p) -
                         mul_mod(mod_reduce(b, p), mod_reduce(c, p), p), p);
    if (det == 0)
        throw ValidationError("make_pgl2: singular matrix");
    return pgl2_normalize(a, b, c, d, p);
}

inline Pgl2Element pgl2_identity(i64 p) { return {1, 0, 0, 1, p}; }

inline Pgl2Element pgl2_mul(const Pgl2Element& x, const Pgl2Element& y) {
    const i64 p = x.p;
    return pgl2_normalize(mul_mod(x.a, y.a, p) + mul_mod(x.b, y.c, p),
                          mul_mod(x.a, y.b, p) + mul_mod(x.b, y.d, p),
                          mul_mod(x.c, y.a, p) + mul_mod(x.d, y.c, p),
                          mul_mod(x.c, y.b, p) + mul_mod(x.d, y.d, p), p);
}

inline Pgl2Element pgl2_inverse(const Pgl2Element& x) {
    return pgl2_normalize(x.d, -x.b, -x.c, x.a, x.p);
}

/// Fractional linear action (a x + b) / (c x + d); nullopt encodes the pole
/// (a filter value for restricted sums, not a failure).
inline std::optional<i64> act(const Pgl2Element& g, i64 x) {
    const i64 p = g.p;
    x = mod_reduce(x, p);
    i64 den = (mul_mod(g.c, x, p) + g.d) % p;
    if (den == 0) return std::nullopt;
    i64 num = (mul_mod(g.a, x, p) + g.b) % p;
    return mul_mod(num, inv_mod(den, p), p);
}

inline bool is_involution(const Pgl2Element& g) {
    return pgl2_mul(g, g) == pgl2_identity(g.p);
}

/// x -> -x, the special involution of odd-rank Kloosterman tables.
inline Pgl2Element negation_involution(i64 p) { return make_pgl2(-1, 0, 0, 1, p); }

/// The order-6 subgroup of PGL_2 permuting {0, 1, infinity}; the ambient
/// group for projective automorphisms of balanced hypergeometric tables.
inline std::vector<Pgl2Element> gamma_group(i64 p) {
    return {
        pgl2_identity(p),
        make_pgl2(0, 1, 1, 0, p),
        make_pgl2(-1, 1, 0, 1, p),
        make_pgl2(0, 1, -1, 1, p),
        make_pgl2(1, 0, 1, -1, p),
        make_pgl2(1, -1, 1, 0, p),
    };
}

/// True iff T is empty or T = xi*H for some xi normalizing H with xi^2 in H.
/// Brute force over products; the groups arising here have at most 6 elements.
inline bool coset_structure_check(const std::vector<Pgl2Element>& H,
                                  const std::vector<Pgl2Element>& T) {
    std::set<Pgl2Element> hs(H.begin(), H.end());
    if (hs.empty()) throw NotASubgroupError("coset_structure_check: empty H");
    for (const auto& x : H)
        for (const auto& y : H)
            if (!hs.count(pgl2_mul(x, y)))
                throw NotASubgroupError("coset_structure_check: H is not closed");
    if (!hs.count(pgl2_identity(H.front().p)))
        throw NotASubgroupError("coset_structure_check: H lacks the identity");
    if (T.empty()) return true;
    std::set<Pgl2Element> ts(T.begin(), T.end());
    if (ts.size() != hs.size()) return false;
    const Pgl2Element& xi = T.front();
    // T = xi*H as sets
    for (const auto& h : H)
        if (!ts.count(pgl2_mul(xi, h))) return false;
    // xi normalizes H
    const Pgl2Element xi_inv = pgl2_inverse(xi);
    for (const auto& h : H)
        if (!hs.count(pgl2_mul(pgl2_mul(xi, h), xi_inv))) return false;
    // xi^2 in H
    return hs.count(pgl2_mul(xi, xi)) > 0;
}

enum class Sigma { Id, Conj };

/// The object the classifier decides on: a k-tuple of PGL_2 elements, the
/// matching conjugation flags, and the additive frequency h.
struct SumPattern {
    std::vector<Pgl2Element> gammas;
    std::vector<Sigma> sigmas;
    i64 h = 0;
};

inline SumPattern make_pattern(std::vector<Pgl2Element> gammas, std::vector<Sigma> sigmas,
                               i64 h) {
    if (gammas.empty() || gammas.size() != sigmas.size())
        throw ValidationError("make_pattern: need k >= 1 with |gammas| == |sigmas|");
    const i64 p = gammas.front().p;
    return {std::move(gammas), std::move(sigmas), mod_reduce(h, p)};
}

/// Parses the CLI notation "[[a,b],[c,d]]" (integer entries, reduced mod p).
inline Pgl2Element parse_pgl2(const std::string& text, i64 p) {
    std::array<i64, 4> v{};
    size_t idx = 0;
    i64 sign = 1;
    bool in_number = false;
    i64 cur = 0;
    auto flush = [&]() {
        if (!in_number) return;
        if (idx >= 4) throw ParseError("parse_pgl2: too many entries in '" + text + "'");
        v[idx++] = sign * cur;
        cur = 0;
        sign = 1;
        in_number = false;
    };
    for (char ch : text) {
        if (ch == '-') { sign = -1; in_number = true; }
        else if (ch >= '0' && ch <= '9') { cur = cur * 10 + (ch - '0'); in_number = true; }
        else if (ch == ',' || ch == ']' ) flush();
        else if (ch == '[' || ch == ' ') continue;
        else throw ParseError(std::string("parse_pgl2: unexpected character '") + ch + "'");
    }
    flush();
    if (idx != 4) throw ParseError("parse_pgl2: expected 4 entries in '" + text + "'");
    return make_pgl2(v[0], v[1], v[2], v[3], p);
}

inline std::string pgl2_to_string(const Pgl2Element& g) {
    return "[[" + std::to_string(g.a) + "," + std::to_string(g.b) + "],[" +
           std::to_string(g.c) + "," + std::to_string(g.d) + "]]";
}

} // namespace tracelab
