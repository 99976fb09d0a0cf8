// Acceptance suite: one pass/fail line per criterion, exit code = number of
// failures. Usage: acceptance <data-dir> (defaults to ../data).
//
// The criteria pin oracle equivalence, closed-form identities, the
// classifier truth table, frozen-constant regression bounds, exceptional
// tuple scaling, and byte-level determinism of the report pipeline.

#include <chrono>
#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "tracelab/tracelab.hpp"

using namespace tracelab;

namespace {

int g_failures = 0;

void report(int id, const std::string& name, bool pass, const std::string& detail = "") {
    std::printf("[%s] criterion %2d: %s%s%s\n", pass ? "PASS" : "FAIL", id, name.c_str(),
                detail.empty() ? "" : " -- ", detail.c_str());
    if (!pass) ++g_failures;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.4g", v);
    return buf;
}

// ---------------------------------------------------------------------------

void criterion_1_3_4(const std::vector<i64>& primes) {
    auto t0 = std::chrono::steady_clock::now();
    double max_dev = 0.0;
    bool deligne_ok = true;
    for (i64 p : primes) {
        FieldContext ctx = build_context(p);
        for (i64 r : {2, 3, 4, 5}) {
            TraceTable batch = kloosterman_batch(ctx, r);
            std::vector<cplx> direct = kloosterman_direct_table(ctx, r);
            for (i64 x = 1; x < p; ++x) {
                max_dev = std::max(max_dev,
                                   std::abs(batch.at(x) - direct[static_cast<size_t>(x - 1)]));
                if (std::abs(batch.at(x)) > static_cast<double>(r) + 1e-9) deligne_ok = false;
            }
        }
    }
    // tie the table form of the oracle back to the literal nested sum
    double nested_dev = 0.0;
    {
        FieldContext c101 = build_context(101);
        for (i64 r : {2, 3}) {
            auto table = kloosterman_direct_table(c101, r);
            for (i64 x = 1; x < 101; ++x)
                nested_dev = std::max(nested_dev, std::abs(table[static_cast<size_t>(x - 1)] -
                                                           kloosterman_direct(c101, r, x)));
        }
        auto t4 = kloosterman_direct_table(c101, 4);
        for (i64 x : {i64{1}, i64{17}, i64{55}})
            nested_dev = std::max(nested_dev,
                                  std::abs(t4[static_cast<size_t>(x - 1)] -
                                           kloosterman_direct(c101, 4, x, 500'000'000)));
        FieldContext c499 = build_context(499);
        auto t2 = kloosterman_direct_table(c499, 2);
        for (i64 x = 1; x < 499; ++x)
            nested_dev = std::max(nested_dev, std::abs(t2[static_cast<size_t>(x - 1)] -
                                                       kloosterman_direct(c499, 2, x)));
    }
    double elapsed = seconds_since(t0);
    report(1, "Kloosterman batch = direct oracle, r in {2..5}, p in {101,499}",
           max_dev < 1e-6 && nested_dev < 1e-9 && elapsed < 10.0,
           "max dev " + fmt(max_dev) + ", nested-sum dev " + fmt(nested_dev) + ", " +
               fmt(elapsed) + " s");
    report(3, "Deligne bound |Kl_r| <= r on the criterion-1 matrix", deligne_ok);

    double conj_dev = 0.0;
    FieldContext c499 = build_context(499);
    for (i64 r : {2, 3, 4, 5}) {
        TraceTable batch = kloosterman_batch(c499, r);
        const i64 sign = (r % 2 == 0) ? 1 : 498;
        for (i64 x = 1; x < 499; ++x)
            conj_dev = std::max(conj_dev, std::abs(std::conj(batch.at(x)) -
                                                   batch.at(mul_mod(sign, x, 499))));
    }
    report(4, "conjugation law conj(Kl_r(x)) = Kl_r((-1)^r x) at p = 499", conj_dev < 1e-9,
           "max dev " + fmt(conj_dev));
}

void criterion_2() {
    double worst_rel = 0.0;
    for (i64 p : {101, 499, 1009}) {
        FieldContext ctx = build_context(p);
        for (i64 r : {2, 3, 4}) {
            TraceTable batch = kloosterman_batch(ctx, r);
            const double scale = std::pow(static_cast<double>(p), static_cast<double>(r - 1));
            double total = 0.0;
            for (i64 x = 1; x < p; ++x) total += std::norm(batch.at(x)) * scale;
            double expected = kloosterman_parseval_closed_form(p, r);
            worst_rel = std::max(worst_rel, std::abs(total - expected) / expected);
        }
    }
    // r = 2 closed form equals p^2 - p - 1 exactly
    bool exact_ok = std::abs(kloosterman_parseval_closed_form(101, 2) -
                             (101.0 * 101.0 - 101.0 - 1.0)) < 1e-9;
    report(2, "second-moment closed form ((p-2)p^r + 1)/(p-1)", worst_rel < 1e-6 && exact_ok,
           "worst relative " + fmt(worst_rel));
}

void criterion_5() {
    bool ok = true;
    std::string detail;
    for (i64 param : {2, 4, 6}) {
        for (i64 m = 0; m <= 10 && ok; ++m)
            for (i64 n = 0; m + n <= 10 && ok; ++n)
                if (trivial_multiplicity(sp_group(param), m, n) !=
                    weyl_constant_term_oracle(sp_group(param), m, n)) {
                    ok = false;
                    detail = "Sp(" + std::to_string(param) + ") disagreement";
                }
    }
    for (i64 param : {2, 3, 4, 5}) {
        for (i64 m = 0; m <= 10 && ok; ++m)
            for (i64 n = 0; m + n <= 10 && ok; ++n) {
                long long a = trivial_multiplicity(sl_group(param), m, n);
                if (a != weyl_constant_term_oracle(sl_group(param), m, n)) {
                    ok = false;
                    detail = "SL(" + std::to_string(param) + ") disagreement";
                }
                if ((mod_reduce(m - n, param) == 0) != (a > 0)) {
                    ok = false;
                    detail = "SL nonvanishing rule violated";
                }
            }
    }
    const long long catalan[] = {1, 1, 2, 5, 14};
    for (i64 m = 0; m <= 4; ++m)
        if (trivial_multiplicity(sp_group(2), 2 * m, 0) != catalan[m]) {
            ok = false;
            detail = "Catalan sequence mismatch";
        }
    report(5, "invariant multiplicities: two algorithms agree; Catalan and SL rules", ok, detail);
}

void criterion_6(const SuiteRun& run, double frozen_quad, double suite_seconds) {
    bool ok = true;
    std::string detail;
    int rows_seen = 0;
    for (const auto& row : run.rows) {
        if (row.pattern_id == "mt_kl2_pair" || row.pattern_id == "mt_kl3_pair_1c") {
            ++rows_seen;
            if (row.kind != PredictionKind::MainTerm || !row.m || *row.m != 1 ||
                row.residual > 8.0) {
                ok = false;
                detail = row.pattern_id + " at p=" + std::to_string(row.p) + " residual " +
                         fmt(row.residual);
            }
        } else if (row.pattern_id == "mt_kl2_quad") {
            ++rows_seen;
            if (row.kind != PredictionKind::MainTerm || !row.m || *row.m != 2 ||
                row.residual > 2.0 * frozen_quad) {
                ok = false;
                detail = "mt_kl2_quad at p=" + std::to_string(row.p) + " residual " +
                         fmt(row.residual);
            }
        }
    }
    if (rows_seen != 30) {
        ok = false;
        detail = "expected 30 main-term rows, saw " + std::to_string(rows_seen);
    }
    report(6, "main terms: |S - m p| <= 8 sqrt(p) (pairs), frozen bound (4th power)",
           ok && suite_seconds < 30.0,
           detail.empty() ? ("suite " + fmt(suite_seconds) + " s") : detail);
}

void criterion_7(const SuiteRun& run) {
    bool ok = run.regression_ok;
    std::string detail;
    if (!ok) detail = "frozen-constant regression";
    int cancellation_patterns = 0;
    for (const auto& [id, residual] : run.max_residuals)
        if (id.rfind("mt_", 0) != 0) ++cancellation_patterns;
    if (cancellation_patterns < 20) {
        ok = false;
        detail = "need >= 20 cancellation patterns, have " +
                 std::to_string(cancellation_patterns);
    }
    // growth indicator over the cancellation rows only
    i64 p_min = 0, p_max = 0;
    for (const auto& row : run.rows) {
        if (p_min == 0 || row.p < p_min) p_min = row.p;
        if (row.p > p_max) p_max = row.p;
    }
    double max_small = 0.0, max_large = 0.0;
    for (const auto& row : run.rows) {
        if (row.kind != PredictionKind::Cancellation) continue;
        if (row.p == p_min) max_small = std::max(max_small, row.residual);
        if (row.p == p_max) max_large = std::max(max_large, row.residual);
    }
    double growth = max_small > 0 ? max_large / max_small : 1.0;
    if (growth > 2.0) {
        ok = false;
        detail = "growth indicator " + fmt(growth);
    }
    report(7, "cancellation regression: residuals under frozen constants, growth <= 2", ok,
           detail.empty() ? ("growth " + fmt(growth)) : detail);
}

void criterion_8() {
    bool ok = true;
    std::string detail;
    {
        FieldContext ctx = build_context(31);
        const std::vector<std::pair<std::vector<i64>, std::vector<i64>>> cases = {
            {{1, 0}, {}},      // (2,0)
            {{1, 7}, {3}},     // (2,1)
            {{0, 15}, {5, 10}} // (2,2)
        };
        for (const auto& [ce, re] : cases) {
            CharTuplePair pair = make_pair_from_exponents(ctx, ce, re);
            TraceTable batch = hyp_batch(ctx, pair);
            double max_dev = 0.0;
            for (i64 t = 1; t < 31; ++t)
                max_dev = std::max(max_dev, std::abs(batch.at(t) - hyp_direct(ctx, pair, t)));
            if (max_dev >= 1e-6) {
                ok = false;
                detail = "batch/direct dev " + fmt(max_dev);
            }
        }
    }
    for (i64 p : {31, 61}) {
        FieldContext ctx = build_context(p);
        CharTuplePair pair = make_pair_from_exponents(ctx, {1, 4}, {2});
        const double unnorm = static_cast<double>(p); // p^((n+m-1)/2) = p for (2,1)
        double lhs = 0.0;
        for (i64 t = 1; t < p; ++t) lhs += std::norm(hyp_direct(ctx, pair, t) * unnorm);
        double rhs = hyp_autocorrelation_gauss_side(ctx, pair);
        if (std::abs(lhs - rhs) >= 1e-6 * std::abs(rhs)) {
            ok = false;
            detail = "autocorrelation identity off at p=" + std::to_string(p);
        }
    }
    report(8, "hypergeometric: batch = oracle at p=31; Gauss-sum autocorrelation identity", ok,
           detail);
}

void criterion_9() {
    bool ok = true;
    std::string detail;
    int violations = 0;
    {
        FieldContext ctx = build_context(101);
        TraceTable kl2 = kloosterman_batch(ctx, 2);
        const double bound = 20.0 * std::sqrt(101.0);
        for (i64 alpha = 1; alpha < 101; ++alpha)
            for (i64 beta = 1; beta < 101; ++beta) {
                if (alpha == beta) continue;
                if (std::abs(fouvry_iwaniec(kl2, alpha, beta)) > bound) ++violations;
            }
    }
    {
        FieldContext ctx = build_context(1009);
        TraceTable kl2 = kloosterman_batch(ctx, 2);
        const double bound = 20.0 * std::sqrt(1009.0);
        std::mt19937_64 rng(20240817);
        std::uniform_int_distribution<i64> unit(1, 1008);
        int done = 0;
        while (done < 200) {
            i64 alpha = unit(rng), beta = unit(rng);
            if (alpha == beta) continue;
            ++done;
            if (std::abs(fouvry_iwaniec(kl2, alpha, beta)) > bound) ++violations;
        }
    }
    if (violations != 0) {
        ok = false;
        detail = std::to_string(violations) + " violations";
    }
    report(9, "Fouvry-Iwaniec: |S(alpha,beta)| <= 20 sqrt(p), exhaustive p=101 + 200 at p=1009",
           ok, detail);
}

void criterion_10() {
    auto t0 = std::chrono::steady_clock::now();
    bool ok = true;
    std::string detail;

    for (i64 p : {101, 211}) {
        FieldContext ctx = build_context(p);
        TraceTable kl2 = kloosterman_batch(ctx, 2);
        TraceTable triv = trivial_table(ctx);
        ScanResult plain = exceptional_scan(kl2, 2, 0, triv, 4.0, /*exhaustive=*/true);
        if (plain.exceptional_count > 3 * p) {
            ok = false;
            detail = "Kl_2 plain count " + std::to_string(plain.exceptional_count) + " at p=" +
                     std::to_string(p);
        }
        TraceTable psi1 = psi_table(ctx, 1);
        ScanResult twisted = exceptional_scan(kl2, 2, 0, psi1, 4.0, /*exhaustive=*/true);
        if (twisted.exceptional_count > static_cast<i64>(3.0 * std::sqrt(double(p)))) {
            ok = false;
            detail = "Kl_2 psi-twisted count " + std::to_string(twisted.exceptional_count) +
                     " at p=" + std::to_string(p);
        }
    }

    // Kl_3 diagonals: the conjugation law concentrates the exceptional set on
    // the negation diagonal for plain pairs and on the plain diagonal for
    // conjugated pairs; everything else is stragglers.
    for (i64 p : {101, 211}) {
        FieldContext ctx = build_context(p);
        TraceTable kl3 = kloosterman_batch(ctx, 3);
        TraceTable triv = trivial_table(ctx);
        const double cut = 4.0 * std::sqrt(static_cast<double>(p));
        const i64 straggler_cap = static_cast<i64>(std::sqrt(static_cast<double>(p)));

        ScanResult res20 = exceptional_scan(kl3, 2, 0, triv, 4.0, /*exhaustive=*/true);
        i64 diag20 = 0;
        for (i64 a = 1; a < p; ++a) {
            cplx S{0.0, 0.0};
            for (i64 x = 1; x < p; ++x)
                S += kl3.at(mul_mod(a, x, p)) * kl3.at(mul_mod(p - a, x, p));
            if (std::abs(S) > cut) ++diag20;
        }
        if (res20.exceptional_count < p - 1 - straggler_cap ||
            res20.exceptional_count - diag20 > straggler_cap) {
            ok = false;
            detail = "Kl_3 (2,0) stragglers " + std::to_string(res20.exceptional_count - diag20);
        }

        ScanResult res11 = exceptional_scan(kl3, 1, 1, triv, 4.0, /*exhaustive=*/true);
        i64 diag11 = 0;
        for (i64 a = 1; a < p; ++a) {
            cplx S{0.0, 0.0};
            for (i64 x = 1; x < p; ++x) {
                cplx v = kl3.at(mul_mod(a, x, p));
                S += v * std::conj(v);
            }
            if (std::abs(S) > cut) ++diag11;
        }
        if (res11.exceptional_count < p - 1 - straggler_cap ||
            res11.exceptional_count - diag11 > straggler_cap) {
            ok = false;
            detail = "Kl_3 (1,1) stragglers " + std::to_string(res11.exceptional_count - diag11);
        }
    }
    double elapsed = seconds_since(t0);
    report(10, "exceptional-tuple scaling: counts and diagonal structure", ok && elapsed < 60.0,
           detail.empty() ? fmt(elapsed) + " s" : detail);
}

void criterion_11() {
    const i64 p = 101;
    Pgl2Element g = make_pgl2(2, 0, 0, 1, p);
    Pgl2Element d = make_pgl2(3, 0, 0, 1, p);
    Pgl2Element xi = negation_involution(p);
    Pgl2Element xg = pgl2_mul(xi, g);
    bool ok = true;
    // paired tuple with alternating flags is not r-normal
    if (is_r_normal({g, g, d, d}, {Sigma::Id, Sigma::Conj, Sigma::Id, Sigma::Conj}, 3)) ok = false;
    if (is_normal({g, g, d, d})) ok = false;
    // (gamma, xi gamma) with plain flags: (1+0)-(0+1) = 0
    if (is_r_normal_wrt({g, xg}, {Sigma::Id, Sigma::Id}, 3, xi)) ok = false;
    // the k = 7 example: (3+2)-(1+1) = 3 vanishes mod 3
    std::vector<Pgl2Element> gs = {g, xg, xg, g, g, xg, g};
    std::vector<Sigma> ss = {Sigma::Id, Sigma::Conj, Sigma::Conj, Sigma::Conj,
                             Sigma::Id, Sigma::Id, Sigma::Id};
    if (is_r_normal_wrt(gs, ss, 3, xi)) ok = false;
    report(11, "classifier truth table on the three worked normality examples", ok);
}

void criterion_12(const SuiteConfig& cfg, const SuiteRun& first) {
    SuiteConfig alt = cfg;
    alt.threads = (cfg.threads == 1) ? 2 : 1;
    SuiteRun second = run_verify_suite(alt);
    bool ok = !first.csv.empty() && first.csv == second.csv;
    report(12, "determinism: two suite runs produce byte-identical CSV", ok,
           ok ? std::to_string(first.csv.size()) + " bytes" : "CSV outputs differ");
}

} // namespace

int main(int argc, char** argv) {
    std::string data_dir = argc > 1 ? argv[1] : "../data";
    try {
        criterion_1_3_4({101, 499});
        criterion_2();
        criterion_5();

        SuiteConfig cfg = load_config(data_dir + "/verify_suite.json");
        cfg.frozen_constants_path = data_dir + "/frozen_constants.json";
        auto suite_t0 = std::chrono::steady_clock::now();
        SuiteRun run = run_verify_suite(cfg);
        double suite_seconds = seconds_since(suite_t0);
        double frozen_quad = 4.0;
        {
            std::ifstream in(cfg.frozen_constants_path);
            if (in) {
                std::stringstream ss;
                ss << in.rdbuf();
                auto j = nlohmann::json::parse(ss.str());
                if (j.contains("constants") && j["constants"].contains("mt_kl2_quad"))
                    frozen_quad = j["constants"]["mt_kl2_quad"].get<double>();
            }
        }
        criterion_6(run, frozen_quad, suite_seconds);
        criterion_7(run);
        criterion_8();
        criterion_9();
        criterion_10();
        criterion_11();
        criterion_12(cfg, run);
    } catch (const std::exception& e) {
        std::printf("[FAIL] acceptance aborted: %s\n", e.what());
        return 99;
    }
    std::printf("%d criterion failure(s)\n", g_failures);
    return g_failures;
}
