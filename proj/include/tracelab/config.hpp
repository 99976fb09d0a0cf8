#pragma once

#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "tracelab/evaluator.hpp"
#include "tracelab/format.hpp"

namespace tracelab {

/// Profile description that can be instantiated at any prime (integer
/// involution entries are reduced mod p).
struct ProfileSpec {
    SymmetryFamily family = SymmetryFamily::Sp;
    i64 parameter = 2;
    std::optional<std::array<i64, 4>> involution;
    bool involution_untwisted = false;
    bool arithmetic_equals_geometric = true;
    std::optional<i64> conductor_bound;

    SheafProfile instantiate(i64 p) const {
        SheafProfile prof;
        prof.family = family;
        prof.parameter = parameter;
        prof.rank = parameter;
        if (involution)
            prof.special_involution =
                make_pgl2((*involution)[0], (*involution)[1], (*involution)[2], (*involution)[3], p);
        prof.involution_untwisted = involution_untwisted;
        prof.arithmetic_equals_geometric = arithmetic_equals_geometric;
        prof.conductor_bound = conductor_bound;
        return prof;
    }

    /// The natural profile of a batch Kloosterman table of rank r.
    static ProfileSpec kloosterman(i64 r) {
        ProfileSpec spec;
        if (r % 2 == 0) {
            spec.family = SymmetryFamily::Sp;
            spec.parameter = r;
        } else {
            spec.family = SymmetryFamily::SL;
            spec.parameter = r;
            spec.involution = std::array<i64, 4>{-1, 0, 0, 1};
            spec.involution_untwisted = true;
        }
        return spec;
    }
};

struct SuitePattern {
    PatternSpec pattern;
    TableSpec table;
    ProfileSpec profile;
};

/// Parsed and validated verify-suite configuration.
struct SuiteConfig {
    std::vector<i64> primes;
    std::vector<SuitePattern> patterns;
    std::string output_path;
    int threads = 0;
    std::string frozen_constants_path;
};

namespace config_detail {

using nlohmann::json;

inline void reject_unknown_keys(const json& obj, const std::vector<std::string>& allowed,
                                const std::string& where) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        bool ok = false;
        for (const auto& k : allowed)
            if (it.key() == k) { ok = true; break; }
        if (!ok) throw ValidationError("config: unknown key '" + it.key() + "' in " + where);
    }
}

inline std::pair<int, int> line_column(const std::string& text, size_t byte) {
    int line = 1, col = 1;
    for (size_t i = 0; i < byte && i < text.size(); ++i) {
        if (text[i] == '\n') { ++line; col = 1; }
        else ++col;
    }
    return {line, col};
}

inline TableSpec parse_table(const json& j) {
    reject_unknown_keys(j, {"kind", "r", "chi", "rho", "chi_exp", "poly"}, "table");
    TableSpec spec;
    std::string kind = j.at("kind").get<std::string>();
    if (kind == "kloosterman") {
        spec.kind = TableSpec::Kind::Kloosterman;
        spec.r = j.at("r").get<i64>();
        if (spec.r < 2) throw ValidationError("config: kloosterman table needs r >= 2");
    } else if (kind == "hypergeometric") {
        spec.kind = TableSpec::Kind::Hypergeometric;
        spec.chi_exps = j.value("chi", std::vector<i64>{});
        spec.rho_exps = j.value("rho", std::vector<i64>{});
        if (spec.chi_exps.empty() && spec.rho_exps.empty())
            throw ValidationError("config: hypergeometric table needs characters");
    } else if (kind == "ft_mult_char") {
        spec.kind = TableSpec::Kind::FtMultChar;
        spec.ft_chi_exp = j.at("chi_exp").get<i64>();
        spec.ft_poly = j.at("poly").get<std::vector<i64>>();
    } else {
        throw ValidationError("config: unknown table kind '" + kind + "'");
    }
    return spec;
}

inline ProfileSpec parse_profile(const json& j, const TableSpec& table) {
    if (j.is_string() && j.get<std::string>() == "auto") {
        if (table.kind != TableSpec::Kind::Kloosterman)
            throw ValidationError("config: profile 'auto' only applies to kloosterman tables");
        return ProfileSpec::kloosterman(table.r);
    }
    reject_unknown_keys(j,
                        {"symmetry", "parameter", "special_involution", "involution_untwisted",
                         "arithmetic_equals_geometric", "conductor_bound"},
                        "profile");
    ProfileSpec spec;
    std::string fam = j.at("symmetry").get<std::string>();
    if (fam == "sp") spec.family = SymmetryFamily::Sp;
    else if (fam == "sl") spec.family = SymmetryFamily::SL;
    else throw ValidationError("config: symmetry must be 'sp' or 'sl'");
    spec.parameter = j.at("parameter").get<i64>();
    if (j.contains("special_involution")) {
        auto m = j.at("special_involution").get<std::vector<std::vector<i64>>>();
        if (m.size() != 2 || m[0].size() != 2 || m[1].size() != 2)
            throw ValidationError("config: special_involution must be a 2x2 matrix");
        spec.involution = std::array<i64, 4>{m[0][0], m[0][1], m[1][0], m[1][1]};
    }
    spec.involution_untwisted = j.value("involution_untwisted", false);
    spec.arithmetic_equals_geometric = j.value("arithmetic_equals_geometric", true);
    if (j.contains("conductor_bound")) spec.conductor_bound = j.at("conductor_bound").get<i64>();
    return spec;
}

} // namespace config_detail

/// Loads and validates the documented JSON schema. Unknown keys are
/// rejected; primes are checked for primality; pattern ids must be unique.
inline SuiteConfig load_config_text(const std::string& text) {
    using config_detail::json;
    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error& err) {
        auto [line, col] = config_detail::line_column(text, err.byte);
        throw ParseError("config: parse error at line " + std::to_string(line) + ", column " +
                         std::to_string(col) + ": " + err.what());
    }
    config_detail::reject_unknown_keys(
        root, {"primes", "patterns", "output", "threads", "frozen_constants"}, "top level");
    SuiteConfig cfg;

    const json& jp = root.at("primes");
    if (jp.is_array()) {
        for (const auto& v : jp) cfg.primes.push_back(v.get<i64>());
    } else if (jp.is_object()) {
        config_detail::reject_unknown_keys(jp, {"start", "end", "step"}, "primes");
        i64 start = jp.at("start").get<i64>();
        i64 end = jp.at("end").get<i64>();
        i64 step = jp.value("step", static_cast<i64>(1));
        if (step < 1) throw ValidationError("config: primes.step must be >= 1");
        for (i64 v = start; v <= end; v += step) cfg.primes.push_back(v);
    } else {
        throw ValidationError("config: primes must be a list or a range object");
    }
    if (cfg.primes.empty()) throw ValidationError("config: primes is empty");
    for (i64 p : cfg.primes)
        if (!is_prime(p) || p < 3)
            throw ValidationError("config: " + std::to_string(p) + " is not prime");

    std::map<std::string, bool> seen_ids;
    for (const auto& jpat : root.at("patterns")) {
        config_detail::reject_unknown_keys(
            jpat, {"id", "table", "gammas", "sigmas", "h", "profile"}, "pattern");
        SuitePattern sp;
        sp.pattern.id = jpat.at("id").get<std::string>();
        if (seen_ids[sp.pattern.id])
            throw ValidationError("config: duplicate pattern id '" + sp.pattern.id + "'");
        seen_ids[sp.pattern.id] = true;
        sp.table = config_detail::parse_table(jpat.at("table"));
        for (const auto& jm : jpat.at("gammas")) {
            auto m = jm.get<std::vector<std::vector<i64>>>();
            if (m.size() != 2 || m[0].size() != 2 || m[1].size() != 2)
                throw ValidationError("config: each gamma must be a 2x2 matrix");
            sp.pattern.gammas.push_back({m[0][0], m[0][1], m[1][0], m[1][1]});
        }
        if (jpat.contains("sigmas")) {
            for (const auto& js : jpat.at("sigmas")) {
                std::string s = js.get<std::string>();
                if (s == "id" || s == "1") sp.pattern.sigmas.push_back(Sigma::Id);
                else if (s == "conj" || s == "c") sp.pattern.sigmas.push_back(Sigma::Conj);
                else throw ValidationError("config: sigma must be 'id'/'1' or 'conj'/'c'");
            }
        } else {
            sp.pattern.sigmas.assign(sp.pattern.gammas.size(), Sigma::Id);
        }
        if (sp.pattern.gammas.empty() || sp.pattern.gammas.size() != sp.pattern.sigmas.size())
            throw ValidationError("config: pattern '" + sp.pattern.id +
                                  "' needs k >= 1 gammas with matching sigmas");
        sp.pattern.h = jpat.value("h", static_cast<i64>(0));
        sp.profile = jpat.contains("profile")
                         ? config_detail::parse_profile(jpat.at("profile"), sp.table)
                         : (sp.table.kind == TableSpec::Kind::Kloosterman
                                ? ProfileSpec::kloosterman(sp.table.r)
                                : throw ValidationError("config: pattern '" + sp.pattern.id +
                                                        "' needs an explicit profile"));
        cfg.patterns.push_back(std::move(sp));
    }
    if (cfg.patterns.empty()) throw ValidationError("config: patterns is empty");

    cfg.output_path = root.value("output", std::string{});
    cfg.threads = root.value("threads", 0);
    cfg.frozen_constants_path = root.value("frozen_constants", std::string{});
    return cfg;
}

/// Reads a config file; relative output and frozen-constants paths are
/// resolved against the config file's own directory.
inline SuiteConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("config: cannot open '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    SuiteConfig cfg = load_config_text(ss.str());
    const std::filesystem::path base = std::filesystem::path(path).parent_path();
    auto anchor = [&](std::string& p) {
        if (!p.empty() && std::filesystem::path(p).is_relative())
            p = (base / p).string();
    };
    anchor(cfg.output_path);
    anchor(cfg.frozen_constants_path);
    return cfg;
}

// ---------------------------------------------------------------------------
// Suite runner
// ---------------------------------------------------------------------------

struct SuiteRun {
    std::string csv;
    std::string summary_json;
    bool regression_ok = true;
    bool recorded_constants = false;
    std::map<std::string, double> max_residuals; // per pattern id
    double growth_indicator = 0.0;
    std::vector<VerificationRow> rows;
};

/// Runs every (pattern x prime) cell, emits the deterministic CSV, compares
/// per-pattern max residuals against the frozen-constants file (assert
/// <= 2x the recorded value), and reports the suite growth indicator: the
/// max residual at the largest prime over the max residual at the smallest.
/// When the frozen file does not exist yet, the run records it instead of
/// asserting.
inline SuiteRun run_verify_suite(const SuiteConfig& cfg) {
    using config_detail::json;
    SuiteRun run;
    const size_t cells = cfg.primes.size() * cfg.patterns.size();
    std::vector<VerificationRow> rows(cells);
    parallel_for(cells, [&](size_t cell) {
        const size_t pi = cell / cfg.patterns.size();
        const size_t qi = cell % cfg.patterns.size();
        FieldContext ctx = build_context(cfg.primes[pi]);
        const SuitePattern& sp = cfg.patterns[qi];
        TraceTable table = sp.table.build(ctx);
        rows[cell] = evaluate_pattern_at(table, sp.pattern, sp.profile.instantiate(ctx.p));
    }, cfg.threads);

    run.csv = csv_report(rows);
    run.rows = rows;

    i64 p_min = cfg.primes.front(), p_max = cfg.primes.front();
    for (i64 p : cfg.primes) { p_min = std::min(p_min, p); p_max = std::max(p_max, p); }
    double max_at_min = 0.0, max_at_max = 0.0;
    for (const auto& row : rows) {
        auto& mr = run.max_residuals[row.pattern_id];
        mr = std::max(mr, row.residual);
        if (row.p == p_min) max_at_min = std::max(max_at_min, row.residual);
        if (row.p == p_max) max_at_max = std::max(max_at_max, row.residual);
    }
    run.growth_indicator = max_at_min > 0 ? max_at_max / max_at_min
                                          : (max_at_max > 0 ? 1e300 : 1.0);

    json summary;
    summary["primes"] = cfg.primes;
    summary["growth_indicator"] = run.growth_indicator;
    json per_pattern = json::object();

    std::map<std::string, double> frozen;
    bool have_frozen = false;
    if (!cfg.frozen_constants_path.empty()) {
        std::ifstream in(cfg.frozen_constants_path);
        if (in) {
            json jf = json::parse(in, nullptr, /*allow_exceptions=*/true);
            for (auto it = jf.at("constants").begin(); it != jf.at("constants").end(); ++it)
                frozen[it.key()] = it.value().get<double>();
            have_frozen = true;
        }
    }

    for (const auto& [id, residual] : run.max_residuals) {
        json entry;
        entry["max_residual"] = residual;
        if (have_frozen) {
            auto it = frozen.find(id);
            if (it == frozen.end()) {
                entry["status"] = "no frozen constant";
                run.regression_ok = false;
            } else {
                entry["frozen"] = it->second;
                bool ok = residual <= 2.0 * it->second;
                entry["status"] = ok ? "ok" : "regression";
                if (!ok) run.regression_ok = false;
            }
        } else {
            entry["status"] = "recorded";
        }
        per_pattern[id] = entry;
    }
    summary["patterns"] = per_pattern;

    if (!have_frozen && !cfg.frozen_constants_path.empty()) {
        json jf;
        jf["constants"] = json::object();
        for (const auto& [id, residual] : run.max_residuals) jf["constants"][id] = residual;
        std::ofstream out(cfg.frozen_constants_path);
        out << jf.dump(2) << "\n";
        run.recorded_constants = true;
        summary["recorded_constants"] = cfg.frozen_constants_path;
    }
    run.summary_json = summary.dump(2);
    return run;
}

} // namespace tracelab
