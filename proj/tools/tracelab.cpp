// Command-line surface for the trace-function laboratory.
//
// Subcommands: context, kloos, hyp, classify, classify-hyp, sumprod, verify,
// scan, mult. Exit codes: 0 success, 1 assertion failure (frozen-constant
// regression), 2 usage error.

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "tracelab/tracelab.hpp"

using namespace tracelab;
using nlohmann::json;

namespace {

std::vector<i64> parse_int_list(const std::string& text) {
    std::vector<i64> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        out.push_back(std::stoll(item));
    }
    return out;
}

// Splits "[[1,0],[0,1]],[[2,0],[0,1]]" into matrix strings.
std::vector<std::string> split_matrices(const std::string& text) {
    std::vector<std::string> out;
    int depth = 0;
    std::string cur;
    for (char ch : text) {
        if (ch == '[') ++depth;
        if (ch == ']') --depth;
        cur.push_back(ch);
        if (depth == 0 && ch == ']') {
            out.push_back(cur);
            cur.clear();
        }
    }
    return out;
}

std::vector<Sigma> parse_sigmas(const std::string& text, size_t k) {
    if (text.empty()) return std::vector<Sigma>(k, Sigma::Id);
    std::vector<Sigma> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item == "1" || item == "id") out.push_back(Sigma::Id);
        else if (item == "c" || item == "conj") out.push_back(Sigma::Conj);
        else throw ValidationError("sigma flags must be 1/id or c/conj");
    }
    if (out.size() != k) throw ValidationError("sigma count must match gamma count");
    return out;
}

SheafProfile parse_profile_arg(const std::string& text, const std::string& involution,
                               bool untwisted, bool arith_eq_geom, i64 p) {
    SheafProfile prof;
    auto colon = text.find(':');
    if (colon == std::string::npos)
        throw ValidationError("profile must look like sp:2 or sl:3");
    std::string fam = text.substr(0, colon);
    i64 param = std::stoll(text.substr(colon + 1));
    if (fam == "sp") prof.family = SymmetryFamily::Sp;
    else if (fam == "sl") prof.family = SymmetryFamily::SL;
    else throw ValidationError("profile family must be sp or sl");
    prof.parameter = param;
    prof.rank = param;
    if (!involution.empty()) prof.special_involution = parse_pgl2(involution, p);
    prof.involution_untwisted = untwisted;
    prof.arithmetic_equals_geometric = arith_eq_geom;
    return prof;
}

TableSpec parse_table_arg(const std::string& text) {
    TableSpec spec;
    if (text.rfind("kloos:", 0) == 0) {
        spec.kind = TableSpec::Kind::Kloosterman;
        spec.r = std::stoll(text.substr(6));
        return spec;
    }
    throw ValidationError("table must look like kloos:2 (others via config/hyp subcommand)");
}

void write_output(const std::string& path, const std::string& content) {
    if (path.empty()) {
        std::cout << content;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ValidationError("cannot open output file '" + path + "'");
    out << content;
}

json prediction_json(const Prediction& pred) {
    json j;
    j["kind"] = prediction_kind_name(pred.kind);
    if (pred.kind == PredictionKind::MainTerm) j["m"] = pred.m;
    j["reason"] = pred.reason;
    if (pred.character_twist_possible) j["character_twist_possible"] = true;
    if (pred.sigma_normalized) j["sigma_normalized"] = true;
    return j;
}

json classification_json(const HypClassification& cls) {
    json j;
    j["disjoint"] = cls.disjoint;
    j["kummer_d"] = cls.kummer_d;
    json belyi = json::array();
    for (auto [a, b] : cls.belyi) belyi.push_back({a, b});
    j["belyi"] = belyi;
    json inv_belyi = json::array();
    for (auto [a, b] : cls.inverse_belyi) inv_belyi.push_back({a, b});
    j["inverse_belyi"] = inv_belyi;
    if (cls.lambda) j["lambda_exponent"] = cls.lambda->exponent;
    j["g0_candidates"] = cls.g0_candidates;
    j["autt"] = autt_name(cls.autt);
    j["warnings"] = cls.warnings;
    return j;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"tracelab: finite-field trace-function laboratory"};
    app.require_subcommand(1);
    // --h is a domain option (the frequency); keep only --help for help
    app.set_help_flag("--help", "print help");

    // --- context ---
    auto* cmd_context = app.add_subcommand("context", "build a field context and print its summary");
    i64 ctx_p = 101;
    cmd_context->add_option("p", ctx_p, "prime")->required();

    // --- kloos ---
    auto* cmd_kloos = app.add_subcommand("kloos", "tabulate a hyper-Kloosterman trace table");
    i64 kl_p = 101, kl_r = 2;
    std::string kl_out;
    cmd_kloos->add_option("--p", kl_p, "prime")->required();
    cmd_kloos->add_option("--r", kl_r, "rank")->required();
    cmd_kloos->add_option("--out", kl_out, "CSV output path (stdout if omitted)");

    // --- hyp ---
    auto* cmd_hyp = app.add_subcommand("hyp", "tabulate a hypergeometric trace table");
    i64 hyp_p = 31;
    std::string hyp_chi, hyp_rho, hyp_out;
    cmd_hyp->add_option("--p", hyp_p, "prime")->required();
    cmd_hyp->add_option("--chi", hyp_chi, "chi exponents, comma separated");
    cmd_hyp->add_option("--rho", hyp_rho, "rho exponents, comma separated");
    cmd_hyp->add_option("--out", hyp_out, "CSV output path (stdout if omitted)");

    // --- classify ---
    auto* cmd_classify = app.add_subcommand("classify", "classify a sum pattern under a profile");
    std::string cl_profile, cl_gammas, cl_sigmas, cl_involution;
    i64 cl_h = 0, cl_p = 101;
    bool cl_untwisted = false, cl_no_arith = false;
    cmd_classify->add_option("--profile", cl_profile, "sp:2g or sl:r")->required();
    cmd_classify->add_option("--gammas", cl_gammas, "matrices [[a,b],[c,d]],...")->required();
    cmd_classify->add_option("--sigmas", cl_sigmas, "flags 1/c per gamma (default all 1)");
    cmd_classify->add_option("--h", cl_h, "frequency");
    cmd_classify->add_option("--p", cl_p, "prime (default 101)");
    cmd_classify->add_option("--involution", cl_involution, "special involution [[a,b],[c,d]]");
    cmd_classify->add_flag("--untwisted", cl_untwisted, "involution acts without a twist");
    cmd_classify->add_flag("--twist-unknown", cl_no_arith,
                           "arithmetic symmetry not pinned to the geometric one");

    // --- classify-hyp ---
    auto* cmd_chyp = app.add_subcommand("classify-hyp", "classify a character-tuple pair");
    i64 ch_p = 31;
    std::string ch_chi, ch_rho;
    cmd_chyp->add_option("--p", ch_p, "prime")->required();
    cmd_chyp->add_option("--chi", ch_chi, "chi exponents, comma separated");
    cmd_chyp->add_option("--rho", ch_rho, "rho exponents, comma separated");

    // --- sumprod ---
    auto* cmd_sum = app.add_subcommand("sumprod", "evaluate one restricted sum of products");
    i64 sp_p = 101, sp_h = 0;
    std::string sp_table = "kloos:2", sp_gammas, sp_sigmas;
    cmd_sum->add_option("--p", sp_p, "prime")->required();
    cmd_sum->add_option("--table", sp_table, "trace table spec, e.g. kloos:2");
    cmd_sum->add_option("--gammas", sp_gammas, "matrices [[a,b],[c,d]],...")->required();
    cmd_sum->add_option("--sigmas", sp_sigmas, "flags 1/c per gamma");
    cmd_sum->add_option("--h", sp_h, "frequency");

    // --- verify ---
    auto* cmd_verify = app.add_subcommand("verify", "run a verification suite from a config");
    std::string vf_config;
    cmd_verify->add_option("--config", vf_config, "JSON config path")->required();

    // --- scan ---
    auto* cmd_scan = app.add_subcommand("scan", "count exceptional dilation tuples");
    i64 sc_p = 101, sc_k = 2, sc_l = 0, sc_samples = 20000;
    double sc_c = 4.0;
    std::string sc_table = "kloos:2", sc_m = "trivial", sc_mode = "exhaustive";
    cmd_scan->add_option("--p", sc_p, "prime")->required();
    cmd_scan->add_option("--table", sc_table, "trace table spec, e.g. kloos:2");
    cmd_scan->add_option("--k", sc_k, "number of plain factors");
    cmd_scan->add_option("--l", sc_l, "number of conjugated factors");
    cmd_scan->add_option("--m", sc_m, "companion table: trivial or psi:<h>");
    cmd_scan->add_option("--c", sc_c, "threshold multiplier for c*sqrt(p)");
    cmd_scan->add_option("--mode", sc_mode, "exhaustive or sampled");
    cmd_scan->add_option("--samples", sc_samples, "sample count in sampled mode");

    // --- mult ---
    auto* cmd_mult = app.add_subcommand("mult", "trivial-representation multiplicity");
    std::string mu_family;
    i64 mu_param = 2, mu_m = 0, mu_n = 0;
    cmd_mult->add_option("family", mu_family, "sp or sl")->required();
    cmd_mult->add_option("parameter", mu_param, "2g for sp, r for sl")->required();
    cmd_mult->add_option("m", mu_m, "plain tensor power")->required();
    cmd_mult->add_option("n", mu_n, "dual tensor power")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e); // --help
        app.exit(e);
        return 2;
    }

    try {
        if (*cmd_context) {
            FieldContext ctx = build_context(ctx_p);
            cplx total{0.0, 0.0};
            for (const auto& v : ctx.psi) total += v;
            std::cout << "p=" << ctx.p << " g=" << ctx.g
                      << " psi_sum=" << format_double(std::abs(total)) << "\n";
        } else if (*cmd_kloos) {
            FieldContext ctx = build_context(kl_p);
            TraceTable t = kloosterman_batch(ctx, kl_r);
            write_output(kl_out, csv_trace_table(t));
        } else if (*cmd_hyp) {
            FieldContext ctx = build_context(hyp_p);
            CharTuplePair pair =
                make_pair_from_exponents(ctx, parse_int_list(hyp_chi), parse_int_list(hyp_rho));
            TraceTable t = hyp_batch(ctx, pair);
            write_output(hyp_out, csv_trace_table(t));
        } else if (*cmd_classify) {
            SheafProfile prof =
                parse_profile_arg(cl_profile, cl_involution, cl_untwisted, !cl_no_arith, cl_p);
            std::vector<Pgl2Element> gs;
            for (const auto& mtext : split_matrices(cl_gammas)) gs.push_back(parse_pgl2(mtext, cl_p));
            SumPattern pat = make_pattern(gs, parse_sigmas(cl_sigmas, gs.size()), cl_h);
            Prediction pred = classify(pat, prof, cl_p);
            std::cout << prediction_json(pred).dump(2) << "\n";
        } else if (*cmd_chyp) {
            FieldContext ctx = build_context(ch_p);
            CharTuplePair pair =
                make_pair_from_exponents(ctx, parse_int_list(ch_chi), parse_int_list(ch_rho));
            HypClassification cls = predict(ctx, pair);
            std::cout << classification_json(cls).dump(2) << "\n";
        } else if (*cmd_sum) {
            FieldContext ctx = build_context(sp_p);
            TableSpec table_spec = parse_table_arg(sp_table);
            TraceTable table = table_spec.build(ctx);
            std::vector<Pgl2Element> gs;
            for (const auto& mtext : split_matrices(sp_gammas)) gs.push_back(parse_pgl2(mtext, sp_p));
            SumPattern pat = make_pattern(gs, parse_sigmas(sp_sigmas, gs.size()), sp_h);
            cplx S = sum_of_products(table, pat);
            json j;
            j["p"] = sp_p;
            j["re_S"] = format_double(S.real());
            j["im_S"] = format_double(S.imag());
            j["abs_over_sqrt_p"] = format_double(std::abs(S) / std::sqrt(double(sp_p)));
            std::cout << j.dump(2) << "\n";
        } else if (*cmd_verify) {
            SuiteConfig cfg = load_config(vf_config);
            SuiteRun run = run_verify_suite(cfg);
            write_output(cfg.output_path, run.csv);
            std::cout << run.summary_json << "\n";
            if (!run.regression_ok) {
                std::cerr << "frozen-constant regression detected\n";
                return 1;
            }
        } else if (*cmd_scan) {
            FieldContext ctx = build_context(sc_p);
            TableSpec table_spec = parse_table_arg(sc_table);
            TraceTable table = table_spec.build(ctx);
            TraceTable m_table = trivial_table(ctx);
            if (sc_m.rfind("psi:", 0) == 0)
                m_table = psi_table(ctx, std::stoll(sc_m.substr(4)));
            else if (sc_m != "trivial")
                throw ValidationError("scan: --m must be trivial or psi:<h>");
            ScanResult res = exceptional_scan(table, sc_k, sc_l, m_table, sc_c,
                                              sc_mode == "exhaustive", sc_samples);
            json j;
            j["exhaustive"] = res.exhaustive;
            j["total_tuples"] = res.total_tuples;
            j["exceptional_count"] = res.exceptional_count;
            if (!res.exhaustive) {
                j["estimate_low"] = res.estimate_low;
                j["estimate_high"] = res.estimate_high;
            }
            json wit = json::array();
            for (const auto& w : res.witnesses) {
                json e;
                e["a"] = w.a;
                e["b"] = w.b;
                e["modulus"] = format_double(w.modulus);
                wit.push_back(e);
            }
            j["witnesses"] = wit;
            j["notes"] = res.notes;
            std::cout << j.dump(2) << "\n";
        } else if (*cmd_mult) {
            GroupLabel group;
            if (mu_family == "sp") group = sp_group(mu_param);
            else if (mu_family == "sl") group = sl_group(mu_param);
            else throw ValidationError("mult: family must be sp or sl");
            std::cout << trivial_multiplicity(group, mu_m, mu_n) << "\n";
        }
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
