#pragma once

#include <charconv>
#include <string>
#include <vector>

#include "tracelab/evaluator.hpp"

namespace tracelab {

/// Fixed 12-significant-digit general format, '.' separator, no locale.
/// Byte-stable across runs for golden-file comparisons.
inline std::string format_double(double v) {
    char buf[48];
    auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 12);
    return std::string(buf, res.ptr);
}

inline std::string csv_header_verification() {
    return "p,pattern,kind,m,re_S,im_S,residual";
}

inline std::string csv_row(const VerificationRow& row) {
    std::string m_field = row.m ? std::to_string(*row.m) : "";
    return std::to_string(row.p) + "," + row.pattern_id + "," +
           prediction_kind_name(row.kind) + "," + m_field + "," + format_double(row.S.real()) +
           "," + format_double(row.S.imag()) + "," + format_double(row.residual);
}

/// Rows sorted by (p, pattern id), one line each, trailing newline.
inline std::string csv_report(std::vector<VerificationRow> rows) {
    std::sort(rows.begin(), rows.end(), [](const VerificationRow& a, const VerificationRow& b) {
        if (a.p != b.p) return a.p < b.p;
        return a.pattern_id < b.pattern_id;
    });
    std::string out = csv_header_verification() + "\n";
    for (const auto& r : rows) out += csv_row(r) + "\n";
    return out;
}

inline std::string csv_trace_table(const TraceTable& t) {
    std::string out = "x,re,im,singular\n";
    for (i64 x = 0; x < t.p(); ++x) {
        out += std::to_string(x) + "," + format_double(t.values[static_cast<size_t>(x)].real()) +
               "," + format_double(t.values[static_cast<size_t>(x)].imag()) + "," +
               (t.is_singular(x) ? "1" : "0") + "\n";
    }
    return out;
}

} // namespace tracelab
