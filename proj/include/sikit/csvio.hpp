#pragma once

#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <string_view>
#include <vector>

#include "sikit/analysis.hpp"
#include "sikit/error.hpp"

// CSV and file-writing helpers. Numbers go through std::to_chars, so output is
// locale-independent ('.' decimal point always) and round-trips exactly. Lines
// end with LF. Writes are atomic: temp file in the destination directory, then
// rename over the target.

namespace sikit {

inline std::string csv_num(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    (void)ec;
    return std::string(buf, ptr);
}

inline void write_file_atomic(const std::filesystem::path& target, std::string_view content) {
    namespace fs = std::filesystem;
    const fs::path dir = target.parent_path().empty() ? "." : target.parent_path();
    std::error_code ec;
    fs::create_directories(dir, ec);
    const fs::path tmp = dir / (target.filename().string() + ".tmp");
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error("cannot open '" + tmp.string() + "' for writing");
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!out) throw Error("write failed for '" + tmp.string() + "'");
    }
    fs::rename(tmp, target, ec);
    if (ec) throw Error("rename to '" + target.string() + "' failed: " + ec.message());
}

// Two-column CSV with a header naming the units.
inline std::string csv_two_columns(std::string_view header_a, std::string_view header_b,
                                   const std::vector<double>& a,
                                   const std::vector<double>& b) {
    if (a.size() != b.size()) throw Error("CSV column length mismatch");
    std::string out;
    out.reserve(a.size() * 32 + 64);
    out += header_a;
    out += ',';
    out += header_b;
    out += '\n';
    for (std::size_t i = 0; i < a.size(); ++i) {
        out += csv_num(a[i]);
        out += ',';
        out += csv_num(b[i]);
        out += '\n';
    }
    return out;
}

inline std::string trace_to_csv(const Trace& t) {
    switch (t.kind) {
        case TraceKind::InsertionLoss:
            return csv_two_columns("freq_hz", "il_db", t.axis, t.values);
        case TraceKind::ReturnLoss:
            return csv_two_columns("freq_hz", "rl_db", t.axis, t.values);
        case TraceKind::TdrImpedance:
            return csv_two_columns("time_ps", "impedance_ohm", t.axis, t.values);
        case TraceKind::TdrDifference:
            return csv_two_columns("time_ps", "rho_difference", t.axis, t.values);
    }
    throw Error("unknown trace kind");
}

} // namespace sikit
