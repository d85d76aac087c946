#pragma once

#include <charconv>
#include <cmath>
#include <complex>
#include <cstddef>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "sikit/error.hpp"
#include "sikit/network.hpp"
#include "sikit/units.hpp"

// Touchstone version 1 reader/writer. Version 2 files ([Version] etc.) are
// rejected outright; the measurement-era data this handles is all v1.
//
// v1 conventions honored here:
//   - option line `# <unit> S <RI|MA|DB> R <zref>`, any field may be omitted,
//     defaults GHz / MA / R 50; only S-parameters are supported
//   - `!` starts a comment, anywhere on a line
//   - 1 record per frequency: 1 + 2*N^2 numbers
//   - 2-port records run S11 S21 S12 S22 (column order, the v1 quirk)
//   - 3+-port records run row-major with line wrapping; wrapping is free-form
//     on read (pure token stream), canonical on write (row per line)

namespace sikit {

enum class TsFormat { RI, MA, DB };

namespace detail {

inline std::string upper(std::string_view s) {
    std::string out(s);
    for (char& c : out) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    return out;
}

inline double parse_double(std::string_view tok, const char* what) {
    double v = 0.0;
    const char* first = tok.data();
    const char* last = tok.data() + tok.size();
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last)
        throw UsageError(std::string("bad number in ") + what + ": '" + std::string(tok) + "'");
    return v;
}

inline std::string format_double(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    (void)ec;
    return std::string(buf, ptr);
}

inline std::complex<double> pair_to_complex(double a, double b, TsFormat fmt) {
    switch (fmt) {
        case TsFormat::RI: return {a, b};
        case TsFormat::MA: return std::polar(a, b * pi / 180.0);
        case TsFormat::DB: return std::polar(std::pow(10.0, a / 20.0), b * pi / 180.0);
    }
    return {};
}

inline void complex_to_pair(std::complex<double> s, TsFormat fmt, double& a, double& b) {
    switch (fmt) {
        case TsFormat::RI: a = s.real(); b = s.imag(); return;
        case TsFormat::MA: a = std::abs(s); b = std::arg(s) * 180.0 / pi; return;
        case TsFormat::DB: {
            const double mag = std::abs(s);
            a = mag > 0.0 ? 20.0 * std::log10(mag) : -400.0;  // -400 dB stands in for -inf
            b = std::arg(s) * 180.0 / pi;
            return;
        }
    }
}

} // namespace detail

inline Network parse_touchstone(std::string_view text, int declared_ports) {
    if (declared_ports < 1) throw UsageError("port count must be at least 1");

    double unit_scale = 1e9;  // v1 default unit is GHz
    TsFormat fmt = TsFormat::MA;
    double z_ref = 50.0;
    bool saw_option_line = false;

    std::vector<double> numbers;

    std::size_t pos = 0;
    while (pos < text.size()) {
        std::size_t eol = text.find('\n', pos);
        if (eol == std::string_view::npos) eol = text.size();
        std::string_view line = text.substr(pos, eol - pos);
        pos = eol + 1;

        if (std::size_t bang = line.find('!'); bang != std::string_view::npos)
            line = line.substr(0, bang);

        // tokenise on whitespace
        std::vector<std::string_view> toks;
        std::size_t i = 0;
        while (i < line.size()) {
            while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
            std::size_t start = i;
            while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
            if (i > start) toks.push_back(line.substr(start, i - start));
        }
        if (toks.empty()) continue;

        if (toks[0].size() >= 1 && toks[0][0] == '[')
            throw UsageError("Touchstone v2 keyword '" + std::string(toks[0]) +
                             "' found; only version 1 files are supported");

        if (toks[0][0] == '#') {
            if (saw_option_line)
                throw UsageError("multiple option lines");
            saw_option_line = true;
            // '#' may be glued to the first token
            std::vector<std::string> fields;
            if (toks[0].size() > 1) fields.push_back(detail::upper(toks[0].substr(1)));
            for (std::size_t k = 1; k < toks.size(); ++k) fields.push_back(detail::upper(toks[k]));

            for (std::size_t k = 0; k < fields.size(); ++k) {
                const std::string& fld = fields[k];
                if (fld == "HZ") unit_scale = 1.0;
                else if (fld == "KHZ") unit_scale = 1e3;
                else if (fld == "MHZ") unit_scale = 1e6;
                else if (fld == "GHZ") unit_scale = 1e9;
                else if (fld == "S") { /* the only parameter kind we accept */ }
                else if (fld == "Y" || fld == "Z" || fld == "H" || fld == "G")
                    throw UsageError("unsupported parameter kind '" + fld + "' (only S)");
                else if (fld == "RI") fmt = TsFormat::RI;
                else if (fld == "MA") fmt = TsFormat::MA;
                else if (fld == "DB") fmt = TsFormat::DB;
                else if (fld == "R") {
                    if (k + 1 >= fields.size()) throw UsageError("option line: R without a value");
                    z_ref = detail::parse_double(fields[++k], "option line R");
                    if (!(z_ref > 0.0)) throw UsageError("option line: R must be positive");
                }
                else throw UsageError("unrecognized option-line field '" + fld + "'");
            }
            continue;
        }

        if (!saw_option_line)
            throw UsageError("data before option line (or missing '#' line)");

        for (auto t : toks) numbers.push_back(detail::parse_double(t, "data"));
    }

    if (!saw_option_line) throw UsageError("no option line found");

    const std::size_t n = static_cast<std::size_t>(declared_ports);
    const std::size_t rec = 1 + 2 * n * n;
    if (numbers.empty()) throw UsageError("no data records");
    if (numbers.size() % rec != 0)
        throw UsageError("data length " + std::to_string(numbers.size()) +
                         " is not a whole number of " + std::to_string(n) + "-port records");

    Network net;
    net.ports = declared_ports;
    net.z_ref = z_ref;
    const std::size_t nfreq = numbers.size() / rec;
    net.grid.reserve(nfreq);
    net.data.reserve(nfreq);

    for (std::size_t r = 0; r < nfreq; ++r) {
        const double* p = numbers.data() + r * rec;
        const double f = p[0] * unit_scale;
        if (!net.grid.empty() && f <= net.grid.back())
            throw UsageError("frequencies must be strictly ascending");
        net.grid.push_back(f);

        Eigen::MatrixXcd m(n, n);
        const double* v = p + 1;
        if (n == 2) {
            // v1 2-port order: S11 S21 S12 S22
            m(0, 0) = detail::pair_to_complex(v[0], v[1], fmt);
            m(1, 0) = detail::pair_to_complex(v[2], v[3], fmt);
            m(0, 1) = detail::pair_to_complex(v[4], v[5], fmt);
            m(1, 1) = detail::pair_to_complex(v[6], v[7], fmt);
        } else {
            for (std::size_t row = 0; row < n; ++row)
                for (std::size_t col = 0; col < n; ++col) {
                    m(row, col) = detail::pair_to_complex(v[0], v[1], fmt);
                    v += 2;
                }
        }
        net.data.push_back(std::move(m));
    }

    validate_network(net);
    return net;
}

inline std::string write_touchstone(const Network& net, TsFormat fmt = TsFormat::RI) {
    validate_network(net);
    std::ostringstream out;
    const char* fmt_name = fmt == TsFormat::RI ? "RI" : fmt == TsFormat::MA ? "MA" : "DB";
    out << "# HZ S " << fmt_name << " R " << detail::format_double(net.z_ref) << "\n";

    const std::size_t n = static_cast<std::size_t>(net.ports);
    for (std::size_t fi = 0; fi < net.grid.size(); ++fi) {
        const auto& m = net.data[fi];
        double a = 0.0, b = 0.0;
        if (n == 1) {
            detail::complex_to_pair(m(0, 0), fmt, a, b);
            out << detail::format_double(net.grid[fi]) << ' '
                << detail::format_double(a) << ' ' << detail::format_double(b) << "\n";
        } else if (n == 2) {
            out << detail::format_double(net.grid[fi]);
            const int order[4][2] = {{0, 0}, {1, 0}, {0, 1}, {1, 1}};
            for (auto [r, c] : order) {
                detail::complex_to_pair(m(r, c), fmt, a, b);
                out << ' ' << detail::format_double(a) << ' ' << detail::format_double(b);
            }
            out << "\n";
        } else {
            // row per line, at most four pairs per line
            for (std::size_t row = 0; row < n; ++row) {
                if (row == 0) out << detail::format_double(net.grid[fi]);
                std::size_t on_line = 0;
                for (std::size_t col = 0; col < n; ++col) {
                    if (on_line == 4) { out << "\n"; on_line = 0; }
                    detail::complex_to_pair(m(row, col), fmt, a, b);
                    out << ' ' << detail::format_double(a) << ' ' << detail::format_double(b);
                    ++on_line;
                }
                out << "\n";
            }
        }
    }
    return out.str();
}

} // namespace sikit
