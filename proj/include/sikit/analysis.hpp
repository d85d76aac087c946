#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <utility>
#include <vector>

#include "sikit/error.hpp"
#include "sikit/network.hpp"
#include "sikit/units.hpp"

// Scalar figure-of-merit extraction from networks: IL/RL traces, broadband
// return loss, mask compliance, and the low-band mismatch readout. The
// time-domain side (TDR, skew) lives in tdr.hpp.

namespace sikit {

enum class TraceKind { InsertionLoss, ReturnLoss, TdrImpedance, TdrDifference };

struct Trace {
    TraceKind kind{};
    std::vector<double> axis;    // Hz for spectral traces, ps for TDR traces
    std::vector<double> values;  // dB, ohm, or rho difference per kind
};

namespace detail {
inline double mag_db_floored(double mag) {
    return 20.0 * std::log10(std::max(mag, 1e-20));
}
} // namespace detail

inline Trace insertion_loss(const Network& net) {
    validate_network(net);
    if (net.ports != 2) throw Error("insertion loss needs a 2-port network");
    Trace t;
    t.kind = TraceKind::InsertionLoss;
    t.axis = net.grid;
    t.values.reserve(net.size());
    for (const auto& m : net.data)
        t.values.push_back(detail::mag_db_floored(std::abs(m(1, 0))));
    return t;
}

inline Trace return_loss(const Network& net) {
    validate_network(net);
    if (net.ports != 2) throw Error("return loss needs a 2-port network");
    Trace t;
    t.kind = TraceKind::ReturnLoss;
    t.axis = net.grid;
    t.values.reserve(net.size());
    for (const auto& m : net.data)
        t.values.push_back(detail::mag_db_floored(std::abs(m(0, 0))));
    return t;
}

inline double nyquist(double bitrate) {
    if (!(bitrate > 0.0)) throw Error("bitrate must be positive");
    return bitrate / 2.0;
}

// Broadband return loss: sinc^2-weighted mean-square reflection over the
// signaling band, as a single dB number.
//
//   BRL = 10 log10( sum |S11(f)|^2 W(f) df / sum W(f) df ),  W = sinc^2(f/bitrate)
//
// evaluated on the grid up to Nyquist with trapezoid df weights. The weighting
// is the NRZ pulse spectrum, so reflections near the band edge (where the
// signal has little energy) count less. Floors at -200 dB.
inline double brl(const Network& net, double bitrate) {
    validate_network(net);
    if (net.ports != 2) throw Error("BRL needs a 2-port network");
    const double fn = nyquist(bitrate);
    if (net.grid.back() < fn)
        throw Error("grid does not reach the Nyquist frequency");

    std::vector<double> f, r2;
    for (std::size_t i = 0; i < net.size(); ++i) {
        if (net.grid[i] > fn * (1.0 + 1e-12)) break;
        f.push_back(net.grid[i]);
        const double mag = std::abs(net.data[i](0, 0));
        r2.push_back(mag * mag);
    }
    if (f.size() < 2) throw Error("fewer than two grid points below Nyquist");

    auto sinc2 = [bitrate](double freq) {
        const double x = pi * freq / bitrate;
        const double s = x == 0.0 ? 1.0 : std::sin(x) / x;
        return s * s;
    };

    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) {
        const double left = i == 0 ? f[0] : f[i - 1];
        const double right = i + 1 == f.size() ? f[i] : f[i + 1];
        const double w = 0.5 * (right - left);  // trapezoid df
        const double ww = sinc2(f[i]) * w;
        num += r2[i] * ww;
        den += ww;
    }
    const double ratio = num / den;
    return std::max(10.0 * std::log10(std::max(ratio, 0.0)), -200.0);
}

// Low-band mismatch readout. For a uniform line of impedance z against z_ref,
// |S11(f)| ripples with envelope peak 2|G|/(1+G^2), G = (z-z_ref)/(z+z_ref);
// half the observed low-band peak therefore reads |G| (to second order in G),
// turning the return-loss ripple into an impedance-tolerance number without
// knowing the line length. Evaluated over f <= f_cap (default 2 GHz, enough to
// contain the first ripple peak of any line longer than ~2.5 cm).
inline double low_frequency_rl(const Network& net, double f_cap_hz = 2e9) {
    validate_network(net);
    if (net.ports != 2) throw Error("low-frequency RL needs a 2-port network");
    double peak = 0.0;
    for (std::size_t i = 0; i < net.size() && net.grid[i] <= f_cap_hz; ++i)
        peak = std::max(peak, std::abs(net.data[i](0, 0)));
    return detail::mag_db_floored(peak / 2.0);
}

// Piecewise-linear frequency/limit mask. `scale` records the accumulated
// frequency multiplier (a 28 GBd mask scaled by 2 covers 56 GBd).
struct MaskSpec {
    std::vector<std::pair<double, double>> points;  // (freq Hz, limit dB), ascending
    double scale = 1.0;
};

inline void validate_mask(const MaskSpec& mask) {
    if (mask.points.empty()) throw Error("mask has no points");
    if (!(mask.scale > 0.0)) throw Error("mask scale must be positive");
    for (std::size_t i = 1; i < mask.points.size(); ++i)
        if (mask.points[i].first <= mask.points[i - 1].first)
            throw Error("mask frequencies must be strictly ascending");
}

inline MaskSpec scale_mask(const MaskSpec& mask, double factor) {
    validate_mask(mask);
    if (!(factor > 0.0)) throw Error("mask scale factor must be positive");
    MaskSpec out = mask;
    for (auto& p : out.points) p.first *= factor;
    out.scale *= factor;
    return out;
}

struct ComplianceReport {
    bool pass = true;
    std::optional<double> first_violation_freq;  // Hz
    double worst_margin = 0.0;                   // min of (limit - value), dB
    std::vector<std::pair<double, double>> margins;  // (freq Hz, margin dB)
    double covered_from_hz = 0.0;  // part of the trace the mask actually spans
    double covered_to_hz = 0.0;
    bool full_coverage = true;
};

// Compare a dB trace against the mask. Violation means the trace rises above
// the limit line (for RL traces, less negative than allowed). Trace points
// outside the mask band are skipped and reported via the coverage fields.
inline ComplianceReport mask_check(const Trace& trace, const MaskSpec& mask) {
    validate_mask(mask);
    if (trace.axis.size() != trace.values.size() || trace.axis.empty())
        throw Error("trace is empty or inconsistent");

    const double mf0 = mask.points.front().first;
    const double mf1 = mask.points.back().first;
    if (trace.axis.back() < mf0 || trace.axis.front() > mf1)
        throw Error("trace band does not overlap the mask band");

    auto limit_at = [&mask](double f) {
        auto it = std::lower_bound(mask.points.begin(), mask.points.end(), f,
                                   [](const auto& p, double v) { return p.first < v; });
        if (it == mask.points.begin()) return it->second;
        if (it == mask.points.end()) return std::prev(it)->second;
        const auto& [fa, la] = *std::prev(it);
        const auto& [fb, lb] = *it;
        return la + (lb - la) * (f - fa) / (fb - fa);
    };

    ComplianceReport rep;
    rep.worst_margin = std::numeric_limits<double>::infinity();
    bool any = false;
    for (std::size_t i = 0; i < trace.axis.size(); ++i) {
        const double f = trace.axis[i];
        if (f < mf0 || f > mf1) continue;
        if (!any) rep.covered_from_hz = f;
        rep.covered_to_hz = f;
        any = true;
        const double margin = limit_at(f) - trace.values[i];
        rep.margins.emplace_back(f, margin);
        if (margin < rep.worst_margin) rep.worst_margin = margin;
        if (margin < 0.0 && !rep.first_violation_freq)
            rep.first_violation_freq = f;
    }
    if (!any) throw Error("no trace points inside the mask band");
    rep.pass = !rep.first_violation_freq.has_value();
    rep.full_coverage =
        trace.axis.front() >= mf0 - 1e-9 && trace.axis.back() <= mf1 + 1e-9;
    return rep;
}

} // namespace sikit
