#pragma once

#include <unsupported/Eigen/FFT>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <vector>

#include "sikit/analysis.hpp"
#include "sikit/error.hpp"
#include "sikit/mixedmode.hpp"
#include "sikit/network.hpp"
#include "sikit/units.hpp"

// Time-domain synthesis from band-limited S-parameters: TDR impedance
// profiles, P/N skew, and P/N TDR difference waveforms.
//
// Shared pipeline: resample one S-parameter onto a uniform grid anchored at
// DC, band-shape it (Gaussian edge for the stimulus risetime, raised-cosine
// taper against truncation ringing), Hermitian-extend, inverse FFT, and
// integrate the impulse into a step response.

namespace sikit {

namespace detail {

// 10-90% risetime of a Gaussian step edge is 2*z(0.9) sigma.
inline double gauss_sigma_ps(double risetime_ps) {
    return risetime_ps / 2.5631031310892008;
}

struct StepWaveform {
    double dt_ps = 0.0;
    std::vector<double> step;  // running integral of the impulse response
    double dc = 0.0;           // spectrum DC value = steady-state step level
    double record_ps = 0.0;    // 1/df, the alias-free span
    double edge_ps = 0.0;      // stimulus edge reference time inside the record
};

// Least-squares phase-slope delay estimate over points with usable magnitude.
// Returns 0 when the parameter is too small to carry timing information
// (e.g. S11 of a well-matched line).
inline double delay_estimate_ps(const FrequencyGrid& grid,
                                const std::vector<std::complex<double>>& vals) {
    double magmax = 0.0;
    for (const auto& v : vals) magmax = std::max(magmax, std::abs(v));
    if (magmax < 0.05) return 0.0;

    // unwrapped phase over usable points
    std::vector<double> fs, ph;
    double prev = 0.0, offset = 0.0;
    bool first = true;
    for (std::size_t i = 0; i < vals.size(); ++i) {
        if (std::abs(vals[i]) < 0.05 * magmax) continue;
        double p = std::arg(vals[i]);
        if (!first) {
            while (p + offset - prev > pi) offset -= 2.0 * pi;
            while (p + offset - prev < -pi) offset += 2.0 * pi;
        }
        first = false;
        prev = p + offset;
        fs.push_back(grid[i]);
        ph.push_back(prev);
    }
    if (fs.size() < 2) return 0.0;

    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const auto n = static_cast<double>(fs.size());
    for (std::size_t i = 0; i < fs.size(); ++i) {
        sx += fs[i]; sy += ph[i];
        sxx += fs[i] * fs[i]; sxy += fs[i] * ph[i];
    }
    const double denom = n * sxx - sx * sx;
    if (denom == 0.0) return 0.0;
    const double slope = (n * sxy - sx * sy) / denom;  // rad per Hz
    return std::max(0.0, -slope / (2.0 * pi) * 1e12);  // ps
}

inline std::size_t next_pow2(std::size_t n) {
    std::size_t p = 1;
    while (p < n) p <<= 1;
    return p;
}

// Build the step response of one S-parameter entry (1-based row/col).
// dc_clamp bounds the extrapolated DC value; reflection paths clamp just
// inside +-1 so the impedance transform stays finite.
inline StepWaveform step_response(const Network& net, int row, int col,
                                  double risetime_ps, double dc_clamp,
                                  double min_record_ps) {
    validate_network(net);
    if (net.grid.front() > 100e6)
        throw Error("lowest frequency above 100 MHz; refusing the DC extrapolation");

    // uniform grid pitch: the finest spacing in the source grid
    double df = net.grid.front();
    for (std::size_t i = 1; i < net.grid.size(); ++i)
        df = std::min(df, net.grid[i] - net.grid[i - 1]);
    const double fmax = net.grid.back();
    const auto k_max = static_cast<std::size_t>(std::floor(fmax / df + 0.5));

    // The band-shaping kernel is symmetric in time, so content at t=0 would
    // spill half its mass across the wrap. Delay the stimulus edge far enough
    // into the record to hold the acausal tail, and report that reference.
    const double edge_ps = std::max(4.0 * risetime_ps, 20.0);

    const double record_ps = 1e12 / df;
    if (record_ps < min_record_ps + edge_ps)
        throw Error("frequency grid too sparse: record length " +
                    std::to_string(record_ps) + " ps would alias (need >= " +
                    std::to_string(min_record_ps + edge_ps) + " ps)");

    // DC anchor: linear extrapolation of Re from the two lowest samples,
    // Im forced to zero (a real network has a real DC response).
    std::vector<std::complex<double>> raw(net.size());
    for (std::size_t i = 0; i < net.size(); ++i) raw[i] = net.s(i, row, col);
    double dc = raw[0].real();
    if (net.size() >= 2) {
        const double f0 = net.grid[0], f1 = net.grid[1];
        dc = raw[0].real() - f0 * (raw[1].real() - raw[0].real()) / (f1 - f0);
    }
    dc = std::clamp(dc, -dc_clamp, dc_clamp);

    // resample onto k*df, linearly; below the first sample, blend toward DC
    const double sigma_s = gauss_sigma_ps(risetime_ps) * 1e-12;
    const double taper_from = 0.9 * fmax;
    std::vector<std::complex<double>> spec(k_max + 1);
    spec[0] = dc;
    std::size_t lo = 0;
    for (std::size_t k = 1; k <= k_max; ++k) {
        const double f = static_cast<double>(k) * df;
        std::complex<double> v;
        if (f <= net.grid.front()) {
            const double t = f / net.grid.front();
            v = (1.0 - t) * std::complex<double>(dc, 0.0) + t * raw[0];
        } else {
            while (lo + 2 < net.size() && net.grid[lo + 1] <= f) ++lo;
            const double f0 = net.grid[lo], f1 = net.grid[lo + 1];
            const double t = std::clamp((f - f0) / (f1 - f0), 0.0, 1.0);
            v = (1.0 - t) * raw[lo] + t * raw[lo + 1];
        }
        const double arg = pi * f * sigma_s;
        double w = std::exp(-2.0 * arg * arg);  // Gaussian edge
        if (f > taper_from)                     // raised-cosine band-edge taper
            w *= 0.5 * (1.0 + std::cos(pi * (f - taper_from) / (fmax - taper_from)));
        const double phase = -2.0 * pi * f * edge_ps * 1e-12;
        spec[k] = v * w * std::polar(1.0, phase);
    }

    // pad for fine time resolution (<= ~0.8 ps per sample), cap the FFT size
    std::size_t n = next_pow2(std::max<std::size_t>(
        8 * (k_max + 1), static_cast<std::size_t>(record_ps / 0.8)));
    n = std::min<std::size_t>(n, std::size_t{1} << 21);

    std::vector<std::complex<double>> full(n, {0.0, 0.0});
    full[0] = spec[0];
    for (std::size_t k = 1; k <= k_max && k < n / 2; ++k) {
        full[k] = spec[k];
        full[n - k] = std::conj(spec[k]);
    }

    Eigen::FFT<double> fft;
    std::vector<std::complex<double>> td;
    fft.inv(td, full);  // includes the 1/n scaling

    StepWaveform out;
    out.dt_ps = record_ps / static_cast<double>(n);
    out.dc = dc;
    out.record_ps = record_ps;
    out.edge_ps = edge_ps;
    out.step.resize(n);
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        acc += td[i].real();
        out.step[i] = acc;
    }
    return out;
}

// First time the step reaches 50% of its steady-state level, linearly
// interpolated between samples and referenced to the stimulus edge.
inline double crossing_time_ps(const StepWaveform& w) {
    const double target = 0.5 * w.dc;
    if (w.dc == 0.0) throw Error("step never reaches 50%: zero steady-state level");
    for (std::size_t i = 1; i < w.step.size(); ++i) {
        const bool crossed = w.dc > 0.0 ? (w.step[i] >= target && w.step[i - 1] < target)
                                        : (w.step[i] <= target && w.step[i - 1] > target);
        if (crossed) {
            const double num = target - w.step[i - 1];
            const double den = w.step[i] - w.step[i - 1];
            const double frac = den == 0.0 ? 0.0 : num / den;
            return (static_cast<double>(i - 1) + frac) * w.dt_ps - w.edge_ps;
        }
    }
    throw Error("step never reaches 50% of its final value");
}

} // namespace detail

// TDR impedance profile of one port. The reflected step rho(t) maps to
// Z(t) = z_ref (1+rho)/(1-rho); time axis starts slightly before the edge so
// the launch baseline is visible. 2-port networks use S21's phase slope for
// the alias guard and display window; 1-port networks fall back to half the
// S11 round-trip slope.
inline Trace tdr(const Network& net, int port, double risetime_ps) {
    validate_network(net);
    if (net.ports != 1 && net.ports != 2)
        throw Error("TDR expects a 1- or 2-port network");
    if (port < 1 || port > net.ports) throw Error("TDR port out of range");
    if (!(risetime_ps > 0.0)) throw Error("risetime must be positive");

    // one-way delay estimate for aliasing guard and display window
    std::vector<std::complex<double>> tvals(net.size());
    double tau_ps;
    if (net.ports == 2) {
        for (std::size_t i = 0; i < net.size(); ++i) tvals[i] = net.s(i, 2, 1);
        tau_ps = detail::delay_estimate_ps(net.grid, tvals);
    } else {
        for (std::size_t i = 0; i < net.size(); ++i) tvals[i] = net.s(i, 1, 1);
        tau_ps = detail::delay_estimate_ps(net.grid, tvals) / 2.0;
    }

    const auto w = detail::step_response(net, port, port, risetime_ps, 0.999,
                                         4.0 * tau_ps);

    const double t_end =
        std::min(w.record_ps / 2.0, 4.0 * tau_ps + 10.0 * risetime_ps + 100.0);
    const auto i_edge = static_cast<std::size_t>(w.edge_ps / w.dt_ps);
    const auto n_pre = std::min<std::size_t>(
        static_cast<std::size_t>(std::ceil(2.0 * risetime_ps / w.dt_ps)), i_edge);

    Trace t;
    t.kind = TraceKind::TdrImpedance;
    for (std::size_t i = i_edge - n_pre; i < w.step.size(); ++i) {
        const double time_ps = static_cast<double>(i) * w.dt_ps - w.edge_ps;
        if (time_ps > t_end) break;
        const double r = std::clamp(w.step[i], -0.999, 0.999);
        t.axis.push_back(time_ps);
        t.values.push_back(net.z_ref * (1.0 + r) / (1.0 - r));
    }
    return t;
}

// P/N skew of a 4-port channel: difference of the 50% crossing times of the
// transmitted steps through the P and N paths. Positive when P arrives later.
inline double skew(const Network& net, const PortPairing& pairing = {},
                   double risetime_ps = 7.0) {
    validate_network(net);
    if (net.ports != 4) throw Error("skew needs a 4-port network");
    detail::mixed_mode_basis(pairing);  // validates the pairing

    auto check_low_f = [&net](int out, int in) {
        if (std::abs(net.s(0, out, in)) < 0.1)
            throw Error("through path |S| below 0.1 at the lowest frequency; "
                        "crossing would be unresolvable");
    };
    check_low_f(pairing.out.first, pairing.in.first);
    check_low_f(pairing.out.second, pairing.in.second);

    std::vector<std::complex<double>> vals(net.size());
    for (std::size_t i = 0; i < net.size(); ++i)
        vals[i] = net.s(i, pairing.out.first, pairing.in.first);
    const double tau_ps = detail::delay_estimate_ps(net.grid, vals);

    const auto wp = detail::step_response(net, pairing.out.first, pairing.in.first,
                                          risetime_ps, 1.0, 4.0 * tau_ps);
    const auto wn = detail::step_response(net, pairing.out.second, pairing.in.second,
                                          risetime_ps, 1.0, 4.0 * tau_ps);
    return detail::crossing_time_ps(wp) - detail::crossing_time_ps(wn);
}

// Difference of the two single-ended reflected steps (both stimuli
// positive-going): rho_P(t) - rho_N(t). Launch asymmetries show up as early
// lobes; series inductance on P makes it positive, shunt capacitance negative.
inline Trace tdr_pn_difference(const Network& net, const PortPairing& pairing = {},
                               double risetime_ps = 7.0) {
    validate_network(net);
    if (net.ports != 4) throw Error("P/N TDR difference needs a 4-port network");
    detail::mixed_mode_basis(pairing);

    const auto wp = detail::step_response(net, pairing.in.first, pairing.in.first,
                                          risetime_ps, 0.999, 0.0);
    const auto wn = detail::step_response(net, pairing.in.second, pairing.in.second,
                                          risetime_ps, 0.999, 0.0);

    // crude span estimate from the round-trip phase slope of P's reflection
    std::vector<std::complex<double>> vals(net.size());
    for (std::size_t i = 0; i < net.size(); ++i)
        vals[i] = net.s(i, pairing.in.first, pairing.in.first);
    const double tau2_ps = detail::delay_estimate_ps(net.grid, vals);

    const double t_end = std::min(wp.record_ps / 2.0,
                                  2.0 * tau2_ps + 10.0 * risetime_ps + 100.0);
    const auto i_edge = static_cast<std::size_t>(wp.edge_ps / wp.dt_ps);
    const auto n_pre = std::min<std::size_t>(
        static_cast<std::size_t>(std::ceil(2.0 * risetime_ps / wp.dt_ps)), i_edge);

    Trace t;
    t.kind = TraceKind::TdrDifference;
    for (std::size_t i = i_edge - n_pre; i < wp.step.size(); ++i) {
        const double time_ps = static_cast<double>(i) * wp.dt_ps - wp.edge_ps;
        if (time_ps > t_end) break;
        t.axis.push_back(time_ps);
        t.values.push_back(wp.step[i] - wn.step[i]);
    }
    return t;
}

} // namespace sikit
