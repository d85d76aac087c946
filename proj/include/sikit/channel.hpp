#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <variant>
#include <vector>

#include "sikit/error.hpp"
#include "sikit/grid.hpp"
#include "sikit/network.hpp"
#include "sikit/units.hpp"

// Frequency-domain channel synthesis by ABCD cascading. A channel is an
// ordered list of elements; each contributes a 2x2 ABCD matrix per frequency,
// the cascade is the left-to-right product, and the result converts to
// S-parameters against the ChannelSpec's reference impedance.
//
// Differential channels are represented as a single 2-port in the differential
// mode (one odd-mode z0); the per-conductor 4-port path exists only for skew
// work, which builds two independent 2-ports.

namespace sikit {

struct LineSegment {
    double length_mm = 0.0;
    double z0 = 50.0;
    double dk_eff = 3.13;
    double loss_tangent = 0.0;
    double k_c = 0.0;  // conductor loss, dB per mm per sqrt(GHz)
};

// Via as an electrical abstraction: a short barrel line, an open-circuited
// stub hanging at the exit node, and lumped capacitance standing in for the
// pad/antipad 3-D effects (pads at both ends, excess C at barrel center).
struct ViaElement {
    double barrel_length_mm = 0.0;
    double barrel_z0 = 50.0;
    double stub_length_mm = 0.0;
    double stub_z0 = 50.0;
    double dk_z = 3.5;              // out-of-plane Dk; anisotropy lives here
    double loss_tangent = 0.0;
    double excess_shunt_c_ff = 0.0;
    double pad_shunt_c_ff = 0.0;
};

struct LumpedElement {
    enum class Kind { ShuntC, SeriesL };
    Kind kind = Kind::ShuntC;
    double value = 0.0;  // fF for ShuntC, pH for SeriesL
};

using ChannelElement = std::variant<LineSegment, ViaElement, LumpedElement>;

struct ChannelSpec {
    std::vector<ChannelElement> elements;
    double z_ref = 50.0;
    FrequencyGrid grid = default_grid();
};

using Abcd = Eigen::Matrix2cd;

namespace detail {

inline std::complex<double> line_gamma(double f_hz, double dk_eff, double loss_tangent,
                                       double k_c) {
    const double beta = 2.0 * pi * f_hz * std::sqrt(dk_eff) / c_mm_per_s;  // rad/mm
    const double alpha_d = 0.5 * beta * loss_tangent;                      // Np/mm
    const double alpha_c = k_c * std::sqrt(f_hz / 1e9) / db_per_neper;     // Np/mm
    return {alpha_d + alpha_c, beta};
}

inline Abcd shunt_admittance(std::complex<double> y) {
    Abcd m;
    m << 1.0, 0.0,
         y, 1.0;
    return m;
}

inline Abcd series_impedance(std::complex<double> z) {
    Abcd m;
    m << 1.0, z,
         0.0, 1.0;
    return m;
}

} // namespace detail

inline void validate_segment(const LineSegment& s) {
    if (s.length_mm < 0.0) throw Error("line length must be >= 0");
    if (!(s.z0 > 0.0)) throw Error("line z0 must be positive");
    if (s.dk_eff < 1.0) throw Error("line dk_eff must be >= 1");
    if (s.loss_tangent < 0.0 || s.k_c < 0.0) throw Error("loss terms must be >= 0");
}

inline Abcd abcd_line(const LineSegment& seg, double f_hz) {
    validate_segment(seg);
    const auto gl = detail::line_gamma(f_hz, seg.dk_eff, seg.loss_tangent, seg.k_c) *
                    seg.length_mm;
    const auto ch = std::cosh(gl);
    const auto sh = std::sinh(gl);
    Abcd m;
    m << ch, seg.z0 * sh,
         sh / seg.z0, ch;
    return m;
}

inline Abcd abcd_open_stub(double stub_length_mm, double stub_z0, double dk_z,
                           double loss_tangent, double f_hz) {
    if (stub_length_mm < 0.0) throw Error("stub length must be >= 0");
    if (!(stub_z0 > 0.0)) throw Error("stub z0 must be positive");
    if (stub_length_mm == 0.0) return Abcd::Identity();
    const auto gl = detail::line_gamma(f_hz, dk_z, loss_tangent, 0.0) * stub_length_mm;
    return detail::shunt_admittance(std::tanh(gl) / stub_z0);
}

inline Abcd abcd_shunt_c(double c_ff, double f_hz) {
    const double c_farad = c_ff * 1e-15;
    return detail::shunt_admittance({0.0, 2.0 * pi * f_hz * c_farad});
}

inline Abcd abcd_series_l(double l_ph, double f_hz) {
    const double l_henry = l_ph * 1e-12;
    return detail::series_impedance({0.0, 2.0 * pi * f_hz * l_henry});
}

inline Abcd abcd_via(const ViaElement& v, double f_hz) {
    if (v.barrel_length_mm < 0.0 || v.stub_length_mm < 0.0)
        throw Error("via lengths must be >= 0");
    if (!(v.barrel_z0 > 0.0) || !(v.stub_z0 > 0.0))
        throw Error("via impedances must be positive");
    if (v.excess_shunt_c_ff < 0.0 || v.pad_shunt_c_ff < 0.0)
        throw Error("via capacitances must be >= 0");

    LineSegment half{v.barrel_length_mm / 2.0, v.barrel_z0, v.dk_z, v.loss_tangent, 0.0};
    Abcd m = abcd_shunt_c(v.pad_shunt_c_ff, f_hz);
    m = m * abcd_line(half, f_hz);
    m = m * abcd_shunt_c(v.excess_shunt_c_ff, f_hz);
    m = m * abcd_line(half, f_hz);
    m = m * abcd_open_stub(v.stub_length_mm, v.stub_z0, v.dk_z, v.loss_tangent, f_hz);
    m = m * abcd_shunt_c(v.pad_shunt_c_ff, f_hz);
    return m;
}

inline Abcd abcd_element(const ChannelElement& e, double f_hz) {
    return std::visit(
        [f_hz](const auto& el) -> Abcd {
            using T = std::decay_t<decltype(el)>;
            if constexpr (std::is_same_v<T, LineSegment>) {
                return abcd_line(el, f_hz);
            } else if constexpr (std::is_same_v<T, ViaElement>) {
                return abcd_via(el, f_hz);
            } else {
                return el.kind == LumpedElement::Kind::ShuntC
                           ? abcd_shunt_c(el.value, f_hz)
                           : abcd_series_l(el.value, f_hz);
            }
        },
        e);
}

inline Eigen::Matrix2cd abcd_to_s(const Abcd& m, double z_ref) {
    const auto a = m(0, 0), b = m(0, 1), c = m(1, 0), d = m(1, 1);
    const auto b_n = b / z_ref;
    const auto c_n = c * z_ref;
    const auto den = a + b_n + c_n + d;
    Eigen::Matrix2cd s;
    s(0, 0) = (a + b_n - c_n - d) / den;
    s(0, 1) = 2.0 * (a * d - b * c) / den;
    s(1, 0) = 2.0 / den;
    s(1, 1) = (-a + b_n - c_n + d) / den;
    return s;
}

inline Network synthesize_channel(const ChannelSpec& spec) {
    if (spec.elements.empty()) throw Error("channel spec has no elements");
    validate_grid(spec.grid);
    if (!(spec.z_ref > 0.0)) throw Error("reference impedance must be positive");

    Network net;
    net.ports = 2;
    net.grid = spec.grid;
    net.z_ref = spec.z_ref;
    net.data.reserve(spec.grid.size());
    for (double f : spec.grid) {
        Abcd m = Abcd::Identity();
        for (const auto& e : spec.elements) m = m * abcd_element(e, f);
        net.data.push_back(Eigen::MatrixXcd(abcd_to_s(m, spec.z_ref)));
    }
    return net;
}

// Two independent per-conductor 2-ports assembled into an uncoupled 4-port,
// ports (in_P, out_P, in_N, out_N) = (1, 2, 3, 4). Feeds the skew analysis.
inline Network synthesize_pair(const ChannelSpec& p_spec, const ChannelSpec& n_spec) {
    const Network p = synthesize_channel(p_spec);
    const Network n = synthesize_channel(n_spec);
    if (p.grid != n.grid) throw Error("P and N specs must share a grid");
    if (p.z_ref != n.z_ref) throw Error("P and N specs must share a reference impedance");

    Network out;
    out.ports = 4;
    out.grid = p.grid;
    out.z_ref = p.z_ref;
    out.data.reserve(p.size());
    for (std::size_t fi = 0; fi < p.size(); ++fi) {
        Eigen::Matrix4cd m = Eigen::Matrix4cd::Zero();
        m(0, 0) = p.data[fi](0, 0); m(0, 1) = p.data[fi](0, 1);
        m(1, 0) = p.data[fi](1, 0); m(1, 1) = p.data[fi](1, 1);
        m(2, 2) = n.data[fi](0, 0); m(2, 3) = n.data[fi](0, 1);
        m(3, 2) = n.data[fi](1, 0); m(3, 3) = n.data[fi](1, 1);
        out.data.push_back(m);
    }
    return out;
}

} // namespace sikit
