#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>

#include "sikit/analysis.hpp"
#include "sikit/channel.hpp"
#include "sikit/grid.hpp"

using namespace sikit;
using Catch::Approx;

namespace {

Network flat_reflection(double s11_mag, const FrequencyGrid& grid) {
    Network net;
    net.ports = 2;
    net.grid = grid;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(2, 2);
        m(0, 0) = s11_mag;
        m(1, 0) = m(0, 1) = std::sqrt(std::max(0.0, 1.0 - s11_mag * s11_mag));
        net.data.push_back(m);
    }
    return net;
}

Network line_network(double z0, double length_mm, const FrequencyGrid& grid,
                     double tan_d = 0.0, double k_c = 0.0) {
    ChannelSpec spec;
    spec.grid = grid;
    LineSegment seg;
    seg.length_mm = length_mm;
    seg.z0 = z0;
    seg.dk_eff = 3.13;
    seg.loss_tangent = tan_d;
    seg.k_c = k_c;
    spec.elements.push_back(seg);
    return synthesize_channel(spec);
}

} // namespace

TEST_CASE("ideal thru has 0 dB insertion loss") {
    const Network net = flat_reflection(0.0, make_grid(1e9, 10e9, 1e9));
    const Trace il = insertion_loss(net);
    for (double v : il.values) REQUIRE(v == Approx(0.0).margin(1e-12));
    const Trace rl = return_loss(net);
    for (double v : rl.values) REQUIRE(v <= -100.0);
}

TEST_CASE("return loss reads the log identity") {
    const Network net = flat_reflection(0.0292, make_grid(1e9, 2e9, 1e9));
    const Trace rl = return_loss(net);
    REQUIRE(rl.values[0] == Approx(-30.69).margin(0.02));
}

TEST_CASE("matched lossy line: IL strictly decreases with frequency") {
    const Network net =
        line_network(50.0, 254.0, make_grid(10e6, 40e9, 100e6), 0.002, 0.0037);
    const Trace il = insertion_loss(net);
    for (std::size_t i = 1; i < il.values.size(); ++i)
        REQUIRE(il.values[i] < il.values[i - 1]);
}

TEST_CASE("nyquist frequency") {
    REQUIRE(nyquist(56e9) == Approx(28e9));
    REQUIRE(nyquist(28e9) == Approx(14e9));
    REQUIRE(nyquist(1.0) == Approx(0.5));
    REQUIRE_THROWS_AS(nyquist(0.0), Error);
}

TEST_CASE("BRL of a perfect match floors at -200 dB") {
    const Network net = flat_reflection(0.0, make_grid(10e6, 40e9, 10e6));
    REQUIRE(brl(net, 56e9) == Approx(-200.0));
}

TEST_CASE("BRL of a flat 0.1 reflection is exactly -20 dB") {
    const Network net = flat_reflection(0.1, make_grid(10e6, 40e9, 10e6));
    REQUIRE(brl(net, 56e9) == Approx(-20.0).margin(1e-9));
}

TEST_CASE("BRL of the 53 ohm 10 mm line matches the numeric oracle") {
    // frozen from an independent numeric integration of the same definition
    const Network net = line_network(53.0, 10.0, make_grid(10e6, 40e9, 10e6));
    const double b = brl(net, 56e9);
    REQUIRE(b == Approx(-27.813365).margin(1e-4));

    // and sits within ~3.2 dB of the worst in-band return loss
    const Trace rl = return_loss(net);
    double worst = -400.0;
    for (std::size_t i = 0; i < rl.axis.size() && rl.axis[i] <= 28e9; ++i)
        worst = std::max(worst, rl.values[i]);
    REQUIRE(worst == Approx(-24.701086).margin(1e-4));
    REQUIRE(b - worst == Approx(-3.112280).margin(1e-3));
}

TEST_CASE("BRL decreases when the reflection shrinks pointwise") {
    const auto grid = make_grid(10e6, 40e9, 10e6);
    const Network big = flat_reflection(0.2, grid);
    Network small = big;
    for (auto& m : small.data) m(0, 0) *= 0.5;
    REQUIRE(brl(small, 56e9) == Approx(brl(big, 56e9) - 6.0206).margin(1e-6));
}

TEST_CASE("BRL refuses a grid that stops short of Nyquist") {
    const Network net = flat_reflection(0.1, make_grid(10e6, 20e9, 10e6));
    REQUIRE_THROWS_AS(brl(net, 56e9), Error);
}

TEST_CASE("low-frequency RL reads the impedance mismatch") {
    const auto grid = make_grid(10e6, 40e9, 10e6);
    // 254 mm puts several envelope peaks below the 2 GHz cap
    REQUIRE(low_frequency_rl(line_network(53.0, 254.0, grid)) ==
            Approx(-30.721733).margin(1e-3));
    REQUIRE(low_frequency_rl(line_network(45.0, 254.0, grid)) ==
            Approx(-25.599147).margin(1e-3));
    // matched line: floor
    REQUIRE(low_frequency_rl(line_network(50.0, 254.0, grid)) < -100.0);
}

TEST_CASE("mask scaling multiplies frequencies, not limits") {
    MaskSpec mask;
    mask.points = {{1e9, -20.0}, {28e9, -8.0}};
    const MaskSpec scaled = scale_mask(mask, 2.0);
    REQUIRE(scaled.points[0].first == Approx(2e9));
    REQUIRE(scaled.points[1].first == Approx(56e9));
    REQUIRE(scaled.points[0].second == -20.0);
    REQUIRE(scaled.points[1].second == -8.0);
    REQUIRE(scaled.scale == Approx(2.0));
}

TEST_CASE("mask check: flat -12 dB mask against a trace peaking at -5 dB") {
    MaskSpec mask;
    mask.points = {{10e6, -12.0}, {40e9, -12.0}};
    Trace trace;
    trace.kind = TraceKind::ReturnLoss;
    trace.axis = {1e9, 10e9, 28e9};
    trace.values = {-30.0, -15.0, -5.0};
    const ComplianceReport rep = mask_check(trace, mask);
    REQUIRE_FALSE(rep.pass);
    REQUIRE(rep.first_violation_freq.has_value());
    REQUIRE(*rep.first_violation_freq == Approx(28e9));
    REQUIRE(rep.worst_margin == Approx(-7.0));
}

TEST_CASE("mask check: compliant trace passes with no violation") {
    MaskSpec mask;
    mask.points = {{10e6, -12.0}, {40e9, -6.0}};
    Trace trace;
    trace.kind = TraceKind::ReturnLoss;
    trace.axis = {1e9, 20e9, 39e9};
    trace.values = {-30.0, -20.0, -15.0};
    const ComplianceReport rep = mask_check(trace, mask);
    REQUIRE(rep.pass);
    REQUIRE_FALSE(rep.first_violation_freq.has_value());
    REQUIRE(rep.worst_margin > 0.0);
}

TEST_CASE("mask check interpolates the limit line") {
    MaskSpec mask;
    mask.points = {{0.05e9, -12.0}, {19.34e9, -10.4}};  // slope between breakpoints
    Trace trace;
    trace.axis = {9.695e9};  // midpoint, interpolated limit -11.2
    trace.values = {-11.3};
    trace.kind = TraceKind::ReturnLoss;
    const ComplianceReport rep = mask_check(trace, mask);
    REQUIRE(rep.worst_margin == Approx(0.1).margin(1e-9));
    REQUIRE(rep.pass);
}

TEST_CASE("mask scaling invariance: scaled trace against scaled mask") {
    MaskSpec mask;
    mask.points = {{0.05e9, -12.0}, {14e9, -10.0}, {28e9, -6.0}};
    const Network net = line_network(47.0, 100.0, make_grid(10e6, 40e9, 50e6),
                                     0.002, 0.0037);
    const Trace rl = return_loss(net);
    const ComplianceReport base = mask_check(rl, mask);

    const double k = 2.0;
    Trace scaled_trace = rl;
    for (auto& f : scaled_trace.axis) f *= k;
    const ComplianceReport rep = mask_check(scaled_trace, scale_mask(mask, k));

    REQUIRE(rep.pass == base.pass);
    REQUIRE(rep.worst_margin == Approx(base.worst_margin).margin(1e-12));
    REQUIRE(rep.margins.size() == base.margins.size());
    for (std::size_t i = 0; i < rep.margins.size(); ++i) {
        REQUIRE(rep.margins[i].first == Approx(base.margins[i].first * k));
        REQUIRE(rep.margins[i].second == Approx(base.margins[i].second).margin(1e-12));
    }
    if (base.first_violation_freq)
        REQUIRE(*rep.first_violation_freq == Approx(*base.first_violation_freq * k));
}

TEST_CASE("mask check error handling") {
    MaskSpec empty;
    Trace trace;
    trace.axis = {1e9};
    trace.values = {-10.0};
    REQUIRE_THROWS_AS(mask_check(trace, empty), Error);

    MaskSpec mask;
    mask.points = {{50e9, -10.0}, {60e9, -10.0}};
    REQUIRE_THROWS_AS(mask_check(trace, mask), Error);  // no band overlap

    MaskSpec unsorted;
    unsorted.points = {{2e9, -10.0}, {1e9, -10.0}};
    REQUIRE_THROWS_AS(mask_check(trace, unsorted), Error);
}

TEST_CASE("partial coverage is reported") {
    MaskSpec mask;
    mask.points = {{5e9, -12.0}, {20e9, -10.0}};
    Trace trace;
    trace.kind = TraceKind::ReturnLoss;
    trace.axis = {1e9, 10e9, 30e9};
    trace.values = {-30.0, -20.0, -15.0};
    const ComplianceReport rep = mask_check(trace, mask);
    REQUIRE_FALSE(rep.full_coverage);
    REQUIRE(rep.covered_from_hz == Approx(10e9));
    REQUIRE(rep.covered_to_hz == Approx(10e9));
}
