#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>

#include "sikit/channel.hpp"
#include "sikit/grid.hpp"
#include "sikit/mixedmode.hpp"
#include "sikit/network.hpp"
#include "sikit/units.hpp"

using namespace sikit;
using Catch::Approx;

namespace {

// ideal delay line as an analytic 2-port: S21 = exp(-j 2 pi f tau)
Network ideal_delay(const FrequencyGrid& grid, double tau_s) {
    Network net;
    net.ports = 2;
    net.grid = grid;
    for (double f : grid) {
        Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(2, 2);
        const auto ph = std::polar(1.0, -2.0 * pi * f * tau_s);
        m(1, 0) = ph;
        m(0, 1) = ph;
        net.data.push_back(m);
    }
    return net;
}

Network uncoupled_pair(const ChannelSpec& p, const ChannelSpec& n) {
    return synthesize_pair(p, n);
}

ChannelSpec line_spec(double length_mm, const FrequencyGrid& grid) {
    ChannelSpec spec;
    spec.grid = grid;
    LineSegment seg;
    seg.length_mm = length_mm;
    seg.z0 = 50.0;
    seg.dk_eff = 3.13;
    spec.elements.push_back(seg);
    return spec;
}

} // namespace

TEST_CASE("grid validation") {
    REQUIRE_THROWS_AS(validate_grid(FrequencyGrid{}), Error);
    REQUIRE_THROWS_AS(validate_grid(FrequencyGrid{1e9, 1e9}), Error);
    REQUIRE_THROWS_AS(validate_grid(FrequencyGrid{2e9, 1e9}), Error);
    REQUIRE_THROWS_AS(validate_grid(FrequencyGrid{0.0, 1e9}), Error);
    REQUIRE_NOTHROW(validate_grid(FrequencyGrid{1e6, 2e6, 3e6}));

    const auto g = make_grid(10e6, 40e9, 10e6);
    REQUIRE(g.size() == 4000);
    REQUIRE(g.front() == Approx(10e6));
    REQUIRE(g.back() == Approx(40e9));
}

TEST_CASE("resample onto the identical grid is the identity") {
    const auto grid = make_grid(1e9, 10e9, 1e9);
    const Network net = ideal_delay(grid, 100e-12);
    const Network out = resample(net, grid);
    for (std::size_t i = 0; i < grid.size(); ++i)
        REQUIRE(std::abs(out.s(i, 2, 1) - net.s(i, 2, 1)) < 1e-15);
}

TEST_CASE("resample midpoint is the complex arithmetic mean") {
    Network net;
    net.ports = 1;
    net.grid = {1e9, 2e9};
    Eigen::MatrixXcd a(1, 1), b(1, 1);
    a(0, 0) = {0.2, -0.4};
    b(0, 0) = {0.6, 0.8};
    net.data = {a, b};
    const Network out = resample(net, FrequencyGrid{1.5e9});
    REQUIRE(out.s(0, 1, 1).real() == Approx(0.4));
    REQUIRE(out.s(0, 1, 1).imag() == Approx(0.2));
}

TEST_CASE("resample refuses to extrapolate") {
    const auto grid = make_grid(1e9, 10e9, 1e9);
    const Network net = ideal_delay(grid, 0.0);
    REQUIRE_THROWS_AS(resample(net, FrequencyGrid{0.5e9}), Error);
    REQUIRE_THROWS_AS(resample(net, FrequencyGrid{11e9}), Error);
}

TEST_CASE("resampled ideal delay keeps phase accurate") {
    // 1 ns of delay sampled at 10 MHz: linear Re/Im interpolation onto a
    // shifted grid should stay well under a degree of phase error
    const double tau = 1e-9;
    const auto src = make_grid(10e6, 5e9, 10e6);
    const Network net = ideal_delay(src, tau);
    const auto dst = make_grid(15e6, 4.99e9, 10e6);
    const Network out = resample(net, dst);
    double worst_deg = 0.0;
    for (std::size_t i = 0; i < dst.size(); ++i) {
        const auto expect = std::polar(1.0, -2.0 * pi * dst[i] * tau);
        const double err = std::abs(std::arg(out.s(i, 2, 1) / expect)) * 180.0 / pi;
        worst_deg = std::max(worst_deg, err);
    }
    REQUIRE(worst_deg < 1.0);
}

TEST_CASE("mixed-mode: symmetric uncoupled pair has no mode conversion") {
    const auto grid = make_grid(10e6, 20e9, 100e6);
    const auto spec = line_spec(25.4, grid);
    const Network four = uncoupled_pair(spec, spec);
    const MixedModeNetwork mm = to_mixed_mode(four);

    double worst = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        worst = std::max(worst, mm.sdc[i].cwiseAbs().maxCoeff());
        worst = std::max(worst, mm.scd[i].cwiseAbs().maxCoeff());
    }
    REQUIRE(worst < 1e-12);

    // SDD21 equals the single-line S21 for an uncoupled symmetric pair
    const Network single = synthesize_channel(spec);
    for (std::size_t i = 0; i < grid.size(); ++i)
        REQUIRE(std::abs(mm.sdd[i](1, 0) - single.s(i, 2, 1)) < 1e-12);
}

TEST_CASE("mixed-mode block formula for the default pairing") {
    // one arbitrary (non-symmetric) matrix: SDD11 = (S11 - S13 - S31 + S33)/2
    Network net;
    net.ports = 4;
    net.grid = {1e9};
    Eigen::MatrixXcd m(4, 4);
    int v = 1;
    for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 4; ++c) m(r, c) = std::complex<double>(v++, -v);
    net.data.push_back(m);
    const MixedModeNetwork mm = to_mixed_mode(net);
    const auto expect = 0.5 * (m(0, 0) - m(0, 2) - m(2, 0) + m(2, 2));
    REQUIRE(std::abs(mm.sdd[0](0, 0) - expect) < 1e-12);
}

TEST_CASE("mixed-mode transform inverts exactly and conserves power") {
    const auto grid = make_grid(1e9, 10e9, 1e9);
    ChannelSpec p = line_spec(30.0, grid);
    ChannelSpec n = line_spec(31.0, grid);  // asymmetric pair
    const Network four = uncoupled_pair(p, n);
    const MixedModeNetwork mm = to_mixed_mode(four);
    const Network back = from_mixed_mode(mm);

    double worst = 0.0, power_err = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        worst = std::max(worst,
                         (back.data[i] - four.data[i]).cwiseAbs().maxCoeff());
        Eigen::Matrix4cd smm;
        smm.block<2, 2>(0, 0) = mm.sdd[i];
        smm.block<2, 2>(0, 2) = mm.sdc[i];
        smm.block<2, 2>(2, 0) = mm.scd[i];
        smm.block<2, 2>(2, 2) = mm.scc[i];
        power_err = std::max(power_err, std::abs(smm.squaredNorm() -
                                                 four.data[i].squaredNorm()));
    }
    REQUIRE(worst < 1e-12);
    REQUIRE(power_err < 1e-12);
}

TEST_CASE("pairing validation") {
    Network net;
    net.ports = 4;
    net.grid = {1e9};
    net.data = {Eigen::MatrixXcd::Zero(4, 4)};
    REQUIRE_THROWS_AS(to_mixed_mode(net, PortPairing{{1, 1}, {2, 4}}), Error);
    REQUIRE_THROWS_AS(to_mixed_mode(net, PortPairing{{0, 3}, {2, 4}}), Error);

    Network two;
    two.ports = 2;
    two.grid = {1e9};
    two.data = {Eigen::MatrixXcd::Zero(2, 2)};
    REQUIRE_THROWS_AS(to_mixed_mode(two), Error);
}

TEST_CASE("swapped pairing moves the through path") {
    // P 1 mm longer than N: with pairing convention ((in_P,in_N),(out_P,out_N))
    // the SDC21 block must pick up the conversion
    const auto grid = make_grid(10e6, 20e9, 100e6);
    const Network four = uncoupled_pair(line_spec(26.4, grid), line_spec(25.4, grid));
    const MixedModeNetwork mm = to_mixed_mode(four);
    double peak = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i)
        peak = std::max(peak, std::abs(mm.scd[i](1, 0)));
    REQUIRE(peak > 0.1);  // a 1 mm mismatch converts strongly by 20 GHz
}

TEST_CASE("passivity report on synthesized and doctored data") {
    const auto grid = make_grid(10e6, 40e9, 500e6);
    ChannelSpec spec = line_spec(254.0, grid);
    auto& seg = std::get<LineSegment>(spec.elements[0]);
    seg.loss_tangent = 0.002;
    seg.k_c = 0.0037;
    const Network net = synthesize_channel(spec);
    REQUIRE(max_singular_value(net) <= 1.0 + 1e-9);
    REQUIRE(is_passive(net));

    Network active = net;
    active.data[5] *= 1.5;
    REQUIRE_FALSE(is_passive(active));
    REQUIRE(max_singular_value(active) > 1.2);
}

TEST_CASE("network validation catches shape mismatches") {
    Network net;
    net.ports = 2;
    net.grid = {1e9, 2e9};
    net.data = {Eigen::MatrixXcd::Zero(2, 2)};
    REQUIRE_THROWS_AS(validate_network(net), Error);
    net.data.push_back(Eigen::MatrixXcd::Zero(3, 3));
    REQUIRE_THROWS_AS(validate_network(net), Error);
}
