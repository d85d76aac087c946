#pragma once

#include <Eigen/Dense>
#include <array>
#include <complex>
#include <cstddef>
#include <utility>
#include <vector>

#include "sikit/error.hpp"
#include "sikit/network.hpp"

namespace sikit {

// Port pairing for a 4-port single-ended measurement of one differential
// channel: ((in_P, in_N), (out_P, out_N)), 1-based single-ended port numbers.
// Default matches the common VNA convention of 1->2 and 3->4 through paths.
struct PortPairing {
    std::pair<int, int> in{1, 3};
    std::pair<int, int> out{2, 4};
};

// Four 2x2 mixed-mode blocks per frequency. Index 1 = input pair, 2 = output
// pair; e.g. sdd[fi](0,1) is SDD12.
struct MixedModeNetwork {
    FrequencyGrid grid;
    std::vector<Eigen::Matrix2cd> sdd, sdc, scd, scc;
    PortPairing pairing;
    double z_ref_se = 50.0;  // single-ended reference the blocks derive from
};

namespace detail {

// Orthonormal change of basis: rows are d1, d2, c1, c2 over the single-ended
// ports. Orthogonality makes the inverse a plain transpose.
inline Eigen::Matrix4d mixed_mode_basis(const PortPairing& p) {
    auto check = [](int port) {
        if (port < 1 || port > 4) throw Error("pairing ports must be in 1..4");
    };
    check(p.in.first); check(p.in.second); check(p.out.first); check(p.out.second);
    const std::array<int, 4> all{p.in.first, p.in.second, p.out.first, p.out.second};
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = i + 1; j < 4; ++j)
            if (all[i] == all[j]) throw Error("pairing must use four distinct ports");

    const double r = 1.0 / std::sqrt(2.0);
    Eigen::Matrix4d m = Eigen::Matrix4d::Zero();
    m(0, p.in.first - 1) = r;  m(0, p.in.second - 1) = -r;   // d1
    m(1, p.out.first - 1) = r; m(1, p.out.second - 1) = -r;  // d2
    m(2, p.in.first - 1) = r;  m(2, p.in.second - 1) = r;    // c1
    m(3, p.out.first - 1) = r; m(3, p.out.second - 1) = r;   // c2
    return m;
}

} // namespace detail

inline MixedModeNetwork to_mixed_mode(const Network& net, const PortPairing& pairing = {}) {
    validate_network(net);
    if (net.ports != 4) throw Error("mixed-mode conversion needs a 4-port network");

    const Eigen::Matrix4d m = detail::mixed_mode_basis(pairing);

    MixedModeNetwork mm;
    mm.grid = net.grid;
    mm.pairing = pairing;
    mm.z_ref_se = net.z_ref;
    mm.sdd.reserve(net.size()); mm.sdc.reserve(net.size());
    mm.scd.reserve(net.size()); mm.scc.reserve(net.size());

    for (const auto& s : net.data) {
        const Eigen::Matrix4cd smm = m * s * m.transpose();
        mm.sdd.push_back(smm.block<2, 2>(0, 0));
        mm.sdc.push_back(smm.block<2, 2>(0, 2));
        mm.scd.push_back(smm.block<2, 2>(2, 0));
        mm.scc.push_back(smm.block<2, 2>(2, 2));
    }
    return mm;
}

inline Network from_mixed_mode(const MixedModeNetwork& mm) {
    const Eigen::Matrix4d m = detail::mixed_mode_basis(mm.pairing);

    Network net;
    net.ports = 4;
    net.grid = mm.grid;
    net.z_ref = mm.z_ref_se;
    net.data.reserve(mm.grid.size());
    for (std::size_t fi = 0; fi < mm.grid.size(); ++fi) {
        Eigen::Matrix4cd smm;
        smm.block<2, 2>(0, 0) = mm.sdd[fi];
        smm.block<2, 2>(0, 2) = mm.sdc[fi];
        smm.block<2, 2>(2, 0) = mm.scd[fi];
        smm.block<2, 2>(2, 2) = mm.scc[fi];
        net.data.push_back(m.transpose() * smm * m);
    }
    return net;
}

// The differential-differential block viewed as a stand-alone 2-port network.
// Differential reference is twice the single-ended one (100 ohm for 50).
inline Network sdd_as_network(const MixedModeNetwork& mm) {
    Network net;
    net.ports = 2;
    net.grid = mm.grid;
    net.z_ref = 2.0 * mm.z_ref_se;
    net.data.reserve(mm.grid.size());
    for (const auto& blk : mm.sdd) net.data.push_back(Eigen::MatrixXcd(blk));
    return net;
}

} // namespace sikit
