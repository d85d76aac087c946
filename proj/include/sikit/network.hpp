#pragma once

#include <Eigen/Dense>
#include <Eigen/SVD>
#include <complex>
#include <cstddef>
#include <utility>
#include <vector>

#include "sikit/error.hpp"
#include "sikit/grid.hpp"

namespace sikit {

// Tabulated N-port S-parameters over a frequency grid, linear complex values,
// with the reference impedance they were normalized to.
struct Network {
    int ports = 0;
    FrequencyGrid grid;
    std::vector<Eigen::MatrixXcd> data;  // one ports x ports matrix per grid point
    double z_ref = 50.0;

    std::size_t size() const { return grid.size(); }
    const std::complex<double>& s(std::size_t fi, int row, int col) const {
        return data[fi](row - 1, col - 1);  // 1-based port indexing, as on paper
    }
};

inline void validate_network(const Network& net) {
    if (net.ports < 1) throw Error("network needs at least one port");
    validate_grid(net.grid);
    if (net.data.size() != net.grid.size())
        throw Error("network data length does not match grid length");
    for (const auto& m : net.data)
        if (m.rows() != net.ports || m.cols() != net.ports)
            throw Error("network matrix dimensions do not match port count");
    if (!(net.z_ref > 0.0)) throw Error("reference impedance must be positive");
}

// Linear interpolation of Re and Im independently onto a new grid.
// Interpolating mag/phase instead would need phase unwrapping; Re/Im does not.
inline Network resample(const Network& net, const FrequencyGrid& target) {
    validate_network(net);
    validate_grid(target);
    if (target.front() < net.grid.front() || target.back() > net.grid.back())
        throw Error("resample target extends outside the source band; refusing to extrapolate");

    Network out;
    out.ports = net.ports;
    out.grid = target;
    out.z_ref = net.z_ref;
    out.data.reserve(target.size());

    std::size_t lo = 0;
    for (double f : target) {
        while (lo + 2 < net.grid.size() && net.grid[lo + 1] <= f) ++lo;
        const double f0 = net.grid[lo], f1 = net.grid[lo + 1 < net.grid.size() ? lo + 1 : lo];
        if (net.grid.size() == 1 || f1 == f0) {
            out.data.push_back(net.data[lo]);
            continue;
        }
        const double t = (f - f0) / (f1 - f0);
        out.data.push_back((1.0 - t) * net.data[lo] + t * net.data[lo + 1]);
    }
    return out;
}

// Largest singular value across the band: <= 1 means passive at every
// frequency. Reported, never "fixed"; measured data keeps its warts.
inline double max_singular_value(const Network& net) {
    double worst = 0.0;
    for (const auto& m : net.data) {
        Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
        worst = std::max(worst, svd.singularValues()(0));
    }
    return worst;
}

inline bool is_passive(const Network& net, double tol = 1e-6) {
    return max_singular_value(net) <= 1.0 + tol;
}

} // namespace sikit
