#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "sikit/error.hpp"

namespace sikit {

// Frequency grid in Hz: strictly ascending, all positive and finite.
// A plain vector with a validation gate; every Network carries one.
using FrequencyGrid = std::vector<double>;

inline void validate_grid(const FrequencyGrid& g) {
    if (g.empty()) throw Error("frequency grid is empty");
    double prev = 0.0;
    for (double f : g) {
        if (!std::isfinite(f)) throw Error("frequency grid contains a non-finite value");
        if (f <= prev) throw Error("frequency grid must be strictly ascending and positive");
        prev = f;
    }
}

// Inclusive-of-endpoint arithmetic grid: fmin, fmin+step, ..., up to fmax
// (last point included when it lands within half a step).
inline FrequencyGrid make_grid(double fmin, double fmax, double step) {
    if (!(fmin > 0.0) || !(fmax > fmin) || !(step > 0.0))
        throw Error("grid requires 0 < fmin < fmax and step > 0");
    FrequencyGrid g;
    const auto n = static_cast<std::size_t>(std::floor((fmax - fmin) / step + 0.5)) + 1;
    g.reserve(n);
    for (std::size_t k = 0; k < n; ++k) {
        double f = fmin + static_cast<double>(k) * step;
        if (f > fmax * (1.0 + 1e-12)) break;
        g.push_back(f);
    }
    validate_grid(g);
    return g;
}

// Measurement band default: 10 MHz to 40 GHz in 10 MHz steps.
inline FrequencyGrid default_grid() {
    return make_grid(10e6, 40e9, 10e6);
}

} // namespace sikit
