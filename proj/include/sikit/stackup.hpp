#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "sikit/error.hpp"
#include "sikit/units.hpp"

// Board stack-up geometry: layer table bookkeeping (thickness, depth), via
// span/stub lengths, delay per length, a closed-form stripline impedance
// estimate, and the comb/registration decoding used for layer-shift studies.

namespace sikit {

enum class LayerUsage { Traces, Plane, Soldermask };

struct DielectricSpec {
    std::string material;
    double thickness_mil = 0.0;
    double dk = 1.0;
};

// One stack-up row, top-down. A row is a copper station plus the dielectric
// between it and the next row; solder-mask rows carry zero copper and the mask
// film as their dielectric. Index is the printed copper-layer number (the top
// mask row uses 0, meaning "above layer 1").
struct Layer {
    int index = 0;
    LayerUsage usage = LayerUsage::Traces;
    double copper_thickness_mil = 0.0;
    std::optional<DielectricSpec> dielectric_below;
    std::string note;  // transcription ambiguities are recorded, not normalized away
};

struct Drill {
    std::string name;
    int start_layer = 1;
    int stop_layer = 1;
};

struct Stackup {
    std::vector<Layer> layers;  // top-down order
    std::vector<Drill> drills;
};

inline void validate_stackup(const Stackup& s) {
    int prev = -1;
    for (const auto& l : s.layers) {
        if (l.index < 0) throw Error("layer index must be >= 0");
        if (l.index <= prev) throw Error("layer indices must ascend top-down");
        prev = l.index;
        if (l.copper_thickness_mil < 0.0) throw Error("copper thickness must be >= 0");
        if (l.dielectric_below) {
            if (l.dielectric_below->thickness_mil < 0.0)
                throw Error("dielectric thickness must be >= 0");
            if (l.dielectric_below->dk < 1.0) throw Error("dielectric dk must be >= 1");
        }
    }
    auto has_layer = [&s](int idx) {
        return std::any_of(s.layers.begin(), s.layers.end(),
                           [idx](const Layer& l) { return l.index == idx; });
    };
    for (const auto& d : s.drills) {
        if (!has_layer(d.start_layer) || !has_layer(d.stop_layer))
            throw Error("drill '" + d.name + "' references a missing layer");
    }
}

inline double total_thickness_mil(const Stackup& s) {
    double sum = 0.0;
    for (const auto& l : s.layers) {
        sum += l.copper_thickness_mil;
        if (l.dielectric_below) sum += l.dielectric_below->thickness_mil;
    }
    return sum;
}

// Depth of a copper layer's midplane from the board top: everything above the
// layer, plus half its own foil.
inline double layer_depth_mil(const Stackup& s, int layer_index) {
    double depth = 0.0;
    for (const auto& l : s.layers) {
        if (l.index == layer_index) return depth + l.copper_thickness_mil / 2.0;
        depth += l.copper_thickness_mil;
        if (l.dielectric_below) depth += l.dielectric_below->thickness_mil;
    }
    throw Error("layer L" + std::to_string(layer_index) + " not in stackup");
}

struct ViaSpan {
    double barrel_length_mil = 0.0;  // drill start to signal exit
    double stub_length_mil = 0.0;    // signal exit to drill stop (the leftover)
};

inline const Drill& find_drill(const Stackup& s, const std::string& name) {
    for (const auto& d : s.drills)
        if (d.name == name) return d;
    throw Error("no drill named '" + name + "'");
}

inline ViaSpan via_span(const Stackup& s, const Drill& drill, int exit_layer) {
    validate_stackup(s);
    const double d_start = layer_depth_mil(s, drill.start_layer);
    const double d_stop = layer_depth_mil(s, drill.stop_layer);
    const double d_exit = layer_depth_mil(s, exit_layer);
    const double lo = std::min(d_start, d_stop), hi = std::max(d_start, d_stop);
    if (d_exit < lo - 1e-9 || d_exit > hi + 1e-9)
        throw Error("exit layer L" + std::to_string(exit_layer) +
                    " lies outside drill '" + drill.name + "'");
    return {std::abs(d_exit - d_start), std::abs(d_stop - d_exit)};
}

inline ViaSpan via_span(const Stackup& s, const std::string& drill_name, int exit_layer) {
    return via_span(s, find_drill(s, drill_name), exit_layer);
}

// ps per mm of trace at a given effective dielectric constant.
inline double delay_per_length_ps_mm(double dk_eff) {
    if (dk_eff < 1.0) throw Error("dk_eff must be >= 1");
    return std::sqrt(dk_eff) / c_mm_per_ps;
}

// Closed-form offset-stripline estimate (Cohn-style wide-strip form with an
// asymmetry correction):
//
//   z0 = (80/sqrt(dk)) ln(1.9 (2 h1 + t) / (0.8 w + t)) (1 - h1 / (4 h2))
//
// h1/h2 the nearer/farther plane spacing. Scale-invariant and monotone
// decreasing in width. Good to roughly +-10% for w/h1 <= 4; wider geometries
// are refused rather than silently extrapolated.
inline double stripline_z0_estimate(double width_mil, double h_above_mil,
                                    double h_below_mil, double t_copper_mil,
                                    double dk) {
    if (!(width_mil > 0.0) || !(h_above_mil > 0.0) || !(h_below_mil > 0.0) ||
        !(t_copper_mil > 0.0))
        throw Error("stripline geometry must be positive");
    if (dk < 1.0) throw Error("dk must be >= 1");
    const double h1 = std::min(h_above_mil, h_below_mil);
    const double h2 = std::max(h_above_mil, h_below_mil);
    if (width_mil / h1 > 4.0)
        throw Error("w/h > 4: outside this approximation's validity range");
    return 80.0 / std::sqrt(dk) *
           std::log(1.9 * (2.0 * h1 + t_copper_mil) / (0.8 * width_mil + t_copper_mil)) *
           (1.0 - h1 / (4.0 * h2));
}

// Comb test structure: parallel strips with as-designed incremental
// misalignment. The strip that lines up with the reference layer encodes the
// shift in units of the per-strip increment.
struct CombStructure {
    double increment_mil = 0.0;
    int strip_count = 0;
    enum class Axis { X, Y } axis = Axis::Y;
};

inline double comb_decode(const CombStructure& comb, int aligned_strip_index,
                          int reference_index) {
    if (!(comb.increment_mil > 0.0)) throw Error("comb increment must be positive");
    if (comb.strip_count < 3) throw Error("comb needs at least 3 strips");
    auto in_range = [&comb](int i) { return i >= 0 && i < comb.strip_count; };
    if (!in_range(aligned_strip_index) || !in_range(reference_index))
        throw Error("strip index outside the comb");
    return (aligned_strip_index - reference_index) * comb.increment_mil;
}

// Absolute registration offset from per-axis shifts, rounded to 0.1 mil the
// way the x-ray tables report it.
inline double registration_offset_mil(double x_mil, double y_mil) {
    return std::round(std::hypot(x_mil, y_mil) * 10.0) / 10.0;
}

} // namespace sikit
