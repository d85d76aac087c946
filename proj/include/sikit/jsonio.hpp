#pragma once

#include <json.hpp>

#include <optional>
#include <string>

#include "sikit/analysis.hpp"
#include "sikit/channel.hpp"
#include "sikit/error.hpp"
#include "sikit/grid.hpp"
#include "sikit/montecarlo.hpp"
#include "sikit/skewstat.hpp"
#include "sikit/stackup.hpp"
#include "sikit/units.hpp"

// JSON bindings for the document types that cross the CLI boundary. Numeric
// fields carry unit suffixes (_mm, _mil, _ohm, _ff, _ph, _hz, _bps); length
// fields accept either the _mm or the _mil spelling. Schema errors surface as
// UsageError with the offending JSON path.

namespace sikit {

using json = nlohmann::json;

namespace jsondetail {

inline UsageError schema_error(const std::string& path, const std::string& what) {
    return UsageError("at " + path + ": " + what);
}

inline double number_at(const json& j, const std::string& key, const std::string& path) {
    if (!j.contains(key)) throw schema_error(path, "missing required field '" + key + "'");
    if (!j[key].is_number()) throw schema_error(path + "." + key, "expected a number");
    return j[key].get<double>();
}

inline double number_or(const json& j, const std::string& key, double fallback,
                        const std::string& path) {
    if (!j.contains(key)) return fallback;
    if (!j[key].is_number()) throw schema_error(path + "." + key, "expected a number");
    return j[key].get<double>();
}

// Length in mm from `<stem>_mm`, `<stem>_mil`, or `<stem>_inch` (exactly one).
inline std::optional<double> length_mm_opt(const json& j, const std::string& stem,
                                           const std::string& path) {
    const std::string k_mm = stem + "_mm", k_mil = stem + "_mil", k_in = stem + "_inch";
    int present = j.contains(k_mm) + j.contains(k_mil) + j.contains(k_in);
    if (present == 0) return std::nullopt;
    if (present > 1)
        throw schema_error(path, "give '" + stem + "' in exactly one unit");
    if (j.contains(k_mm)) return number_at(j, k_mm, path);
    if (j.contains(k_mil)) return mil_to_mm(number_at(j, k_mil, path));
    return inch_to_mm(number_at(j, k_in, path));
}

inline double length_mm(const json& j, const std::string& stem, const std::string& path) {
    auto v = length_mm_opt(j, stem, path);
    if (!v) throw schema_error(path, "missing length field '" + stem + "_mm' (or _mil/_inch)");
    return *v;
}

} // namespace jsondetail

inline FrequencyGrid grid_from_json(const json& j, const std::string& path = "$.grid") {
    using namespace jsondetail;
    if (j.contains("points_hz")) {
        if (!j["points_hz"].is_array()) throw schema_error(path + ".points_hz", "expected an array");
        FrequencyGrid g;
        for (const auto& v : j["points_hz"]) {
            if (!v.is_number()) throw schema_error(path + ".points_hz", "expected numbers");
            g.push_back(v.get<double>());
        }
        validate_grid(g);
        return g;
    }
    return make_grid(number_at(j, "fmin_hz", path), number_at(j, "fmax_hz", path),
                     number_at(j, "step_hz", path));
}

inline LineSegment line_from_json(const json& j, const std::string& path) {
    using namespace jsondetail;
    LineSegment s;
    s.length_mm = length_mm_opt(j, "length", path).value_or(0.0);
    s.z0 = number_or(j, "z0_ohm", 50.0, path);
    s.dk_eff = number_or(j, "dk_eff", 3.13, path);
    s.loss_tangent = number_or(j, "loss_tangent", 0.0, path);
    s.k_c = number_or(j, "k_c_db_mm_sqrtghz", 0.0, path);
    validate_segment(s);
    return s;
}

inline ChannelElement element_from_json(const json& j, const std::string& path) {
    using namespace jsondetail;
    if (!j.is_object()) throw schema_error(path, "element must be an object");
    if (!j.contains("kind") || !j["kind"].is_string())
        throw schema_error(path, "element needs a string 'kind'");
    const std::string kind = j["kind"].get<std::string>();
    if (kind == "line") return line_from_json(j, path);
    if (kind == "via") {
        ViaElement v;
        v.barrel_length_mm = length_mm_opt(j, "barrel_length", path).value_or(0.0);
        v.stub_length_mm = length_mm_opt(j, "stub_length", path).value_or(0.0);
        v.barrel_z0 = number_or(j, "barrel_z0_ohm", 50.0, path);
        v.stub_z0 = number_or(j, "stub_z0_ohm", v.barrel_z0, path);
        v.dk_z = number_or(j, "dk_z", 3.5, path);
        v.loss_tangent = number_or(j, "loss_tangent", 0.0, path);
        v.excess_shunt_c_ff = number_or(j, "excess_shunt_c_ff", 0.0, path);
        v.pad_shunt_c_ff = number_or(j, "pad_shunt_c_ff", 0.0, path);
        return v;
    }
    if (kind == "shunt_c")
        return LumpedElement{LumpedElement::Kind::ShuntC, number_at(j, "value_ff", path)};
    if (kind == "series_l")
        return LumpedElement{LumpedElement::Kind::SeriesL, number_at(j, "value_ph", path)};
    throw schema_error(path + ".kind", "unknown element kind '" + kind + "'");
}

inline ChannelSpec channelspec_from_json(const json& j) {
    using namespace jsondetail;
    if (!j.is_object()) throw schema_error("$", "channel spec must be an object");
    ChannelSpec spec;
    spec.z_ref = number_or(j, "z_ref_ohm", 50.0, "$");
    if (j.contains("grid")) spec.grid = grid_from_json(j["grid"]);
    if (!j.contains("elements") || !j["elements"].is_array() || j["elements"].empty())
        throw schema_error("$.elements", "need a non-empty element array");
    for (std::size_t i = 0; i < j["elements"].size(); ++i)
        spec.elements.push_back(element_from_json(
            j["elements"][i], "$.elements[" + std::to_string(i) + "]"));
    return spec;
}

inline MonteCarloConfig mcconfig_from_json(const json& j) {
    using namespace jsondetail;
    if (!j.is_object()) throw schema_error("$", "config must be an object");
    MonteCarloConfig cfg;
    cfg.n_cases = static_cast<int>(number_or(j, "n_cases", 31, "$"));
    cfg.n_segments = static_cast<int>(number_or(j, "n_segments", 10, "$"));
    if (auto l = length_mm_opt(j, "total_length", "$")) cfg.total_length_mm = *l;
    cfg.z_min = number_or(j, "z_min_ohm", 45.0, "$");
    cfg.z_max = number_or(j, "z_max_ohm", 55.0, "$");
    cfg.z_ref = number_or(j, "z_ref_ohm", 50.0, "$");
    if (j.contains("seed")) {
        if (!j["seed"].is_number_integer() && !j["seed"].is_number_unsigned())
            throw schema_error("$.seed", "seed must be an integer");
        cfg.seed = j["seed"].get<std::uint64_t>();
    }
    if (j.contains("grid")) cfg.grid = grid_from_json(j["grid"]);
    if (j.contains("base")) cfg.base = line_from_json(j["base"], "$.base");
    else {
        cfg.base.z0 = 50.0;
        cfg.base.dk_eff = 3.13;
    }
    validate_mc_config(cfg);
    return cfg;
}

inline WeaveModel weave_from_json(const json& j) {
    using namespace jsondetail;
    if (!j.is_object()) throw schema_error("$", "weave model must be an object");
    WeaveModel m;
    m.pitch_mm = number_or(j, "pitch_mm", m.pitch_mm, "$");
    m.dk_high = number_or(j, "dk_high", m.dk_high, "$");
    m.dk_low = number_or(j, "dk_low", m.dk_low, "$");
    m.duty = number_or(j, "duty", m.duty, "$");
    m.rotation_deg = number_or(j, "rotation_deg", m.rotation_deg, "$");
    if (auto l = length_mm_opt(j, "line_length", "$")) m.line_length_mm = *l;
    if (auto l = length_mm_opt(j, "pair_pitch", "$")) m.pair_pitch_mm = *l;
    validate_weave(m);
    return m;
}

inline SkewBudget budget_from_json(const json& j) {
    using namespace jsondetail;
    if (!j.is_object()) throw schema_error("$", "budget must be an object");
    SkewBudget b;
    b.bitrate = number_or(j, "bitrate_bps", b.bitrate, "$");
    b.budget_fraction = number_or(j, "budget_fraction", b.budget_fraction, "$");
    if (j.contains("contributors")) {
        if (!j["contributors"].is_array())
            throw schema_error("$.contributors", "expected an array");
        for (std::size_t i = 0; i < j["contributors"].size(); ++i) {
            const auto& cj = j["contributors"][i];
            const std::string path = "$.contributors[" + std::to_string(i) + "]";
            SkewContributor c;
            if (!cj.contains("name") || !cj["name"].is_string())
                throw schema_error(path, "contributor needs a string 'name'");
            c.name = cj["name"].get<std::string>();
            c.ps = number_at(cj, "ps", path);
            const std::string comb =
                cj.contains("combine") ? cj["combine"].get<std::string>() : "linear";
            if (comb == "linear") c.combine = SkewContributor::Combine::Linear;
            else if (comb == "rss") c.combine = SkewContributor::Combine::Rss;
            else throw schema_error(path + ".combine", "must be 'linear' or 'rss'");
            b.contributors.push_back(std::move(c));
        }
    }
    return b;
}

// Masks: either a bare array of [freq_hz, limit_db] pairs or an object with
// "points" (same array) and an optional "scale".
inline MaskSpec mask_from_json(const json& j) {
    using namespace jsondetail;
    MaskSpec m;
    const json* pts = nullptr;
    if (j.is_array()) pts = &j;
    else if (j.is_object() && j.contains("points")) {
        pts = &j["points"];
        m.scale = number_or(j, "scale", 1.0, "$");
    } else throw schema_error("$", "mask must be an array of [freq_hz, limit_db] pairs");
    for (const auto& p : *pts) {
        if (!p.is_array() || p.size() != 2 || !p[0].is_number() || !p[1].is_number())
            throw schema_error("$", "mask points must be [freq_hz, limit_db] pairs");
        m.points.emplace_back(p[0].get<double>(), p[1].get<double>());
    }
    validate_mask(m);
    return m;
}

inline Stackup stackup_from_json(const json& j) {
    using namespace jsondetail;
    if (!j.is_object() || !j.contains("layers") || !j["layers"].is_array())
        throw schema_error("$", "stackup needs a 'layers' array");
    Stackup s;
    for (std::size_t i = 0; i < j["layers"].size(); ++i) {
        const auto& lj = j["layers"][i];
        const std::string path = "$.layers[" + std::to_string(i) + "]";
        Layer l;
        l.index = static_cast<int>(number_at(lj, "index", path));
        const std::string usage =
            lj.contains("usage") ? lj["usage"].get<std::string>() : "traces";
        if (usage == "traces") l.usage = LayerUsage::Traces;
        else if (usage == "plane") l.usage = LayerUsage::Plane;
        else if (usage == "soldermask") l.usage = LayerUsage::Soldermask;
        else throw schema_error(path + ".usage", "unknown usage '" + usage + "'");
        l.copper_thickness_mil = number_or(lj, "copper_thickness_mil", 0.0, path);
        if (lj.contains("dielectric_below")) {
            const auto& dj = lj["dielectric_below"];
            DielectricSpec d;
            d.material = dj.contains("material") ? dj["material"].get<std::string>() : "";
            d.thickness_mil = number_at(dj, "thickness_mil", path + ".dielectric_below");
            d.dk = number_or(dj, "dk", 1.0, path + ".dielectric_below");
            l.dielectric_below = d;
        }
        if (lj.contains("note")) l.note = lj["note"].get<std::string>();
        s.layers.push_back(std::move(l));
    }
    if (j.contains("drills")) {
        for (std::size_t i = 0; i < j["drills"].size(); ++i) {
            const auto& dj = j["drills"][i];
            const std::string path = "$.drills[" + std::to_string(i) + "]";
            Drill d;
            if (!dj.contains("name") || !dj["name"].is_string())
                throw schema_error(path, "drill needs a string 'name'");
            d.name = dj["name"].get<std::string>();
            d.start_layer = static_cast<int>(number_at(dj, "start_layer", path));
            d.stop_layer = static_cast<int>(number_at(dj, "stop_layer", path));
            s.drills.push_back(std::move(d));
        }
    }
    validate_stackup(s);
    return s;
}

// --- report serialization ---

inline json to_json(const ComplianceReport& r) {
    json j;
    j["pass"] = r.pass;
    if (r.first_violation_freq) j["first_violation_freq_hz"] = *r.first_violation_freq;
    else j["first_violation_freq_hz"] = nullptr;
    j["worst_margin_db"] = r.worst_margin;
    j["full_coverage"] = r.full_coverage;
    j["covered_from_hz"] = r.covered_from_hz;
    j["covered_to_hz"] = r.covered_to_hz;
    return j;
}

inline json to_json(const BudgetReport& r) {
    return json{{"ui_ps", r.ui_ps},
                {"budget_ps", r.budget_ps},
                {"total_ps", r.total_ps},
                {"margin_ps", r.margin_ps},
                {"pass", r.pass}};
}

} // namespace sikit
