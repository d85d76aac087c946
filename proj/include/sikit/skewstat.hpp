#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "sikit/error.hpp"
#include "sikit/rng.hpp"
#include "sikit/units.hpp"

// Fiber-weave skew statistics and the channel skew budget.
//
// The weave model: local Dk alternates between two levels with period `pitch`
// (glass bundle vs resin window), a trace crosses that profile at the artwork
// rotation angle, and the P and N lines of a pair sample it at laterally
// offset start positions. Line delay is the exact integral
//
//   tau = (1/c) * integral_0^L sqrt(dk(x0 + s sin(theta))) ds
//
// which closed-forms through the running integral of sqrt(dk) over the
// two-level profile; no numerical quadrature involved.
//
// Default constants are CALIBRATED, not measured material truth: pitch, the
// Dk contrast, and the effective pair offset were fit so that the ensemble
// sigma at 0 and 10 degrees lands on the measured-board ranges this model is
// meant to reproduce. See data/weave_default.json and the README.

namespace sikit {

struct WeaveModel {
    double pitch_mm = 32.0;
    double dk_high = 3.06;
    double dk_low = 3.00;
    double duty = 0.5;            // fraction of the pitch at dk_high
    double rotation_deg = 10.0;   // artwork angle from the weave axis
    double line_length_mm = 4.2 * mm_per_inch;
    double pair_pitch_mm = 1.0;   // effective lateral P-to-N offset
};

inline void validate_weave(const WeaveModel& m) {
    if (!(m.pitch_mm > 0.0)) throw Error("weave pitch must be positive");
    if (m.dk_low < 1.0 || m.dk_high < m.dk_low)
        throw Error("weave requires dk_high >= dk_low >= 1");
    if (m.duty < 0.0 || m.duty > 1.0) throw Error("duty must be in [0,1]");
    if (m.rotation_deg < 0.0 || m.rotation_deg >= 90.0)
        throw Error("rotation must be in [0,90) degrees");
    if (!(m.line_length_mm > 0.0)) throw Error("line length must be positive");
    if (m.pair_pitch_mm < 0.0) throw Error("pair pitch must be >= 0");
}

namespace detail {

// Running integral of sqrt(dk) over the two-level periodic profile.
inline double weave_g(double x, const WeaveModel& m) {
    const double sh = std::sqrt(m.dk_high);
    const double sl = std::sqrt(m.dk_low);
    const double p = m.pitch_mm;
    const double dp = m.duty * p;
    const double per_period = dp * sh + (p - dp) * sl;
    const double n = std::floor(x / p);
    const double r = x - n * p;
    const double partial = r < dp ? r * sh : dp * sh + (r - dp) * sl;
    return n * per_period + partial;
}

inline double line_delay_ps(double x0, const WeaveModel& m) {
    const double th = m.rotation_deg * pi / 180.0;
    if (th == 0.0) {
        // the trace never leaves its lateral position
        const double r = x0 - std::floor(x0 / m.pitch_mm) * m.pitch_mm;
        const double dk = r < m.duty * m.pitch_mm ? m.dk_high : m.dk_low;
        return m.line_length_mm * std::sqrt(dk) / c_mm_per_ps;
    }
    const double s = std::sin(th);
    const double span = m.line_length_mm * s;
    return (weave_g(x0 + span, m) - weave_g(x0, m)) / (c_mm_per_ps * s);
}

} // namespace detail

// One P/N pair skew draw: lateral start uniform over a pitch, N offset by the
// pair pitch. Sample `index` of a seeded run uses substream (seed, index), so
// ensembles are order-independent and any single sample can be reproduced.
inline double fws_sample(const WeaveModel& model, std::uint64_t seed,
                         std::uint64_t index = 0) {
    validate_weave(model);
    Rng rng = Rng::substream(seed, index);
    const double x0 = rng.uniform(0.0, model.pitch_mm);
    const double tau_p = detail::line_delay_ps(x0, model);
    const double tau_n = detail::line_delay_ps(x0 + model.pair_pitch_mm, model);
    return tau_p - tau_n;
}

struct FwsEnsemble {
    std::vector<double> samples_ps;
    double mean_ps = 0.0;
    double sigma_ps = 0.0;  // sample standard deviation
};

inline FwsEnsemble fws_ensemble(const WeaveModel& model, int n, std::uint64_t seed) {
    validate_weave(model);
    if (n < 2) throw Error("ensemble needs n >= 2");
    FwsEnsemble out;
    out.samples_ps.reserve(static_cast<std::size_t>(n));
    double mean = 0.0, m2 = 0.0;
    for (int i = 0; i < n; ++i) {
        const double sk = fws_sample(model, seed, static_cast<std::uint64_t>(i));
        out.samples_ps.push_back(sk);
        const double d = sk - mean;
        mean += d / static_cast<double>(i + 1);
        m2 += d * (sk - mean);
    }
    out.mean_ps = mean;
    out.sigma_ps = std::sqrt(m2 / static_cast<double>(n - 1));
    return out;
}

// --- skew budget ---

inline double ui_ps(double bitrate) {
    if (!(bitrate > 0.0)) throw Error("bitrate must be positive");
    return 1e12 / bitrate;
}

inline double budget_ps(double bitrate, double fraction) {
    if (!(fraction > 0.0) || fraction > 1.0)
        throw Error("budget fraction must be in (0,1]");
    return fraction * ui_ps(bitrate);
}

struct SkewContributor {
    std::string name;
    double ps = 0.0;
    enum class Combine { Linear, Rss } combine = Combine::Linear;
};

struct SkewBudget {
    double bitrate = 56e9;
    double budget_fraction = 0.2;
    std::vector<SkewContributor> contributors;
};

struct BudgetReport {
    double ui_ps = 0.0;
    double budget_ps = 0.0;
    double total_ps = 0.0;   // linear sum + rss of the rss group
    double margin_ps = 0.0;  // budget - total
    bool pass = false;
};

inline BudgetReport budget_report(const SkewBudget& b) {
    for (const auto& c : b.contributors)
        if (c.ps < 0.0) throw Error("contributor '" + c.name + "' is negative");
    BudgetReport rep;
    rep.ui_ps = ui_ps(b.bitrate);
    rep.budget_ps = budget_ps(b.bitrate, b.budget_fraction);
    double linear = 0.0, rss_sq = 0.0;
    for (const auto& c : b.contributors) {
        if (c.combine == SkewContributor::Combine::Linear) linear += c.ps;
        else rss_sq += c.ps * c.ps;
    }
    rep.total_ps = linear + std::sqrt(rss_sq);
    rep.margin_ps = rep.budget_ps - rep.total_ps;
    rep.pass = rep.total_ps <= rep.budget_ps;
    return rep;
}

// Collapse a published min..max 1-sigma range into a single 3-sigma number by
// taking the midpoint as the typical sigma.
inline double three_sigma_from_range(double lo_ps, double hi_ps) {
    if (lo_ps < 0.0 || hi_ps < lo_ps)
        throw Error("range requires 0 <= lo <= hi");
    return 3.0 * (lo_ps + hi_ps) / 2.0;
}

} // namespace sikit
