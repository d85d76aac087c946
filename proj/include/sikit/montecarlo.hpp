#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "sikit/analysis.hpp"
#include "sikit/channel.hpp"
#include "sikit/error.hpp"
#include "sikit/grid.hpp"
#include "sikit/network.hpp"
#include "sikit/rng.hpp"
#include "sikit/units.hpp"

// Impedance-tolerance ensembles: families of uniform-impedance lines (a
// deterministic sweep across the tolerance band) and randomly segmented lines
// (independent impedance and length per segment), with per-frequency IL/RL
// envelope statistics.

namespace sikit {

struct MonteCarloConfig {
    int n_cases = 31;
    double total_length_mm = 10.0 * mm_per_inch;
    int n_segments = 10;
    double z_min = 45.0;
    double z_max = 55.0;
    std::uint64_t seed = 1;
    LineSegment base;        // loss parameters and dk_eff template; base.z0 is
                             // the design-center impedance the loss scaling
                             // references
    double z_ref = 50.0;
    FrequencyGrid grid = default_grid();
};

inline void validate_mc_config(const MonteCarloConfig& cfg) {
    if (cfg.n_cases < 1) throw Error("n_cases must be >= 1");
    if (cfg.n_segments < 1) throw Error("n_segments must be >= 1");
    if (!(cfg.z_min > 0.0) || cfg.z_max < cfg.z_min)
        throw Error("impedance range requires 0 < z_min <= z_max");
    if (!(cfg.total_length_mm > 0.0)) throw Error("total length must be positive");
    validate_grid(cfg.grid);
    validate_segment(cfg.base);
}

struct EnvelopeStats {
    FrequencyGrid grid;
    std::vector<double> il_min, il_max, il_mean, il_std;
    std::vector<double> rl_min, rl_max, rl_mean, rl_std;
};

struct EnsembleResult {
    std::vector<Network> cases;
    EnvelopeStats envelope;
};

namespace detail {

// First-order width/impedance coupling for conductor loss: a higher-impedance
// stripline is narrower, so its per-mm resistance (and k_c) grows roughly in
// proportion. Without this, every case would share one conductor-loss curve
// and the tolerance study would say nothing about insertion loss.
inline double scaled_k_c(const LineSegment& base, double z0) {
    return base.z0 > 0.0 ? base.k_c * (z0 / base.z0) : base.k_c;
}

inline LineSegment segment_at(const MonteCarloConfig& cfg, double z0, double length_mm) {
    LineSegment s = cfg.base;
    s.z0 = z0;
    s.length_mm = length_mm;
    s.k_c = scaled_k_c(cfg.base, z0);
    return s;
}

} // namespace detail

// Per-frequency min/max/mean/sample-stddev of IL and RL over the ensemble.
inline EnvelopeStats summarize(const std::vector<Network>& cases) {
    if (cases.empty()) throw Error("cannot summarize an empty ensemble");
    const std::size_t nf = cases.front().size();
    for (const auto& c : cases)
        if (c.size() != nf) throw Error("ensemble cases disagree on grid length");

    EnvelopeStats env;
    env.grid = cases.front().grid;
    auto init = [nf](std::vector<double>& v, double x) { v.assign(nf, x); };
    init(env.il_min, 0); init(env.il_max, 0); init(env.il_mean, 0); init(env.il_std, 0);
    init(env.rl_min, 0); init(env.rl_max, 0); init(env.rl_mean, 0); init(env.rl_std, 0);

    // Welford accumulation per frequency, one pass over cases.
    std::vector<double> il_m(nf, 0), il_s(nf, 0), rl_m(nf, 0), rl_s(nf, 0);
    std::size_t count = 0;
    for (const auto& c : cases) {
        const Trace il = insertion_loss(c);
        const Trace rl = return_loss(c);
        ++count;
        for (std::size_t i = 0; i < nf; ++i) {
            for (auto [val, mn, mx, m, s] :
                 {std::tuple{il.values[i], &env.il_min[i], &env.il_max[i], &il_m[i], &il_s[i]},
                  std::tuple{rl.values[i], &env.rl_min[i], &env.rl_max[i], &rl_m[i], &rl_s[i]}}) {
                if (count == 1) { *mn = *mx = val; }
                else { *mn = std::min(*mn, val); *mx = std::max(*mx, val); }
                const double d = val - *m;
                *m += d / static_cast<double>(count);
                *s += d * (val - *m);
            }
        }
    }
    for (std::size_t i = 0; i < nf; ++i) {
        env.il_mean[i] = il_m[i];
        env.rl_mean[i] = rl_m[i];
        const double denom = count > 1 ? static_cast<double>(count - 1) : 1.0;
        env.il_std[i] = count > 1 ? std::sqrt(il_s[i] / denom) : 0.0;
        env.rl_std[i] = count > 1 ? std::sqrt(rl_s[i] / denom) : 0.0;
    }
    return env;
}

// Deterministic tolerance sweep: n_cases single-segment full-length lines with
// impedance evenly spaced across [z_min, z_max] (midpoint when n_cases = 1).
inline EnsembleResult run_uniform_sweep(const MonteCarloConfig& cfg) {
    validate_mc_config(cfg);
    EnsembleResult res;
    res.cases.reserve(cfg.n_cases);
    for (int i = 0; i < cfg.n_cases; ++i) {
        const double t = cfg.n_cases == 1
                             ? 0.5
                             : static_cast<double>(i) / static_cast<double>(cfg.n_cases - 1);
        const double z0 = cfg.z_min + t * (cfg.z_max - cfg.z_min);
        ChannelSpec spec;
        spec.z_ref = cfg.z_ref;
        spec.grid = cfg.grid;
        spec.elements.push_back(detail::segment_at(cfg, z0, cfg.total_length_mm));
        res.cases.push_back(synthesize_channel(spec));
    }
    res.envelope = summarize(res.cases);
    return res;
}

// Randomly segmented ensemble. Case i uses substream (seed, i) and draws the
// n_segments impedances first, then the n_segments raw lengths; raw lengths
// are normalized to sum to total_length. Cases are therefore independent of
// evaluation order and safe to compute in parallel.
inline EnsembleResult run_segmented(const MonteCarloConfig& cfg) {
    validate_mc_config(cfg);
    EnsembleResult res;
    res.cases.reserve(cfg.n_cases);
    if (cfg.z_min == cfg.z_max) {
        // Zero-width band: every draw is the same uniform line. Splitting it
        // into random-length segments of equal impedance only spreads rounding
        // around, so synthesize once and let the collapse be exact.
        ChannelSpec spec;
        spec.z_ref = cfg.z_ref;
        spec.grid = cfg.grid;
        spec.elements.push_back(detail::segment_at(cfg, cfg.z_min, cfg.total_length_mm));
        res.cases.assign(static_cast<std::size_t>(cfg.n_cases), synthesize_channel(spec));
        res.envelope = summarize(res.cases);
        return res;
    }
    for (int i = 0; i < cfg.n_cases; ++i) {
        Rng rng = Rng::substream(cfg.seed, static_cast<std::uint64_t>(i));
        std::vector<double> zs(cfg.n_segments), raw(cfg.n_segments);
        for (auto& z : zs) z = rng.uniform(cfg.z_min, cfg.z_max);
        double raw_sum = 0.0;
        for (auto& r : raw) { r = rng.next_double(); raw_sum += r; }
        if (raw_sum == 0.0) raw_sum = 1.0;  // all-zero draw is astronomically unlikely

        ChannelSpec spec;
        spec.z_ref = cfg.z_ref;
        spec.grid = cfg.grid;
        for (int k = 0; k < cfg.n_segments; ++k)
            spec.elements.push_back(detail::segment_at(
                cfg, zs[static_cast<std::size_t>(k)],
                raw[static_cast<std::size_t>(k)] / raw_sum * cfg.total_length_mm));
        res.cases.push_back(synthesize_channel(spec));
    }
    res.envelope = summarize(res.cases);
    return res;
}

} // namespace sikit
