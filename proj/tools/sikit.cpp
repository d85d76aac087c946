// sikit: command-line front end for the signal-integrity toolkit.
//
// Subcommands: analyze, synth, mc, stackup, fws, budget, convert.
// Exit codes: 0 success, 1 domain error, 2 malformed input or bad flags.
// All file writes are atomic (temp + rename) and deterministic, so re-running
// a command with the same inputs overwrites byte-identical outputs.
//
// The default output directory is --out, then $SIKIT_OUT, then ".".

#include <CLI11.hpp>

#include <cctype>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "sikit/sikit.hpp"

namespace fs = std::filesystem;
using namespace sikit;

namespace {

std::string read_file(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) throw UsageError("cannot open '" + p.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

json read_json(const fs::path& p) {
    try {
        return json::parse(read_file(p));
    } catch (const json::parse_error& e) {
        throw UsageError("'" + p.string() + "' is not valid JSON: " + e.what());
    }
}

// Re-throw parse/schema errors with the file they came from prepended.
template <class Fn>
auto in_file(const fs::path& p, Fn&& fn) -> decltype(fn()) {
    try {
        return fn();
    } catch (const UsageError& e) {
        throw UsageError(p.string() + ": " + e.what());
    } catch (const Error& e) {
        throw Error(p.string() + ": " + e.what());
    }
}

int ports_from_extension(const fs::path& p) {
    std::string ext = p.extension().string();
    for (char& c : ext) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    if (ext.size() >= 4 && ext[0] == '.' && ext[1] == 's' && ext.back() == 'p') {
        const std::string digits = ext.substr(2, ext.size() - 3);
        if (!digits.empty() &&
            digits.find_first_not_of("0123456789") == std::string::npos)
            return std::stoi(digits);
    }
    throw UsageError("cannot infer port count from '" + p.filename().string() +
                     "' (expected a .sNp extension)");
}

Network read_network(const fs::path& p) {
    const int ports = ports_from_extension(p);
    const std::string text = read_file(p);
    return in_file(p, [&] { return parse_touchstone(text, ports); });
}

double parse_number(const std::string& tok, const char* what) {
    try {
        std::size_t used = 0;
        const double v = std::stod(tok, &used);
        if (used != tok.size()) throw std::invalid_argument(tok);
        return v;
    } catch (const std::exception&) {
        throw UsageError(std::string("bad number in ") + what + ": '" + tok + "'");
    }
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= s.size(); ++i) {
        if (i == s.size() || s[i] == sep) {
            out.push_back(s.substr(start, i - start));
            start = i + 1;
        }
    }
    return out;
}

FrequencyGrid parse_grid_flag(const std::string& s) {
    const auto parts = split(s, ':');
    if (parts.size() != 3)
        throw UsageError("--grid wants fmin:fmax:step in Hz, got '" + s + "'");
    return make_grid(parse_number(parts[0], "--grid"), parse_number(parts[1], "--grid"),
                     parse_number(parts[2], "--grid"));
}

PortPairing parse_pairing_flag(const std::string& s) {
    const auto sides = split(s, ':');
    if (sides.size() != 2)
        throw UsageError("--pairing wants inP,inN:outP,outN, got '" + s + "'");
    auto pair_of = [&](const std::string& side) {
        const auto nums = split(side, ',');
        if (nums.size() != 2)
            throw UsageError("--pairing wants inP,inN:outP,outN, got '" + s + "'");
        return std::pair<int, int>{
            static_cast<int>(parse_number(nums[0], "--pairing")),
            static_cast<int>(parse_number(nums[1], "--pairing"))};
    };
    PortPairing p;
    p.in = pair_of(sides[0]);
    p.out = pair_of(sides[1]);
    return p;
}

std::string csv_columns(const std::vector<std::string>& headers,
                        const std::vector<const std::vector<double>*>& cols) {
    std::string out;
    for (std::size_t c = 0; c < headers.size(); ++c) {
        if (c) out += ',';
        out += headers[c];
    }
    out += '\n';
    const std::size_t rows = cols.empty() ? 0 : cols.front()->size();
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t c = 0; c < cols.size(); ++c) {
            if (c) out += ',';
            out += csv_num((*cols[c])[r]);
        }
        out += '\n';
    }
    return out;
}

void write_json_file(const fs::path& target, const json& j) {
    write_file_atomic(target, j.dump(2) + "\n");
}

// Shared flag values; option presence is checked through the CLI11 handles.
struct Options {
    std::string out_dir = ".";
    std::uint64_t seed = 1;
    std::string grid;
    double bitrate = 56e9;
    std::string pairing = "1,3:2,4";
    CLI::Option* seed_opt = nullptr;
    CLI::Option* grid_opt = nullptr;
    CLI::Option* bitrate_opt = nullptr;
};

// --- subcommand payloads ---

void cmd_analyze(const fs::path& input, const Options& opt, const std::string& mask_path,
                 double risetime_ps) {
    Network net = read_network(input);
    if (!opt.grid.empty()) net = resample(net, parse_grid_flag(opt.grid));

    const fs::path out(opt.out_dir);
    json report;
    Network two;  // the 2-port view all scalar metrics run on
    if (net.ports == 4) {
        const PortPairing pp = parse_pairing_flag(opt.pairing);
        report["skew_ps"] = skew(net, pp);
        two = sdd_as_network(to_mixed_mode(net, pp));
        write_file_atomic(out / "tdr_pn.csv",
                          trace_to_csv(tdr_pn_difference(net, pp, risetime_ps)));
    } else if (net.ports == 2) {
        two = net;
    } else {
        throw Error("analyze needs a 2-port or a 4-port network, got " +
                    std::to_string(net.ports));
    }

    const Trace il = insertion_loss(two);
    const Trace rl = return_loss(two);
    write_file_atomic(out / "il.csv", trace_to_csv(il));
    write_file_atomic(out / "rl.csv", trace_to_csv(rl));
    write_file_atomic(out / "tdr.csv", trace_to_csv(tdr(two, 1, risetime_ps)));

    report["brl_db"] = brl(two, opt.bitrate);
    if (!mask_path.empty()) {
        const MaskSpec mask =
            in_file(mask_path, [&] { return mask_from_json(read_json(mask_path)); });
        report["mask"] = to_json(mask_check(rl, mask));
    }
    write_json_file(out / "report.json", report);

    std::cout << "brl: " << report["brl_db"].get<double>() << " dB\n";
    if (report.contains("skew_ps"))
        std::cout << "skew: " << report["skew_ps"].get<double>() << " ps\n";
    if (report.contains("mask"))
        std::cout << "mask: " << (report["mask"]["pass"].get<bool>() ? "PASS" : "FAIL")
                  << "\n";
}

void cmd_synth(const fs::path& input, const Options& opt) {
    ChannelSpec spec = in_file(input, [&] { return channelspec_from_json(read_json(input)); });
    if (!opt.grid.empty()) spec.grid = parse_grid_flag(opt.grid);
    const Network net = synthesize_channel(spec);
    const fs::path target = fs::path(opt.out_dir) / (input.stem().string() + ".s2p");
    write_file_atomic(target, write_touchstone(net, TsFormat::RI));
    std::cout << "wrote " << target.string() << " (" << net.size() << " points)\n";
}

void cmd_mc(const fs::path& input, const Options& opt, bool uniform) {
    MonteCarloConfig cfg = in_file(input, [&] { return mcconfig_from_json(read_json(input)); });
    if (opt.seed_opt->count()) cfg.seed = opt.seed;
    if (!opt.grid.empty()) cfg.grid = parse_grid_flag(opt.grid);
    const EnsembleResult res = uniform ? run_uniform_sweep(cfg) : run_segmented(cfg);

    const fs::path out(opt.out_dir);
    for (std::size_t i = 0; i < res.cases.size(); ++i) {
        char name[32];
        std::snprintf(name, sizeof name, "case_%03zu.s2p", i);
        write_file_atomic(out / name, write_touchstone(res.cases[i], TsFormat::RI));
    }
    const EnvelopeStats& env = res.envelope;
    write_file_atomic(out / "il_envelope.csv",
                      csv_columns({"freq_hz", "il_min_db", "il_mean_db", "il_max_db", "il_std_db"},
                                  {&env.grid, &env.il_min, &env.il_mean, &env.il_max, &env.il_std}));
    write_file_atomic(out / "rl_envelope.csv",
                      csv_columns({"freq_hz", "rl_min_db", "rl_mean_db", "rl_max_db", "rl_std_db"},
                                  {&env.grid, &env.rl_min, &env.rl_mean, &env.rl_max, &env.rl_std}));
    write_json_file(out / "mc.json", json{{"n_cases", cfg.n_cases},
                                          {"n_segments", cfg.n_segments},
                                          {"seed", cfg.seed},
                                          {"mode", uniform ? "uniform" : "segmented"}});
    std::cout << res.cases.size() << " cases -> " << out.string() << "\n";
}

void cmd_stackup(const fs::path& input, const Options& opt, const std::string& drill,
                 int exit_layer) {
    const Stackup s = in_file(input, [&] { return stackup_from_json(read_json(input)); });
    const double total = total_thickness_mil(s);

    std::string csv = "index,usage,copper_mil,dielectric_mil,dk,depth_mil\n";
    for (const auto& l : s.layers) {
        const char* usage = l.usage == LayerUsage::Traces   ? "traces"
                            : l.usage == LayerUsage::Plane  ? "plane"
                                                            : "soldermask";
        csv += std::to_string(l.index);
        csv += ',';
        csv += usage;
        csv += ',';
        csv += csv_num(l.copper_thickness_mil);
        csv += ',';
        csv += csv_num(l.dielectric_below ? l.dielectric_below->thickness_mil : 0.0);
        csv += ',';
        csv += csv_num(l.dielectric_below ? l.dielectric_below->dk : 0.0);
        csv += ',';
        csv += csv_num(layer_depth_mil(s, l.index));
        csv += '\n';
    }
    const fs::path out(opt.out_dir);
    write_file_atomic(out / "layers.csv", csv);

    json rep{{"total_thickness_mil", total},
             {"layer_count", s.layers.size()},
             {"drill_count", s.drills.size()}};
    if (!drill.empty()) {
        const ViaSpan span = via_span(s, drill, exit_layer);
        rep["via"] = json{{"drill", drill},
                          {"exit_layer", exit_layer},
                          {"barrel_length_mil", span.barrel_length_mil},
                          {"stub_length_mil", span.stub_length_mil}};
        std::cout << "via '" << drill << "' exit L" << exit_layer << ": barrel "
                  << span.barrel_length_mil << " mil, stub " << span.stub_length_mil
                  << " mil\n";
    }
    write_json_file(out / "stackup.json", rep);
    std::cout << "total thickness: " << total << " mil\n";
}

void cmd_fws(const fs::path& input, const Options& opt, int n, double rotation_deg,
             bool rotation_given) {
    WeaveModel m = in_file(input, [&] { return weave_from_json(read_json(input)); });
    if (rotation_given) {
        m.rotation_deg = rotation_deg;
        validate_weave(m);
    }
    const FwsEnsemble e = fws_ensemble(m, n, opt.seed);

    std::vector<double> idx(e.samples_ps.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = static_cast<double>(i);
    const fs::path out(opt.out_dir);
    write_file_atomic(out / "fws_samples.csv",
                      csv_two_columns("sample_index", "skew_ps", idx, e.samples_ps));
    write_json_file(out / "fws.json", json{{"n", n},
                                           {"seed", opt.seed},
                                           {"rotation_deg", m.rotation_deg},
                                           {"mean_ps", e.mean_ps},
                                           {"sigma_ps", e.sigma_ps},
                                           {"three_sigma_ps", 3.0 * e.sigma_ps}});
    std::cout << "n=" << n << " rotation " << m.rotation_deg << " deg: sigma "
              << e.sigma_ps << " ps (3-sigma " << 3.0 * e.sigma_ps << " ps)\n";
}

void cmd_budget(const fs::path& input, const Options& opt) {
    SkewBudget b = in_file(input, [&] { return budget_from_json(read_json(input)); });
    if (opt.bitrate_opt->count()) b.bitrate = opt.bitrate;
    const BudgetReport rep = budget_report(b);
    write_json_file(fs::path(opt.out_dir) / "budget.json", to_json(rep));
    // a failing budget is still a successful computation; exit stays 0
    std::cout << (rep.pass ? "PASS" : "FAIL") << ": total " << rep.total_ps
              << " ps of " << rep.budget_ps << " ps budget (margin " << rep.margin_ps
              << " ps)\n";
}

void cmd_convert(const fs::path& input, const Options& opt, const std::string& format) {
    TsFormat fmt;
    if (format == "ri") fmt = TsFormat::RI;
    else if (format == "ma") fmt = TsFormat::MA;
    else if (format == "db") fmt = TsFormat::DB;
    else throw UsageError("--format must be ri, ma, or db, got '" + format + "'");

    const Network net = read_network(input);
    const fs::path target = fs::path(opt.out_dir) /
        (input.stem().string() + "_" + format + input.extension().string());
    write_file_atomic(target, write_touchstone(net, fmt));
    std::cout << "wrote " << target.string() << "\n";
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"signal-integrity toolkit: channel synthesis and analysis"};
    app.require_subcommand(1);
    app.fallthrough();

    Options opt;
    if (const char* env = std::getenv("SIKIT_OUT")) opt.out_dir = env;
    app.add_option("--out", opt.out_dir, "output directory (default: $SIKIT_OUT or '.')");
    opt.seed_opt = app.add_option("--seed", opt.seed, "RNG seed for stochastic commands");
    opt.grid_opt = app.add_option("--grid", opt.grid, "frequency grid override, fmin:fmax:step in Hz");
    opt.bitrate_opt = app.add_option("--bitrate", opt.bitrate, "signaling rate in bit/s (default 56e9)");
    app.add_option("--pairing", opt.pairing, "4-port pairing as inP,inN:outP,outN (default 1,3:2,4)");

    std::string input, mask_path, format = "ri", drill;
    double risetime = 10.0, rotation = 0.0;
    int n_samples = 1000, exit_layer = 0;
    bool uniform = false;

    auto* analyze = app.add_subcommand("analyze", "IL/RL/TDR/BRL report from a Touchstone file");
    analyze->add_option("input", input, "Touchstone .sNp file")->required();
    analyze->add_option("--mask", mask_path, "return-loss mask JSON to check against");
    analyze->add_option("--risetime", risetime, "TDR stimulus 10-90 risetime in ps (default 10)");
    analyze->callback([&] { cmd_analyze(input, opt, mask_path, risetime); });

    auto* synth = app.add_subcommand("synth", "synthesize a channel spec JSON into a .s2p");
    synth->add_option("input", input, "channel spec JSON")->required();
    synth->callback([&] { cmd_synth(input, opt); });

    auto* mc = app.add_subcommand("mc", "impedance-tolerance ensemble: case files plus envelopes");
    mc->add_option("input", input, "ensemble config JSON")->required();
    mc->add_flag("--uniform", uniform, "deterministic uniform-impedance sweep instead of segmented");
    mc->callback([&] { cmd_mc(input, opt, uniform); });

    auto* stackup = app.add_subcommand("stackup", "stack-up report: layer depths and via spans");
    stackup->add_option("input", input, "stackup JSON")->required();
    stackup->add_option("--drill", drill, "drill name to compute a via span for");
    stackup->add_option("--exit", exit_layer, "signal exit layer for --drill");
    stackup->callback([&] { cmd_stackup(input, opt, drill, exit_layer); });

    auto* fws = app.add_subcommand("fws", "fiber-weave skew ensemble statistics");
    fws->add_option("input", input, "weave model JSON")->required();
    fws->add_option("--n", n_samples, "ensemble size (default 1000)");
    auto* rot_opt = fws->add_option("--rotation", rotation, "override rotation angle in degrees");
    fws->callback([&] { cmd_fws(input, opt, n_samples, rotation, rot_opt->count() > 0); });

    auto* budget = app.add_subcommand("budget", "skew budget check");
    budget->add_option("input", input, "budget JSON")->required();
    budget->callback([&] { cmd_budget(input, opt); });

    auto* convert = app.add_subcommand("convert", "rewrite a Touchstone file in another format");
    convert->add_option("input", input, "Touchstone .sNp file")->required();
    convert->add_option("--format", format, "target format: ri, ma, or db (default ri)");
    convert->callback([&] { cmd_convert(input, opt, format); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);  // prints help or the parse error
        return code == 0 ? 0 : 2;
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
