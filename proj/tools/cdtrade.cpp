// Command-line front end: curves, minimum distortion, lossless test, region,
// Wyner-Ziv discrepancy report, block Markov simulation, card trick, presets.

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "cdtrade/cdtrade.hpp"

namespace {

using namespace cdtrade;

/// Input file that does not exist; reported with exit code 2.
struct MissingFile : std::runtime_error {
    explicit MissingFile(const std::string& path) : std::runtime_error("cannot open '" + path + "': no such file") {}
};

std::string need_file(const std::string& path) {
    if (!std::filesystem::is_regular_file(path)) throw MissingFile(path);
    return path;
}

struct Common {
    std::string preset;
    std::vector<std::string> sets;
    std::string out;
    std::uint64_t seed = 1;
    bool seed_given = false;
};

struct Outputs {
    explicit Outputs(std::string p) : prefix(std::move(p)) {}

    std::string prefix;
    RunManifest manifest;
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();

    std::string manifest_name() const {
        return prefix.empty() ? "" : std::filesystem::path(prefix + ".manifest.json").filename().string();
    }

    // With no prefix the CSV goes to stdout and nothing else is written.
    void write(const std::string& ext, const std::string& content, bool to_stdout_if_no_prefix) {
        if (prefix.empty()) {
            if (to_stdout_if_no_prefix) std::cout << content;
            return;
        }
        const std::string path = prefix + "." + ext;
        const auto parent = std::filesystem::path(path).parent_path();
        if (!parent.empty()) std::filesystem::create_directories(parent);
        std::ofstream f(path, std::ios::binary);
        if (!f) throw std::runtime_error("cannot write '" + path + "'");
        f << content;
        manifest.outputs.push_back(std::filesystem::path(path).filename().string());
    }

    void finish() {
        if (prefix.empty()) return;
        manifest.wall_seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::ofstream f(prefix + ".manifest.json", std::ios::binary);
        if (!f) throw std::runtime_error("cannot write '" + prefix + ".manifest.json'");
        f << manifest.to_json().dump(2) << "\n";
    }
};

std::optional<Preset> load_preset(const Common& c) {
    if (c.preset.empty()) {
        detail::require(c.sets.empty(), "--set needs --preset");
        return std::nullopt;
    }
    Preset p = find_preset(c.preset);
    for (const auto& kv : c.sets) {
        const auto eq = kv.find('=');
        detail::require(eq != std::string::npos && eq > 0, "--set expects key=value, got '" + kv + "'");
        const std::string key = kv.substr(0, eq), val = kv.substr(eq + 1);
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(val, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        detail::require(used == val.size() && !val.empty(), "--set " + key + ": not a number: '" + val + "'");
        p.set(key, v);
    }
    return p;
}

Json preset_json(const Preset& p) {
    Json j;
    j["preset"] = p.name;
    j["family"] = p.family;
    for (const auto& [k, v] : p.params) j[k] = detail::jreal(v);
    return j;
}

std::string to_text(const Json& j) { return j.dump(2) + "\n"; }

void add_common(CLI::App* sc, Common& c, bool with_seed) {
    sc->add_option("--preset", c.preset, "Built-in configuration (see 'cdtrade presets')");
    sc->add_option("--set", c.sets, "Override a preset parameter, key=value (repeatable)");
    sc->add_option("--out", c.out, "Output prefix; writes PREFIX.csv, PREFIX.json, PREFIX.manifest.json");
    if (with_seed) sc->add_option("--seed", c.seed, "Random seed")->each([&](const std::string&) { c.seed_given = true; });
}

struct ChannelInputs {
    std::string channel, distortion;
};

void add_channel_opts(CLI::App* sc, ChannelInputs& in, bool with_distortion) {
    sc->add_option("--channel", in.channel, "Channel file");
    if (with_distortion) sc->add_option("--distortion", in.distortion, "Distortion file (default: Hamming)");
}

StateChannel channel_from(const std::optional<Preset>& p, const ChannelInputs& in) {
    if (!in.channel.empty()) return read_channel_file(need_file(in.channel));
    detail::require(p.has_value(), "need --channel or --preset");
    return preset_channel(*p);
}

DistortionTable distortion_from(const StateChannel& ch, const ChannelInputs& in) {
    if (!in.distortion.empty()) return read_distortion_file(need_file(in.distortion));
    return DistortionTable::hamming(ch.card_s());
}

void set_manifest(Outputs& o, const std::vector<std::string>& argv, const std::optional<Preset>& p,
                  std::uint64_t seed, Json extra = Json::object()) {
    o.manifest.command = argv;
    o.manifest.seed = seed;
    Json params = p ? preset_json(*p) : Json::object();
    for (auto& [k, v] : extra.items()) params[k] = v;
    o.manifest.parameters = std::move(params);
}

struct SolverFlags {
    std::string options_file;
    std::optional<std::size_t> multistart, lambda_count, card_u, threads, max_iterations;

    void add(CLI::App* sc) {
        sc->add_option("--solver-options", options_file, "Solver options file");
        sc->add_option("--multistart", multistart, "Random restarts per multiplier");
        sc->add_option("--lambda-count", lambda_count, "Geometric multipliers besides 0");
        sc->add_option("--max-iterations", max_iterations, "Iteration cap per restart");
        sc->add_option("--card-u", card_u, "Auxiliary alphabet size");
        sc->add_option("--threads", threads, "Worker threads");
    }

    SolverOptions build(std::uint64_t seed) const {
        SolverOptions o;
        if (!options_file.empty()) o = read_solver_options(KvDocument::parse_file(need_file(options_file)));
        o.seed = seed;
        if (multistart) o.multistart = *multistart;
        if (lambda_count) o.lambda_count = *lambda_count;
        if (max_iterations) o.max_iterations = *max_iterations;
        if (card_u) o.card_u = *card_u;
        if (threads) o.threads = *threads;
        o.validate();
        return o;
    }
};

std::size_t whole(const Preset& p, const std::string& key) {
    const double v = p.get(key);
    detail::require(v >= 1.0 && v == std::floor(v), "preset parameter '" + key + "' must be a positive whole number");
    return static_cast<std::size_t>(v);
}

// ---- subcommands

int run_curve(const std::vector<std::string>& argv, const Common& c, const ChannelInputs& in,
              const std::string& mode_flag, bool closed_form, std::optional<std::size_t> points,
              const SolverFlags& sf) {
    const auto p = load_preset(c);
    const Mode mode = parse_mode(!mode_flag.empty() ? mode_flag : p ? p->mode : "sc");
    const bool use_closed = closed_form || (p && p->closed_form && in.channel.empty());
    std::size_t npts = points.value_or(p && p->has("points") ? whole(*p, "points") : 101);
    Outputs out(c.out);
    CdCurve curve;
    if (use_closed) {
        detail::require(p.has_value() && in.channel.empty(), "--closed-form needs a Gaussian, BSC or xor preset");
        if (p->family == "gaussian") {
            detail::require(mode == Mode::StrictlyCausal, "closed-form Gaussian curve is strictly causal only");
            curve = gaussian_curve(preset_gaussian(*p), npts);
        } else if (p->family == "bsc") {
            curve = bsc_curve(preset_bsc(*p), mode, npts);
        } else {
            const auto ch = preset_channel(*p);
            curve = injective_curve(ch, DistortionTable::hamming(ch.card_s()), npts);
        }
    } else {
        const auto ch = channel_from(p, in);
        const auto d = distortion_from(ch, in);
        curve = solve_cd_curve(ch, d, mode, sf.build(c.seed));
        if (!in.channel.empty()) curve.source = in.channel;
        else if (p) curve.source = p->name;
    }
    set_manifest(out, argv, p, c.seed, {{"mode", std::string(to_string(mode))}, {"closed_form", use_closed}});
    std::ostringstream csv;
    write_curve_csv(csv, curve, out.manifest_name());
    out.write("csv", csv.str(), true);
    out.write("json", to_text(curve_to_json(curve, out.manifest_name())), false);
    out.finish();
    return 0;
}

int run_dstar(const std::vector<std::string>& argv, const Common& c, const ChannelInputs& in,
              const std::string& mode_flag, bool closed_form, const SolverFlags& sf) {
    const auto p = load_preset(c);
    Outputs out(c.out);
    Json j;
    j["schema"] = schema::kDstar;
    j["manifest"] = out.manifest_name();
    if (p && p->family == "gaussian" && in.channel.empty()) {
        const auto g = preset_gaussian(*p);
        j["strictly_causal"] = detail::jreal(gaussian_dstar(g, GaussianMode::StrictlyCausal));
        j["causal"] = detail::jreal(gaussian_dstar(g, GaussianMode::Causal));
        j["oblivious"] = detail::jreal(gaussian_dstar(g, GaussianMode::Oblivious));
    } else {
        const Mode mode = parse_mode(!mode_flag.empty() ? mode_flag : p ? p->mode : "sc");
        j["mode"] = std::string(to_string(mode));
        if (closed_form) {
            detail::require(p && p->family == "bsc" && in.channel.empty(), "--closed-form D* needs a BSC preset");
            const auto b = preset_bsc(*p);
            detail::require(mode != Mode::Noncausal, "no closed-form noncausal D*");
            j["dstar"] = detail::jreal(mode == Mode::StrictlyCausal ? bsc_dstar_strictly_causal(b) : bsc_dstar_causal(b));
        } else {
            const auto ch = channel_from(p, in);
            j["dstar"] = detail::jreal(solve_dstar(ch, distortion_from(ch, in), mode, sf.build(c.seed)));
        }
    }
    set_manifest(out, argv, p, c.seed);
    out.write("json", to_text(j), true);
    out.finish();
    return 0;
}

int run_lossless(const std::vector<std::string>& argv, const Common& c, const ChannelInputs& in) {
    const auto p = load_preset(c);
    const auto ch = channel_from(p, in);
    Outputs out(c.out);
    set_manifest(out, argv, p, 0);
    out.write("json", to_text(lossless_to_json(lossless_feasible(ch), out.manifest_name())), true);
    out.finish();
    return 0;
}

int run_region(const std::vector<std::string>& argv, const Common& c, const ChannelInputs& in,
               std::optional<std::size_t> resolution) {
    const auto p = load_preset(c);
    const auto ch = channel_from(p, in);
    const std::size_t res = resolution.value_or(p && p->has("resolution") ? whole(*p, "resolution") : 200);
    const auto r = rate_delta_region(ch, res);
    Outputs out(c.out);
    set_manifest(out, argv, p, 0, {{"resolution", res}});
    std::ostringstream csv;
    write_region_csv(csv, r, out.manifest_name());
    out.write("csv", csv.str(), true);
    out.write("json", to_text(region_to_json(r, out.manifest_name())), false);
    out.finish();
    return 0;
}

int run_discrepancy(const std::vector<std::string>& argv, const Common& c, bool no_numeric,
                    std::optional<std::size_t> points, const SolverFlags& sf) {
    const auto p = load_preset(c);
    detail::require(p && p->family == "bsc", "discrepancy needs a BSC preset");
    const auto b = preset_bsc(*p);
    const std::size_t n = points.value_or(p->has("points") ? whole(*p, "points") : 21);
    detail::require(n >= 2, "discrepancy: need at least 2 points");
    std::optional<CdCurve> numeric;
    if (!no_numeric)
        numeric = solve_cd_curve(make_bsc_channel(b.p, b.q), DistortionTable::hamming(2), Mode::StrictlyCausal,
                                 sf.build(c.seed));
    const auto report = bsc_discrepancy_report(b, linear_grid(0.0, 0.5, n), numeric ? &*numeric : nullptr);
    Outputs out(c.out);
    set_manifest(out, argv, p, c.seed, {{"numeric", !no_numeric}});
    std::ostringstream csv;
    write_discrepancy_csv(csv, report, out.manifest_name());
    out.write("csv", csv.str(), true);
    out.write("json", to_text(discrepancy_to_json(report, out.manifest_name())), false);
    out.finish();
    return 0;
}

struct SimFlags {
    std::string design;
    std::vector<std::size_t> n;
    std::optional<std::size_t> blocks, trials, threads;
    std::optional<double> R, R_s, R_s_tilde, epsilon, epsilon_prime;
    std::optional<std::uint64_t> memory_cap;
};

int run_simulate(const std::vector<std::string>& argv, const Common& c, const ChannelInputs& in, const SimFlags& f) {
    const auto p = load_preset(c);
    const auto ch = channel_from(p, in);
    const auto d = distortion_from(ch, in);
    JointDesign design;
    SimParams prm;
    if (!f.design.empty()) {
        design = read_design_file(need_file(f.design), ch, d);
    } else {
        detail::require(p.has_value(), "need --design or a simulate preset");
        design = preset_design(*p, ch);
    }
    if (p && p->command == "simulate") prm = preset_sim_params(*p, ch, design);
    if (f.blocks) prm.blocks = *f.blocks;
    if (f.trials) prm.trials = *f.trials;
    if (f.threads) prm.threads = *f.threads;
    if (f.R) prm.rates.R = *f.R;
    if (f.R_s) prm.rates.R_s = *f.R_s;
    if (f.R_s_tilde) prm.rates.R_s_tilde = *f.R_s_tilde;
    if (f.epsilon) prm.typ.epsilon = *f.epsilon;
    if (f.epsilon_prime) prm.typ.epsilon_prime = *f.epsilon_prime;
    if (f.memory_cap) prm.memory_cap = *f.memory_cap;
    if (c.seed_given || !p) prm.seed = c.seed;
    const std::vector<std::size_t> ns = f.n.empty() ? std::vector<std::size_t>{prm.n} : f.n;

    Outputs out(c.out);
    std::ostringstream csv;
    write_sim_csv_header(csv, out.manifest_name());
    Json reports = Json::array();
    for (auto n : ns) {
        prm.n = n;
        const auto r = simulate(ch, design, d, prm);
        write_sim_csv_row(csv, r);
        reports.push_back(sim_report_to_json(r, out.manifest_name()));
    }
    set_manifest(out, argv, p, prm.seed,
                 {{"rates", {{"R", detail::jreal(prm.rates.R)},
                             {"R_s", detail::jreal(prm.rates.R_s)},
                             {"R_s_tilde", detail::jreal(prm.rates.R_s_tilde)}}},
                  {"blocks", prm.blocks},
                  {"trials", prm.trials},
                  {"epsilon", detail::jreal(prm.typ.epsilon)},
                  {"epsilon_prime", detail::jreal(prm.typ.epsilon_prime)}});
    out.write("csv", csv.str(), true);
    out.write("json", to_text(reports.size() == 1 ? reports[0] : reports), false);
    out.finish();
    return 0;
}

std::string join(const std::vector<Card>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
    return s;
}

int run_presets() {
    for (const auto& p : presets()) {
        std::cout << p.name << "  [" << p.command << (p.closed_form ? ", closed form" : "") << "]  " << p.summary << "\n   ";
        for (const auto& [k, v] : p.params) std::cout << ' ' << k << '=' << detail::out_real(v);
        if (!p.rates.empty()) std::cout << " rates=" << p.rates;
        std::cout << "\n";
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    const std::vector<std::string> args(argv, argv + argc);
    CLI::App app{"Capacity-distortion tradeoffs for channels with state"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string("cdtrade ") + kToolVersion);

    Common c;
    ChannelInputs in;
    SolverFlags sf;
    std::string mode;
    bool closed_form = false, no_numeric = false;
    std::optional<std::size_t> points, resolution;
    SimFlags simf;

    auto* curve = app.add_subcommand("curve", "Capacity-distortion curve (CSV/JSON)");
    add_common(curve, c, true);
    add_channel_opts(curve, in, true);
    curve->add_option("--mode", mode, "sc | causal | nc");
    curve->add_flag("--closed-form", closed_form, "Use the analytic curve of a Gaussian, BSC or xor preset");
    curve->add_option("--points", points, "Grid size for closed forms");
    sf.add(curve);

    auto* dstar = app.add_subcommand("dstar", "Minimum achievable distortion D*");
    add_common(dstar, c, true);
    add_channel_opts(dstar, in, true);
    dstar->add_option("--mode", mode, "sc | causal | nc");
    dstar->add_flag("--closed-form", closed_form, "Closed form (BSC presets)");
    sf.add(dstar);

    auto* lossless = app.add_subcommand("lossless", "Lossless state communication test");
    add_common(lossless, c, false);
    add_channel_opts(lossless, in, false);

    auto* region = app.add_subcommand("region", "Rate versus uncertainty-reduction region");
    add_common(region, c, false);
    add_channel_opts(region, in, false);
    region->add_option("--resolution", resolution, "p(x) grid step is 1/resolution");

    auto* disc = app.add_subcommand("discrepancy", "Binary Wyner-Ziv expression against the numeric solver");
    add_common(disc, c, true);
    disc->add_flag("--no-numeric", no_numeric, "Skip the solver column");
    disc->add_option("--points", points, "Distortion grid size on [0, 1/2]");
    sf.add(disc);

    auto* sim = app.add_subcommand("simulate", "Monte Carlo run of the block Markov scheme");
    add_common(sim, c, true);
    add_channel_opts(sim, in, true);
    sim->add_option("--design", simf.design, "Strictly causal design file");
    sim->add_option("--n", simf.n, "Block length; a comma list sweeps n")->delimiter(',');
    sim->add_option("--blocks", simf.blocks, "Blocks per trial (b >= 2)");
    sim->add_option("--trials", simf.trials, "Independent trials");
    sim->add_option("--R", simf.R, "Message rate");
    sim->add_option("--Rs", simf.R_s, "Bin-index rate");
    sim->add_option("--Rs-tilde", simf.R_s_tilde, "Description rate");
    sim->add_option("--epsilon", simf.epsilon, "Decoder typicality slack");
    sim->add_option("--epsilon-prime", simf.epsilon_prime, "Encoder typicality slack");
    sim->add_option("--memory-cap", simf.memory_cap, "Codeword symbols allowed per block");
    sim->add_option("--threads", simf.threads, "Worker threads (results do not depend on it)");

    auto* card = app.add_subcommand("cardtrick", "Zero-distortion card trick");
    card->require_subcommand(1);
    std::uint64_t ck = 5, cn = 52, random_hands = 0;
    std::vector<Card> hand, arrangement;
    auto card_opts = [&](CLI::App* s) {
        s->add_option("--k", ck, "Hand size K")->required();
        s->add_option("--n", cn, "Deck size N")->required();
    };
    auto* enc = card->add_subcommand("encode", "Choose the hidden card and arrange the rest");
    card_opts(enc);
    enc->add_option("--hand", hand, "K distinct cards, comma separated")->delimiter(',')->required();
    auto* dec = card->add_subcommand("decode", "Recover the hidden card");
    card_opts(dec);
    dec->add_option("--arrangement", arrangement, "K-1 cards in order, comma separated")->delimiter(',')->required();
    auto* ver = card->add_subcommand("verify", "Round-trip every hand (or --random hands)");
    card_opts(ver);
    ver->add_option("--random", random_hands, "Check this many random hands instead");
    ver->add_option("--seed", c.seed, "Seed for --random");

    auto* pre = app.add_subcommand("presets", "List built-in presets");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        if (*curve) return run_curve(args, c, in, mode, closed_form, points, sf);
        if (*dstar) return run_dstar(args, c, in, mode, closed_form, sf);
        if (*lossless) return run_lossless(args, c, in);
        if (*region) return run_region(args, c, in, resolution);
        if (*disc) return run_discrepancy(args, c, no_numeric, points, sf);
        if (*sim) return run_simulate(args, c, in, simf);
        if (*pre) return run_presets();
        if (*card) {
            const CardTrickInstance inst(cn, ck);
            if (*enc) {
                const auto e = encode_trick(inst, hand);
                std::cout << "hidden " << e.hidden << "\narrangement " << join(e.arrangement) << "\n";
            } else if (*dec) {
                std::cout << "hidden " << decode_trick(inst, arrangement) << "\n";
            } else {
                const auto r = random_hands ? verify_random(inst, random_hands, c.seed) : verify_exhaustive(inst);
                std::cout << r.ok << "/" << r.total << (r.passed() ? " ok" : " FAILED") << "\n";
                return r.passed() ? 0 : 1;
            }
            return 0;
        }
    } catch (const MissingFile& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const ResourceLimitError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
