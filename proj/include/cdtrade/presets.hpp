#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "cdtrade/blockmarkov/simulate.hpp"
#include "cdtrade/closedform/bsc.hpp"
#include "cdtrade/closedform/gaussian.hpp"
#include "cdtrade/design.hpp"
#include "cdtrade/error.hpp"
#include "cdtrade/estimator.hpp"
#include "cdtrade/probcore/assemble.hpp"
#include "cdtrade/probcore/channel.hpp"
#include "cdtrade/probcore/info.hpp"

namespace cdtrade {

/// Named, ready-to-run configuration. Numeric parameters may be overridden by
/// name; the family fixes how they are interpreted:
///   gaussian  P, Q, N
///   bsc       p, q      Y = X xor S xor Z, Z ~ Bern(p), S ~ Bern(q)
///   xor       q         Y = X xor S
struct Preset {
    std::string name;
    std::string summary;
    std::string command;  // curve | dstar | lossless | region | discrepancy | simulate
    std::string family;
    std::string mode = "sc";
    bool closed_form = false;
    std::string rates;  // simulate only: zero | lossless | overrate
    std::vector<std::pair<std::string, double>> params;

    bool has(const std::string& key) const {
        return std::any_of(params.begin(), params.end(), [&](const auto& kv) { return kv.first == key; });
    }

    double get(const std::string& key) const {
        for (const auto& [k, v] : params)
            if (k == key) return v;
        throw ValidationError("preset '" + name + "' has no parameter '" + key + "'");
    }

    void set(const std::string& key, double value) {
        for (auto& [k, v] : params)
            if (k == key) {
                v = value;
                return;
            }
        throw ValidationError("preset '" + name + "' has no parameter '" + key + "'");
    }
};

namespace detail {

inline std::vector<std::pair<std::string, double>> sim_defaults(std::size_t n, std::size_t trials) {
    // slacks calibrated for n in [12, 24]; below 1 the robust typical set is
    // empty whenever some cell has n p(a) < 1
    return {{"n", double(n)},        {"blocks", 5},       {"trials", double(trials)}, {"seed", 1},
            {"epsilon", 4.0},        {"epsilon_prime", 2.0}, {"margin", 0.1},    {"factor", 2.0}};
}

}  // namespace detail

inline const std::vector<Preset>& presets() {
    static const std::vector<Preset> all = [] {
        std::vector<Preset> v;
        v.push_back({"gaussian-unit", "Gaussian channel with Gaussian state and noise, P=Q=N=1", "curve",
                     "gaussian", "sc", true, "", {{"P", 1}, {"Q", 1}, {"N", 1}, {"points", 101}}});
        v.push_back({"gaussian-dstar", "Minimum distortion of the Gaussian channel for each encoder knowledge", "dstar",
                     "gaussian", "sc", true, "", {{"P", 1}, {"Q", 1}, {"N", 1}}});
        v.push_back({"gaussian-noiseless", "Gaussian channel Y = X + S without noise", "curve", "gaussian", "sc",
                     true, "", {{"P", 1}, {"Q", 1}, {"N", 0}, {"points", 101}}});
        v.push_back({"xor-noiseless", "Binary channel Y = X xor S, S ~ Bern(0.2)", "curve", "xor", "sc", true, "",
                     {{"q", 0.2}, {"points", 101}}});
        v.push_back({"gaussian-high-snr", "Strictly causal Gaussian curve, P=10 Q=1 N=1", "curve", "gaussian", "sc", true,
                     "", {{"P", 10}, {"Q", 1}, {"N", 1}, {"points", 101}}});
        v.push_back({"bsc-sc", "Strictly causal BSC with Bernoulli state, p=q=0.25", "curve", "bsc", "sc", true, "",
                     {{"p", 0.25}, {"q", 0.25}, {"points", 101}}});
        v.push_back({"bsc-sc-numeric", "Numeric strictly causal curve for p=q=0.25", "curve", "bsc", "sc", false, "",
                     {{"p", 0.25}, {"q", 0.25}}});
        v.push_back({"bsc-wz-discrepancy", "Binary Wyner-Ziv expression against the numeric solver, p=q=0.25",
                     "discrepancy", "bsc", "sc", false, "", {{"p", 0.25}, {"q", 0.25}, {"points", 21}}});
        v.push_back({"bsc-causal", "Causal BSC with Bernoulli state, p=0.1 q=0.25", "curve", "bsc", "causal", true,
                     "", {{"p", 0.1}, {"q", 0.25}, {"points", 101}}});
        v.push_back({"lossless-feasible", "Lossless state communication test, BSC p=0.03 q=0.2", "lossless", "bsc",
                     "sc", false, "", {{"p", 0.03}, {"q", 0.2}}});
        v.push_back({"lossless-infeasible", "Lossless state communication test, BSC p=0.1 q=0.4", "lossless", "bsc",
                     "sc", false, "", {{"p", 0.1}, {"q", 0.4}}});
        v.push_back({"region-bsc", "Rate versus uncertainty-reduction region, BSC p=0.03 q=0.2", "region", "bsc", "sc",
                     false, "", {{"p", 0.03}, {"q", 0.2}, {"resolution", 200}}});

        auto sim = [](std::string name, std::string summary, std::string family, std::string rates,
                      std::vector<std::pair<std::string, double>> head, std::size_t n, std::size_t trials) {
            auto tail = detail::sim_defaults(n, trials);
            head.insert(head.end(), tail.begin(), tail.end());
            return Preset{std::move(name), std::move(summary), "simulate", std::move(family), "sc", false,
                          std::move(rates), std::move(head)};
        };
        v.push_back(sim("sim-noiseless", "Block Markov run on Y = X xor S with U = S, shat = x xor y", "xor", "zero",
                        {{"q", 0.2}}, 12, 20));
        v.push_back(sim("sim-lossless", "Block Markov run, BSC p=0.03 q=0.2, U = S, rates inside the lossless region",
                        "bsc", "lossless", {{"p", 0.03}, {"q", 0.2}}, 12, 50));
        v.push_back(sim("sim-overrate", "Block Markov run with the bin rate at twice I(X;Y)", "bsc", "overrate",
                        {{"p", 0.03}, {"q", 0.2}}, 24, 10));
        return v;
    }();
    return all;
}

inline const Preset& find_preset(const std::string& name) {
    for (const auto& p : presets())
        if (p.name == name) return p;
    std::string known;
    for (const auto& p : presets()) known += (known.empty() ? "" : ", ") + p.name;
    throw ValidationError("unknown preset '" + name + "' (known: " + known + ")");
}

inline GaussianParams preset_gaussian(const Preset& p) {
    detail::require(p.family == "gaussian", "preset '" + p.name + "' is not Gaussian");
    GaussianParams g{p.get("P"), p.get("Q"), p.get("N")};
    g.validate();
    return g;
}

inline BscParams preset_bsc(const Preset& p) {
    detail::require(p.family == "bsc", "preset '" + p.name + "' is not a BSC preset");
    BscParams b{p.get("p"), p.get("q")};
    b.validate();
    return b;
}

inline StateChannel xor_channel(double q) { return make_deterministic_channel(2, SimplexVector::bernoulli(q), 2, {0, 1, 1, 0}); }

inline StateChannel preset_channel(const Preset& p) {
    if (p.family == "bsc") return make_bsc_channel(p.get("p"), p.get("q"));
    if (p.family == "xor") return xor_channel(p.get("q"));
    throw ValidationError("preset '" + p.name + "' has no discrete channel");
}

/// Design with U = S and uniform X on a binary channel. The estimator is
/// shat = x xor y on the noiseless channel and shat = u otherwise.
inline JointDesign state_description_design(const StateChannel& ch, bool xor_estimator) {
    detail::require(ch.card_x() == 2 && ch.card_s() == 2 && ch.card_y() == 2,
                    "state_description_design: binary alphabets required");
    std::vector<std::size_t> est(8);
    for (std::size_t u = 0; u < 2; ++u)
        for (std::size_t x = 0; x < 2; ++x)
            for (std::size_t y = 0; y < 2; ++y) est[(u * 2 + x) * 2 + y] = xor_estimator ? (x ^ y) : u;
    return {SimplexVector::uniform(2), StochasticTable(4, 2, {1, 0, 0, 1, 1, 0, 0, 1}),
            EstimatorTable({2, 2, 2}, std::move(est))};
}

inline JointDesign preset_design(const Preset& p, const StateChannel& ch) {
    return state_description_design(ch, p.family == "xor");
}

/// Information quantities that bound the block Markov rates of a design.
struct RateBudget {
    double i_xy = 0.0;        // bin rate must stay below
    double i_us_given_x = 0.0;  // description rate must exceed
    double i_uy_given_x = 0.0;  // descriptions per bin must stay below (in rate)
    double slack() const { return i_xy + i_uy_given_x - i_us_given_x; }
};

inline RateBudget rate_budget(const StateChannel& ch, const JointDesign& design) {
    const auto j = assemble_joint(ch, design);
    using namespace axis;
    return {mutual_information(j, {kX}, {kY}), conditional_mutual_information(j, {kU}, {kS}, {kX}),
            conditional_mutual_information(j, {kU}, {kY}, {kX})};
}

/// Rates for a simulation preset. "lossless" leaves a margin of `margin` times
/// the slack on both binding constraints; "overrate" multiplies the bin rate by `factor`.
inline CodeRates preset_rates(const Preset& p, const StateChannel& ch, const JointDesign& design) {
    if (p.rates == "zero") return {0.0, 0.0, 0.0};
    const auto b = rate_budget(ch, design);
    const double m = p.get("margin");
    detail::require(m > 0.0 && m < 0.5, "preset margin must lie in (0, 1/2)");
    if (p.rates == "lossless") {
        detail::require(b.slack() > 0.0, "lossless rates: the design leaves no room, I(X;Y) + I(U;Y|X) <= I(U;S|X)");
        return {0.0, b.i_xy - m * b.slack(), b.i_us_given_x + m * b.slack()};
    }
    if (p.rates == "overrate") {
        const double rs = p.get("factor") * b.i_xy;
        return {0.0, rs, std::max(b.i_us_given_x + m * std::max(b.slack(), 0.0), rs)};
    }
    throw ValidationError("preset '" + p.name + "' has no rate rule");
}

inline SimParams preset_sim_params(const Preset& p, const StateChannel& ch, const JointDesign& design) {
    auto count = [&](const char* key) {
        const double v = p.get(key);
        detail::require(v >= 0.0 && v == std::floor(v), std::string("preset parameter '") + key + "' must be a whole number");
        return static_cast<std::size_t>(v);
    };
    SimParams s;
    s.n = count("n");
    s.blocks = count("blocks");
    s.trials = count("trials");
    s.seed = count("seed");
    s.typ = {p.get("epsilon"), p.get("epsilon_prime")};
    s.rates = preset_rates(p, ch, design);
    return s;
}

}  // namespace cdtrade
