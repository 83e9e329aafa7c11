#pragma once

#include <algorithm>
#include <cstddef>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "cdtrade/error.hpp"
#include "cdtrade/estimator.hpp"
#include "cdtrade/probcore/channel.hpp"
#include "cdtrade/probcore/simplex.hpp"

namespace cdtrade {

/// Encoder state knowledge.
enum class Mode { StrictlyCausal, Causal, Noncausal };

inline std::string_view to_string(Mode m) {
    switch (m) {
        case Mode::StrictlyCausal: return "strictly-causal";
        case Mode::Causal: return "causal";
        case Mode::Noncausal: return "noncausal";
    }
    return "?";
}

inline Mode parse_mode(std::string_view s) {
    if (s == "sc" || s == "strictly-causal") return Mode::StrictlyCausal;
    if (s == "c" || s == "causal") return Mode::Causal;
    if (s == "nc" || s == "noncausal") return Mode::Noncausal;
    throw ValidationError("unknown mode '" + std::string(s) + "' (expected sc, causal or nc)");
}

/// Largest strategy alphabet needed for causal designs.
inline std::size_t causal_strategy_bound(const StateChannel& ch) {
    return std::min((ch.card_x() - 1) * ch.card_s() + 1, ch.card_y()) + 1;
}

/// Candidate solution for strictly causal state knowledge:
/// p(x), test channel p(u|x,s) (rows x * card_s + s) and estimator shat(u,x,y).
struct JointDesign {
    SimplexVector input_pmf;
    StochasticTable test_channel;
    EstimatorTable est;

    std::size_t card_x() const { return input_pmf.size(); }
    std::size_t card_u() const { return test_channel.cols(); }

    void validate(const StateChannel& ch, bool with_estimator = true) const {
        detail::require(input_pmf.size() == ch.card_x(), "JointDesign: input_pmf length differs from card_x");
        detail::require(test_channel.rows() == ch.card_x() * ch.card_s(),
                        "JointDesign: test channel needs card_x * card_s rows");
        detail::require(card_u() <= ch.card_s() + 2, "JointDesign: card_u exceeds card_s + 2");
        if (with_estimator)
            detail::require(est.dims() == std::vector<std::size_t>{card_u(), ch.card_x(), ch.card_y()},
                            "JointDesign: estimator must be indexed by (u, x, y)");
    }
};

/// Candidate solution for causal state knowledge: Shannon strategies v with
/// p(v), test channel p(u|v,s) (rows v * card_s + s), input map x(v,s) and
/// estimator shat(u,v,y).
struct CausalDesign {
    SimplexVector strategy_pmf;
    StochasticTable test_channel;
    std::vector<std::size_t> input_map;  // index v * card_s + s
    EstimatorTable est;

    std::size_t card_v() const { return strategy_pmf.size(); }
    std::size_t card_u() const { return test_channel.cols(); }

    void validate(const StateChannel& ch, bool with_estimator = true) const {
        detail::require(card_v() <= causal_strategy_bound(ch),
                        "CausalDesign: card_v exceeds min{(|X|-1)|S|+1, |Y|} + 1");
        detail::require(card_u() <= ch.card_s() + 2, "CausalDesign: card_u exceeds card_s + 2");
        detail::require(test_channel.rows() == card_v() * ch.card_s(),
                        "CausalDesign: test channel needs card_v * card_s rows");
        detail::require(input_map.size() == card_v() * ch.card_s(), "CausalDesign: input map needs card_v * card_s entries");
        for (auto x : input_map) detail::require(x < ch.card_x(), "CausalDesign: input map value out of range");
        if (with_estimator)
            detail::require(est.dims() == std::vector<std::size_t>{card_u(), card_v(), ch.card_y()},
                            "CausalDesign: estimator must be indexed by (u, v, y)");
    }
};

/// Candidate solution for the noncausal lower bound: p(u|s) (rows s), input
/// map x(u,s) (index u * card_s + s) and estimator shat(u,y).
struct NoncausalDesign {
    StochasticTable test_channel;
    std::vector<std::size_t> input_map;
    EstimatorTable est;

    std::size_t card_u() const { return test_channel.cols(); }

    void validate(const StateChannel& ch, bool with_estimator = true) const {
        detail::require(test_channel.rows() == ch.card_s(), "NoncausalDesign: test channel needs card_s rows");
        detail::require(input_map.size() == card_u() * ch.card_s(),
                        "NoncausalDesign: input map needs card_u * card_s entries");
        for (auto x : input_map) detail::require(x < ch.card_x(), "NoncausalDesign: input map value out of range");
        if (with_estimator)
            detail::require(est.dims() == std::vector<std::size_t>{card_u(), ch.card_y()},
                            "NoncausalDesign: estimator must be indexed by (u, y)");
    }
};

using AnyDesign = std::variant<JointDesign, CausalDesign, NoncausalDesign>;

inline Mode mode_of(const AnyDesign& d) {
    switch (d.index()) {
        case 0: return Mode::StrictlyCausal;
        case 1: return Mode::Causal;
        default: return Mode::Noncausal;
    }
}

}  // namespace cdtrade
