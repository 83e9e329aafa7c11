#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "cdtrade/design.hpp"
#include "cdtrade/error.hpp"
#include "cdtrade/estimator.hpp"
#include "cdtrade/probcore/assemble.hpp"
#include "cdtrade/probcore/channel.hpp"
#include "cdtrade/probcore/info.hpp"

namespace cdtrade {

inline constexpr std::size_t kDefaultExpansionCap = 4096;

/// Strategy v as a tuple (x_v(0), ..., x_v(card_s - 1)) in base card_x, s = 0 most significant.
inline std::size_t strategy_input(std::size_t v, std::size_t s, std::size_t card_x, std::size_t card_s) {
    for (std::size_t k = card_s - 1; k > s; --k) v /= card_x;
    return v % card_x;
}

/// Channel whose inputs are all maps S -> X: p(y|v,s) = p(y | x_v(s), s).
inline StateChannel shannon_expand(const StateChannel& ch, std::size_t cap = kDefaultExpansionCap) {
    double count = 1.0;
    for (std::size_t s = 0; s < ch.card_s(); ++s) count *= static_cast<double>(ch.card_x());
    if (count > static_cast<double>(cap))
        throw ResourceLimitError("shannon_expand: expansion too large (" + std::to_string(ch.card_x()) + "^" +
                                 std::to_string(ch.card_s()) + " strategies, cap " + std::to_string(cap) + ")");
    const auto cv = static_cast<std::size_t>(count);
    const auto cs = ch.card_s(), cy = ch.card_y();
    std::vector<double> t;
    t.reserve(cv * cs * cy);
    for (std::size_t v = 0; v < cv; ++v)
        for (std::size_t s = 0; s < cs; ++s) {
            const auto row = ch.out_row(strategy_input(v, s, ch.card_x(), cs), s);
            t.insert(t.end(), row.begin(), row.end());
        }
    return StateChannel(cv, cs, cy, ch.state_pmf(), StochasticTable(cv * cs, cy, std::move(t)));
}

/// Input map x(v, s) of the expanded alphabet, indexed v * card_s + s.
inline std::vector<std::size_t> shannon_input_map(const StateChannel& ch, std::size_t card_v) {
    std::vector<std::size_t> m(card_v * ch.card_s());
    for (std::size_t v = 0; v < card_v; ++v)
        for (std::size_t s = 0; s < ch.card_s(); ++s) m[v * ch.card_s() + s] = strategy_input(v, s, ch.card_x(), ch.card_s());
    return m;
}

struct DesignValue {
    double rate = 0.0;
    double distortion = 0.0;
};

/// Objective of the mode's single-letter expression plus the design's expected
/// distortion. No clamping: poor designs give negative rates.
inline DesignValue evaluate_design(const StateChannel& ch, const DistortionTable& d, const JointDesign& design) {
    design.validate(ch);
    const auto j = assemble_joint(ch, design);
    using namespace axis;
    DesignValue r;
    r.rate = mutual_information(j, {kU, kX}, {kY}) - mutual_information(j, {kU, kX}, {kS});
    r.distortion = expected_distortion(j.marginal({kS, kU, kX, kY}), 0, design.est, d);
    return r;
}

inline DesignValue evaluate_design(const StateChannel& ch, const DistortionTable& d, const CausalDesign& design) {
    design.validate(ch);
    const auto j = assemble_joint(ch, design);
    using namespace axis;
    DesignValue r;
    r.rate = mutual_information(j, {kCU, kCV}, {kCY}) - mutual_information(j, {kCU, kCV}, {kCS});
    r.distortion = expected_distortion(j.marginal({kCS, kCU, kCV, kCY}), 0, design.est, d);
    return r;
}

inline DesignValue evaluate_design(const StateChannel& ch, const DistortionTable& d, const NoncausalDesign& design) {
    design.validate(ch);
    const auto j = assemble_joint(ch, design);
    using namespace axis;
    DesignValue r;
    r.rate = mutual_information(j, {kU}, {kY}) - mutual_information(j, {kU}, {kS});
    r.distortion = expected_distortion(j.marginal({kS, kU, kY}), 0, design.est, d);
    return r;
}

inline DesignValue evaluate_design(const StateChannel& ch, const DistortionTable& d, const AnyDesign& design,
                                   Mode mode) {
    detail::require(mode_of(design) == mode,
                    "evaluate_design: design kind does not match mode " + std::string(to_string(mode)));
    return std::visit([&](const auto& x) { return evaluate_design(ch, d, x); }, design);
}

}  // namespace cdtrade
