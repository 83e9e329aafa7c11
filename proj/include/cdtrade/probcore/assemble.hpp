#pragma once

#include <cstddef>
#include <vector>

#include "cdtrade/design.hpp"
#include "cdtrade/error.hpp"
#include "cdtrade/probcore/channel.hpp"
#include "cdtrade/probcore/joint_pmf.hpp"

namespace cdtrade {

/// Axis positions of the joints produced by assemble_joint.
namespace axis {
// strictly causal and noncausal: (U, X, S, Y)
inline constexpr std::size_t kU = 0, kX = 1, kS = 2, kY = 3;
// causal: (U, V, X, S, Y)
inline constexpr std::size_t kCU = 0, kCV = 1, kCX = 2, kCS = 3, kCY = 4;
}  // namespace axis

/// p(x) p(s) p(u|x,s) p(y|x,s) over (U, X, S, Y).
inline JointPmf assemble_joint(const StateChannel& ch, const JointDesign& design) {
    design.validate(ch, false);
    const auto cu = design.card_u(), cx = ch.card_x(), cs = ch.card_s(), cy = ch.card_y();
    std::vector<double> p(cu * cx * cs * cy, 0.0);
    for (std::size_t u = 0; u < cu; ++u)
        for (std::size_t x = 0; x < cx; ++x)
            for (std::size_t s = 0; s < cs; ++s) {
                const double w = design.input_pmf[x] * ch.p_state(s) * design.test_channel(x * cs + s, u);
                if (w == 0.0) continue;
                for (std::size_t y = 0; y < cy; ++y) p[((u * cx + x) * cs + s) * cy + y] = w * ch.p_out(y, x, s);
            }
    return JointPmf({cu, cx, cs, cy}, std::move(p));
}

/// p(v) p(s) p(u|v,s) 1{x = x(v,s)} p(y|x,s) over (U, V, X, S, Y).
inline JointPmf assemble_joint(const StateChannel& ch, const CausalDesign& design) {
    design.validate(ch, false);
    const auto cu = design.card_u(), cv = design.card_v(), cx = ch.card_x(), cs = ch.card_s(), cy = ch.card_y();
    std::vector<double> p(cu * cv * cx * cs * cy, 0.0);
    for (std::size_t u = 0; u < cu; ++u)
        for (std::size_t v = 0; v < cv; ++v)
            for (std::size_t s = 0; s < cs; ++s) {
                const std::size_t x = design.input_map[v * cs + s];
                const double w = design.strategy_pmf[v] * ch.p_state(s) * design.test_channel(v * cs + s, u);
                if (w == 0.0) continue;
                for (std::size_t y = 0; y < cy; ++y)
                    p[(((u * cv + v) * cx + x) * cs + s) * cy + y] = w * ch.p_out(y, x, s);
            }
    return JointPmf({cu, cv, cx, cs, cy}, std::move(p));
}

/// p(s) p(u|s) 1{x = x(u,s)} p(y|x,s) over (U, X, S, Y).
inline JointPmf assemble_joint(const StateChannel& ch, const NoncausalDesign& design) {
    design.validate(ch, false);
    const auto cu = design.card_u(), cx = ch.card_x(), cs = ch.card_s(), cy = ch.card_y();
    std::vector<double> p(cu * cx * cs * cy, 0.0);
    for (std::size_t u = 0; u < cu; ++u)
        for (std::size_t s = 0; s < cs; ++s) {
            const std::size_t x = design.input_map[u * cs + s];
            const double w = ch.p_state(s) * design.test_channel(s, u);
            if (w == 0.0) continue;
            for (std::size_t y = 0; y < cy; ++y) p[((u * cx + x) * cs + s) * cy + y] = w * ch.p_out(y, x, s);
        }
    return JointPmf({cu, cx, cs, cy}, std::move(p));
}

/// Dispatches on the design kind; the kind must agree with `mode`.
inline JointPmf assemble_joint(const StateChannel& ch, const AnyDesign& design, Mode mode) {
    detail::require(mode_of(design) == mode, "assemble_joint: design kind does not match mode " +
                                                 std::string(to_string(mode)));
    return std::visit([&](const auto& d) { return assemble_joint(ch, d); }, design);
}

}  // namespace cdtrade
