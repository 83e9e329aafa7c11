#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "cdtrade/cdsolve/capacity.hpp"
#include "cdtrade/error.hpp"
#include "cdtrade/probcore/channel.hpp"
#include "cdtrade/probcore/info.hpp"

namespace cdtrade {

/// Throws unless y(x, .) is one-to-one for every x; the message names the first
/// colliding triple (x, s, s').
inline void require_injective(std::size_t card_x, std::size_t card_s, const std::vector<std::size_t>& y_map) {
    detail::require(y_map.size() == card_x * card_s, "injective channel: y_map needs card_x * card_s entries");
    for (std::size_t x = 0; x < card_x; ++x)
        for (std::size_t s = 0; s < card_s; ++s)
            for (std::size_t t = s + 1; t < card_s; ++t)
                if (y_map[x * card_s + s] == y_map[x * card_s + t])
                    throw ValidationError("injectivity violated at (x, s, s') = (" + std::to_string(x) + ", " +
                                          std::to_string(s) + ", " + std::to_string(t) + ")");
}

/// y(x, s) of a noise-free channel; throws if some transition row is not a point mass.
inline std::vector<std::size_t> deterministic_map(const StateChannel& ch) {
    std::vector<std::size_t> m(ch.card_x() * ch.card_s());
    for (std::size_t r = 0; r < m.size(); ++r) {
        const auto row = ch.transition().row(r);
        bool found = false;
        for (std::size_t y = 0; y < row.size(); ++y)
            if (row[y] == 1.0) {
                m[r] = y;
                found = true;
            }
        detail::require(found, "deterministic_map: transition row " + std::to_string(r) + " is not a point mass");
    }
    return m;
}

/// max_{p(x)} H(Y) - H(S) for an injective deterministic channel; this is the
/// capacity-distortion function for every D >= 0.
inline double injective_capacity(const StateChannel& ch, const std::vector<std::size_t>& y_map) {
    require_injective(ch.card_x(), ch.card_s(), y_map);
    detail::require(deterministic_map(ch) == y_map, "injective_capacity: channel transitions differ from y_map");
    const double hs = entropy(ch.state_pmf());
    auto w = detail::state_averaged_rows(ch);
    return detail::maximize_over_inputs(w, std::vector<double>(ch.card_x(), hs)).value;
}

inline double injective_capacity(const StateChannel& ch) { return injective_capacity(ch, deterministic_map(ch)); }

}  // namespace cdtrade
