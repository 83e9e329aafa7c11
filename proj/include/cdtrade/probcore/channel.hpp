#pragma once

#include <cstddef>
#include <cstdio>
#include <functional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "cdtrade/error.hpp"
#include "cdtrade/probcore/kv_text.hpp"
#include "cdtrade/probcore/simplex.hpp"

namespace cdtrade {

/// A discrete memoryless channel p(y|x,s) with i.i.d. state S ~ p(s).
///
/// Transition rows are ordered x-major, s-minor: row index x * card_s + s.
class StateChannel {
public:
    StateChannel() = default;

    StateChannel(std::size_t card_x, std::size_t card_s, std::size_t card_y, SimplexVector state_pmf,
                 StochasticTable transition)
        : card_x_(card_x), card_s_(card_s), card_y_(card_y), state_(std::move(state_pmf)),
          transition_(std::move(transition)) {
        detail::require(card_x > 0 && card_s > 0 && card_y > 0, "StateChannel: alphabet sizes must be positive");
        detail::require(state_.size() == card_s, "StateChannel: state_pmf length differs from card_s");
        detail::require(transition_.rows() == card_x * card_s,
                        "StateChannel: transition needs card_x * card_s rows");
        detail::require(transition_.cols() == card_y, "StateChannel: transition rows must have card_y entries");
    }

    std::size_t card_x() const noexcept { return card_x_; }
    std::size_t card_s() const noexcept { return card_s_; }
    std::size_t card_y() const noexcept { return card_y_; }
    const SimplexVector& state_pmf() const noexcept { return state_; }
    const StochasticTable& transition() const noexcept { return transition_; }

    double p_state(std::size_t s) const { return state_[s]; }
    double p_out(std::size_t y, std::size_t x, std::size_t s) const { return transition_(x * card_s_ + s, y); }
    std::span<const double> out_row(std::size_t x, std::size_t s) const { return transition_.row(x * card_s_ + s); }

    friend bool operator==(const StateChannel&, const StateChannel&) = default;

private:
    std::size_t card_x_ = 0, card_s_ = 0, card_y_ = 0;
    SimplexVector state_;
    StochasticTable transition_;
};

/// Y = X xor S xor Z with S ~ Bern(q), Z ~ Bern(p).
inline StateChannel make_bsc_channel(double p, double q) {
    detail::require(p >= 0.0 && p <= 1.0 && q >= 0.0 && q <= 1.0, "make_bsc_channel: parameters outside [0,1]");
    std::vector<double> t;
    for (int x = 0; x < 2; ++x)
        for (int s = 0; s < 2; ++s) {
            const int clean = x ^ s;
            t.push_back(clean == 0 ? 1.0 - p : p);
            t.push_back(clean == 1 ? 1.0 - p : p);
        }
    return StateChannel(2, 2, 2, SimplexVector::bernoulli(q), StochasticTable(4, 2, std::move(t)));
}

/// Noise-free channel Y = y_map(x, s); y_map is indexed x * card_s + s.
inline StateChannel make_deterministic_channel(std::size_t card_x, SimplexVector state_pmf, std::size_t card_y,
                                               const std::vector<std::size_t>& y_map) {
    const std::size_t card_s = state_pmf.size();
    detail::require(y_map.size() == card_x * card_s, "make_deterministic_channel: y_map needs card_x * card_s entries");
    std::vector<double> t(card_x * card_s * card_y, 0.0);
    for (std::size_t r = 0; r < y_map.size(); ++r) {
        detail::require(y_map[r] < card_y, "make_deterministic_channel: output symbol out of range");
        t[r * card_y + y_map[r]] = 1.0;
    }
    return StateChannel(card_x, card_s, card_y, std::move(state_pmf),
                        StochasticTable(card_x * card_s, card_y, std::move(t)));
}

namespace detail {

inline std::string fmt_real(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace detail

/// Plain-text channel format (see KvDocument for the line grammar):
///
///     card_x = 2
///     card_s = 2
///     card_y = 2
///     state_pmf = 0.75 0.25
///     transition =
///     0.9 0.1        # x=0 s=0
///     0.1 0.9        # x=0 s=1
///     ...            # card_x * card_s rows, x-major, s-minor
inline StateChannel read_channel(const KvDocument& doc) {
    const auto cx = doc.get_size("card_x");
    const auto cs = doc.get_size("card_s");
    const auto cy = doc.get_size("card_y");
    if (cx == 0 || cs == 0 || cy == 0) throw ParseError(doc.source(), doc.entry("card_x").line, "alphabet sizes must be positive");
    auto state = doc.get_reals("state_pmf");
    if (state.size() != cs)
        throw ParseError(doc.source(), doc.entry("state_pmf").line, "state_pmf needs card_s entries");
    auto rows = doc.get_real_rows("transition", cx * cs, cy);
    try {
        return StateChannel(cx, cs, cy, SimplexVector(std::move(state)), StochasticTable(cx * cs, cy, std::move(rows)));
    } catch (const ValidationError& e) {
        throw ParseError(doc.source(), doc.entry("transition").line, e.what());
    }
}

inline StateChannel read_channel_file(const std::string& path) { return read_channel(KvDocument::parse_file(path)); }

inline void write_channel(std::ostream& out, const StateChannel& ch) {
    out << "card_x = " << ch.card_x() << "\n"
        << "card_s = " << ch.card_s() << "\n"
        << "card_y = " << ch.card_y() << "\n"
        << "state_pmf =";
    for (double v : ch.state_pmf().probs()) out << ' ' << detail::fmt_real(v);
    out << "\ntransition =\n";
    for (std::size_t r = 0; r < ch.transition().rows(); ++r) {
        const char* sep = "";
        for (double v : ch.transition().row(r)) {
            out << sep << detail::fmt_real(v);
            sep = " ";
        }
        out << "\n";
    }
}

}  // namespace cdtrade
