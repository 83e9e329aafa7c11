#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <vector>

#include "cdtrade/error.hpp"
#include "cdtrade/probcore/channel.hpp"
#include "cdtrade/probcore/info.hpp"
#include "cdtrade/probcore/simplex.hpp"

namespace cdtrade {

struct InputOptimum {
    double value = 0.0;        // objective at `input`
    double upper_bound = 0.0;  // max_x g(x) at the final iterate
    SimplexVector input;
};

namespace detail {

// F(p) = H(sum_x p_x W_x) - sum_x p_x c_x, with W given as card_x rows over Y.
inline double input_objective(const std::vector<std::vector<double>>& w, const std::vector<double>& cost,
                              const std::vector<double>& p) {
    const std::size_t cy = w.front().size();
    std::vector<double> q(cy, 0.0);
    double lin = 0.0;
    for (std::size_t x = 0; x < w.size(); ++x) {
        for (std::size_t y = 0; y < cy; ++y) q[y] += p[x] * w[x][y];
        lin += p[x] * cost[x];
    }
    return raw_entropy(q) - lin;
}

inline void input_scores(const std::vector<std::vector<double>>& w, const std::vector<double>& cost,
                         const std::vector<double>& p, std::vector<double>& g) {
    const std::size_t cy = w.front().size();
    std::vector<double> q(cy, 0.0);
    for (std::size_t x = 0; x < w.size(); ++x)
        for (std::size_t y = 0; y < cy; ++y) q[y] += p[x] * w[x][y];
    g.assign(w.size(), 0.0);
    for (std::size_t x = 0; x < w.size(); ++x) {
        double s = -cost[x];
        for (std::size_t y = 0; y < cy; ++y)
            if (w[x][y] > 0.0) s -= w[x][y] * std::log2(std::max(q[y], 1e-300));
        g[x] = s;
    }
}

// Blahut-Arimoto iteration for max_p F(p) from a given start.
inline InputOptimum blahut_arimoto(const std::vector<std::vector<double>>& w, const std::vector<double>& cost,
                                   std::vector<double> p, std::size_t max_iter = 20000, double gap = 1e-12) {
    std::vector<double> g;
    double value = input_objective(w, cost, p), ub = std::numeric_limits<double>::infinity();
    for (std::size_t it = 0; it < max_iter; ++it) {
        input_scores(w, cost, p, g);
        ub = *std::max_element(g.begin(), g.end());
        value = input_objective(w, cost, p);
        if (ub - value < gap) break;
        double z = 0.0;
        for (std::size_t x = 0; x < p.size(); ++x) {
            p[x] *= std::exp2(g[x] - ub);
            z += p[x];
        }
        for (auto& v : p) v /= z;
    }
    value = input_objective(w, cost, p);
    return {value, ub, SimplexVector(std::move(p))};
}

// Visits every composition of `steps` units over `parts` cells.
template <class F>
void for_each_composition(std::size_t parts, std::size_t steps, F&& f) {
    std::vector<std::size_t> c(parts, 0);
    c[0] = steps;
    std::vector<double> p(parts);
    while (true) {
        for (std::size_t i = 0; i < parts; ++i) p[i] = static_cast<double>(c[i]) / static_cast<double>(steps);
        f(p);
        // next composition in reverse-lexicographic order
        std::size_t i = 0;
        while (i + 1 < parts && c[i] == 0) ++i;
        if (i + 1 >= parts) return;
        const std::size_t moved = c[i];
        c[i] = 0;
        c[0] = moved - 1;
        c[i + 1] += 1;
    }
}

inline std::size_t composition_count(std::size_t parts, std::size_t steps) {
    // C(steps + parts - 1, parts - 1), saturating
    double r = 1.0;
    for (std::size_t k = 1; k < parts; ++k) r = r * static_cast<double>(steps + k) / static_cast<double>(k);
    return r > 1e15 ? static_cast<std::size_t>(1e15) : static_cast<std::size_t>(std::llround(r));
}

// Concave maximization over p(x): uniform-start ascent plus a coarse grid
// refinement for small input alphabets.
inline InputOptimum maximize_over_inputs(const std::vector<std::vector<double>>& w, const std::vector<double>& cost) {
    const std::size_t cx = w.size();
    auto best = blahut_arimoto(w, cost, std::vector<double>(cx, 1.0 / static_cast<double>(cx)));
    const std::size_t steps = cx <= 2 ? 1000 : (cx == 3 ? 60 : 12);
    if (composition_count(cx, steps) <= 200000) {
        std::vector<double> arg;
        double top = -std::numeric_limits<double>::infinity();
        for_each_composition(cx, steps, [&](const std::vector<double>& p) {
            const double v = input_objective(w, cost, p);
            if (v > top) {
                top = v;
                arg = p;
            }
        });
        if (top > best.value) {
            // nudge off the boundary so the multiplicative update can move every coordinate
            for (auto& v : arg) v = 0.999 * v + 0.001 / static_cast<double>(cx);
            auto refined = blahut_arimoto(w, cost, arg);
            if (refined.value > best.value) best = std::move(refined);
        }
    }
    return best;
}

// W_x(y) = sum_s p(s) p(y|x,s)
inline std::vector<std::vector<double>> state_averaged_rows(const StateChannel& ch) {
    std::vector<std::vector<double>> w(ch.card_x(), std::vector<double>(ch.card_y(), 0.0));
    for (std::size_t x = 0; x < ch.card_x(); ++x)
        for (std::size_t s = 0; s < ch.card_s(); ++s)
            for (std::size_t y = 0; y < ch.card_y(); ++y) w[x][y] += ch.p_state(s) * ch.p_out(y, x, s);
    return w;
}

}  // namespace detail

/// max_{p(x)} I(X;Y), the state-oblivious capacity of the averaged channel.
inline InputOptimum channel_capacity(const StateChannel& ch) {
    auto w = detail::state_averaged_rows(ch);
    std::vector<double> cost(ch.card_x());
    for (std::size_t x = 0; x < ch.card_x(); ++x) cost[x] = detail::raw_entropy(w[x]);
    return detail::maximize_over_inputs(w, cost);
}

/// max_{p(x)} I(X,S;Y) with X independent of S.
inline InputOptimum max_state_input_information(const StateChannel& ch) {
    auto w = detail::state_averaged_rows(ch);
    std::vector<double> cost(ch.card_x(), 0.0);
    for (std::size_t x = 0; x < ch.card_x(); ++x)
        for (std::size_t s = 0; s < ch.card_s(); ++s) cost[x] += ch.p_state(s) * detail::raw_entropy(ch.out_row(x, s));
    return detail::maximize_over_inputs(w, cost);
}

struct LosslessResult {
    double delta_star = 0.0;
    double h_s = 0.0;
    bool feasible = false;
};

/// Lossless state communication test: H(S) < max_{p(x)} I(X,S;Y).
inline LosslessResult lossless_feasible(const StateChannel& ch) {
    LosslessResult r;
    r.delta_star = max_state_input_information(ch).value;
    r.h_s = entropy(ch.state_pmf());
    r.feasible = r.h_s < r.delta_star;
    return r;
}

/// min{H(S), Delta*}.
inline double uncertainty_reduction_rate(const StateChannel& ch) {
    const auto r = lossless_feasible(ch);
    return std::max(0.0, std::min(r.h_s, r.delta_star));
}

/// Upper-right boundary of the (R, Delta) region, as a staircase of vertices sorted by R.
struct TradeoffRegion {
    struct Vertex {
        double rate;
        double delta;
    };
    std::vector<Vertex> vertices;
    std::size_t resolution = 0;
};

/// Union over p(x) of {R <= I(X;Y), Delta <= H(S), R + Delta <= I(X,S;Y)},
/// evaluated on a composition grid of p(x) with step 1/resolution.
inline TradeoffRegion rate_delta_region(const StateChannel& ch, std::size_t resolution = 200,
                                        std::size_t max_points = 200000) {
    detail::require(resolution >= 1, "rate_delta_region: resolution must be >= 1");
    const std::size_t cx = ch.card_x();
    if (detail::composition_count(cx, resolution) > max_points)
        throw ResourceLimitError("rate_delta_region: p(x) grid has more than " + std::to_string(max_points) +
                                 " points; lower the resolution");
    const auto w = detail::state_averaged_rows(ch);
    std::vector<double> h_w(cx), h_cond(cx, 0.0);
    for (std::size_t x = 0; x < cx; ++x) {
        h_w[x] = detail::raw_entropy(w[x]);
        for (std::size_t s = 0; s < ch.card_s(); ++s) h_cond[x] += ch.p_state(s) * detail::raw_entropy(ch.out_row(x, s));
    }
    const double hs = entropy(ch.state_pmf());

    struct Bounds {
        double a, c;  // I(X;Y), I(X,S;Y)
    };
    std::vector<Bounds> pts;
    auto add = [&](const std::vector<double>& p) {
        std::vector<double> q(ch.card_y(), 0.0);
        double hyx = 0.0, hyxs = 0.0;
        for (std::size_t x = 0; x < cx; ++x) {
            for (std::size_t y = 0; y < q.size(); ++y) q[y] += p[x] * w[x][y];
            hyx += p[x] * h_w[x];
            hyxs += p[x] * h_cond[x];
        }
        const double hy = detail::raw_entropy(q);
        pts.push_back({std::max(0.0, hy - hyx), std::max(0.0, hy - hyxs)});
    };
    detail::for_each_composition(cx, resolution, add);
    add(channel_capacity(ch).input.vec());
    add(max_state_input_information(ch).input.vec());

    double r_max = 0.0;
    for (const auto& b : pts) r_max = std::max(r_max, b.a);

    TradeoffRegion region;
    region.resolution = resolution;
    for (std::size_t k = 0; k <= resolution; ++k) {
        const double r = r_max * static_cast<double>(k) / static_cast<double>(resolution);
        double best = 0.0;
        for (const auto& b : pts)
            if (b.a >= r - 1e-15) best = std::max(best, std::min(hs, b.c - r));
        region.vertices.push_back({r, std::max(0.0, best)});
        if (r_max == 0.0) break;
    }
    return region;
}

}  // namespace cdtrade
