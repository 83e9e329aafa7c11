#pragma once

// Independent reference computations for tests: exhaustive searches that do
// not share code paths with the library routines they check.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <vector>

#include "cdtrade/cdtrade.hpp"
#include "support/generators.hpp"

namespace cdtrade::oracle {

struct BruteEstimate {
    double distortion = std::numeric_limits<double>::infinity();
    std::vector<std::size_t> table;  // lexicographically first minimizer
    std::size_t tables_checked = 0;
};

/// Enumerates every table over the conditioning axes (all axes except
/// `z_axis`, row-major) and evaluates E d directly from the joint.
inline BruteEstimate brute_force_estimator(const JointPmf& joint, std::size_t z_axis, const DistortionTable& d) {
    const auto& dims = joint.dims();
    std::vector<std::size_t> cond_dims;
    for (std::size_t a = 0; a < dims.size(); ++a)
        if (a != z_axis) cond_dims.push_back(dims[a]);
    const std::size_t ncond = JointPmf::volume(cond_dims);
    const std::size_t k = d.card_shat();

    // p(z, v) laid out as [v][z]
    std::vector<double> pzv(ncond * dims[z_axis], 0.0);
    std::vector<std::size_t> digits(dims.size());
    for (std::size_t f = 0; f < joint.size(); ++f) {
        joint.unflatten(f, digits);
        std::size_t v = 0;
        for (std::size_t a = 0; a < dims.size(); ++a)
            if (a != z_axis) v = v * dims[a] + digits[a];
        pzv[v * dims[z_axis] + digits[z_axis]] += joint.probs()[f];
    }

    BruteEstimate best;
    std::vector<std::size_t> table(ncond, 0);
    while (true) {
        double total = 0.0;
        for (std::size_t v = 0; v < ncond; ++v)
            for (std::size_t z = 0; z < dims[z_axis]; ++z) total += pzv[v * dims[z_axis] + z] * d(z, table[v]);
        ++best.tables_checked;
        if (total < best.distortion - 1e-13) {
            best.distortion = total;
            best.table = table;
        }
        // odometer with the last tuple fastest, so visiting order is lexicographic
        std::size_t pos = ncond;
        while (pos > 0 && ++table[pos - 1] == k) table[--pos] = 0;
        if (pos == 0) break;
    }
    return best;
}

/// Random Markov chain Z -> V -> W as a joint over (Z, V, W).
inline JointPmf markov_chain(testgen::Engine& g, std::size_t cz, std::size_t cv, std::size_t cw) {
    const auto pz = testgen::pmf(g, cz, true);
    const auto pv = testgen::table(g, cz, cv, true);
    const auto pw = testgen::table(g, cv, cw, true);
    std::vector<double> p(cz * cv * cw);
    for (std::size_t z = 0; z < cz; ++z)
        for (std::size_t v = 0; v < cv; ++v)
            for (std::size_t w = 0; w < cw; ++w) p[(z * cv + v) * cw + w] = pz[z] * pv(z, v) * pw(v, w);
    return JointPmf({cz, cv, cw}, std::move(p));
}

/// Estimator comparison on a Markov chain Z -> V -> W: best V-only and best
/// (V, W) estimators, both by exhaustive enumeration.
struct DataProcessing {
    double v_only = 0.0;
    double v_and_w = 0.0;
};

inline DataProcessing data_processing_check(const JointPmf& zvw, const DistortionTable& d) {
    return {brute_force_estimator(zvw.marginal({0, 1}), 0, d).distortion, brute_force_estimator(zvw, 0, d).distortion};
}


/// Every strictly causal design of a binary channel with |U| = 2 whose
/// probabilities lie on a grid of the given step, scored with the best
/// estimator. Returns (distortion, rate) pairs; computed from scratch without
/// the library's joint assembly or information routines.
struct GridDesignScore {
    double distortion;
    double rate;
};

inline std::vector<GridDesignScore> binary_grid_search(const StateChannel& ch, const DistortionTable& d, double step) {
    const int steps = static_cast<int>(std::lround(1.0 / step));
    auto lg = [](double v) { return v > 0.0 ? std::log2(v) : 0.0; };
    auto h = [&](const double* p, std::size_t n) {
        double r = 0.0;
        for (std::size_t i = 0; i < n; ++i) r -= p[i] * lg(p[i]);
        return r;
    };
    std::vector<GridDesignScore> out;
    out.reserve(static_cast<std::size_t>(std::pow(steps + 1, 5)));
    double q[4];  // p(u=0 | x, s), rows x * 2 + s
    std::vector<int> c(5, 0);
    while (true) {
        const double px1 = c[0] * step;
        for (int r = 0; r < 4; ++r) q[r] = c[1 + r] * step;
        // joint p(u, x, s, y)
        double j[2][2][2][2];
        for (int u = 0; u < 2; ++u)
            for (int x = 0; x < 2; ++x)
                for (int s = 0; s < 2; ++s)
                    for (int y = 0; y < 2; ++y) {
                        const double pu = u == 0 ? q[x * 2 + s] : 1.0 - q[x * 2 + s];
                        j[u][x][s][y] = (x ? px1 : 1.0 - px1) * ch.p_state(s) * pu * ch.p_out(y, x, s);
                    }
        // I(U,X;Y) - I(U,X;S) = H(Y) - H(S) + H(U,X,S) - H(U,X,Y)
        double uxy[8] = {}, uxs[8] = {}, ps[2] = {}, py[2] = {};
        double dist = 0.0;
        for (int u = 0; u < 2; ++u)
            for (int x = 0; x < 2; ++x) {
                for (int s = 0; s < 2; ++s)
                    for (int y = 0; y < 2; ++y) {
                        const double v = j[u][x][s][y];
                        uxy[(u * 2 + x) * 2 + y] += v;
                        uxs[(u * 2 + x) * 2 + s] += v;
                        ps[s] += v;
                        py[y] += v;
                    }
                for (int y = 0; y < 2; ++y) {
                    double best = std::numeric_limits<double>::infinity();
                    for (std::size_t t = 0; t < d.card_shat(); ++t) {
                        double cost = 0.0;
                        for (int s = 0; s < 2; ++s) cost += j[u][x][s][y] * d(s, t);
                        best = std::min(best, cost);
                    }
                    dist += best;
                }
            }
        out.push_back({dist, h(py, 2) - h(ps, 2) + h(uxs, 8) - h(uxy, 8)});
        std::size_t pos = 5;
        while (pos > 0 && ++c[pos - 1] > steps) c[--pos] = 0;
        if (pos == 0) break;
    }
    return out;
}

}  // namespace cdtrade::oracle
