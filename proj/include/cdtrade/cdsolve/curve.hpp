#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "cdtrade/error.hpp"

namespace cdtrade {

struct CurvePoint {
    double distortion = 0.0;
    double rate = 0.0;
    std::optional<double> lambda;   // multiplier that produced the point (solver output only)
    std::size_t restarts_used = 0;  // 0 for closed forms
};

/// Distortion-rate samples of a capacity-distortion function, sorted by distortion.
/// The first point sits at the minimum distortion D*; beyond the last point the
/// curve is flat.
struct CdCurve {
    std::vector<CurvePoint> points;
    std::string mode;           // "strictly-causal", "causal", "noncausal", ...
    std::string kind;           // "achievable lower bound" or "closed form"
    std::string source;         // channel or preset description
    bool converged = true;      // false if any restart hit the iteration cap
    std::uint64_t seed = 0;
    std::vector<std::pair<std::string, double>> settings;

    bool empty() const noexcept { return points.empty(); }

    double dstar() const {
        detail::require(!points.empty(), "CdCurve: empty curve has no D*");
        return points.front().distortion;
    }

    double max_rate() const {
        detail::require(!points.empty(), "CdCurve: empty curve");
        double m = -std::numeric_limits<double>::infinity();
        for (const auto& p : points) m = std::max(m, p.rate);
        return m;
    }

    /// Linear interpolation between points; nullopt below D*.
    std::optional<double> rate_at(double d) const {
        if (points.empty() || d < points.front().distortion) return std::nullopt;
        for (std::size_t i = 1; i < points.size(); ++i) {
            const auto& a = points[i - 1];
            const auto& b = points[i];
            if (d <= b.distortion) {
                if (b.distortion == a.distortion) return b.rate;
                const double t = (d - a.distortion) / (b.distortion - a.distortion);
                return a.rate + t * (b.rate - a.rate);
            }
        }
        return points.back().rate;
    }
};

/// Returns a description of the first monotonicity violation, if any.
inline std::optional<std::string> find_monotonicity_violation(std::span<const CurvePoint> pts, double tol = 1e-9) {
    for (std::size_t i = 1; i < pts.size(); ++i) {
        if (pts[i].distortion < pts[i - 1].distortion)
            return "distortion decreases at point " + std::to_string(i);
        if (pts[i].rate < pts[i - 1].rate - tol) return "rate decreases at point " + std::to_string(i);
    }
    return std::nullopt;
}

/// Every interior point must lie on or above the chord of its neighbours.
inline std::optional<std::string> find_concavity_violation(std::span<const CurvePoint> pts, double tol = 1e-9) {
    for (std::size_t i = 1; i + 1 < pts.size(); ++i) {
        const auto& a = pts[i - 1];
        const auto& m = pts[i];
        const auto& b = pts[i + 1];
        const double span = b.distortion - a.distortion;
        if (span <= 0.0) continue;
        const double t = (m.distortion - a.distortion) / span;
        const double chord = a.rate + t * (b.rate - a.rate);
        if (m.rate < chord - tol) return "point " + std::to_string(i) + " lies below the chord of its neighbours";
    }
    return std::nullopt;
}

inline bool is_nondecreasing_concave(std::span<const CurvePoint> pts, double tol = 1e-9) {
    return !find_monotonicity_violation(pts, tol) && !find_concavity_violation(pts, tol);
}

inline bool is_nondecreasing_concave(const CdCurve& c, double tol = 1e-9) { return is_nondecreasing_concave(c.points, tol); }

/// Samples `curve` on `grid` (values below D* are skipped).
inline std::vector<CurvePoint> sample_curve(const CdCurve& curve, std::span<const double> grid) {
    std::vector<CurvePoint> out;
    for (double d : grid)
        if (auto r = curve.rate_at(d)) out.push_back({d, *r, std::nullopt, 0});
    return out;
}

/// n equally spaced values on [lo, hi].
inline std::vector<double> linear_grid(double lo, double hi, std::size_t n) {
    detail::require(n >= 2 && hi >= lo, "linear_grid: need n >= 2 and hi >= lo");
    std::vector<double> g(n);
    for (std::size_t i = 0; i < n; ++i) g[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
    g.back() = hi;
    return g;
}

namespace detail {

// Upper concave hull of (distortion, rate) candidates, left part up to the
// (leftmost) maximum-rate vertex.
inline std::vector<CurvePoint> upper_hull(std::vector<CurvePoint> c) {
    std::sort(c.begin(), c.end(), [](const CurvePoint& a, const CurvePoint& b) {
        if (a.distortion != b.distortion) return a.distortion < b.distortion;
        return a.rate > b.rate;
    });
    std::vector<CurvePoint> hull;
    for (const auto& p : c) {
        if (!hull.empty() && hull.back().distortion == p.distortion) continue;  // keep the best rate per D
        while (hull.size() >= 2) {
            const auto& o = hull[hull.size() - 2];
            const auto& a = hull.back();
            // drop `a` when it is not strictly above segment o -> p
            const double cross = (a.distortion - o.distortion) * (p.rate - o.rate) -
                                 (a.rate - o.rate) * (p.distortion - o.distortion);
            if (cross >= 0.0) hull.pop_back();
            else break;
        }
        hull.push_back(p);
    }
    std::size_t top = 0;
    for (std::size_t i = 1; i < hull.size(); ++i)
        if (hull[i].rate > hull[top].rate) top = i;
    hull.resize(top + 1);
    return hull;
}

}  // namespace detail

/// Builds the curve from achievable candidates: takes the upper concave
/// envelope, then starts it at the smallest distortion whose envelope rate
/// reaches zero (or the best rate, if that is within `rate_tolerance` below zero).
inline CdCurve envelope_curve(std::vector<CurvePoint> candidates, double rate_tolerance = 1e-6) {
    detail::require(!candidates.empty(), "envelope_curve: no candidates");
    for (const auto& c : candidates)
        detail::require(std::isfinite(c.distortion) && std::isfinite(c.rate), "envelope_curve: non-finite candidate");
    auto hull = detail::upper_hull(std::move(candidates));
    CdCurve out;
    const double best = hull.back().rate;
    if (best < -rate_tolerance) return out;  // no point with nonnegative rate
    const double level = std::min(0.0, best);
    std::size_t first = 0;
    while (first < hull.size() && hull[first].rate < level) ++first;
    if (first > 0) {
        const auto& a = hull[first - 1];
        const auto& b = hull[first];
        const double t = (level - a.rate) / (b.rate - a.rate);
        CurvePoint start = b;
        start.distortion = a.distortion + t * (b.distortion - a.distortion);
        start.rate = level;
        if (start.distortion < b.distortion) out.points.push_back(start);
    }
    out.points.insert(out.points.end(), hull.begin() + static_cast<std::ptrdiff_t>(first), hull.end());
    return out;
}

}  // namespace cdtrade
