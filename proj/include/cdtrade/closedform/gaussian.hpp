#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <string_view>

#include "cdtrade/error.hpp"
#include "cdtrade/probcore/info.hpp"

namespace cdtrade {

/// Y = X + S + Z with power constraint P, S ~ N(0, Q), Z ~ N(0, N); squared error.
struct GaussianParams {
    double P = 0.0, Q = 0.0, N = 0.0;

    void validate() const {
        detail::require(std::isfinite(P) && std::isfinite(Q) && std::isfinite(N) && P >= 0.0 && Q >= 0.0 && N >= 0.0,
                        "GaussianParams: P, Q, N must be finite and >= 0");
    }
};

enum class GaussianMode { StrictlyCausal, Causal, Oblivious };

inline GaussianMode parse_gaussian_mode(std::string_view s) {
    if (s == "sc" || s == "strictly-causal") return GaussianMode::StrictlyCausal;
    if (s == "c" || s == "causal") return GaussianMode::Causal;
    if (s == "oblivious" || s == "none") return GaussianMode::Oblivious;
    throw ValidationError("unknown Gaussian mode '" + std::string(s) + "' (expected sc, causal or oblivious)");
}

namespace detail {
inline double safe_ratio(double num, double den) { return den > 0.0 ? num / den : 0.0; }
}  // namespace detail

/// Minimum state-estimation distortion D*. A zero denominator yields 0.
inline double gaussian_dstar(const GaussianParams& g, GaussianMode mode) {
    g.validate();
    const double qn = g.Q * g.N;
    switch (mode) {
        case GaussianMode::StrictlyCausal: return detail::safe_ratio(qn, g.P + g.Q + g.N);
        case GaussianMode::Causal: {
            const double a = std::sqrt(g.P) + std::sqrt(g.Q);
            return detail::safe_ratio(qn, a * a + g.N);
        }
        case GaussianMode::Oblivious: return detail::safe_ratio(qn, g.Q + g.N);
    }
    return 0.0;
}

/// Wyner-Ziv distortion-rate function (QN/(Q+N)) 2^{-2R}.
inline double gaussian_wz_distortion_rate(double Q, double N, double R) {
    detail::require(std::isfinite(Q) && std::isfinite(N) && Q >= 0.0 && N >= 0.0, "gaussian_wz_distortion_rate: Q, N must be >= 0");
    detail::require(R >= 0.0, "gaussian_wz_distortion_rate: R must be >= 0");
    return detail::safe_ratio(Q * N, Q + N) * std::exp2(-2.0 * R);
}

/// Strictly causal capacity-distortion function: 0 below QN/(P+Q+N), then
/// C(((P+Q+N)D - QN)/(QN)) up to QN/(Q+N), then C(P/(Q+N)).
///
/// N = 0 follows the noiseless channel Y = X + S, whose capacity C(P/Q) does not
/// depend on D (and is infinite only when Q = 0 as well).
inline double gaussian_cd_strictly_causal(const GaussianParams& g, double D) {
    g.validate();
    detail::require(D >= 0.0, "gaussian_cd_strictly_causal: D must be >= 0");
    const double inf = std::numeric_limits<double>::infinity();
    if (g.N == 0.0) return g.Q > 0.0 ? gaussian_capacity_fn(g.P / g.Q) : (g.P > 0.0 ? inf : 0.0);
    const double lo = gaussian_dstar(g, GaussianMode::StrictlyCausal);
    const double hi = gaussian_dstar(g, GaussianMode::Oblivious);
    if (D >= hi) return gaussian_capacity_fn(g.P / (g.Q + g.N));
    if (D < lo) return 0.0;
    const double qn = g.Q * g.N;
    return gaussian_capacity_fn(std::max(0.0, ((g.P + g.Q + g.N) * D - qn) / qn));
}

}  // namespace cdtrade
