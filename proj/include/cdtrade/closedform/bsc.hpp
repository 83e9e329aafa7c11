#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>

#include "cdtrade/error.hpp"
#include "cdtrade/probcore/info.hpp"

namespace cdtrade {

/// Y = X xor S xor Z with S ~ Bern(q), Z ~ Bern(p); Hamming distortion.
struct BscParams {
    double p = 0.0, q = 0.0;

    void validate() const {
        detail::require(p >= 0.0 && p <= 0.5 && q >= 0.0 && q <= 0.5, "BscParams: p and q must lie in [0, 1/2]");
    }
};

inline constexpr double kWzBetaStep = 1e-3;

/// The binary Wyner-Ziv expression taken literally:
///
///     min_{alpha, beta in [0,1] : alpha beta + (1 - alpha) q <= D}
///         H(p) - H(p*q) + alpha (H(beta*q) - H(beta))
///
/// The bracket is nonnegative, so alpha sits at its binding value
/// (q - D)/(q - beta) for beta in [0, D] (grid step `beta_step`, beta = D
/// included), and alpha = 0 is feasible once D >= q.
///
/// The value is returned unclamped. At alpha = 0 it equals H(p) - H(p*q) <= 0,
/// which is not a valid rate; bsc_wz_rate_clamped is the clamped companion.
inline double bsc_wz_rate_raw(const BscParams& b, double D, double beta_step = kWzBetaStep) {
    b.validate();
    detail::require(D >= 0.0, "bsc_wz_rate: D must be >= 0");
    detail::require(beta_step > 0.0 && beta_step <= 1.0, "bsc_wz_rate: beta_step must lie in (0, 1]");
    const double base = binary_entropy(b.p) - binary_entropy(binary_convolution(b.p, b.q));
    if (D >= b.q) return base;
    auto term = [&](double beta) {
        const double alpha = (b.q - D) / (b.q - beta);
        return alpha * (binary_entropy(binary_convolution(beta, b.q)) - binary_entropy(beta));
    };
    double best = term(D);
    const auto steps = static_cast<std::size_t>(std::floor(D / beta_step));
    for (std::size_t k = 0; k <= steps; ++k) best = std::min(best, term(std::min(D, static_cast<double>(k) * beta_step)));
    return base + best;
}

inline double bsc_wz_rate_clamped(const BscParams& b, double D, double beta_step = kWzBetaStep) {
    return std::max(0.0, bsc_wz_rate_raw(b, D, beta_step));
}

/// 1 - H(p*q) - R_WZ(D) with the clamped R_WZ, restricted to [0, 1 - H(p*q)].
inline double bsc_cd_strictly_causal(const BscParams& b, double D, double beta_step = kWzBetaStep) {
    const double top = 1.0 - binary_entropy(binary_convolution(b.p, b.q));
    return std::max(0.0, std::min(top - bsc_wz_rate_clamped(b, D, beta_step), top));
}

/// 1 - H(p) - H(q) + H(D) for D <= q (floored at 0), 1 - H(p) beyond.
inline double bsc_cd_causal(const BscParams& b, double D) {
    b.validate();
    detail::require(D >= 0.0, "bsc_cd_causal: D must be >= 0");
    if (D > b.q) return 1.0 - binary_entropy(b.p);
    return std::max(0.0, 1.0 - binary_entropy(b.p) - binary_entropy(b.q) + binary_entropy(D));
}

namespace detail {

// Smallest D in [0, q] where f(D) >= 0, for nondecreasing f; q if none below.
template <class F>
double first_nonnegative(F&& f, double q) {
    if (f(0.0) >= 0.0) return 0.0;
    double lo = 0.0, hi = q;
    for (int i = 0; i < 200 && hi - lo > 1e-15; ++i) {
        const double mid = 0.5 * (lo + hi);
        (f(mid) >= 0.0 ? hi : lo) = mid;
    }
    return hi;
}

}  // namespace detail

/// D-intercept of bsc_cd_strictly_causal (bisection on the unclamped expression).
inline double bsc_dstar_strictly_causal(const BscParams& b, double beta_step = kWzBetaStep) {
    b.validate();
    const double top = 1.0 - binary_entropy(binary_convolution(b.p, b.q));
    return detail::first_nonnegative([&](double D) { return top - bsc_wz_rate_clamped(b, D, beta_step); }, b.q);
}

/// D-intercept of bsc_cd_causal: solves H(D) = H(p) + H(q) - 1 on [0, q].
inline double bsc_dstar_causal(const BscParams& b) {
    b.validate();
    return detail::first_nonnegative(
        [&](double D) { return 1.0 - binary_entropy(b.p) - binary_entropy(b.q) + binary_entropy(D); }, b.q);
}

}  // namespace cdtrade
