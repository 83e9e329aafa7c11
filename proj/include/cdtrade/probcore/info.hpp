#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

#include "cdtrade/error.hpp"
#include "cdtrade/probcore/joint_pmf.hpp"
#include "cdtrade/probcore/simplex.hpp"

namespace cdtrade {

namespace detail {

// 0 log 0 := 0; callers guarantee p >= 0.
inline double plogp(double p) { return p > 0.0 ? p * std::log2(p) : 0.0; }

inline double raw_entropy(std::span<const double> p) {
    double h = 0.0;
    for (double v : p) h -= plogp(v);
    return std::max(h, 0.0);
}

}  // namespace detail

/// Shannon entropy in bits.
inline double entropy(const SimplexVector& p) { return detail::raw_entropy(p.probs()); }

inline double binary_entropy(double p) {
    detail::require(p >= 0.0 && p <= 1.0, "binary_entropy: argument outside [0,1]");
    return -detail::plogp(p) - detail::plogp(1.0 - p);
}

/// a * b = a(1-b) + b(1-a): crossover of two cascaded binary symmetric channels.
inline double binary_convolution(double a, double b) {
    detail::require(a >= 0.0 && a <= 1.0 && b >= 0.0 && b <= 1.0, "binary_convolution: argument outside [0,1]");
    return a * (1.0 - b) + b * (1.0 - a);
}

/// C(x) = (1/2) log2(1 + x).
inline double gaussian_capacity_fn(double x) {
    detail::require(x >= 0.0, "gaussian_capacity_fn: negative argument");
    if (std::isinf(x)) return x;
    return 0.5 * std::log2(1.0 + x);
}

/// Joint entropy of the listed axes of a joint pmf.
inline double entropy(const JointPmf& joint, std::span<const std::size_t> axes) {
    if (axes.empty()) return 0.0;
    return detail::raw_entropy(joint.marginal(axes).probs());
}

inline double entropy(const JointPmf& joint, std::initializer_list<std::size_t> axes) {
    std::vector<std::size_t> a(axes);
    return entropy(joint, std::span<const std::size_t>(a));
}

namespace detail {

inline std::vector<std::size_t> concat_axes(std::span<const std::size_t> a, std::span<const std::size_t> b) {
    std::vector<std::size_t> out(a.begin(), a.end());
    out.insert(out.end(), b.begin(), b.end());
    return out;
}

}  // namespace detail

/// I(A;B) = H(A) + H(B) - H(A,B), in bits.
inline double mutual_information(const JointPmf& joint, std::span<const std::size_t> group_a,
                                 std::span<const std::size_t> group_b) {
    detail::require(!group_a.empty() && !group_b.empty(), "mutual_information: empty group");
    const auto ab = detail::concat_axes(group_a, group_b);
    joint.check_axes(ab);  // rejects overlap and bad axes
    return entropy(joint, group_a) + entropy(joint, group_b) - entropy(joint, ab);
}

inline double mutual_information(const JointPmf& joint, std::initializer_list<std::size_t> group_a,
                                 std::initializer_list<std::size_t> group_b) {
    std::vector<std::size_t> a(group_a), b(group_b);
    return mutual_information(joint, std::span<const std::size_t>(a), std::span<const std::size_t>(b));
}

/// I(A;B|C) = H(A,C) + H(B,C) - H(A,B,C) - H(C), in bits.
inline double conditional_mutual_information(const JointPmf& joint, std::span<const std::size_t> group_a,
                                             std::span<const std::size_t> group_b,
                                             std::span<const std::size_t> given) {
    detail::require(!group_a.empty() && !group_b.empty(), "conditional_mutual_information: empty group");
    const auto ab = detail::concat_axes(group_a, group_b);
    const auto abc = detail::concat_axes(ab, given);
    joint.check_axes(abc);
    return entropy(joint, detail::concat_axes(group_a, given)) + entropy(joint, detail::concat_axes(group_b, given)) -
           entropy(joint, abc) - entropy(joint, given);
}

inline double conditional_mutual_information(const JointPmf& joint, std::initializer_list<std::size_t> group_a,
                                             std::initializer_list<std::size_t> group_b,
                                             std::initializer_list<std::size_t> given) {
    std::vector<std::size_t> a(group_a), b(group_b), c(given);
    return conditional_mutual_information(joint, std::span<const std::size_t>(a), std::span<const std::size_t>(b),
                                          std::span<const std::size_t>(c));
}

}  // namespace cdtrade
