#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <random>

namespace cdtrade {

/// splitmix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Hashes a seed together with a path of indices (trial, block, ...) into a
/// fresh 64-bit seed. Used so that every independent unit of work owns its own
/// generator and results do not depend on execution order.
inline std::uint64_t derive_seed(std::uint64_t seed, std::initializer_list<std::uint64_t> path) noexcept {
    std::uint64_t h = mix64(seed);
    for (auto v : path) h = mix64(h ^ mix64(v + 0x632be59bd9b4e019ULL));
    return h;
}

using Rng = std::mt19937_64;

/// Counter-based generator (splitmix64 stream). Cheap to construct, so it is
/// used where one generator per codeword is keyed by the codeword's indices.
class SplitMix64 {
public:
    using result_type = std::uint64_t;
    explicit SplitMix64(std::uint64_t state) noexcept : state_(state) {}
    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept { return ~result_type{0}; }
    result_type operator()() noexcept {
        state_ += 0x9e3779b97f4a7c15ULL;
        return mix64(state_);
    }

private:
    std::uint64_t state_;
};

inline Rng make_rng(std::uint64_t seed, std::initializer_list<std::uint64_t> path) {
    return Rng(derive_seed(seed, path));
}

// The helpers below avoid std::*_distribution so that streams are identical
// across standard library implementations (golden files depend on it).

/// Uniform double in [0, 1) with 53 random bits.
template <class G>
double uniform01(G& g) {
    return static_cast<double>(g() >> 11) * 0x1.0p-53;
}

/// Uniform index in [0, n), unbiased (rejection on the top partial block).
template <class G>
std::uint64_t uniform_index(G& g, std::uint64_t n) {
    if (n <= 1) return 0;
    const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n);
    std::uint64_t r;
    do r = g();
    while (r >= limit);
    return r % n;
}

/// Draws an index from a pmf given as a contiguous range of weights summing to 1.
template <class G, class Range>
std::size_t sample_index(G& g, const Range& probs) {
    const double r = uniform01(g);
    double acc = 0.0;
    std::size_t i = 0, last_positive = 0;
    for (double p : probs) {
        if (p > 0.0) last_positive = i;
        acc += p;
        if (r < acc) return i;
        ++i;
    }
    return last_positive;  // rounding slack
}

}  // namespace cdtrade
