#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "cdtrade/blockmarkov/typicality.hpp"
#include "cdtrade/design.hpp"
#include "cdtrade/error.hpp"
#include "cdtrade/probcore/channel.hpp"
#include "cdtrade/rng.hpp"

namespace cdtrade {

/// Message rate R, bin-index rate R_s and description rate R_s_tilde (bits per symbol).
struct CodeRates {
    double R = 0.0;
    double R_s = 0.0;
    double R_s_tilde = 0.0;

    void validate() const {
        detail::require(std::isfinite(R) && std::isfinite(R_s) && std::isfinite(R_s_tilde),
                        "CodeRates: rates must be finite");
        detail::require(R >= 0.0 && R_s >= 0.0, "CodeRates: rates must be >= 0");
        detail::require(R_s_tilde >= R_s, "CodeRates: need R_s_tilde >= R_s");
    }
};

/// Default limit on codeword symbols a single block may touch.
inline constexpr std::uint64_t kDefaultMemoryCap = std::uint64_t{1} << 26;

struct CodebookSizes {
    std::uint64_t messages = 1;  // 2^{nR}
    std::uint64_t bins = 1;      // 2^{nR_s}
    std::uint64_t bin_size = 1;  // 2^{n(R_s_tilde - R_s)}

    std::uint64_t descriptions() const noexcept { return bins * bin_size; }
    std::uint64_t x_words() const noexcept { return messages * bins; }

    /// x-words are stored; u-words are regenerated on demand, at most one
    /// description set per block, so that set is what is charged.
    std::uint64_t symbols(std::size_t n) const noexcept { return n * (x_words() + descriptions()); }

    CodeRates effective(std::size_t n) const {
        const double nn = static_cast<double>(n);
        return {std::log2(static_cast<double>(messages)) / nn, std::log2(static_cast<double>(bins)) / nn,
                std::log2(static_cast<double>(descriptions())) / nn};
    }
};

namespace detail {

inline std::uint64_t rounded_count(double exponent, const char* what) {
    if (exponent > 62.0) throw ResourceLimitError(std::string("codebook: 2^") + fmt_real(exponent) + " " + what +
                                                  " exceeds the 64-bit index range");
    const double v = std::round(std::exp2(exponent));
    return v < 1.0 ? 1 : static_cast<std::uint64_t>(v);
}

}  // namespace detail

/// Codebook sizes for block length n, each 2^{n rate} rounded to the nearest integer >= 1.
inline CodebookSizes codebook_sizes(std::size_t n, const CodeRates& rates) {
    detail::require(n > 0, "codebook: block length must be positive");
    rates.validate();
    const double nn = static_cast<double>(n);
    CodebookSizes s;
    s.messages = detail::rounded_count(nn * rates.R, "messages");
    s.bins = detail::rounded_count(nn * rates.R_s, "bins");
    s.bin_size = detail::rounded_count(nn * (rates.R_s_tilde - rates.R_s), "descriptions per bin");
    if (s.messages > (~std::uint64_t{0}) / s.bins || s.bins > (~std::uint64_t{0}) / s.bin_size)
        throw ResourceLimitError("codebook: index space exceeds 64 bits");
    return s;
}

/// Random codebook of one block: x-words x(m, l) i.i.d. p(x) and u-words
/// u(k | m, l) drawn symbolwise from p(u | x_i(m, l)). The u-words are not
/// stored; each is a keyed stream and regenerates identically on every call.
class BlockCodebook {
public:
    BlockCodebook(std::size_t n, CodebookSizes sizes, std::vector<Symbol> x_words, StochasticTable u_given_x,
                  std::uint64_t u_key)
        : n_(n), sizes_(sizes), x_words_(std::move(x_words)), u_given_x_(std::move(u_given_x)), u_key_(u_key) {
        detail::require(x_words_.size() == n * sizes.x_words(), "BlockCodebook: x-word table size mismatch");
    }

    std::size_t length() const noexcept { return n_; }
    const CodebookSizes& sizes() const noexcept { return sizes_; }
    std::size_t card_u() const noexcept { return u_given_x_.cols(); }

    std::uint64_t x_index(std::uint64_t m, std::uint64_t l) const noexcept { return m * sizes_.bins + l; }
    std::uint64_t bin_of(std::uint64_t k) const noexcept { return k / sizes_.bin_size; }

    const Symbol* x_word(std::uint64_t m, std::uint64_t l) const {
        detail::require(m < sizes_.messages && l < sizes_.bins, "BlockCodebook: x-word index out of range");
        return x_words_.data() + x_index(m, l) * n_;
    }

    /// Feeds u_i(k | m, l) to f(i, u_i) for i = 0, 1, ...; stops early when f
    /// returns false. Returns whether the whole word was delivered.
    template <class F>
    bool stream_u_word(std::uint64_t m, std::uint64_t l, std::uint64_t k, F&& f) const {
        detail::require(k < sizes_.descriptions(), "BlockCodebook: description index out of range");
        const Symbol* x = x_word(m, l);
        SplitMix64 g(derive_seed(u_key_, {m, l, k}));
        for (std::size_t i = 0; i < n_; ++i) {
            const auto u = static_cast<Symbol>(sample_index(g, u_given_x_.row(x[i])));
            if (!f(i, u)) return false;
        }
        return true;
    }

    Sequence u_word(std::uint64_t m, std::uint64_t l, std::uint64_t k) const {
        Sequence out(n_);
        stream_u_word(m, l, k, [&](std::size_t i, Symbol u) {
            out[i] = u;
            return true;
        });
        return out;
    }

    const std::vector<Symbol>& x_table() const noexcept { return x_words_; }

private:
    std::size_t n_;
    CodebookSizes sizes_;
    std::vector<Symbol> x_words_;
    StochasticTable u_given_x_;
    std::uint64_t u_key_;
};

/// p(u | x) = sum_s p(s) p(u | x, s).
inline StochasticTable averaged_test_channel(const StateChannel& ch, const JointDesign& design) {
    const std::size_t cx = ch.card_x(), cs = ch.card_s(), cu = design.card_u();
    std::vector<double> t(cx * cu, 0.0);
    for (std::size_t x = 0; x < cx; ++x)
        for (std::size_t s = 0; s < cs; ++s)
            for (std::size_t u = 0; u < cu; ++u) t[x * cu + u] += ch.p_state(s) * design.test_channel(x * cs + s, u);
    // absorb rounding so rows pass the simplex check
    for (std::size_t x = 0; x < cx; ++x) {
        double sum = 0.0;
        for (std::size_t u = 0; u < cu; ++u) sum += t[x * cu + u];
        for (std::size_t u = 0; u < cu; ++u) t[x * cu + u] /= sum;
    }
    return StochasticTable(cx, cu, std::move(t));
}

inline BlockCodebook build_codebook(const StateChannel& ch, const JointDesign& design, std::size_t n,
                                    const CodeRates& rates, std::uint64_t seed,
                                    std::uint64_t memory_cap = kDefaultMemoryCap) {
    design.validate(ch, false);
    const auto sizes = codebook_sizes(n, rates);
    const auto per_word = memory_cap / n;
    if (sizes.x_words() > per_word || sizes.descriptions() > per_word || sizes.symbols(n) > memory_cap) {
        const double need = static_cast<double>(n) *
                            (static_cast<double>(sizes.x_words()) + static_cast<double>(sizes.descriptions()));
        throw ResourceLimitError("codebook needs " + detail::fmt_real(need) + " symbols, above the cap of " +
                                 std::to_string(memory_cap));
    }
    std::vector<Symbol> x(n * sizes.x_words());
    auto g = make_rng(seed, {0});
    for (auto& v : x) v = static_cast<Symbol>(sample_index(g, design.input_pmf.probs()));
    return BlockCodebook(n, sizes, std::move(x), averaged_test_channel(ch, design), derive_seed(seed, {1}));
}

}  // namespace cdtrade
