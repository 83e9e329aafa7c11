#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

#include "cdtrade/error.hpp"
#include "cdtrade/probcore/joint_pmf.hpp"
#include "cdtrade/rng.hpp"

namespace cdtrade {

using Symbol = std::uint32_t;
using Sequence = std::vector<Symbol>;

/// Robust-typicality slacks: the encoder tests with epsilon_prime, the decoder
/// with the larger epsilon.
struct TypicalityParams {
    double epsilon = 0.2;
    double epsilon_prime = 0.1;

    void validate() const {
        detail::require(std::isfinite(epsilon) && std::isfinite(epsilon_prime),
                        "TypicalityParams: slacks must be finite");
        detail::require(epsilon_prime > 0.0 && epsilon_prime < epsilon,
                        "TypicalityParams: need 0 < epsilon_prime < epsilon");
    }
};

/// Membership test for the robust typical set of a fixed pmf and length n:
/// |count(a)/n - p(a)| <= eps p(a) for every symbol tuple a. Tuples with
/// p(a) = 0 must not occur.
///
/// The admissible count range of each tuple is precomputed, so a test costs one
/// pass over the sequences with early exit. Not thread-safe (scratch counts).
class TypicalityChecker {
public:
    TypicalityChecker(const JointPmf& pmf, std::size_t n, double eps) : dims_(pmf.dims()), n_(n) {
        detail::require(n > 0, "TypicalityChecker: n must be positive");
        detail::require(eps > 0.0 && std::isfinite(eps), "TypicalityChecker: eps must be positive");
        const auto& p = pmf.probs();
        lo_.resize(p.size());
        hi_.resize(p.size());
        const double nn = static_cast<double>(n);
        for (std::size_t i = 0; i < p.size(); ++i) {
            if (p[i] == 0.0) {
                lo_[i] = hi_[i] = 0;
                continue;
            }
            // tiny slack so that boundary cases decided by exact arithmetic are not lost to rounding
            const double a = nn * p[i] * (1.0 - eps), b = nn * p[i] * (1.0 + eps);
            lo_[i] = a <= 0.0 ? 0 : static_cast<std::uint32_t>(std::ceil(a - 1e-9));
            hi_[i] = static_cast<std::uint32_t>(std::min(nn, std::floor(b + 1e-9)));
        }
        counts_.assign(p.size(), 0);
    }

    std::size_t length() const noexcept { return n_; }
    std::size_t rank() const noexcept { return dims_.size(); }
    const std::vector<std::size_t>& dims() const noexcept { return dims_; }

    // Incremental use: reset(), then push() the flat tuple index of each of the
    // n positions (false means the test has already failed), then complete().
    void reset() const { std::fill(counts_.begin(), counts_.end(), 0); }
    bool push(std::size_t flat) const { return ++counts_[flat] <= hi_[flat]; }
    bool complete() const {
        for (std::size_t k = 0; k < counts_.size(); ++k)
            if (counts_[k] < lo_[k]) return false;
        return true;
    }

    /// One pointer per axis, each to n symbols.
    bool contains(std::span<const Symbol* const> seqs) const {
        detail::require(seqs.size() == dims_.size(), "is_typical: tuple arity differs from the pmf rank");
        reset();
        for (std::size_t i = 0; i < n_; ++i) {
            std::size_t idx = 0;
            for (std::size_t a = 0; a < dims_.size(); ++a) {
                const Symbol v = seqs[a][i];
                if (v >= dims_[a]) return false;
                idx = idx * dims_[a] + v;
            }
            if (!push(idx)) return false;
        }
        return complete();
    }

    bool contains(std::initializer_list<const Symbol*> seqs) const {
        return contains(std::span<const Symbol* const>(seqs.begin(), seqs.size()));
    }

private:
    std::vector<std::size_t> dims_;
    std::size_t n_;
    std::vector<std::uint32_t> lo_, hi_;
    mutable std::vector<std::uint32_t> counts_;
};

/// Robust typicality of a tuple of equal-length sequences with respect to `joint`
/// (sequence a supplies the symbols of axis a).
inline bool is_typical(const std::vector<Sequence>& seqs, const JointPmf& joint, double eps) {
    detail::require(!seqs.empty(), "is_typical: no sequences");
    const std::size_t n = seqs.front().size();
    for (const auto& s : seqs) detail::require(s.size() == n, "is_typical: sequences differ in length");
    detail::require(seqs.size() == joint.rank(), "is_typical: tuple arity differs from the pmf rank");
    TypicalityChecker chk(joint, n, eps);
    std::vector<const Symbol*> ptrs;
    for (const auto& s : seqs) ptrs.push_back(s.data());
    return chk.contains(ptrs);
}

/// How a typicality search ended.
enum class SearchOutcome { Unique, Ambiguous, Empty };

struct Selection {
    std::uint64_t index = 0;
    std::uint64_t matches = 0;
    SearchOutcome outcome() const noexcept {
        return matches == 1 ? SearchOutcome::Unique : matches == 0 ? SearchOutcome::Empty : SearchOutcome::Ambiguous;
    }
};

/// Scans [0, count) in increasing order. Among the indices accepted by `pred`
/// one is chosen uniformly (reservoir sampling); if none is accepted, an index
/// is drawn uniformly from the whole range.
template <class Pred, class G>
Selection select_index(std::uint64_t count, Pred&& pred, G& g) {
    detail::require(count > 0, "select_index: empty range");
    Selection sel;
    for (std::uint64_t i = 0; i < count; ++i) {
        if (!pred(i)) continue;
        ++sel.matches;
        if (uniform_index(g, sel.matches) == 0) sel.index = i;
    }
    if (sel.matches == 0) sel.index = uniform_index(g, count);
    return sel;
}

}  // namespace cdtrade
