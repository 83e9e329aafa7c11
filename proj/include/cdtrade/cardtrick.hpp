#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "cdtrade/error.hpp"
#include "cdtrade/rng.hpp"

namespace cdtrade {

using Card = std::uint64_t;

inline std::uint64_t factorial(std::uint64_t n) {
    detail::require(n <= 20, "factorial: argument above 20 overflows 64 bits");
    std::uint64_t f = 1;
    for (std::uint64_t i = 2; i <= n; ++i) f *= i;
    return f;
}

/// Largest deck on which a K-card hand can be signalled by K-1 ordered cards: K! + K - 1.
inline std::uint64_t max_deck(std::uint64_t K) {
    detail::require(K >= 2 && K <= 20, "max_deck: K must lie in [2, 20]");
    return factorial(K) + K - 1;
}

/// Deck of N cards numbered 0..N-1, hands of K cards.
struct CardTrickInstance {
    std::uint64_t N = 0;
    std::uint64_t K = 0;

    CardTrickInstance() = default;
    CardTrickInstance(std::uint64_t n, std::uint64_t k) : N(n), K(k) {
        detail::require(K >= 2 && K <= 20, "CardTrickInstance: K must lie in [2, 20]");
        detail::require(K <= N, "CardTrickInstance: K exceeds the deck size");
        detail::require(N <= max_deck(K), "CardTrickInstance: deck larger than K! + K - 1 (" +
                                              std::to_string(max_deck(K)) + ")");
    }
};

/// Lehmer rank of `perm` among the permutations of its sorted items.
inline std::uint64_t rank_permutation(const std::vector<Card>& perm) {
    detail::require(perm.size() <= 20, "rank_permutation: more than 20 items");
    auto sorted = perm;
    std::sort(sorted.begin(), sorted.end());
    detail::require(std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end(), "rank_permutation: duplicate items");
    std::uint64_t rank = 0;
    for (std::size_t i = 0; i < perm.size(); ++i) {
        std::uint64_t smaller = 0;
        for (std::size_t j = i + 1; j < perm.size(); ++j) smaller += perm[j] < perm[i] ? 1 : 0;
        rank += smaller * factorial(perm.size() - 1 - i);
    }
    return rank;
}

/// Inverse of rank_permutation over the ascending list `items`.
inline std::vector<Card> unrank_permutation(std::uint64_t rank, std::vector<Card> items) {
    detail::require(items.size() <= 20, "unrank_permutation: more than 20 items");
    detail::require(std::is_sorted(items.begin(), items.end()) &&
                        std::adjacent_find(items.begin(), items.end()) == items.end(),
                    "unrank_permutation: items must be strictly ascending");
    detail::require(rank < factorial(items.size()), "unrank_permutation: rank out of range");
    std::vector<Card> out;
    out.reserve(items.size());
    while (!items.empty()) {
        const auto f = factorial(items.size() - 1);
        const auto k = static_cast<std::ptrdiff_t>(rank / f);
        rank %= f;
        out.push_back(items[static_cast<std::size_t>(k)]);
        items.erase(items.begin() + k);
    }
    return out;
}

struct TrickEncoding {
    Card hidden = 0;
    std::vector<Card> arrangement;  // the K-1 retained cards, in signalling order
};

namespace detail {

struct TrickIndex {
    Card hidden;
    std::vector<Card> retained;  // ascending
    std::uint64_t t;             // position of the hidden card within its residue class
};

inline std::vector<Card> checked_hand(std::uint64_t N, std::uint64_t K, std::vector<Card> hand) {
    require(hand.size() == K, "hand must hold exactly K = " + std::to_string(K) + " cards");
    std::sort(hand.begin(), hand.end());
    require(std::adjacent_find(hand.begin(), hand.end()) == hand.end(), "hand has repeated cards");
    require(hand.back() < N, "hand has a card outside 0.." + std::to_string(N - 1));
    return hand;
}

// Runs the scheme without the deck-size check.
inline TrickIndex trick_index(std::uint64_t N, std::uint64_t K, const std::vector<Card>& hand_in) {
    const auto hand = checked_hand(N, K, hand_in);
    std::uint64_t sum = 0;
    for (auto c : hand) sum += c % K;
    const auto i = static_cast<std::size_t>(sum % K);
    TrickIndex r;
    r.hidden = hand[i];
    for (std::size_t j = 0; j < hand.size(); ++j)
        if (j != i) r.retained.push_back(hand[j]);
    std::uint64_t s = 0;
    for (auto c : r.retained) s += c % K;
    s %= K;
    const std::uint64_t h = r.hidden - i;  // i retained cards lie below the hidden one
    const std::uint64_t residue = (K - s) % K;
    require(h % K == residue, "card trick: residue invariant broken");
    r.t = (h - residue) / K;
    return r;
}

}  // namespace detail

/// Picks the hidden card and the order of the K-1 retained cards.
inline TrickEncoding encode_trick(const CardTrickInstance& inst, const std::vector<Card>& hand) {
    const auto idx = detail::trick_index(inst.N, inst.K, hand);
    detail::require(idx.t < factorial(inst.K - 1), "encode_trick: hand cannot be encoded on this deck");
    return {idx.hidden, unrank_permutation(idx.t, idx.retained)};
}

/// Recovers the hidden card from the ordered retained cards.
inline Card decode_trick(const CardTrickInstance& inst, const std::vector<Card>& arrangement) {
    const std::uint64_t K = inst.K, N = inst.N;
    detail::require(arrangement.size() == K - 1, "decode_trick: arrangement must hold K - 1 cards");
    auto retained = arrangement;
    std::sort(retained.begin(), retained.end());
    detail::require(std::adjacent_find(retained.begin(), retained.end()) == retained.end(),
                    "decode_trick: repeated card in arrangement");
    detail::require(retained.back() < N, "decode_trick: card outside the deck");
    std::uint64_t s = 0;
    for (auto c : retained) s += c % K;
    s %= K;
    const std::uint64_t residue = (K - s) % K;
    const std::uint64_t t = rank_permutation(arrangement);
    const std::uint64_t h = residue + t * K;
    if (h > N - K) throw ValidationError("decode_trick: undecodable arrangement");
    // h-th smallest card outside the retained set
    Card card = h;
    for (auto c : retained) {
        if (c <= card) ++card;
        else break;
    }
    return card;
}

/// Visits all K-subsets of {0..N-1} in lexicographic order; stops early when f returns false.
template <class F>
void for_each_hand(std::uint64_t N, std::uint64_t K, F&& f) {
    if (K > N) return;
    std::vector<Card> h(K);
    std::iota(h.begin(), h.end(), Card{0});
    while (true) {
        if (!f(static_cast<const std::vector<Card>&>(h))) return;
        std::size_t i = K;
        while (i > 0 && h[i - 1] == N - K + (i - 1)) --i;
        if (i == 0) return;
        ++h[i - 1];
        for (std::size_t j = i; j < K; ++j) h[j] = h[j - 1] + 1;
    }
}

struct VerifyResult {
    std::uint64_t total = 0;
    std::uint64_t ok = 0;
    bool passed() const { return total == ok; }
};

inline bool round_trips(const CardTrickInstance& inst, const std::vector<Card>& hand) {
    try {
        const auto enc = encode_trick(inst, hand);
        if (std::find(hand.begin(), hand.end(), enc.hidden) == hand.end()) return false;
        return decode_trick(inst, enc.arrangement) == enc.hidden;
    } catch (const ValidationError&) {
        return false;
    }
}

/// Round-trips every hand of the instance.
inline VerifyResult verify_exhaustive(const CardTrickInstance& inst) {
    VerifyResult r;
    for_each_hand(inst.N, inst.K, [&](const std::vector<Card>& hand) {
        ++r.total;
        r.ok += round_trips(inst, hand) ? 1 : 0;
        return true;
    });
    return r;
}

/// Uniformly random hand (K distinct cards, ascending).
template <class G>
std::vector<Card> random_hand(G& g, std::uint64_t N, std::uint64_t K) {
    detail::require(K <= N, "random_hand: K exceeds N");
    std::vector<Card> hand;
    while (hand.size() < K) {
        const Card c = uniform_index(g, N);
        if (std::find(hand.begin(), hand.end(), c) == hand.end()) hand.push_back(c);
    }
    std::sort(hand.begin(), hand.end());
    return hand;
}

inline VerifyResult verify_random(const CardTrickInstance& inst, std::uint64_t hands, std::uint64_t seed) {
    VerifyResult r;
    auto g = make_rng(seed, {inst.N, inst.K});
    for (std::uint64_t i = 0; i < hands; ++i) {
        ++r.total;
        r.ok += round_trips(inst, random_hand(g, inst.N, inst.K)) ? 1 : 0;
    }
    return r;
}

/// Evidence that no scheme works on a deck of N = K! + K cards.
struct ImpossibilityWitness {
    std::uint64_t N = 0, K = 0;
    std::uint64_t hands = 0;         // C(N, K)
    std::uint64_t arrangements = 0;  // N (N-1) ... (N-K+2): ordered (K-1)-tuples
    std::optional<std::vector<Card>> failing_hand;  // a hand this scheme cannot encode
    std::optional<std::uint64_t> max_matching;      // largest injective hand -> arrangement assignment
    bool impossible() const {
        return hands > arrangements || (max_matching && *max_matching < hands);
    }
};

inline std::uint64_t binomial(std::uint64_t n, std::uint64_t k) {
    if (k > n) return 0;
    k = std::min(k, n - k);
    std::uint64_t r = 1;
    for (std::uint64_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

namespace detail {

// Maximum bipartite matching between hands and ordered (K-1)-subsets of each hand
// (any valid encoder is such a matching covering every hand).
inline std::uint64_t max_encoder_matching(std::uint64_t N, std::uint64_t K) {
    std::vector<std::vector<Card>> hands;
    for_each_hand(N, K, [&](const std::vector<Card>& h) {
        hands.push_back(h);
        return true;
    });
    auto arr_id = [&](const std::vector<Card>& a) {
        std::uint64_t id = 0;
        for (auto c : a) id = id * N + c;
        return id;
    };
    std::vector<std::vector<std::uint64_t>> adj(hands.size());
    std::vector<std::uint64_t> ids;
    for (std::size_t h = 0; h < hands.size(); ++h)
        for (std::size_t drop = 0; drop < K; ++drop) {
            std::vector<Card> rest;
            for (std::size_t j = 0; j < K; ++j)
                if (j != drop) rest.push_back(hands[h][j]);
            const auto f = factorial(K - 1);
            for (std::uint64_t t = 0; t < f; ++t) {
                const auto id = arr_id(unrank_permutation(t, rest));
                adj[h].push_back(id);
                ids.push_back(id);
            }
        }
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
    for (auto& row : adj)
        for (auto& id : row) id = static_cast<std::uint64_t>(std::lower_bound(ids.begin(), ids.end(), id) - ids.begin());
    constexpr std::uint64_t kNone = ~std::uint64_t{0};
    std::vector<std::uint64_t> owner(ids.size(), kNone);
    std::vector<std::uint64_t> seen(ids.size(), kNone);
    // Kuhn's augmenting paths, iterative
    std::uint64_t matched = 0;
    for (std::size_t root = 0; root < hands.size(); ++root) {
        struct Frame {
            std::size_t hand, next;
        };
        std::vector<Frame> stack{{root, 0}};
        std::vector<std::uint64_t> via;  // arrangement taken at each stack level
        bool found = false;
        while (!stack.empty() && !found) {
            auto& fr = stack.back();
            if (fr.next == adj[fr.hand].size()) {
                stack.pop_back();
                if (!via.empty()) via.pop_back();
                continue;
            }
            const auto a = adj[fr.hand][fr.next++];
            if (seen[a] == root) continue;
            seen[a] = root;
            if (owner[a] == kNone) {
                via.push_back(a);
                found = true;
            } else {
                via.push_back(a);
                stack.push_back({static_cast<std::size_t>(owner[a]), 0});
            }
        }
        if (!found) continue;
        // stack[i] takes via[i]
        for (std::size_t i = 0; i < stack.size(); ++i) owner[via[i]] = stack[i].hand;
        ++matched;
    }
    return matched;
}

}  // namespace detail

/// Runs this scheme on a deck one card larger than max_deck(K), looking for a
/// hand it cannot encode, and compares hand and arrangement counts. With
/// `matching_limit` hands or fewer, also solves the bipartite matching that
/// any scheme would have to provide.
inline ImpossibilityWitness find_impossibility_witness(std::uint64_t K, std::uint64_t matching_limit = 5000) {
    const std::uint64_t N = max_deck(K) + 1;
    ImpossibilityWitness w;
    w.N = N;
    w.K = K;
    w.hands = binomial(N, K);
    w.arrangements = 1;
    for (std::uint64_t i = 0; i + 1 < K; ++i) w.arrangements *= N - i;
    const auto limit = factorial(K - 1);
    for_each_hand(N, K, [&](const std::vector<Card>& hand) {
        if (detail::trick_index(N, K, hand).t >= limit) {
            w.failing_hand = hand;
            return false;
        }
        return true;
    });
    if (w.hands <= matching_limit) w.max_matching = detail::max_encoder_matching(N, K);
    return w;
}

}  // namespace cdtrade
