#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <vector>

#include "cdtrade/cdtrade.hpp"

using namespace cdtrade;

TEST(CardTrick, MaxDeck) {
    EXPECT_EQ(max_deck(2), 3u);
    EXPECT_EQ(max_deck(4), 27u);
    EXPECT_EQ(max_deck(5), 124u);
    EXPECT_THROW(max_deck(1), ValidationError);
    EXPECT_THROW(max_deck(21), ValidationError);
    EXPECT_THROW(CardTrickInstance(28, 4), ValidationError);
    EXPECT_THROW(CardTrickInstance(3, 4), ValidationError);
}

TEST(CardTrick, RankUnrank) {
    EXPECT_EQ(rank_permutation({0, 1, 2}), 0u);
    EXPECT_EQ(unrank_permutation(5, {0, 1, 2}), (std::vector<Card>{2, 1, 0}));
    std::vector<Card> items{3, 8, 11, 20};
    std::vector<std::vector<Card>> seen;
    for (std::uint64_t t = 0; t < 24; ++t) {
        const auto p = unrank_permutation(t, items);
        EXPECT_EQ(rank_permutation(p), t);
        seen.push_back(p);
    }
    // all 24 distinct and in lexicographic order
    EXPECT_TRUE(std::is_sorted(seen.begin(), seen.end()));
    EXPECT_EQ(std::adjacent_find(seen.begin(), seen.end()), seen.end());
    auto perm = items;
    std::uint64_t t = 0;
    do EXPECT_EQ(rank_permutation(perm), t++);
    while (std::next_permutation(perm.begin(), perm.end()));
    EXPECT_THROW(rank_permutation({1, 1}), ValidationError);
    EXPECT_THROW(unrank_permutation(6, {0, 1, 2}), ValidationError);
    EXPECT_THROW(unrank_permutation(0, {2, 1}), ValidationError);
}

TEST(CardTrick, WorkedExamples) {
    const CardTrickInstance inst(3, 2);
    auto a = encode_trick(inst, {0, 1});
    EXPECT_EQ(a.hidden, 1u);
    EXPECT_EQ(a.arrangement, (std::vector<Card>{0}));
    EXPECT_EQ(decode_trick(inst, a.arrangement), 1u);
    auto b = encode_trick(inst, {1, 2});
    EXPECT_EQ(b.hidden, 2u);
    EXPECT_EQ(b.arrangement, (std::vector<Card>{1}));
    EXPECT_EQ(decode_trick(inst, {1}), 2u);
}

TEST(CardTrick, RejectsBadHands) {
    const CardTrickInstance inst(8, 3);
    EXPECT_THROW(encode_trick(inst, {0, 1}), ValidationError);
    EXPECT_THROW(encode_trick(inst, {0, 1, 1}), ValidationError);
    EXPECT_THROW(encode_trick(inst, {0, 1, 8}), ValidationError);
    EXPECT_THROW(decode_trick(inst, {0, 0}), ValidationError);
    EXPECT_THROW(decode_trick(inst, {0}), ValidationError);
}

TEST(CardTrick, ExhaustiveRoundTrips) {
    for (auto [N, K, total] : std::vector<std::tuple<std::uint64_t, std::uint64_t, std::uint64_t>>{
             {3, 2, 3}, {8, 3, 56}, {27, 4, 17550}}) {
        const auto r = verify_exhaustive(CardTrickInstance(N, K));
        EXPECT_EQ(r.total, total);
        EXPECT_EQ(r.ok, total);
    }
}

TEST(CardTrick, ResidueClassHasFactorialMembers) {
    for (std::uint64_t K : {2u, 3u, 4u}) {
        const auto N = max_deck(K);
        const CardTrickInstance inst(N, K);
        for_each_hand(N, K, [&](const std::vector<Card>& hand) {
            const auto enc = encode_trick(inst, hand);
            std::uint64_t s = 0;
            for (auto c : enc.arrangement) s += c;
            const std::uint64_t residue = (K - s % K) % K;
            std::uint64_t members = 0;
            for (std::uint64_t h = 0; h <= N - K; ++h) members += h % K == residue;
            EXPECT_EQ(members, factorial(K - 1));
            // the hidden card appears at the signalled position of that class
            std::vector<Card> rest;
            for (Card c = 0; c < N; ++c)
                if (std::find(enc.arrangement.begin(), enc.arrangement.end(), c) == enc.arrangement.end()) rest.push_back(c);
            const auto h = static_cast<std::uint64_t>(std::find(rest.begin(), rest.end(), enc.hidden) - rest.begin());
            EXPECT_EQ(h % K, residue);
            EXPECT_EQ(h / K, rank_permutation(enc.arrangement));
            return true;
        });
    }
}

TEST(CardTrick, RandomHandsAtTheLimit) {
    const auto r = verify_random(CardTrickInstance(124, 5), 10000, 1);
    EXPECT_EQ(r.total, 10000u);
    EXPECT_TRUE(r.passed());
    // smaller decks too, and the signalled rank stays below (K-1)!
    auto g = make_rng(7, {});
    for (int i = 0; i < 2000; ++i) {
        const std::uint64_t K = 2 + uniform_index(g, 4);
        const std::uint64_t N = K + uniform_index(g, max_deck(K) - K + 1);
        const CardTrickInstance inst(N, K);
        const auto hand = random_hand(g, N, K);
        const auto enc = encode_trick(inst, hand);
        EXPECT_LT(rank_permutation(enc.arrangement), factorial(K - 1));
        EXPECT_TRUE(std::binary_search(hand.begin(), hand.end(), enc.hidden));
        auto rest = enc.arrangement;
        rest.push_back(enc.hidden);
        std::sort(rest.begin(), rest.end());
        EXPECT_EQ(rest, hand);
        EXPECT_EQ(decode_trick(inst, enc.arrangement), enc.hidden);
    }
}

TEST(CardTrick, ImpossibilityWitness) {
    for (std::uint64_t K : {2u, 3u}) {
        const auto w = find_impossibility_witness(K);
        EXPECT_EQ(w.N, max_deck(K) + 1);
        EXPECT_TRUE(w.impossible());
        ASSERT_TRUE(w.failing_hand.has_value());
        ASSERT_TRUE(w.max_matching.has_value());
        EXPECT_LT(*w.max_matching, w.hands);
    }
    // at max_deck itself a perfect matching exists
    EXPECT_EQ(detail::max_encoder_matching(max_deck(3), 3), binomial(max_deck(3), 3));
}
