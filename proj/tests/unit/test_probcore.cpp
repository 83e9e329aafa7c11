#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <sstream>
#include <vector>

#include "cdtrade/cdtrade.hpp"
#include "support/generators.hpp"

using namespace cdtrade;
namespace tg = cdtrade::testgen;

namespace {

// Brute-force oracles: walk every cell of the joint directly.
double brute_entropy(const JointPmf& j, const std::vector<std::size_t>& axes) {
    std::map<std::vector<std::size_t>, double> m;
    std::vector<std::size_t> digits(j.rank());
    for (std::size_t f = 0; f < j.size(); ++f) {
        j.unflatten(f, digits);
        std::vector<std::size_t> key;
        for (auto a : axes) key.push_back(digits[a]);
        m[key] += j.probs()[f];
    }
    double h = 0.0;
    for (const auto& [k, p] : m)
        if (p > 0.0) h -= p * std::log(p) / std::log(2.0);
    return h;
}

std::vector<std::size_t> join(std::vector<std::size_t> a, const std::vector<std::size_t>& b) {
    a.insert(a.end(), b.begin(), b.end());
    return a;
}

double brute_mi(const JointPmf& j, const std::vector<std::size_t>& a, const std::vector<std::size_t>& b) {
    return brute_entropy(j, a) + brute_entropy(j, b) - brute_entropy(j, join(a, b));
}

}  // namespace

TEST(Simplex, RejectsOutOfTolerance) {
    EXPECT_NO_THROW(SimplexVector({0.5, 0.5 + 5e-10}));
    EXPECT_THROW(SimplexVector({0.5, 0.5 + 1e-8}), ValidationError);
    EXPECT_THROW(SimplexVector({1.2, -0.2}), ValidationError);
    EXPECT_THROW(SimplexVector(std::vector<double>{}), ValidationError);
    EXPECT_THROW(StochasticTable(2, 2, {0.5, 0.5, 0.7, 0.2}), ValidationError);
}

TEST(Entropy, Examples) {
    EXPECT_NEAR(entropy(SimplexVector({0.5, 0.5})), 1.0, 1e-15);
    EXPECT_EQ(entropy(SimplexVector({1.0, 0.0})), 0.0);
    EXPECT_NEAR(entropy(SimplexVector({0.2, 0.8})), 0.721928094887, 1e-11);
    EXPECT_NEAR(binary_entropy(0.5), 1.0, 1e-15);
    EXPECT_EQ(binary_entropy(0.0), 0.0);
    EXPECT_NEAR(binary_entropy(0.25), 0.811278124459, 1e-11);
    EXPECT_THROW(binary_entropy(1.5), ValidationError);
}

TEST(Entropy, ConvolutionAndGaussianFunction) {
    EXPECT_DOUBLE_EQ(binary_convolution(0.3, 0.0), 0.3);
    EXPECT_DOUBLE_EQ(binary_convolution(0.3, 0.5), 0.5);
    EXPECT_NEAR(binary_convolution(0.1, 0.2), 0.26, 1e-15);
    EXPECT_DOUBLE_EQ(binary_convolution(0.1, 0.2), binary_convolution(0.2, 0.1));
    EXPECT_THROW(binary_convolution(-0.1, 0.2), ValidationError);
    EXPECT_EQ(gaussian_capacity_fn(0.0), 0.0);
    EXPECT_NEAR(gaussian_capacity_fn(1.0), 0.5, 1e-15);
    EXPECT_NEAR(gaussian_capacity_fn(3.0), 1.0, 1e-15);
    EXPECT_THROW(gaussian_capacity_fn(-1.0), ValidationError);
}

TEST(Entropy, BoundedByLogAlphabet) {
    tg::Engine g = make_rng(101, {});
    for (int i = 0; i < 200; ++i) {
        const auto n = tg::between(g, 1, 6);
        const double h = entropy(SimplexVector(tg::pmf(g, n, true)));
        EXPECT_GE(h, 0.0);
        EXPECT_LE(h, std::log2(double(n)) + 1e-12);
    }
}

TEST(MutualInformation, Examples) {
    JointPmf indep({2, 2}, {0.06, 0.14, 0.24, 0.56});
    EXPECT_NEAR(mutual_information(indep, {0}, {1}), 0.0, 1e-12);
    JointPmf copy({2, 2}, {0.5, 0.0, 0.0, 0.5});
    EXPECT_NEAR(mutual_information(copy, {0}, {1}), 1.0, 1e-12);
    JointPmf bsc({2, 2}, {0.45, 0.05, 0.05, 0.45});
    EXPECT_NEAR(mutual_information(bsc, {0}, {1}), 0.531004406410, 1e-11);
    EXPECT_THROW(mutual_information(bsc, {0}, {0}), ValidationError);
    EXPECT_THROW(mutual_information(bsc, {0}, {2}), ValidationError);
}

TEST(MutualInformation, AgreesWithBruteForce) {
    tg::Engine g = make_rng(102, {});
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<std::size_t> dims;
        const auto r = tg::between(g, 2, 4);
        for (std::size_t k = 0; k < r; ++k) dims.push_back(tg::between(g, 1, 4));
        const auto j = tg::joint(g, dims, trial % 2 == 0);
        std::vector<std::size_t> all(r);
        for (std::size_t k = 0; k < r; ++k) all[k] = k;
        EXPECT_NEAR(entropy(j, std::span<const std::size_t>(all)), brute_entropy(j, all), 1e-12);
        std::vector<std::size_t> a{0}, b{r - 1};
        const double mi = mutual_information(j, std::span<const std::size_t>(a), std::span<const std::size_t>(b));
        EXPECT_NEAR(mi, brute_mi(j, a, b), 1e-12);
        EXPECT_GE(mi, -1e-12);
        if (r >= 3) {
            std::vector<std::size_t> c{1};
            const double cmi = conditional_mutual_information(j, std::span<const std::size_t>(a),
                                                              std::span<const std::size_t>(b), std::span<const std::size_t>(c));
            const double oracle = brute_entropy(j, {0, 1}) + brute_entropy(j, {r - 1, 1}) - brute_entropy(j, {0, r - 1, 1}) -
                                  brute_entropy(j, {1});
            EXPECT_NEAR(cmi, oracle, 1e-12);
        }
    }
}

TEST(JointPmf, MarginalsSumAndOrder) {
    tg::Engine g = make_rng(103, {});
    const auto j = tg::joint(g, {2, 3, 4});
    const auto m = j.marginal({2, 0});
    ASSERT_EQ(m.dims(), (std::vector<std::size_t>{4, 2}));
    for (std::size_t c = 0; c < 4; ++c)
        for (std::size_t a = 0; a < 2; ++a) {
            double s = 0.0;
            for (std::size_t b = 0; b < 3; ++b) s += j.at({a, b, c});
            EXPECT_NEAR(m.at({c, a}), s, 1e-15);
        }
    EXPECT_THROW(j.marginal({0, 0}), ValidationError);
    EXPECT_THROW(JointPmf({2, 2}, {0.5, 0.5, 0.5}), ValidationError);
}

TEST(KvText, ReportsLineNumbers) {
    const std::string text =
        "# comment\n"
        "card_x = 2\n"
        "card_s = 2\n"
        "card_y = 2\n"
        "state_pmf = 0.8 0.2\n"
        "transition =\n"
        "1 0\n"
        "0 1\n"
        "0 1\n"
        "1 zero\n";
    try {
        read_channel(KvDocument::parse_string(text, "ch.txt"));
        FAIL() << "expected a parse error";
    } catch (const ParseError& e) {
        EXPECT_EQ(e.line(), 10u);
        EXPECT_NE(std::string(e.what()).find("ch.txt"), std::string::npos);
    }
    try {
        read_channel(KvDocument::parse_string("card_x = 2\ncard_x = 3\n", "dup"));
        FAIL() << "expected a parse error";
    } catch (const ParseError& e) {
        EXPECT_EQ(e.line(), 2u);
    }
    EXPECT_THROW(KvDocument::parse_file("/nonexistent/channel.txt"), std::runtime_error);
}

TEST(Channel, RoundTrip) {
    tg::Engine g = make_rng(104, {});
    for (int i = 0; i < 20; ++i) {
        const auto ch = tg::channel(g, tg::between(g, 1, 3), tg::between(g, 1, 3), tg::between(g, 1, 4));
        std::ostringstream out;
        write_channel(out, ch);
        const auto back = read_channel(KvDocument::parse_string(out.str()));
        ASSERT_EQ(back.card_x(), ch.card_x());
        ASSERT_EQ(back.card_s(), ch.card_s());
        for (std::size_t k = 0; k < ch.transition().flat().size(); ++k)
            EXPECT_NEAR(back.transition().flat()[k], ch.transition().flat()[k], 1e-15);
    }
}

TEST(Channel, Bsc) {
    const auto ch = make_bsc_channel(0.1, 0.25);
    EXPECT_DOUBLE_EQ(ch.p_out(1, 0, 0), 0.1);
    EXPECT_DOUBLE_EQ(ch.p_out(0, 1, 0), 0.1);
    EXPECT_DOUBLE_EQ(ch.p_out(0, 1, 1), 0.9);
    EXPECT_DOUBLE_EQ(ch.p_state(1), 0.25);
}

TEST(Assemble, StrictlyCausalFactorizesAndIsMarkov) {
    tg::Engine g = make_rng(105, {});
    using namespace axis;
    for (int i = 0; i < 100; ++i) {
        const auto ch = tg::channel(g, tg::between(g, 1, 3), tg::between(g, 1, 3), tg::between(g, 1, 3));
        const auto design = tg::joint_design(g, ch, tg::between(g, 1, ch.card_s() + 2));
        const auto j = assemble_joint(ch, design);
        double total = 0.0;
        for (double p : j.probs()) total += p;
        EXPECT_NEAR(total, 1.0, 1e-9);
        EXPECT_NEAR(mutual_information(j, {kX}, {kS}), 0.0, 1e-12);
        EXPECT_NEAR(conditional_mutual_information(j, {kU}, {kY}, {kX, kS}), 0.0, 1e-9);
        // I(U,X;Y) - I(U,X;S) = I(U,X,S;Y) - I(U,X,Y;S)
        const double lhs = mutual_information(j, {kU, kX}, {kY}) - mutual_information(j, {kU, kX}, {kS});
        const double rhs = mutual_information(j, {kU, kX, kS}, {kY}) - mutual_information(j, {kU, kX, kY}, {kS});
        EXPECT_NEAR(lhs, rhs, 1e-9);
    }
}

TEST(Assemble, TrivialAuxiliaryGivesXIndependentOfS) {
    const auto ch = make_bsc_channel(0.1, 0.3);
    JointDesign d{SimplexVector({0.3, 0.7}), StochasticTable::uniform(4, 1), EstimatorTable::constant({1, 2, 2}, 0)};
    const auto j = assemble_joint(ch, d);
    EXPECT_NEAR(j.at({0, 1, 1, 0}), 0.7 * 0.3 * 0.9, 1e-15);
    EXPECT_NEAR(mutual_information(j, {axis::kX}, {axis::kS}), 0.0, 1e-12);
}

TEST(Assemble, CausalXorStrategyGivesUniformInput) {
    const auto ch = make_bsc_channel(0.1, 0.3);
    // v in {0,1}, x(v,s) = v xor s
    CausalDesign d{SimplexVector::uniform(2), StochasticTable::uniform(4, 1), {0, 1, 1, 0},
                   EstimatorTable::constant({1, 2, 2}, 0)};
    const auto j = assemble_joint(ch, d);
    using namespace axis;
    const auto px = j.marginal({kCX});
    EXPECT_NEAR(px.probs()[0], 0.5, 1e-15);
    EXPECT_NEAR(mutual_information(j, {kCV}, {kCS}), 0.0, 1e-12);
    EXPECT_NEAR(conditional_mutual_information(j, {kCU, kCV}, {kCY}, {kCX, kCS}), 0.0, 1e-9);
}

TEST(Assemble, RejectsMismatchedDesign) {
    const auto ch = make_bsc_channel(0.1, 0.3);
    JointDesign d{SimplexVector::uniform(3), StochasticTable::uniform(6, 1), EstimatorTable::constant({1, 3, 2}, 0)};
    EXPECT_THROW(assemble_joint(ch, d), ValidationError);
}
