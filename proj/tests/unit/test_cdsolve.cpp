#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "cdtrade/cdtrade.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"

using namespace cdtrade;
namespace tg = cdtrade::testgen;

namespace {

SolverOptions quick(std::uint64_t seed = 1) {
    SolverOptions o;
    o.multistart = 6;
    o.lambda_count = 16;
    o.max_iterations = 1500;
    o.seed = seed;
    return o;
}

double h2(double p) { return p <= 0.0 || p >= 1.0 ? 0.0 : -p * std::log2(p) - (1 - p) * std::log2(1 - p); }

}  // namespace

// ---- design evaluation

TEST(EvaluateDesign, TrivialAuxiliaryGivesInputInformation) {
    tg::Engine g = make_rng(301, {});
    for (int i = 0; i < 20; ++i) {
        const auto ch = tg::channel(g, 2, 2, 3);
        JointDesign d{SimplexVector(tg::pmf(g, 2)), StochasticTable::uniform(4, 1), EstimatorTable::constant({1, 2, 3}, 0)};
        const auto v = evaluate_design(ch, DistortionTable::hamming(2), d);
        const auto j = assemble_joint(ch, d);
        EXPECT_NEAR(v.rate, mutual_information(j, {axis::kX}, {axis::kY}), 1e-12);
    }
}

TEST(EvaluateDesign, StateDescriptionOnBsc) {
    const auto ch = make_bsc_channel(0.25, 0.25);
    const auto v = evaluate_design(ch, DistortionTable::hamming(2), state_description_design(ch, false));
    EXPECT_NEAR(v.rate, 1.0 - 2.0 * h2(0.25), 1e-12);
    EXPECT_NEAR(v.rate, -0.622556248918, 1e-11);
    EXPECT_EQ(v.distortion, 0.0);
}

TEST(EvaluateDesign, CausalWithIdentityStrategiesMatchesStrictlyCausal) {
    tg::Engine g = make_rng(302, {});
    for (int i = 0; i < 30; ++i) {
        const auto ch = tg::channel(g, 2, 2, 2);
        const auto sc = tg::joint_design(g, ch, 3);
        CausalDesign c{sc.input_pmf, sc.test_channel, {0, 0, 1, 1}, sc.est};
        const auto d = DistortionTable::hamming(2);
        const auto a = evaluate_design(ch, d, sc);
        const auto b = evaluate_design(ch, d, c);
        EXPECT_NEAR(a.rate, b.rate, 1e-12);
        EXPECT_NEAR(a.distortion, b.distortion, 1e-12);
    }
}

TEST(EvaluateDesign, ModeMismatchRejected) {
    const auto ch = make_bsc_channel(0.1, 0.2);
    AnyDesign d = state_description_design(ch, false);
    EXPECT_THROW(evaluate_design(ch, DistortionTable::hamming(2), d, Mode::Causal), ValidationError);
}

// ---- Shannon expansion

TEST(ShannonExpand, BinaryStrategiesInOrder) {
    const auto ch = make_bsc_channel(0.1, 0.3);
    const auto e = shannon_expand(ch);
    ASSERT_EQ(e.card_x(), 4u);
    // v = (x(s=0), x(s=1)) read in base 2: 00 constant 0, 01 identity, 10 complement, 11 constant 1
    const std::size_t table[4][2] = {{0, 0}, {0, 1}, {1, 0}, {1, 1}};
    for (std::size_t v = 0; v < 4; ++v)
        for (std::size_t s = 0; s < 2; ++s)
            for (std::size_t y = 0; y < 2; ++y) EXPECT_EQ(e.p_out(y, v, s), ch.p_out(y, table[v][s], s));
    EXPECT_EQ(e.state_pmf().vec(), ch.state_pmf().vec());
}

TEST(ShannonExpand, SizesAndCap) {
    tg::Engine g = make_rng(303, {});
    EXPECT_EQ(shannon_expand(tg::channel(g, 3, 2, 2)).card_x(), 9u);
    EXPECT_EQ(shannon_expand(tg::channel(g, 2, 3, 2)).card_x(), 8u);
    EXPECT_THROW(shannon_expand(tg::channel(g, 4, 3, 2), 32), ResourceLimitError);
}

// ---- capacities

TEST(Capacity, StateAveragedBsc) {
    for (double p : {0.0, 0.1, 0.3})
        for (double q : {0.0, 0.2, 0.5}) {
            const auto r = channel_capacity(make_bsc_channel(p, q));
            EXPECT_NEAR(r.value, 1.0 - h2(p * (1 - q) + q * (1 - p)), 1e-7) << p << " " << q;
        }
}

TEST(Capacity, LosslessExamples) {
    const auto a = lossless_feasible(make_bsc_channel(0.03, 0.2));
    EXPECT_NEAR(a.delta_star, 1.0 - h2(0.03), 1e-7);
    EXPECT_NEAR(a.h_s, 0.721928094887, 1e-11);
    EXPECT_TRUE(a.feasible);
    EXPECT_NEAR(uncertainty_reduction_rate(make_bsc_channel(0.03, 0.2)), 0.721928094887, 1e-11);

    const auto b = lossless_feasible(make_bsc_channel(0.5, 0.3));
    EXPECT_NEAR(b.delta_star, 0.0, 1e-9);
    EXPECT_FALSE(b.feasible);
    EXPECT_NEAR(uncertainty_reduction_rate(make_bsc_channel(0.5, 0.3)), 0.0, 1e-9);

    const auto c = lossless_feasible(xor_channel(0.3));
    EXPECT_NEAR(c.delta_star, 1.0, 1e-7);
    EXPECT_TRUE(c.feasible);

    EXPECT_EQ(uncertainty_reduction_rate(make_bsc_channel(0.1, 0.0)), 0.0);
}

TEST(Capacity, DeltaStarAgainstGrid) {
    // Delta* = max over p(x) of I(X,S;Y); a fine grid can only come close from below
    tg::Engine g = make_rng(304, {});
    for (int i = 0; i < 10; ++i) {
        const auto ch = tg::channel(g, 2, 2, 3);
        const double ds = lossless_feasible(ch).delta_star;
        double best = -1.0;
        for (int k = 0; k <= 1000; ++k) {
            JointDesign d{SimplexVector({1 - k / 1000.0, k / 1000.0}), StochasticTable::uniform(4, 1),
                          EstimatorTable::constant({1, 2, 3}, 0)};
            const auto j = assemble_joint(ch, d);
            best = std::max(best, mutual_information(j, {axis::kX, axis::kS}, {axis::kY}));
        }
        EXPECT_GE(ds, best - 1e-9);
        EXPECT_LE(ds, best + 1e-5);
    }
}

TEST(Region, InterceptsAndBounds) {
    const auto ch = make_bsc_channel(0.03, 0.2);
    const auto r = rate_delta_region(ch, 100);
    ASSERT_FALSE(r.vertices.empty());
    const double hs = entropy(ch.state_pmf());
    for (const auto& v : r.vertices) {
        EXPECT_GE(v.rate, 0.0);
        EXPECT_GE(v.delta, 0.0);
        EXPECT_LE(v.delta, hs + 1e-12);
    }
    EXPECT_NEAR(r.vertices.front().delta, uncertainty_reduction_rate(ch), 1e-9);
    EXPECT_NEAR(r.vertices.back().rate, channel_capacity(ch).value, 1e-9);
    for (std::size_t i = 1; i < r.vertices.size(); ++i) {
        EXPECT_GT(r.vertices[i].rate, r.vertices[i - 1].rate);
        EXPECT_LE(r.vertices[i].delta, r.vertices[i - 1].delta + 1e-12);
    }
}

TEST(Region, PureNoiseDegenerates) {
    const auto r = rate_delta_region(make_bsc_channel(0.5, 0.3), 50);
    for (const auto& v : r.vertices) EXPECT_NEAR(v.rate, 0.0, 1e-9);
}

// ---- curve utilities

TEST(Curve, EnvelopeAndChecks) {
    std::vector<CurvePoint> c{{0.0, -0.5, {}, 0}, {0.1, 0.2, {}, 0}, {0.2, 0.25, {}, 0}, {0.15, 0.1, {}, 0}, {0.4, 0.3, {}, 0}};
    const auto e = envelope_curve(c);
    ASSERT_FALSE(e.empty());
    EXPECT_NEAR(e.dstar(), 0.1 * 0.5 / 0.7, 1e-12);  // zero crossing of the first hull edge
    EXPECT_TRUE(is_nondecreasing_concave(e));
    EXPECT_NEAR(*e.rate_at(0.3), 0.275, 1e-12);
    EXPECT_NEAR(*e.rate_at(10.0), 0.3, 1e-12);
    EXPECT_FALSE(e.rate_at(0.0).has_value());

    std::vector<CurvePoint> dip{{0, 0, {}, 0}, {1, 0.1, {}, 0}, {2, 1, {}, 0}};
    EXPECT_TRUE(find_concavity_violation(dip).has_value());
    std::vector<CurvePoint> down{{0, 1, {}, 0}, {1, 0.5, {}, 0}};
    EXPECT_TRUE(find_monotonicity_violation(down).has_value());
    EXPECT_TRUE(envelope_curve({{0.1, -1.0, {}, 0}}).empty());
}

TEST(Curve, RandomEnvelopesAreMonotoneAndConcave) {
    tg::Engine g = make_rng(305, {});
    for (int i = 0; i < 100; ++i) {
        std::vector<CurvePoint> c;
        const auto n = tg::between(g, 1, 40);
        for (std::size_t k = 0; k < n; ++k) c.push_back({tg::uniform(g, 0, 1), tg::uniform(g, -0.5, 1), {}, 0});
        const auto e = envelope_curve(c);
        if (e.empty()) continue;
        EXPECT_TRUE(is_nondecreasing_concave(e));
        // the envelope dominates every candidate it covers
        for (const auto& p : c)
            if (auto r = e.rate_at(p.distortion)) EXPECT_GE(*r, p.rate - 1e-12);
    }
}

TEST(Options, ReadAndReject) {
    const auto o = read_solver_options(KvDocument::parse_string("multistart = 3\nlambdas = 0 1 2\n"));
    EXPECT_EQ(o.multistart, 3u);
    EXPECT_EQ(o.lambda_grid(), (std::vector<double>{0, 1, 2}));
    EXPECT_THROW(read_solver_options(KvDocument::parse_string("bogus = 1\n")), ParseError);
    EXPECT_THROW(read_solver_options(KvDocument::parse_string("multistart = 0\n")), ParseError);
    SolverOptions d;
    EXPECT_EQ(d.lambda_grid().size(), 49u);
    EXPECT_EQ(d.lambda_grid().front(), 0.0);
}

// ---- solver

TEST(Solver, UnconstrainedEqualsCapacity) {
    tg::Engine g = make_rng(306, {});
    for (int i = 0; i < 4; ++i) {
        const auto ch = tg::channel(g, 2, 2, 2);
        auto o = quick(i + 1);
        o.lambdas = {0.0};
        const auto c = solve_cd_curve(ch, DistortionTable::hamming(2), Mode::StrictlyCausal, o);
        ASSERT_FALSE(c.empty());
        EXPECT_NEAR(c.max_rate(), channel_capacity(ch).value, 1e-4);
    }
}

TEST(Solver, CurvesAreMonotoneConcaveAndBelowCapacity) {
    tg::Engine g = make_rng(307, {});
    for (int i = 0; i < 4; ++i) {
        const auto ch = tg::channel(g, 2, 2, 2);
        const auto d = DistortionTable::hamming(2);
        const auto sc = solve_cd_curve(ch, d, Mode::StrictlyCausal, quick(i + 1));
        ASSERT_FALSE(sc.empty());
        EXPECT_TRUE(is_nondecreasing_concave(sc));
        EXPECT_LE(sc.max_rate(), channel_capacity(ch).value + 1e-9);

        const auto c = solve_cd_curve(ch, d, Mode::Causal, quick(i + 1));
        ASSERT_FALSE(c.empty());
        EXPECT_TRUE(is_nondecreasing_concave(c));
        EXPECT_LE(c.max_rate(), channel_capacity(shannon_expand(ch)).value + 1e-9);
        // causal knowledge never hurts
        EXPECT_LE(c.dstar(), sc.dstar() + 1e-9);
        for (double D : linear_grid(std::max(sc.dstar(), c.dstar()), 0.5, 20))
            EXPECT_GE(c.rate_at(D).value_or(-1.0), *sc.rate_at(D) - 5e-3) << "D=" << D;
    }
}

TEST(Solver, NotBeatenByGridSearch) {
    const auto ch = make_bsc_channel(0.1, 0.3);
    const auto d = DistortionTable::hamming(2);
    auto o = quick(3);
    o.card_u = 2;
    o.multistart = 10;
    o.lambda_count = 32;
    const auto curve = solve_cd_curve(ch, d, Mode::StrictlyCausal, o);
    ASSERT_FALSE(curve.empty());
    double worst = 0.0;
    for (const auto& s : oracle::binary_grid_search(ch, d, 0.05)) {
        if (s.rate < 0.0) continue;
        const double solver = curve.rate_at(s.distortion + 1e-12).value_or(-1.0);
        worst = std::max(worst, s.rate - solver);
    }
    EXPECT_LE(worst, 1e-2);
}

TEST(Solver, DstarExtremes) {
    const auto d = DistortionTable::hamming(2);
    EXPECT_NEAR(solve_dstar(make_bsc_channel(0.0, 0.25), d, Mode::StrictlyCausal, quick()), 0.0, 5e-3);
    EXPECT_NEAR(solve_dstar(make_bsc_channel(0.5, 0.25), d, Mode::StrictlyCausal, quick()), 0.25, 5e-3);
    EXPECT_NEAR(solve_dstar(xor_channel(0.2), d, Mode::StrictlyCausal, quick()), 0.0, 5e-3);
}

TEST(Solver, Deterministic) {
    const auto ch = make_bsc_channel(0.1, 0.25);
    auto o = quick(9);
    const auto a = solve_cd_curve(ch, DistortionTable::hamming(2), Mode::StrictlyCausal, o);
    o.threads = 3;
    const auto b = solve_cd_curve(ch, DistortionTable::hamming(2), Mode::StrictlyCausal, o);
    ASSERT_EQ(a.points.size(), b.points.size());
    for (std::size_t i = 0; i < a.points.size(); ++i) {
        EXPECT_EQ(a.points[i].distortion, b.points[i].distortion);
        EXPECT_EQ(a.points[i].rate, b.points[i].rate);
    }
}

TEST(Solver, RejectsBadInput) {
    auto o = quick();
    o.multistart = 0;
    EXPECT_THROW(solve_cd_curve(make_bsc_channel(0.1, 0.2), DistortionTable::hamming(2), Mode::StrictlyCausal, o),
                 ValidationError);
    EXPECT_THROW(solve_cd_curve(make_bsc_channel(0.1, 0.2), DistortionTable::hamming(3), Mode::StrictlyCausal, quick()),
                 ValidationError);
}

TEST(NoncausalBound, Examples) {
    const auto d = DistortionTable::hamming(2);
    const double inf = std::numeric_limits<double>::infinity();
    EXPECT_NEAR(noncausal_lower_bound(make_bsc_channel(0.1, 0.3), d, inf, 1, quick()), 0.0, 1e-9);
    const auto inj = xor_channel(0.2);
    EXPECT_NEAR(noncausal_lower_bound(inj, d, 0.0, 2, quick()), channel_capacity(inj).value, 5e-3);
    const auto ch = make_bsc_channel(0.1, 0.3);
    auto o = quick();
    o.lambdas = {0.0};
    const double sc = solve_cd_curve(ch, d, Mode::StrictlyCausal, o).max_rate();
    EXPECT_GE(noncausal_lower_bound(ch, d, inf, 4, quick()), sc - 5e-3);
}
