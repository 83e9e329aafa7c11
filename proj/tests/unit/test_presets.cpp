#include <gtest/gtest.h>

#include <cmath>
#include <set>
#include <sstream>

#include "cdtrade/cdtrade.hpp"
#include "cdtrade/io/export.hpp"

using namespace cdtrade;

TEST(Presets, NamesUniqueAndComplete) {
    std::set<std::string> names;
    for (const auto& p : presets()) EXPECT_TRUE(names.insert(p.name).second) << p.name;
    for (const char* n : {"gaussian-unit", "gaussian-noiseless", "xor-noiseless", "gaussian-high-snr", "bsc-sc",
                          "bsc-causal", "lossless-feasible", "lossless-infeasible", "sim-lossless"})
        EXPECT_TRUE(names.count(n)) << n;
    EXPECT_THROW(find_preset("nope"), ValidationError);
    auto p = find_preset("bsc-sc");
    p.set("p", 0.1);
    EXPECT_EQ(p.get("p"), 0.1);
    EXPECT_THROW(p.set("zz", 1), ValidationError);
}

TEST(Presets, LosslessRatesSitInsideTheRegion) {
    const auto p = find_preset("sim-lossless");
    const auto ch = preset_channel(p);
    const auto design = preset_design(p, ch);
    const auto b = rate_budget(ch, design);
    // U = S: I(U;S|X) = H(S), I(X;Y) = 1 - H(p * q) at uniform X
    const double hs = -0.2 * std::log2(0.2) - 0.8 * std::log2(0.8);
    EXPECT_NEAR(b.i_us_given_x, hs, 1e-12);
    const double pq = 0.03 * 0.8 + 0.2 * 0.97;
    EXPECT_NEAR(b.i_xy, 1 + pq * std::log2(pq) + (1 - pq) * std::log2(1 - pq), 1e-12);
    const auto r = preset_rates(p, ch, design);
    EXPECT_LT(r.R_s, b.i_xy);
    EXPECT_GT(r.R_s_tilde, b.i_us_given_x);
    EXPECT_LT(r.R_s_tilde - r.R_s, b.i_uy_given_x);
}

TEST(Presets, OverrateDoublesTheBinRate) {
    const auto p = find_preset("sim-overrate");
    const auto ch = preset_channel(p);
    const auto design = preset_design(p, ch);
    const auto r = preset_rates(p, ch, design);
    EXPECT_NEAR(r.R_s, 2 * rate_budget(ch, design).i_xy, 1e-12);
    EXPECT_GE(r.R_s_tilde, r.R_s);
}

TEST(DesignIo, RoundTripAndDefaultEstimator) {
    const auto ch = make_bsc_channel(0.1, 0.2);
    const auto d = DistortionTable::hamming(2);
    const auto design = state_description_design(ch, false);
    std::ostringstream out;
    write_design(out, design);
    const auto back = read_design(KvDocument::parse_string(out.str()), ch, d);
    EXPECT_EQ(back.est, design.est);
    EXPECT_EQ(back.test_channel, design.test_channel);

    const auto no_est = read_design(
        KvDocument::parse_string("card_u = 2\ninput_pmf = 0.5 0.5\ntest_channel =\n1 0\n0 1\n1 0\n0 1\n"), ch, d);
    // with U = S the Bayes estimator reads u
    EXPECT_NEAR(evaluate_design(ch, d, no_est).distortion, 0.0, 1e-15);
    EXPECT_THROW(read_design(KvDocument::parse_string("card_u = 2\ninput_pmf = 0.5 0.5\ntest_channel =\n1 0\n"), ch, d),
                 ParseError);
}

TEST(Export, NumbersAreRounded) {
    EXPECT_EQ(detail::out_real(1.0 / 3.0), "0.333333333333");
    EXPECT_EQ(detail::out_real(-0.0), "0");
    EXPECT_EQ(detail::jreal(24.0).dump(), "24");
    EXPECT_EQ(detail::jreal(0.1 + 0.2).dump(), "0.3");
    EXPECT_TRUE(detail::jreal(std::nan("")).is_null());
}

TEST(Export, CurveCsvLayout) {
    const auto c = gaussian_curve({1, 1, 1}, 3);
    std::ostringstream out;
    write_curve_csv(out, c, "m.json");
    EXPECT_EQ(out.str(),
              "# manifest=m.json schema=cdtrade.curve/1\nD,C,lambda,restarts_used\n0.333333333333,0,,0\n"
              "0.416666666667,0.160964047444,,0\n0.5,0.292481250361,,0\n");
    const auto j = curve_to_json(c, "m.json");
    EXPECT_EQ(j["points"].size(), 3u);
    EXPECT_TRUE(j["points"][0]["lambda"].is_null());
}
