#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "cdtrade/cdsolve/curve.hpp"
#include "cdtrade/closedform/bsc.hpp"
#include "cdtrade/closedform/gaussian.hpp"
#include "cdtrade/closedform/injective.hpp"
#include "cdtrade/design.hpp"
#include "cdtrade/error.hpp"

namespace cdtrade {

namespace detail {

template <class F>
CdCurve sampled_curve(F&& f, double lo, double hi, std::size_t n, std::string mode, std::string source) {
    require(n >= 2, "closed-form curve: need at least 2 points");
    CdCurve c;
    c.kind = "closed form";
    c.mode = std::move(mode);
    c.source = std::move(source);
    for (double d : linear_grid(lo, hi, n)) c.points.push_back({d, f(d), std::nullopt, 0});
    return c;
}

inline std::string num(double v) { return fmt_real(v); }

}  // namespace detail

/// Strictly causal Gaussian curve on [D*, QN/(Q+N)]; flat beyond.
inline CdCurve gaussian_curve(const GaussianParams& g, std::size_t n = 101) {
    g.validate();
    const std::string src = "gaussian P=" + detail::num(g.P) + " Q=" + detail::num(g.Q) + " N=" + detail::num(g.N);
    if (g.N == 0.0)
        detail::require(g.Q > 0.0 || g.P == 0.0, "gaussian_curve: capacity is unbounded for N = Q = 0 and P > 0");
    const double lo = g.N == 0.0 ? 0.0 : gaussian_dstar(g, GaussianMode::StrictlyCausal);
    double hi = g.N == 0.0 ? 0.0 : gaussian_dstar(g, GaussianMode::Oblivious);
    if (hi <= lo) hi = lo + 1.0;
    return detail::sampled_curve([&](double d) { return gaussian_cd_strictly_causal(g, d); }, lo, hi, n,
                                 "strictly-causal", src);
}

/// BSC curve (mode StrictlyCausal or Causal) on [D*, q] plus a flat tail to D = 1/2.
inline CdCurve bsc_curve(const BscParams& b, Mode mode, std::size_t n = 101, double beta_step = kWzBetaStep) {
    b.validate();
    detail::require(mode != Mode::Noncausal, "bsc_curve: no closed form for the noncausal case");
    const std::string src = "bsc p=" + detail::num(b.p) + " q=" + detail::num(b.q);
    const bool sc = mode == Mode::StrictlyCausal;
    const double lo = sc ? bsc_dstar_strictly_causal(b, beta_step) : bsc_dstar_causal(b);
    auto f = [&](double d) { return sc ? bsc_cd_strictly_causal(b, d, beta_step) : bsc_cd_causal(b, d); };
    const double hi = b.q > lo ? b.q : 0.5;
    auto c = detail::sampled_curve(f, lo, hi, n, std::string(to_string(mode)), src);
    if (hi < 0.5) c.points.push_back({0.5, f(0.5), std::nullopt, 0});
    return c;
}

/// Injective deterministic channel: constant curve on [0, max d].
inline CdCurve injective_curve(const StateChannel& ch, const DistortionTable& d, std::size_t n = 101) {
    const double c = injective_capacity(ch);
    const double hi = d.max_value() > 0.0 ? d.max_value() : 1.0;
    return detail::sampled_curve([&](double) { return c; }, 0.0, hi, n, "strictly-causal", "injective deterministic channel");
}

/// Side-by-side comparison of the literal binary Wyner-Ziv expression, its
/// clamped capacity path, and the numeric strictly causal solver.
struct BscDiscrepancyReport {
    struct Row {
        double distortion;
        double wz_raw;        // unclamped; H(p) - H(p*q) <= 0 whenever D >= q
        double wz_clamped;
        double closed_form;   // bsc_cd_strictly_causal
        std::optional<double> numeric;
    };
    BscParams params;
    std::vector<Row> rows;
    std::string arbiter = "numeric strictly causal solver (solve_cd_curve)";
    std::string note =
        "The literal Wyner-Ziv expression evaluates to H(p) - H(p*q) <= 0 at the feasible point alpha = 0 "
        "(D >= q), which is not a valid rate. The capacity path clamps it at zero; where the closed form "
        "and the solver disagree, the solver output is authoritative.";
    double max_abs_gap = 0.0;  // over rows with a numeric value
};

inline BscDiscrepancyReport bsc_discrepancy_report(const BscParams& b, const std::vector<double>& grid,
                                                   const CdCurve* numeric = nullptr,
                                                   double beta_step = kWzBetaStep) {
    BscDiscrepancyReport r;
    r.params = b;
    for (double d : grid) {
        BscDiscrepancyReport::Row row{d, bsc_wz_rate_raw(b, d, beta_step), bsc_wz_rate_clamped(b, d, beta_step),
                                      bsc_cd_strictly_causal(b, d, beta_step), std::nullopt};
        if (numeric) {
            row.numeric = numeric->rate_at(d);
            const double num = row.numeric.value_or(0.0);  // below the solver's D* the capacity is 0
            r.max_abs_gap = std::max(r.max_abs_gap, std::abs(num - row.closed_form));
        }
        r.rows.push_back(row);
    }
    return r;
}

}  // namespace cdtrade
