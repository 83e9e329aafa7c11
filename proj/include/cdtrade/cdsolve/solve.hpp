#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "cdtrade/cdsolve/curve.hpp"
#include "cdtrade/cdsolve/engine.hpp"
#include "cdtrade/cdsolve/evaluate.hpp"
#include "cdtrade/cdsolve/options.hpp"
#include "cdtrade/design.hpp"
#include "cdtrade/error.hpp"
#include "cdtrade/estimator.hpp"
#include "cdtrade/probcore/channel.hpp"

namespace cdtrade {

/// Best restart at one Lagrange multiplier.
struct LambdaResult {
    double lambda = 0.0;
    double objective = 0.0, rate = 0.0, distortion = 0.0;
    std::size_t restarts = 0;
    std::size_t converged_restarts = 0;
    AnyDesign design;  // causal mode: a JointDesign on the Shannon-expanded channel
};

struct SolverRun {
    CdCurve curve;
    std::vector<LambdaResult> per_lambda;
};

namespace detail {

inline std::size_t resolve_card_u(const StateChannel& ch, const SolverOptions& o, Mode mode) {
    const std::size_t bound = ch.card_s() + 2;
    if (o.card_u == 0) return bound;
    if (mode != Mode::Noncausal)
        require(o.card_u <= bound, "solver: card_u exceeds card_s + 2");
    return o.card_u;
}

inline SolverRun run_state_problem(const StateChannel& ch, const DistortionTable& d, Mode mode,
                                   const SolverOptions& o, std::size_t card_u) {
    const auto kind = mode == Mode::Noncausal ? StateProblem::Kind::Noncausal : StateProblem::Kind::StrictlyCausal;
    StateProblem pb(ch, d, card_u, kind);
    const auto grid = o.lambda_grid();
    const auto outcomes = multistart(pb, grid, o);

    SolverRun run;
    std::vector<CurvePoint> candidates;
    bool all_converged = true;
    for (const auto& lo : outcomes) {
        LambdaResult lr;
        lr.lambda = lo.lambda;
        lr.restarts = lo.restarts.size();
        for (const auto& r : lo.restarts) {
            lr.converged_restarts += r.converged ? 1 : 0;
            candidates.push_back({r.distortion, r.rate, lo.lambda, lo.restarts.size()});
        }
        all_converged = all_converged && lr.converged_restarts == lr.restarts;
        const auto& b = lo.restarts[lo.best];
        lr.objective = b.objective;
        lr.rate = b.rate;
        lr.distortion = b.distortion;
        lr.design = pb.make_design(b.logits, b.map);
        run.per_lambda.push_back(std::move(lr));
    }
    run.curve = envelope_curve(std::move(candidates), o.rate_tolerance);
    run.curve.mode = std::string(to_string(mode));
    run.curve.kind = "achievable lower bound";
    run.curve.converged = all_converged;
    run.curve.seed = o.seed;
    run.curve.settings = {{"multistart", static_cast<double>(o.multistart)},
                          {"max_iterations", static_cast<double>(o.max_iterations)},
                          {"tolerance", o.tolerance},
                          {"lambda_points", static_cast<double>(grid.size())},
                          {"card_u", static_cast<double>(card_u)}};
    return run;
}

}  // namespace detail

/// Full solver output: the curve plus the best design per multiplier.
///
/// Strictly causal and noncausal modes solve their expressions directly; causal
/// mode solves the strictly causal problem on shannon_expand(channel).
inline SolverRun solve_cd_run(const StateChannel& ch, const DistortionTable& d, Mode mode, const SolverOptions& opts) {
    opts.validate();
    detail::require(d.card_s() == ch.card_s(), "solve_cd_curve: distortion table does not match the state alphabet");
    const auto cu = detail::resolve_card_u(ch, opts, mode);
    if (mode == Mode::Causal) {
        const auto expanded = shannon_expand(ch, opts.expansion_cap);
        auto run = detail::run_state_problem(expanded, d, Mode::StrictlyCausal, opts, cu);
        run.curve.mode = std::string(to_string(Mode::Causal));
        return run;
    }
    return detail::run_state_problem(ch, d, mode, opts, cu);
}

inline CdCurve solve_cd_curve(const StateChannel& ch, const DistortionTable& d, Mode mode, const SolverOptions& opts) {
    return solve_cd_run(ch, d, mode, opts).curve;
}

/// Minimum distortion D* (the D-intercept of the solved curve).
inline double solve_dstar(const StateChannel& ch, const DistortionTable& d, Mode mode, const SolverOptions& opts) {
    const auto curve = solve_cd_curve(ch, d, mode, opts);
    detail::require(!curve.empty(), "solve_dstar: solver found no design with nonnegative rate");
    return curve.dstar();
}

/// Achievable lower bound max I(U;Y) - I(U;S) subject to E d <= D, over
/// p(u|s), x(u,s), shat(u,y) with the given |U|. Returns -infinity when no
/// design found meets the distortion constraint. Pass D = infinity for the
/// unconstrained value.
inline double noncausal_lower_bound(const StateChannel& ch, const DistortionTable& d, double D, std::size_t card_u,
                                    SolverOptions opts) {
    detail::require(D >= 0.0, "noncausal_lower_bound: D must be >= 0");
    detail::require(card_u >= 1, "noncausal_lower_bound: card_u must be >= 1");
    opts.card_u = card_u;
    if (std::isinf(D)) opts.lambdas = {0.0};
    const auto curve = solve_cd_curve(ch, d, Mode::Noncausal, opts);
    if (curve.empty()) return -std::numeric_limits<double>::infinity();
    if (std::isinf(D)) return curve.max_rate();
    const auto r = curve.rate_at(D);
    return r ? *r : -std::numeric_limits<double>::infinity();
}

}  // namespace cdtrade
