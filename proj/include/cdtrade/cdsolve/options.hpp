#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "cdtrade/error.hpp"
#include "cdtrade/probcore/kv_text.hpp"

namespace cdtrade {

/// Settings of the multistart Lagrangian solver.
struct SolverOptions {
    std::size_t multistart = 50;       // random restarts per lambda
    std::size_t max_iterations = 3000; // per restart
    double tolerance = 1e-9;           // objective gain over `window` iterations
    std::size_t window = 25;
    double init_step = 1.0;
    double init_spread = 3.0;          // initial logits ~ U(-spread, spread)

    // Lagrange multipliers: `lambdas` if non-empty, otherwise
    // {0} plus lambda_count geometric points in [lambda_min, lambda_max].
    std::vector<double> lambdas;
    double lambda_min = 0.01;
    double lambda_max = 100.0;
    std::size_t lambda_count = 48;

    std::uint64_t seed = 1;
    std::size_t card_u = 0;  // 0 selects |S| + 2
    std::size_t threads = 1;
    double rate_tolerance = 1e-6;
    std::size_t expansion_cap = 4096;

    void validate() const {
        detail::require(multistart >= 1, "SolverOptions: multistart must be >= 1");
        detail::require(max_iterations >= 1, "SolverOptions: max_iterations must be >= 1");
        detail::require(tolerance > 0.0 && std::isfinite(tolerance), "SolverOptions: tolerance must be positive");
        detail::require(window >= 1, "SolverOptions: window must be >= 1");
        detail::require(init_step > 0.0 && std::isfinite(init_step), "SolverOptions: init_step must be positive");
        detail::require(init_spread >= 0.0 && std::isfinite(init_spread), "SolverOptions: init_spread must be >= 0");
        detail::require(rate_tolerance >= 0.0, "SolverOptions: rate_tolerance must be >= 0");
        detail::require(threads >= 1, "SolverOptions: threads must be >= 1");
        for (double l : lambdas) detail::require(l >= 0.0 && std::isfinite(l), "SolverOptions: lambdas must be finite and >= 0");
        if (lambdas.empty()) {
            detail::require(lambda_min > 0.0 && lambda_max >= lambda_min && std::isfinite(lambda_max),
                            "SolverOptions: need 0 < lambda_min <= lambda_max");
        }
    }

    std::vector<double> lambda_grid() const {
        if (!lambdas.empty()) return lambdas;
        std::vector<double> g{0.0};
        if (lambda_count == 1) g.push_back(lambda_min);
        for (std::size_t i = 0; lambda_count > 1 && i < lambda_count; ++i) {
            const double t = static_cast<double>(i) / static_cast<double>(lambda_count - 1);
            g.push_back(lambda_min * std::pow(lambda_max / lambda_min, t));
        }
        return g;
    }
};

/// Overrides fields of `base` from a key/value document. Recognized keys match
/// the field names above; unknown keys are rejected.
inline SolverOptions read_solver_options(const KvDocument& doc, SolverOptions base = {}) {
    for (const auto& key : doc.keys()) {
        const auto line = doc.entry(key).line;
        if (key == "multistart") base.multistart = doc.get_size(key);
        else if (key == "max_iterations") base.max_iterations = doc.get_size(key);
        else if (key == "tolerance") base.tolerance = doc.get_real(key);
        else if (key == "window") base.window = doc.get_size(key);
        else if (key == "init_step") base.init_step = doc.get_real(key);
        else if (key == "init_spread") base.init_spread = doc.get_real(key);
        else if (key == "lambdas") base.lambdas = doc.get_reals(key);
        else if (key == "lambda_min") base.lambda_min = doc.get_real(key);
        else if (key == "lambda_max") base.lambda_max = doc.get_real(key);
        else if (key == "lambda_count") base.lambda_count = doc.get_size(key);
        else if (key == "seed") base.seed = doc.get_size(key);
        else if (key == "card_u") base.card_u = doc.get_size(key);
        else if (key == "threads") base.threads = doc.get_size(key);
        else if (key == "rate_tolerance") base.rate_tolerance = doc.get_real(key);
        else if (key == "expansion_cap") base.expansion_cap = doc.get_size(key);
        else throw ParseError(doc.source(), line, "unknown solver option '" + key + "'");
    }
    try {
        base.validate();
    } catch (const ValidationError& e) {
        throw ParseError(doc.source(), 0, e.what());
    }
    return base;
}

}  // namespace cdtrade
