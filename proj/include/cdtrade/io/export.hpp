#pragma once

#include <cmath>
#include <cstdio>
#include <cstdint>
#include <cstdlib>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "cdtrade/blockmarkov/simulate.hpp"
#include "cdtrade/cdsolve/capacity.hpp"
#include "cdtrade/cdsolve/curve.hpp"
#include "cdtrade/closedform/curves.hpp"

namespace cdtrade {

using Json = nlohmann::ordered_json;

inline constexpr const char* kToolVersion = "1.0.0";

namespace schema {
inline constexpr const char* kCurve = "cdtrade.curve/1";
inline constexpr const char* kSimReport = "cdtrade.simreport/1";
inline constexpr const char* kManifest = "cdtrade.manifest/1";
inline constexpr const char* kDiscrepancy = "cdtrade.discrepancy/1";
inline constexpr const char* kRegion = "cdtrade.region/1";
inline constexpr const char* kLossless = "cdtrade.lossless/1";
inline constexpr const char* kDstar = "cdtrade.dstar/1";
}  // namespace schema

namespace detail {

// Outputs carry 12 significant digits so that golden files do not depend on
// last-bit differences between builds.
inline std::string out_real(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return std::string(buf) == "-0" ? "0" : buf;
}

inline Json jreal(double v) {
    if (!std::isfinite(v)) return nullptr;
    const double r = std::strtod(out_real(v).c_str(), nullptr);
    if (r == std::floor(r) && std::abs(r) < 1e15) return static_cast<std::int64_t>(r);
    return r;
}

inline Json jsettings(const std::vector<std::pair<std::string, double>>& kv) {
    Json o = Json::object();
    for (const auto& [k, v] : kv) o[k] = jreal(v);
    return o;
}

}  // namespace detail

// ---- curves

inline Json curve_to_json(const CdCurve& c, const std::string& manifest = "") {
    Json j;
    j["schema"] = schema::kCurve;
    j["manifest"] = manifest;
    j["mode"] = c.mode;
    j["kind"] = c.kind;
    j["source"] = c.source;
    j["converged"] = c.converged;
    j["seed"] = c.seed;
    j["settings"] = detail::jsettings(c.settings);
    j["dstar"] = c.empty() ? Json(nullptr) : detail::jreal(c.dstar());
    Json pts = Json::array();
    for (const auto& p : c.points) {
        Json q;
        q["D"] = detail::jreal(p.distortion);
        q["C"] = detail::jreal(p.rate);
        q["lambda"] = p.lambda ? detail::jreal(*p.lambda) : Json(nullptr);
        q["restarts_used"] = p.restarts_used;
        pts.push_back(std::move(q));
    }
    j["points"] = std::move(pts);
    return j;
}

/// CSV with a leading comment naming the manifest; the lambda column is empty
/// for closed forms.
inline void write_curve_csv(std::ostream& out, const CdCurve& c, const std::string& manifest = "") {
    out << "# manifest=" << manifest << " schema=" << schema::kCurve << "\n";
    out << "D,C,lambda,restarts_used\n";
    for (const auto& p : c.points)
        out << detail::out_real(p.distortion) << ',' << detail::out_real(p.rate) << ','
            << (p.lambda ? detail::out_real(*p.lambda) : "") << ',' << p.restarts_used << "\n";
}

// ---- simulation

inline Json sim_report_to_json(const SimReport& r, const std::string& manifest = "") {
    using detail::jreal;
    auto events = [](const EventCounts& e) {
        return Json{{"covering", e.covering}, {"E1", e.e1}, {"E2", e.e2}, {"E3", e.e3}};
    };
    auto search = [](const SearchCounts& s) {
        return Json{{"unique", s.unique}, {"ambiguous", s.ambiguous}, {"empty", s.empty}};
    };
    const auto& p = r.params;
    Json j;
    j["schema"] = schema::kSimReport;
    j["manifest"] = manifest;
    j["seed"] = p.seed;
    j["params"] = {{"n", p.n},
                   {"blocks", p.blocks},
                   {"trials", p.trials},
                   {"epsilon", jreal(p.typ.epsilon)},
                   {"epsilon_prime", jreal(p.typ.epsilon_prime)},
                   {"memory_cap", p.memory_cap},
                   {"rates", {{"R", jreal(p.rates.R)}, {"R_s", jreal(p.rates.R_s)}, {"R_s_tilde", jreal(p.rates.R_s_tilde)}}}};
    j["codebook"] = {{"messages", r.sizes.messages},
                     {"bins", r.sizes.bins},
                     {"bin_size", r.sizes.bin_size},
                     {"effective_rates",
                      {{"R", jreal(r.effective_rates.R)},
                       {"R_s", jreal(r.effective_rates.R_s)},
                       {"R_s_tilde", jreal(r.effective_rates.R_s_tilde)}}}};
    j["design"] = {{"rate", jreal(r.design_rate)}, {"distortion", jreal(r.design_distortion)}};
    j["decoded_blocks"] = r.decoded_blocks;
    j["empirical_distortion"] = jreal(r.empirical_distortion);
    j["error_free_blocks"] = r.error_free_blocks;
    j["error_free_distortion"] = r.error_free_distortion ? jreal(*r.error_free_distortion) : Json(nullptr);
    j["distortion_bound_violations"] = r.distortion_bound_violations;
    j["message_error_rate"] = jreal(r.message_error_rate);
    j["event_counts"] = events(r.events);
    Json per = Json::array();
    for (const auto& e : r.events_by_block) per.push_back(events(e));
    j["event_counts_by_block"] = std::move(per);
    j["search"] = {{"encoder", search(r.encoder_search)},
                   {"bin_index", search(r.bin_search)},
                   {"within_bin", search(r.index_search)}};
    return j;
}

inline void write_sim_csv_header(std::ostream& out, const std::string& manifest = "") {
    out << "# manifest=" << manifest << " schema=" << schema::kSimReport << "\n";
    out << "n,blocks,trials,seed,R,R_s,R_s_tilde,epsilon,epsilon_prime,decoded_blocks,empirical_distortion,"
           "error_free_blocks,message_error_rate,covering,E1,E2,E3\n";
}

inline void write_sim_csv_row(std::ostream& out, const SimReport& r) {
    using detail::out_real;
    const auto& p = r.params;
    out << p.n << ',' << p.blocks << ',' << p.trials << ',' << p.seed << ',' << out_real(r.effective_rates.R) << ','
        << out_real(r.effective_rates.R_s) << ',' << out_real(r.effective_rates.R_s_tilde) << ','
        << out_real(p.typ.epsilon) << ',' << out_real(p.typ.epsilon_prime) << ',' << r.decoded_blocks << ','
        << out_real(r.empirical_distortion) << ',' << r.error_free_blocks << ',' << out_real(r.message_error_rate)
        << ',' << r.events.covering << ',' << r.events.e1 << ',' << r.events.e2 << ',' << r.events.e3 << "\n";
}

// ---- closed-form comparisons, region, lossless

inline Json discrepancy_to_json(const BscDiscrepancyReport& r, const std::string& manifest = "") {
    using detail::jreal;
    Json j;
    j["schema"] = schema::kDiscrepancy;
    j["manifest"] = manifest;
    j["p"] = jreal(r.params.p);
    j["q"] = jreal(r.params.q);
    j["arbiter"] = r.arbiter;
    j["note"] = r.note;
    j["max_abs_gap"] = jreal(r.max_abs_gap);
    Json rows = Json::array();
    for (const auto& row : r.rows)
        rows.push_back({{"D", jreal(row.distortion)},
                        {"wz_raw", jreal(row.wz_raw)},
                        {"wz_clamped", jreal(row.wz_clamped)},
                        {"closed_form", jreal(row.closed_form)},
                        {"numeric", row.numeric ? jreal(*row.numeric) : Json(nullptr)}});
    j["rows"] = std::move(rows);
    return j;
}

inline void write_discrepancy_csv(std::ostream& out, const BscDiscrepancyReport& r, const std::string& manifest = "") {
    using detail::out_real;
    out << "# manifest=" << manifest << " schema=" << schema::kDiscrepancy << "\n";
    out << "D,wz_raw,wz_clamped,closed_form,numeric\n";
    for (const auto& row : r.rows)
        out << out_real(row.distortion) << ',' << out_real(row.wz_raw) << ',' << out_real(row.wz_clamped) << ','
            << out_real(row.closed_form) << ',' << (row.numeric ? out_real(*row.numeric) : "") << "\n";
}

inline Json region_to_json(const TradeoffRegion& r, const std::string& manifest = "") {
    Json j;
    j["schema"] = schema::kRegion;
    j["manifest"] = manifest;
    j["resolution"] = r.resolution;
    Json v = Json::array();
    for (const auto& p : r.vertices) v.push_back({{"R", detail::jreal(p.rate)}, {"Delta", detail::jreal(p.delta)}});
    j["vertices"] = std::move(v);
    return j;
}

inline void write_region_csv(std::ostream& out, const TradeoffRegion& r, const std::string& manifest = "") {
    out << "# manifest=" << manifest << " schema=" << schema::kRegion << "\n";
    out << "R,Delta\n";
    for (const auto& p : r.vertices) out << detail::out_real(p.rate) << ',' << detail::out_real(p.delta) << "\n";
}

inline Json lossless_to_json(const LosslessResult& r, const std::string& manifest = "") {
    Json j;
    j["schema"] = schema::kLossless;
    j["manifest"] = manifest;
    j["H_S"] = detail::jreal(r.h_s);
    j["delta_star"] = detail::jreal(r.delta_star);
    j["feasible"] = r.feasible;
    j["uncertainty_reduction_rate"] = detail::jreal(std::max(0.0, std::min(r.h_s, r.delta_star)));
    return j;
}

// ---- manifest

/// Run metadata. Everything except "timing" is a function of the invocation.
struct RunManifest {
    std::vector<std::string> command;
    Json parameters = Json::object();
    std::uint64_t seed = 0;
    std::vector<std::string> outputs;
    double wall_seconds = 0.0;

    Json to_json() const {
        Json j;
        j["schema"] = schema::kManifest;
        j["tool"] = "cdtrade";
        j["version"] = kToolVersion;
        j["command"] = command;
        j["parameters"] = parameters;
        j["seed"] = seed;
        j["outputs"] = outputs;
        j["timing"] = {{"wall_seconds", wall_seconds}};
        return j;
    }
};

}  // namespace cdtrade
