#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "cdtrade/design.hpp"
#include "cdtrade/error.hpp"
#include "cdtrade/estimator.hpp"
#include "cdtrade/probcore/assemble.hpp"
#include "cdtrade/probcore/channel.hpp"
#include "cdtrade/probcore/kv_text.hpp"

namespace cdtrade {

/// Strictly causal design file:
///
///     kind = strictly-causal
///     card_u = 2
///     input_pmf = 0.5 0.5
///     test_channel =
///     1 0            # x=0 s=0, one entry per u
///     ...            # card_x * card_s rows, x-major, s-minor
///     estimator = 0 0 0 0 1 1 1 1   # optional; shat(u,x,y) row-major
///
/// Without an estimator line the Bayes-optimal estimator for `d` is used.
inline JointDesign read_design(const KvDocument& doc, const StateChannel& ch, const DistortionTable& d) {
    if (doc.has("kind") && parse_mode(doc.get_string("kind")) != Mode::StrictlyCausal)
        throw ParseError(doc.source(), doc.entry("kind").line, "only strictly-causal designs can be read");
    const auto cu = doc.get_size("card_u");
    if (cu == 0) throw ParseError(doc.source(), doc.entry("card_u").line, "card_u must be positive");
    auto px = doc.get_reals("input_pmf");
    if (px.size() != ch.card_x())
        throw ParseError(doc.source(), doc.entry("input_pmf").line, "input_pmf needs card_x entries");
    auto rows = doc.get_real_rows("test_channel", ch.card_x() * ch.card_s(), cu);
    try {
        JointDesign design{SimplexVector(std::move(px)), StochasticTable(ch.card_x() * ch.card_s(), cu, std::move(rows)),
                           {}};
        if (doc.has("estimator")) {
            const std::vector<std::size_t> dims{cu, ch.card_x(), ch.card_y()};
            design.est = EstimatorTable(dims, doc.get_size_block("estimator", JointPmf::volume(dims)));
            if (design.est.max_choice() >= d.card_shat())
                throw ParseError(doc.source(), doc.entry("estimator").line, "estimator value exceeds card_shat - 1");
        } else {
            design.validate(ch, false);
            const auto j = assemble_joint(ch, design);
            using namespace axis;
            design.est = optimal_estimator(j.marginal({kS, kU, kX, kY}), 0, d);
        }
        design.validate(ch);
        return design;
    } catch (const ValidationError& e) {
        throw ParseError(doc.source(), doc.entry("test_channel").line, e.what());
    }
}

inline JointDesign read_design_file(const std::string& path, const StateChannel& ch, const DistortionTable& d) {
    return read_design(KvDocument::parse_file(path), ch, d);
}

inline void write_design(std::ostream& out, const JointDesign& design) {
    out << "kind = strictly-causal\ncard_u = " << design.card_u() << "\ninput_pmf =";
    for (double v : design.input_pmf.probs()) out << ' ' << detail::fmt_real(v);
    out << "\ntest_channel =\n";
    for (std::size_t r = 0; r < design.test_channel.rows(); ++r) {
        const char* sep = "";
        for (double v : design.test_channel.row(r)) {
            out << sep << detail::fmt_real(v);
            sep = " ";
        }
        out << "\n";
    }
    out << "estimator =";
    for (auto c : design.est.choices()) out << ' ' << c;
    out << "\n";
}

}  // namespace cdtrade
