#pragma once

#include <atomic>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <optional>
#include <thread>
#include <vector>

#include "cdtrade/blockmarkov/codebook.hpp"
#include "cdtrade/blockmarkov/typicality.hpp"
#include "cdtrade/cdsolve/evaluate.hpp"
#include "cdtrade/design.hpp"
#include "cdtrade/error.hpp"
#include "cdtrade/estimator.hpp"
#include "cdtrade/probcore/assemble.hpp"
#include "cdtrade/probcore/channel.hpp"
#include "cdtrade/rng.hpp"

namespace cdtrade {

struct SimParams {
    std::size_t n = 12;       // block length
    std::size_t blocks = 5;   // b; the description of block b is never sent
    std::size_t trials = 10;
    std::uint64_t seed = 1;
    CodeRates rates;
    TypicalityParams typ;
    std::uint64_t memory_cap = kDefaultMemoryCap;
    std::size_t threads = 1;

    void validate() const {
        detail::require(n > 0, "simulate: n must be positive");
        detail::require(blocks >= 2, "simulate: need at least 2 blocks");
        detail::require(trials > 0, "simulate: need at least 1 trial");
        detail::require(threads > 0, "simulate: threads must be positive");
        rates.validate();
        typ.validate();
    }
};

/// Error events of one block j whose description is decoded in block j + 1.
struct EventCounts {
    std::uint64_t covering = 0;  // no description index passed the encoder's test
    std::uint64_t e1 = 0;        // (S, U(K), X, Y) not jointly typical
    std::uint64_t e2 = 0;        // bin index decoded wrongly
    std::uint64_t e3 = 0;        // bin right, description index within it wrong

    EventCounts& operator+=(const EventCounts& o) {
        covering += o.covering;
        e1 += o.e1;
        e2 += o.e2;
        e3 += o.e3;
        return *this;
    }
    friend bool operator==(const EventCounts&, const EventCounts&) = default;
};

/// Outcomes of one typicality search stage.
struct SearchCounts {
    std::uint64_t unique = 0, ambiguous = 0, empty = 0;

    void record(const Selection& s) {
        switch (s.outcome()) {
            case SearchOutcome::Unique: ++unique; break;
            case SearchOutcome::Ambiguous: ++ambiguous; break;
            case SearchOutcome::Empty: ++empty; break;
        }
    }
    SearchCounts& operator+=(const SearchCounts& o) {
        unique += o.unique;
        ambiguous += o.ambiguous;
        empty += o.empty;
        return *this;
    }
    friend bool operator==(const SearchCounts&, const SearchCounts&) = default;
};

struct SimReport {
    SimParams params;
    CodebookSizes sizes;
    CodeRates effective_rates;
    double design_rate = 0.0;        // I(U,X;Y) - I(U,X;S) of the design
    double design_distortion = 0.0;  // E d(S, shat(U,X,Y))

    std::uint64_t decoded_blocks = 0;  // trials * (b - 1)
    std::uint64_t message_blocks = 0;  // trials * b
    double empirical_distortion = 0.0;
    std::uint64_t error_free_blocks = 0;
    std::optional<double> error_free_distortion;
    std::uint64_t distortion_bound_violations = 0;  // error-free blocks with d > (1 + eps) E d
    double message_error_rate = 0.0;

    EventCounts events;
    std::vector<EventCounts> events_by_block;  // index j = 0 .. b - 2
    SearchCounts encoder_search, bin_search, index_search;

    double rate_of(std::uint64_t count) const {
        return decoded_blocks ? static_cast<double>(count) / static_cast<double>(decoded_blocks) : 0.0;
    }
};

namespace detail {

struct TrialTally {
    double distortion_sum = 0.0;
    double error_free_sum = 0.0;
    std::uint64_t error_free = 0, violations = 0, message_errors = 0;
    std::vector<EventCounts> events;
    SearchCounts encoder, bin, index;
};

/// Everything a trial needs that does not depend on randomness.
struct SimContext {
    const StateChannel& ch;
    const JointDesign& design;
    const DistortionTable& d;
    const SimParams& prm;
    CodebookSizes sizes;
    double design_distortion;
    TypicalityChecker enc;   // (U, X, S), slack epsilon'
    TypicalityChecker full;  // (U, X, S, Y), slack epsilon
    TypicalityChecker xy;    // (X, Y)
    TypicalityChecker uxy;   // (U, X, Y)
};

inline TrialTally run_trial(const SimContext& c, std::size_t trial) {
    const std::size_t n = c.prm.n, b = c.prm.blocks;
    const std::size_t cx = c.ch.card_x(), cs = c.ch.card_s(), cy = c.ch.card_y();
    const auto& sz = c.sizes;
    auto g = make_rng(c.prm.seed, {1, trial});

    TrialTally t;
    t.events.assign(b - 1, {});

    // what the decoder keeps from the previous block
    struct Prev {
        std::optional<BlockCodebook> cb;
        Sequence s, y;
        std::uint64_t m = 0, l_prev = 0, k = 0;      // true indices
        std::uint64_t m_hat = 0, l_prev_hat = 0;     // decoder's estimates
        bool e1 = false, covering_failed = false;
    } prev;

    std::uint64_t l = 0;  // l_{j-1} at the encoder
    Sequence s(n), y(n), u;
    for (std::size_t j = 0; j < b; ++j) {
        auto cb = build_codebook(c.ch, c.design, n, c.prm.rates, derive_seed(c.prm.seed, {0, trial, j}),
                                 c.prm.memory_cap);
        const std::uint64_t m = uniform_index(g, sz.messages);
        const Symbol* x = cb.x_word(m, l);
        for (std::size_t i = 0; i < n; ++i) s[i] = static_cast<Symbol>(sample_index(g, c.ch.state_pmf().probs()));
        for (std::size_t i = 0; i < n; ++i) y[i] = static_cast<Symbol>(sample_index(g, c.ch.out_row(x[i], s[i])));

        // covering: (s, u(k|m,l), x) in the epsilon'-typical set
        auto covers = [&](std::uint64_t k) {
            c.enc.reset();
            return cb.stream_u_word(m, l, k, [&](std::size_t i, Symbol ui) {
                       return c.enc.push((ui * cx + x[i]) * cs + s[i]);
                   }) &&
                   c.enc.complete();
        };
        const auto enc_sel = select_index(sz.descriptions(), covers, g);
        t.encoder.record(enc_sel);
        const std::uint64_t k = enc_sel.index;
        u = cb.u_word(m, l, k);
        const bool e1 = !c.full.contains({u.data(), x, s.data(), y.data()});

        // decoding of (m_j, l_{j-1}); block 0 uses the known l_0 = 0
        std::uint64_t m_hat = 0, l_dec = 0;
        if (j == 0) {
            const auto sel = select_index(
                sz.messages, [&](std::uint64_t mm) { return c.xy.contains({cb.x_word(mm, 0), y.data()}); }, g);
            m_hat = sel.index;
        } else {
            const auto sel = select_index(
                sz.x_words(),
                [&](std::uint64_t idx) { return c.xy.contains({cb.x_word(idx / sz.bins, idx % sz.bins), y.data()}); },
                g);
            t.bin.record(sel);
            m_hat = sel.index / sz.bins;
            l_dec = sel.index % sz.bins;

            // within-bin search for block j - 1, on the decoder's codeword estimates
            const auto& pcb = *prev.cb;
            const Symbol* px = pcb.x_word(prev.m_hat, prev.l_prev_hat);
            auto fits = [&](std::uint64_t kk) {
                c.uxy.reset();
                return pcb.stream_u_word(prev.m_hat, prev.l_prev_hat, l_dec * sz.bin_size + kk,
                                         [&](std::size_t i, Symbol ui) {
                                             return c.uxy.push((ui * cx + px[i]) * cy + prev.y[i]);
                                         }) &&
                       c.uxy.complete();
            };
            const auto in_bin = select_index(sz.bin_size, fits, g);
            t.index.record(in_bin);
            const std::uint64_t k_hat = l_dec * sz.bin_size + in_bin.index;

            const Sequence uh = pcb.u_word(prev.m_hat, prev.l_prev_hat, k_hat);
            double dist = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                const std::size_t flat = (uh[i] * cx + px[i]) * cy + prev.y[i];
                dist += c.d(prev.s[i], c.design.est[flat]);
            }
            dist /= static_cast<double>(n);
            t.distortion_sum += dist;

            auto& ev = t.events[j - 1];
            const std::uint64_t l_true = pcb.bin_of(prev.k);
            ev.covering += prev.covering_failed;
            ev.e1 += prev.e1;
            ev.e2 += l_dec != l_true;
            ev.e3 += l_dec == l_true && k_hat != prev.k;
            const bool clean = !prev.e1 && k_hat == prev.k && prev.m_hat == prev.m && prev.l_prev_hat == prev.l_prev;
            if (clean) {
                ++t.error_free;
                t.error_free_sum += dist;
                if (dist > (1.0 + c.prm.typ.epsilon) * c.design_distortion + 1e-12) ++t.violations;
            }
        }
        t.message_errors += m_hat != m;

        prev.l_prev_hat = l_dec;
        prev.cb.emplace(std::move(cb));
        prev.s = s;
        prev.y = y;
        prev.m = m;
        prev.l_prev = l;
        prev.k = k;
        prev.m_hat = m_hat;
        prev.e1 = e1;
        prev.covering_failed = enc_sel.matches == 0;
        l = prev.cb->bin_of(k);
    }
    return t;
}

}  // namespace detail

/// Monte Carlo run of the block Markov scheme with design (p(x), p(u|x,s), shat(u,x,y)).
/// Trials are independent and keyed by (seed, trial), so the report does not
/// depend on the thread count.
inline SimReport simulate(const StateChannel& ch, const JointDesign& design, const DistortionTable& d,
                          const SimParams& prm) {
    prm.validate();
    design.validate(ch);
    detail::require(d.card_s() == ch.card_s(), "simulate: distortion table card_s differs from the channel");
    detail::require(design.est.max_choice() < d.card_shat(), "simulate: estimator output outside the distortion table");

    const auto joint = assemble_joint(ch, design);
    using namespace axis;
    const auto dv = evaluate_design(ch, d, design);
    detail::SimContext ctx{ch,
                           design,
                           d,
                           prm,
                           codebook_sizes(prm.n, prm.rates),
                           dv.distortion,
                           TypicalityChecker(joint.marginal({kU, kX, kS}), prm.n, prm.typ.epsilon_prime),
                           TypicalityChecker(joint, prm.n, prm.typ.epsilon),
                           TypicalityChecker(joint.marginal({kX, kY}), prm.n, prm.typ.epsilon),
                           TypicalityChecker(joint.marginal({kU, kX, kY}), prm.n, prm.typ.epsilon)};

    std::vector<detail::TrialTally> tallies(prm.trials);
    const std::size_t workers = std::min(prm.threads, prm.trials);
    if (workers <= 1) {
        for (std::size_t t = 0; t < prm.trials; ++t) tallies[t] = detail::run_trial(ctx, t);
    } else {
        // checkers keep scratch counts, so each worker gets its own context
        std::atomic<std::size_t> next{0};
        std::vector<std::exception_ptr> errors(workers);
        std::vector<std::thread> pool;
        for (std::size_t w = 0; w < workers; ++w)
            pool.emplace_back([&, w] {
                try {
                    detail::SimContext local = ctx;
                    for (std::size_t t; (t = next++) < prm.trials;) tallies[t] = detail::run_trial(local, t);
                } catch (...) {
                    errors[w] = std::current_exception();
                }
            });
        for (auto& th : pool) th.join();
        for (auto& e : errors)
            if (e) std::rethrow_exception(e);
    }

    SimReport r;
    r.params = prm;
    r.sizes = ctx.sizes;
    r.effective_rates = ctx.sizes.effective(prm.n);
    r.design_rate = dv.rate;
    r.design_distortion = dv.distortion;
    r.decoded_blocks = prm.trials * (prm.blocks - 1);
    r.message_blocks = prm.trials * prm.blocks;
    r.events_by_block.assign(prm.blocks - 1, {});
    double dsum = 0.0, fsum = 0.0;
    std::uint64_t merr = 0;
    for (const auto& t : tallies) {  // index order keeps the floating-point sums reproducible
        dsum += t.distortion_sum;
        fsum += t.error_free_sum;
        r.error_free_blocks += t.error_free;
        r.distortion_bound_violations += t.violations;
        merr += t.message_errors;
        for (std::size_t j = 0; j < t.events.size(); ++j) {
            r.events_by_block[j] += t.events[j];
            r.events += t.events[j];
        }
        r.encoder_search += t.encoder;
        r.bin_search += t.bin;
        r.index_search += t.index;
    }
    r.empirical_distortion = dsum / static_cast<double>(r.decoded_blocks);
    if (r.error_free_blocks) r.error_free_distortion = fsum / static_cast<double>(r.error_free_blocks);
    r.message_error_rate = static_cast<double>(merr) / static_cast<double>(r.message_blocks);
    return r;
}

}  // namespace cdtrade
