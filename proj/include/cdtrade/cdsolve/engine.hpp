#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <limits>
#include <thread>
#include <vector>

#include "cdtrade/cdsolve/options.hpp"
#include "cdtrade/design.hpp"
#include "cdtrade/error.hpp"
#include "cdtrade/estimator.hpp"
#include "cdtrade/probcore/channel.hpp"
#include "cdtrade/probcore/info.hpp"
#include "cdtrade/rng.hpp"

namespace cdtrade::detail {

// Logits are kept within this distance of their row maximum.
inline constexpr double kLogitFloor = 60.0;

/// Lagrangian objective over (U, X, S, Y) shared by the strictly causal and
/// noncausal expressions:
///
///     J = H(Y) - H(A,Y) + H(A,S) - H(S) - lambda * E d(S, shat(A,Y))
///
/// with A = (U,X) and law p(x)p(s)p(u|x,s)p(y|x,s) (strictly causal), or
/// A = U and law p(s)p(u|s)1{x = x(u,s)}p(y|x,s) (noncausal).
///
/// Parameters are softmax logits, one row per conditional pmf, plus (noncausal
/// only) the discrete input map. The estimator is always the optimal one for the
/// current law, so J is a function of the distributions alone.
class StateProblem {
public:
    enum class Kind { StrictlyCausal, Noncausal };

    struct Workspace {
        double objective = 0.0, rate = 0.0, distortion = 0.0;
        std::vector<double> probs, grad;  // same layout as the logits
        std::vector<std::size_t> est;     // index a * card_y + y
        std::vector<double> joint, py, pay, pas, pasy, g;
    };

    StateProblem(const StateChannel& ch, const DistortionTable& d, std::size_t card_u, Kind kind)
        : ch_(ch), d_(d), cu_(card_u), kind_(kind) {
        require(card_u >= 1, "StateProblem: card_u must be >= 1");
        require(d.card_s() == ch.card_s(), "StateProblem: distortion table does not match the state alphabet");
        cx_ = ch.card_x();
        cs_ = ch.card_s();
        cy_ = ch.card_y();
        if (kind_ == Kind::StrictlyCausal) {
            rows_.push_back({0, cx_});
            for (std::size_t r = 0; r < cx_ * cs_; ++r) rows_.push_back({cx_ + r * cu_, cu_});
            na_ = cu_ * cx_;
        } else {
            for (std::size_t s = 0; s < cs_; ++s) rows_.push_back({s * cu_, cu_});
            na_ = cu_;
        }
        nlogits_ = rows_.back().offset + rows_.back().size;
    }

    struct Row {
        std::size_t offset, size;
    };
    const std::vector<Row>& rows() const noexcept { return rows_; }
    std::size_t logit_count() const noexcept { return nlogits_; }
    std::size_t discrete_count() const noexcept { return kind_ == Kind::Noncausal ? cu_ * cs_ : 0; }
    std::size_t discrete_card() const noexcept { return cx_; }
    std::size_t card_u() const noexcept { return cu_; }
    Kind kind() const noexcept { return kind_; }

    void evaluate(const std::vector<double>& logits, const std::vector<std::size_t>& map, double lambda,
                  Workspace& w) const {
        softmax_rows(logits, w.probs);
        build_joint(w, map);
        marginals(w);
        estimate(w);
        w.rate = raw_entropy(w.py) - raw_entropy(w.pay) + raw_entropy(w.pas) - raw_entropy(ch_.state_pmf().probs());
        w.objective = w.rate - lambda * w.distortion;
        gradient(w, map, lambda);
    }

    /// Converts parameters to a design; the estimator is the optimal one.
    AnyDesign make_design(const std::vector<double>& logits, const std::vector<std::size_t>& map) const {
        Workspace w;
        evaluate(logits, map, 0.0, w);
        if (kind_ == Kind::StrictlyCausal) {
            std::vector<double> px(w.probs.begin(), w.probs.begin() + static_cast<std::ptrdiff_t>(cx_));
            std::vector<double> rows(w.probs.begin() + static_cast<std::ptrdiff_t>(cx_), w.probs.end());
            return JointDesign{SimplexVector(std::move(px)), StochasticTable(cx_ * cs_, cu_, std::move(rows)),
                               EstimatorTable({cu_, cx_, cy_}, w.est)};
        }
        return NoncausalDesign{StochasticTable(cs_, cu_, w.probs), map, EstimatorTable({cu_, cy_}, w.est)};
    }

private:
    void softmax_rows(const std::vector<double>& logits, std::vector<double>& probs) const {
        probs.resize(nlogits_);
        for (const auto& r : rows_) {
            double m = -std::numeric_limits<double>::infinity();
            for (std::size_t i = 0; i < r.size; ++i) m = std::max(m, logits[r.offset + i]);
            double z = 0.0;
            for (std::size_t i = 0; i < r.size; ++i) z += probs[r.offset + i] = std::exp(logits[r.offset + i] - m);
            for (std::size_t i = 0; i < r.size; ++i) probs[r.offset + i] /= z;
        }
    }

    std::size_t jidx(std::size_t u, std::size_t x, std::size_t s, std::size_t y) const {
        return ((u * cx_ + x) * cs_ + s) * cy_ + y;
    }
    std::size_t aidx(std::size_t u, std::size_t x) const { return kind_ == Kind::StrictlyCausal ? u * cx_ + x : u; }

    void build_joint(Workspace& w, const std::vector<std::size_t>& map) const {
        w.joint.assign(cu_ * cx_ * cs_ * cy_, 0.0);
        for (std::size_t u = 0; u < cu_; ++u)
            for (std::size_t s = 0; s < cs_; ++s) {
                const double ps = ch_.p_state(s);
                if (kind_ == Kind::StrictlyCausal) {
                    for (std::size_t x = 0; x < cx_; ++x) {
                        const double wt = w.probs[x] * ps * w.probs[cx_ + (x * cs_ + s) * cu_ + u];
                        for (std::size_t y = 0; y < cy_; ++y) w.joint[jidx(u, x, s, y)] = wt * ch_.p_out(y, x, s);
                    }
                } else {
                    const std::size_t x = map[u * cs_ + s];
                    const double wt = ps * w.probs[s * cu_ + u];
                    for (std::size_t y = 0; y < cy_; ++y) w.joint[jidx(u, x, s, y)] = wt * ch_.p_out(y, x, s);
                }
            }
    }

    void marginals(Workspace& w) const {
        w.py.assign(cy_, 0.0);
        w.pay.assign(na_ * cy_, 0.0);
        w.pas.assign(na_ * cs_, 0.0);
        w.pasy.assign(na_ * cs_ * cy_, 0.0);
        for (std::size_t u = 0; u < cu_; ++u)
            for (std::size_t x = 0; x < cx_; ++x)
                for (std::size_t s = 0; s < cs_; ++s)
                    for (std::size_t y = 0; y < cy_; ++y) {
                        const double p = w.joint[jidx(u, x, s, y)];
                        if (p == 0.0) continue;
                        const std::size_t a = aidx(u, x);
                        w.py[y] += p;
                        w.pay[a * cy_ + y] += p;
                        w.pas[a * cs_ + s] += p;
                        w.pasy[(a * cs_ + s) * cy_ + y] += p;
                    }
    }

    void estimate(Workspace& w) const {
        const std::size_t k = d_.card_shat();
        w.est.assign(na_ * cy_, 0);
        w.distortion = 0.0;
        for (std::size_t a = 0; a < na_; ++a)
            for (std::size_t y = 0; y < cy_; ++y) {
                if (w.pay[a * cy_ + y] == 0.0) continue;
                double best = std::numeric_limits<double>::infinity();
                std::size_t arg = 0;
                for (std::size_t t = 0; t < k; ++t) {
                    double c = 0.0;
                    for (std::size_t s = 0; s < cs_; ++s) c += w.pasy[(a * cs_ + s) * cy_ + y] * d_(s, t);
                    if (c < best) {
                        best = c;
                        arg = t;
                    }
                }
                w.est[a * cy_ + y] = arg;
                w.distortion += best;
            }
    }

    static double lg(double v) { return std::log2(std::max(v, 1e-300)); }

    void gradient(Workspace& w, const std::vector<std::size_t>& map, double lambda) const {
        // per-tuple score on (a, s, y)
        w.g.assign(na_ * cs_ * cy_, 0.0);
        for (std::size_t a = 0; a < na_; ++a)
            for (std::size_t s = 0; s < cs_; ++s) {
                if (ch_.p_state(s) == 0.0) continue;
                const double base = -lg(w.pas[a * cs_ + s]) + lg(ch_.p_state(s));
                for (std::size_t y = 0; y < cy_; ++y)
                    w.g[(a * cs_ + s) * cy_ + y] =
                        base + lg(w.pay[a * cy_ + y]) - lg(w.py[y]) - lambda * d_(s, w.est[a * cy_ + y]);
            }
        w.grad.assign(nlogits_, 0.0);
        if (kind_ == Kind::StrictlyCausal) {
            for (std::size_t x = 0; x < cx_; ++x)
                for (std::size_t s = 0; s < cs_; ++s) {
                    const double ps = ch_.p_state(s);
                    if (ps == 0.0) continue;
                    const std::size_t row = cx_ + (x * cs_ + s) * cu_;
                    for (std::size_t u = 0; u < cu_; ++u) {
                        const std::size_t a = aidx(u, x);
                        double v = 0.0;
                        for (std::size_t y = 0; y < cy_; ++y) v += ch_.p_out(y, x, s) * w.g[(a * cs_ + s) * cy_ + y];
                        w.grad[row + u] = v;
                        w.grad[x] += ps * w.probs[row + u] * v;
                    }
                }
        } else {
            for (std::size_t s = 0; s < cs_; ++s) {
                if (ch_.p_state(s) == 0.0) continue;
                for (std::size_t u = 0; u < cu_; ++u) {
                    const std::size_t x = map[u * cs_ + s];
                    double v = 0.0;
                    for (std::size_t y = 0; y < cy_; ++y) v += ch_.p_out(y, x, s) * w.g[(u * cs_ + s) * cy_ + y];
                    w.grad[s * cu_ + u] = v;
                }
            }
        }
    }

    const StateChannel& ch_;
    const DistortionTable& d_;
    std::size_t cu_, cx_ = 0, cs_ = 0, cy_ = 0, na_ = 0, nlogits_ = 0;
    Kind kind_;
    std::vector<Row> rows_;
};

struct AscentResult {
    double objective = 0.0, rate = 0.0, distortion = 0.0;
    bool converged = false;
    std::size_t iterations = 0;
    std::vector<double> logits;
    std::vector<std::size_t> map;
};

/// Exponentiated-gradient ascent on the logits (a mirror step on each simplex
/// row) with step halving on rejection, interleaved with coordinate search over
/// the discrete entries whenever the continuous part stalls.
template <class Problem>
AscentResult ascend(const Problem& pb, double lambda, std::vector<double> logits, std::vector<std::size_t> map,
                    const SolverOptions& o) {
    typename Problem::Workspace cur, trial;
    pb.evaluate(logits, map, lambda, cur);

    auto improve_map = [&]() {
        bool any = false;
        for (std::size_t i = 0; i < map.size(); ++i) {
            for (std::size_t v = 0; v < pb.discrete_card(); ++v) {
                if (v == map[i]) continue;
                const std::size_t prev = map[i];
                map[i] = v;
                pb.evaluate(logits, map, lambda, trial);
                if (trial.objective > cur.objective + 1e-12) {
                    std::swap(cur, trial);
                    any = true;
                } else {
                    map[i] = prev;
                }
            }
        }
        return any;
    };
    if (pb.discrete_count() > 0) improve_map();

    double eta = o.init_step;
    std::vector<double> hist{cur.objective};
    std::vector<double> cand(logits.size());
    AscentResult res;
    std::size_t it = 0;
    for (; it < o.max_iterations; ++it) {
        for (const auto& r : pb.rows()) {
            double m = -std::numeric_limits<double>::infinity();
            for (std::size_t i = r.offset; i < r.offset + r.size; ++i) {
                cand[i] = logits[i] + eta * cur.grad[i];
                m = std::max(m, cand[i]);
            }
            for (std::size_t i = r.offset; i < r.offset + r.size; ++i) cand[i] = std::max(cand[i] - m, -kLogitFloor);
        }
        pb.evaluate(cand, map, lambda, trial);
        if (trial.objective >= cur.objective) {
            logits.swap(cand);
            std::swap(cur, trial);
            eta = std::min(eta * 2.0, 1e4);
        } else {
            eta *= 0.5;
        }
        hist.push_back(cur.objective);
        const bool stalled =
            eta < 1e-12 || (hist.size() > o.window && hist.back() - hist[hist.size() - 1 - o.window] < o.tolerance);
        if (stalled) {
            if (pb.discrete_count() > 0 && improve_map()) {
                eta = o.init_step;
                hist.assign(1, cur.objective);
                continue;
            }
            res.converged = true;
            ++it;
            break;
        }
    }
    res.objective = cur.objective;
    res.rate = cur.rate;
    res.distortion = cur.distortion;
    res.iterations = it;
    res.logits = std::move(logits);
    res.map = std::move(map);
    return res;
}

struct LambdaOutcome {
    double lambda = 0.0;
    std::vector<AscentResult> restarts;  // in restart order
    std::size_t best = 0;                // index of the highest objective
};

/// Runs `opts.multistart` random restarts for every lambda in `grid`. Restart r
/// at grid index i draws its start from its own generator (seed, i, r), and
/// results are stored by index, so the outcome is the same for any thread count.
template <class Problem>
std::vector<LambdaOutcome> multistart(const Problem& pb, const std::vector<double>& grid, const SolverOptions& o) {
    std::vector<LambdaOutcome> out(grid.size());
    auto work = [&](std::size_t i) {
        auto& lo = out[i];
        lo.lambda = grid[i];
        lo.restarts.reserve(o.multistart);
        for (std::size_t r = 0; r < o.multistart; ++r) {
            auto rng = make_rng(o.seed, {i, r});
            std::vector<double> logits(pb.logit_count());
            for (auto& v : logits) v = o.init_spread * (2.0 * uniform01(rng) - 1.0);
            std::vector<std::size_t> map(pb.discrete_count());
            for (auto& v : map) v = static_cast<std::size_t>(uniform_index(rng, pb.discrete_card()));
            lo.restarts.push_back(ascend(pb, grid[i], std::move(logits), std::move(map), o));
            if (lo.restarts.back().objective > lo.restarts[lo.best].objective) lo.best = r;
        }
    };
    const std::size_t nthreads = std::min<std::size_t>(o.threads, grid.size());
    if (nthreads <= 1) {
        for (std::size_t i = 0; i < grid.size(); ++i) work(i);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        for (std::size_t t = 0; t < nthreads; ++t)
            pool.emplace_back([&] {
                for (std::size_t i; (i = next.fetch_add(1)) < grid.size();) work(i);
            });
        for (auto& th : pool) th.join();
    }
    return out;
}

}  // namespace cdtrade::detail
