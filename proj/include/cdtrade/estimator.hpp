#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "cdtrade/error.hpp"
#include "cdtrade/probcore/joint_pmf.hpp"
#include "cdtrade/probcore/kv_text.hpp"

namespace cdtrade {

/// Distortion measure d(s, shat) >= 0 on a finite source/reconstruction pair.
///
/// Every source row carries at least one zero, so perfect reconstruction is
/// always expressible.
class DistortionTable {
public:
    DistortionTable() = default;

    DistortionTable(std::size_t card_s, std::size_t card_shat, std::vector<double> d)
        : card_s_(card_s), card_shat_(card_shat), d_(std::move(d)) {
        detail::require(card_s > 0 && card_shat > 0, "DistortionTable: zero dimension");
        detail::require(d_.size() == card_s * card_shat, "DistortionTable: expected card_s * card_shat entries");
        for (std::size_t s = 0; s < card_s; ++s) {
            bool has_zero = false;
            for (std::size_t t = 0; t < card_shat; ++t) {
                const double v = (*this)(s, t);
                detail::require(std::isfinite(v) && v >= 0.0, "DistortionTable: entries must be finite and >= 0");
                has_zero = has_zero || v == 0.0;
            }
            detail::require(has_zero, "DistortionTable: row " + std::to_string(s) + " has no zero-distortion entry");
        }
    }

    static DistortionTable hamming(std::size_t card) {
        std::vector<double> d(card * card, 1.0);
        for (std::size_t i = 0; i < card; ++i) d[i * card + i] = 0.0;
        return DistortionTable(card, card, std::move(d));
    }

    std::size_t card_s() const noexcept { return card_s_; }
    std::size_t card_shat() const noexcept { return card_shat_; }
    double operator()(std::size_t s, std::size_t shat) const { return d_[s * card_shat_ + shat]; }
    const std::vector<double>& flat() const noexcept { return d_; }

    double max_value() const {
        double m = 0.0;
        for (double v : d_) m = std::max(m, v);
        return m;
    }

private:
    std::size_t card_s_ = 0, card_shat_ = 0;
    std::vector<double> d_;
};

/// Deterministic reconstruction rule: one reconstruction index per
/// conditioning tuple, stored row-major over `dims`.
class EstimatorTable {
public:
    EstimatorTable() = default;

    EstimatorTable(std::vector<std::size_t> dims, std::vector<std::size_t> choice)
        : dims_(std::move(dims)), choice_(std::move(choice)) {
        detail::require(choice_.size() == JointPmf::volume(dims_), "EstimatorTable: choice count does not match dims");
    }

    static EstimatorTable constant(std::vector<std::size_t> dims, std::size_t value) {
        const auto n = JointPmf::volume(dims);
        return EstimatorTable(std::move(dims), std::vector<std::size_t>(n, value));
    }

    const std::vector<std::size_t>& dims() const noexcept { return dims_; }
    const std::vector<std::size_t>& choices() const noexcept { return choice_; }
    std::size_t size() const noexcept { return choice_.size(); }
    std::size_t operator[](std::size_t flat) const { return choice_[flat]; }
    std::size_t& operator[](std::size_t flat) { return choice_[flat]; }

    std::size_t at(std::initializer_list<std::size_t> tuple) const {
        detail::require(tuple.size() == dims_.size(), "EstimatorTable: tuple rank mismatch");
        std::size_t idx = 0, a = 0;
        for (auto t : tuple) {
            detail::require(t < dims_[a], "EstimatorTable: tuple entry out of range");
            idx = idx * dims_[a++] + t;
        }
        return choice_[idx];
    }

    std::size_t max_choice() const {
        std::size_t m = 0;
        for (auto c : choice_) m = std::max(m, c);
        return m;
    }

    friend bool operator==(const EstimatorTable&, const EstimatorTable&) = default;

private:
    std::vector<std::size_t> dims_;
    std::vector<std::size_t> choice_;
};

namespace detail {

// Maps each flat index of `joint` to (z digit, flat index over the remaining axes).
struct ConditioningLayout {
    std::vector<std::size_t> cond_dims;
    std::size_t z_card = 0;
    std::size_t z_stride = 0;  // stride of the z axis in the joint's flat index

    ConditioningLayout(const JointPmf& joint, std::size_t z_axis) {
        require(z_axis < joint.rank(), "estimator: z_axis out of range");
        const auto& dims = joint.dims();
        z_card = dims[z_axis];
        z_stride = 1;
        for (std::size_t a = z_axis + 1; a < dims.size(); ++a) z_stride *= dims[a];
        for (std::size_t a = 0; a < dims.size(); ++a)
            if (a != z_axis) cond_dims.push_back(dims[a]);
    }

    std::size_t z_of(std::size_t flat) const { return (flat / z_stride) % z_card; }
    std::size_t cond_of(std::size_t flat) const {
        const std::size_t low = flat % z_stride;
        const std::size_t high = flat / (z_stride * z_card);
        return high * z_stride + low;
    }
};

}  // namespace detail

/// For every conditioning tuple v, picks argmin over shat of sum_z p(z, v) d(z, shat).
///
/// The conditioning tuple consists of every axis of `joint` except `z_axis`,
/// in axis order. Ties go to the smallest reconstruction index; tuples with
/// zero probability get reconstruction 0.
inline EstimatorTable optimal_estimator(const JointPmf& joint, std::size_t z_axis, const DistortionTable& d) {
    detail::ConditioningLayout lay(joint, z_axis);
    detail::require(d.card_s() == lay.z_card, "optimal_estimator: distortion table does not match source alphabet");
    const std::size_t n_cond = JointPmf::volume(lay.cond_dims);
    const std::size_t k = d.card_shat();
    std::vector<double> cost(n_cond * k, 0.0);
    std::vector<double> mass(n_cond, 0.0);
    const auto& p = joint.probs();
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (p[i] == 0.0) continue;
        const auto z = lay.z_of(i);
        const auto v = lay.cond_of(i);
        mass[v] += p[i];
        for (std::size_t t = 0; t < k; ++t) cost[v * k + t] += p[i] * d(z, t);
    }
    std::vector<std::size_t> choice(n_cond, 0);
    for (std::size_t v = 0; v < n_cond; ++v) {
        if (mass[v] == 0.0) continue;
        std::size_t best = 0;
        for (std::size_t t = 1; t < k; ++t)
            if (cost[v * k + t] < cost[v * k + best]) best = t;
        choice[v] = best;
    }
    return EstimatorTable(std::move(lay.cond_dims), std::move(choice));
}

/// E d(Z, est(V)) under `joint`.
inline double expected_distortion(const JointPmf& joint, std::size_t z_axis, const EstimatorTable& est,
                                  const DistortionTable& d) {
    detail::ConditioningLayout lay(joint, z_axis);
    detail::require(d.card_s() == lay.z_card, "expected_distortion: distortion table does not match source alphabet");
    detail::require(est.dims() == lay.cond_dims, "expected_distortion: estimator dims do not match conditioning axes");
    detail::require(est.size() == 0 || est.max_choice() < d.card_shat(),
                    "expected_distortion: estimator selects a reconstruction outside the distortion table");
    const auto& p = joint.probs();
    double total = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (p[i] == 0.0) continue;
        total += p[i] * d(lay.z_of(i), est[lay.cond_of(i)]);
    }
    return total;
}

/// Distortion file format:
///
///     card_s = 2
///     card_shat = 2
///     table =
///     0 1
///     1 0
inline DistortionTable read_distortion(const KvDocument& doc) {
    const auto cs = doc.get_size("card_s");
    const auto ct = doc.get_size("card_shat");
    auto rows = doc.get_real_rows("table", cs, ct);
    try {
        return DistortionTable(cs, ct, std::move(rows));
    } catch (const ValidationError& e) {
        throw ParseError(doc.source(), doc.entry("table").line, e.what());
    }
}

inline DistortionTable read_distortion_file(const std::string& path) {
    return read_distortion(KvDocument::parse_file(path));
}

}  // namespace cdtrade
