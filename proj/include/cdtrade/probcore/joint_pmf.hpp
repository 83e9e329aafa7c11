#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "cdtrade/error.hpp"
#include "cdtrade/probcore/simplex.hpp"

namespace cdtrade {

/// Dense joint pmf over a product of finite alphabets.
///
/// Storage is row-major: axis 0 is the most significant digit of the flat index.
class JointPmf {
public:
    JointPmf() = default;

    JointPmf(std::vector<std::size_t> dims, std::vector<double> probs)
        : dims_(std::move(dims)), probs_(std::move(probs)) {
        detail::require(!dims_.empty(), "JointPmf: no axes");
        for (auto d : dims_) detail::require(d > 0, "JointPmf: zero-size axis");
        detail::require(probs_.size() == volume(dims_), "JointPmf: table size does not match dims");
        SimplexVector::validate(probs_, "JointPmf");
    }

    static std::size_t volume(std::span<const std::size_t> dims) {
        return std::accumulate(dims.begin(), dims.end(), std::size_t{1}, std::multiplies<>());
    }

    std::size_t rank() const noexcept { return dims_.size(); }
    const std::vector<std::size_t>& dims() const noexcept { return dims_; }
    const std::vector<double>& probs() const noexcept { return probs_; }
    std::size_t size() const noexcept { return probs_.size(); }

    std::size_t flat_index(std::span<const std::size_t> tuple) const {
        detail::require(tuple.size() == dims_.size(), "JointPmf: tuple rank mismatch");
        std::size_t idx = 0;
        for (std::size_t a = 0; a < dims_.size(); ++a) {
            detail::require(tuple[a] < dims_[a], "JointPmf: tuple entry out of range");
            idx = idx * dims_[a] + tuple[a];
        }
        return idx;
    }

    double at(std::initializer_list<std::size_t> tuple) const {
        std::vector<std::size_t> t(tuple);
        return probs_[flat_index(t)];
    }

    /// Decodes a flat index into its per-axis digits.
    void unflatten(std::size_t flat, std::span<std::size_t> out) const {
        for (std::size_t a = dims_.size(); a-- > 0;) {
            out[a] = flat % dims_[a];
            flat /= dims_[a];
        }
    }

    /// Marginal over the listed axes, in the listed order.
    JointPmf marginal(std::span<const std::size_t> axes) const {
        check_axes(axes);
        std::vector<std::size_t> mdims;
        for (auto a : axes) mdims.push_back(dims_[a]);
        std::vector<double> out(volume(mdims), 0.0);
        std::vector<std::size_t> digits(dims_.size());
        for (std::size_t i = 0; i < probs_.size(); ++i) {
            if (probs_[i] == 0.0) continue;
            unflatten(i, digits);
            std::size_t j = 0;
            for (std::size_t k = 0; k < axes.size(); ++k) j = j * mdims[k] + digits[axes[k]];
            out[j] += probs_[i];
        }
        JointPmf m;
        m.dims_ = std::move(mdims);
        m.probs_ = std::move(out);
        return m;
    }

    JointPmf marginal(std::initializer_list<std::size_t> axes) const {
        std::vector<std::size_t> a(axes);
        return marginal(std::span<const std::size_t>(a));
    }

    void check_axes(std::span<const std::size_t> axes) const {
        std::vector<bool> seen(dims_.size(), false);
        for (auto a : axes) {
            detail::require(a < dims_.size(), "JointPmf: axis " + std::to_string(a) + " out of range");
            detail::require(!seen[a], "JointPmf: axis " + std::to_string(a) + " listed twice");
            seen[a] = true;
        }
    }

private:
    std::vector<std::size_t> dims_;
    std::vector<double> probs_;
};

}  // namespace cdtrade
