#pragma once

#include <cmath>
#include <cstddef>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "cdtrade/error.hpp"

namespace cdtrade {

/// Tolerance on the total mass of every pmf accepted by the library.
inline constexpr double kSimplexTolerance = 1e-9;

/// A probability mass function over the index set [0, size()).
///
/// Construction validates the simplex constraints; inputs that are off by
/// more than kSimplexTolerance are rejected, never renormalized.
class SimplexVector {
public:
    SimplexVector() = default;

    explicit SimplexVector(std::vector<double> probs) : probs_(std::move(probs)) {
        validate(probs_, "SimplexVector");
    }

    static SimplexVector uniform(std::size_t n) {
        detail::require(n > 0, "SimplexVector::uniform: empty alphabet");
        return SimplexVector(std::vector<double>(n, 1.0 / static_cast<double>(n)));
    }

    static SimplexVector point_mass(std::size_t n, std::size_t at) {
        detail::require(at < n, "SimplexVector::point_mass: index out of range");
        std::vector<double> p(n, 0.0);
        p[at] = 1.0;
        return SimplexVector(std::move(p));
    }

    static SimplexVector bernoulli(double one) {
        detail::require(one >= 0.0 && one <= 1.0, "SimplexVector::bernoulli: parameter outside [0,1]");
        return SimplexVector({1.0 - one, one});
    }

    std::size_t size() const noexcept { return probs_.size(); }
    double operator[](std::size_t i) const { return probs_[i]; }
    std::span<const double> probs() const noexcept { return probs_; }
    const std::vector<double>& vec() const noexcept { return probs_; }

    static void validate(std::span<const double> p, const std::string& what) {
        detail::require(!p.empty(), what + ": empty pmf");
        double total = 0.0;
        for (double v : p) {
            detail::require(std::isfinite(v) && v >= 0.0, what + ": negative or non-finite entry");
            total += v;
        }
        detail::require(std::abs(total - 1.0) <= kSimplexTolerance,
                        what + ": entries sum to " + std::to_string(total) + ", expected 1");
    }

    friend bool operator==(const SimplexVector&, const SimplexVector&) = default;

private:
    std::vector<double> probs_;
};

/// A conditional pmf: one SimplexVector row per conditioning index.
///
/// The meaning of the row index (e.g. x * card_s + s) is declared by the owner.
class StochasticTable {
public:
    StochasticTable() = default;

    StochasticTable(std::size_t rows, std::size_t cols, std::vector<double> flat)
        : rows_(rows), cols_(cols), data_(std::move(flat)) {
        detail::require(rows > 0 && cols > 0, "StochasticTable: zero dimension");
        detail::require(data_.size() == rows * cols, "StochasticTable: expected " +
                                                         std::to_string(rows * cols) + " entries, got " +
                                                         std::to_string(data_.size()));
        for (std::size_t r = 0; r < rows_; ++r)
            SimplexVector::validate(row(r), "StochasticTable row " + std::to_string(r));
    }

    StochasticTable(const std::vector<SimplexVector>& rows) {
        detail::require(!rows.empty(), "StochasticTable: no rows");
        rows_ = rows.size();
        cols_ = rows.front().size();
        data_.reserve(rows_ * cols_);
        for (const auto& r : rows) {
            detail::require(r.size() == cols_, "StochasticTable: ragged rows");
            data_.insert(data_.end(), r.vec().begin(), r.vec().end());
        }
    }

    static StochasticTable uniform(std::size_t rows, std::size_t cols) {
        return StochasticTable(rows, cols, std::vector<double>(rows * cols, 1.0 / static_cast<double>(cols)));
    }

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }

    std::span<const double> row(std::size_t r) const {
        return std::span<const double>(data_).subspan(r * cols_, cols_);
    }
    double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
    const std::vector<double>& flat() const noexcept { return data_; }

    friend bool operator==(const StochasticTable&, const StochasticTable&) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

}  // namespace cdtrade
