#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "adjoint_fp/grid_function.hpp"
#include "adjoint_fp/scheme.hpp"

namespace adjoint_fp {

/**
 * Sparse linear operator on grid functions, stored row-compressed with the
 * columns of each row in ascending order. Transposition swaps indices and
 * never recomputes coefficients. Column indices are 32-bit.
 */
class StencilOperator {
public:
    StencilOperator() = default;
    /// Duplicate columns within a row are summed, in the order given.
    StencilOperator(GridPtr grid, const std::vector<std::vector<RowEntry>>& rows);

    const GridPtr& grid_ptr() const { return grid_; }
    std::size_t rows() const { return row_start_.empty() ? 0 : row_start_.size() - 1; }
    std::size_t nonzeros() const { return cols_.size(); }

    std::span<const std::uint32_t> row_columns(std::size_t r) const {
        return {cols_.data() + row_start_[r], row_start_[r + 1] - row_start_[r]};
    }
    std::span<const double> row_values(std::size_t r) const {
        return {values_.data() + row_start_[r], row_start_[r + 1] - row_start_[r]};
    }

    double coefficient(std::size_t r, std::size_t c) const;
    double diagonal(std::size_t r) const { return coefficient(r, r); }
    double row_sum(std::size_t r) const;
    std::size_t max_row_nonzeros() const;

    GridFunction apply(const GridFunction& u) const;
    /// out = scale * (A u); `out` is resized onto u's grid if needed.
    void apply_into(const GridFunction& u, GridFunction& out, double scale = 1.0) const;
    StencilOperator transpose() const;
    /// Copy with the listed rows replaced by zero rows.
    StencilOperator with_zero_rows(const std::vector<bool>& rows) const;

    /// `row col value` lines, row-major.
    void write_coordinates(std::ostream& out) const;

    friend bool operator==(const StencilOperator& a, const StencilOperator& b) {
        return a.row_start_ == b.row_start_ && a.cols_ == b.cols_ && a.values_ == b.values_;
    }

private:
    GridPtr grid_;
    std::vector<std::size_t> row_start_;
    std::vector<std::uint32_t> cols_;
    std::vector<double> values_;
};

}  // namespace adjoint_fp
