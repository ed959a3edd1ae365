#include "adjoint_fp/stencil_operator.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>
#include <ostream>

#include "adjoint_fp/errors.hpp"
#include "adjoint_fp/grid_io.hpp"
#include "adjoint_fp/parallel.hpp"

namespace adjoint_fp {

StencilOperator::StencilOperator(GridPtr grid, const std::vector<std::vector<RowEntry>>& rows)
    : grid_(std::move(grid)) {
    if (rows.size() > std::numeric_limits<std::uint32_t>::max()) throw std::length_error("StencilOperator: too many rows");
    row_start_.assign(rows.size() + 1, 0);
    std::vector<RowEntry> merged;
    for (std::size_t r = 0; r < rows.size(); ++r) {
        merged = rows[r];
        std::stable_sort(merged.begin(), merged.end(), [](const RowEntry& a, const RowEntry& b) { return a.col < b.col; });
        for (std::size_t k = 0; k < merged.size();) {
            const std::size_t c = merged[k].col;
            double v = 0.0;
            for (; k < merged.size() && merged[k].col == c; ++k) v += merged[k].value;
            cols_.push_back(static_cast<std::uint32_t>(c));
            values_.push_back(v);
        }
        row_start_[r + 1] = cols_.size();
    }
}

double StencilOperator::coefficient(std::size_t r, std::size_t c) const {
    auto cols = row_columns(r);
    auto it = std::lower_bound(cols.begin(), cols.end(), c);
    if (it == cols.end() || *it != c) return 0.0;
    return row_values(r)[static_cast<std::size_t>(it - cols.begin())];
}

double StencilOperator::row_sum(std::size_t r) const {
    double s = 0.0;
    for (double v : row_values(r)) s += v;
    return s;
}

std::size_t StencilOperator::max_row_nonzeros() const {
    std::size_t m = 0;
    for (std::size_t r = 0; r < rows(); ++r) m = std::max(m, row_start_[r + 1] - row_start_[r]);
    return m;
}

GridFunction StencilOperator::apply(const GridFunction& u) const {
    GridFunction out;
    apply_into(u, out);
    return out;
}

void StencilOperator::apply_into(const GridFunction& u, GridFunction& out, double scale) const {
    if (u.empty() || u.size() != rows() || !same_grid(u.grid(), *grid_)) {
        throw GridMismatch("StencilOperator::apply: grid function lives on a different grid");
    }
    if (out.empty() || out.size() != u.size() || out.grid_ptr() != u.grid_ptr()) out = GridFunction(u.grid_ptr());
    const double* in = u.data().data();
    double* dst = out.data().data();
    const std::size_t* start = row_start_.data();
    const std::uint32_t* cols = cols_.data();
    const double* vals = values_.data();
    parallel_for(rows(), [=](std::size_t b, std::size_t e) {
        for (std::size_t r = b; r < e; ++r) {
            double acc = 0.0;
            for (std::size_t k = start[r]; k < start[r + 1]; ++k) acc += vals[k] * in[cols[k]];
            dst[r] = scale * acc;
        }
    });
}

StencilOperator StencilOperator::transpose() const {
    StencilOperator t;
    t.grid_ = grid_;
    const std::size_t n = rows();
    t.row_start_.assign(n + 1, 0);
    for (std::size_t c : cols_) ++t.row_start_[c + 1];
    for (std::size_t r = 0; r < n; ++r) t.row_start_[r + 1] += t.row_start_[r];
    t.cols_.resize(cols_.size());
    t.values_.resize(values_.size());
    std::vector<std::size_t> fill(t.row_start_.begin(), t.row_start_.end() - 1);
    // Rows visited in ascending order keep each transposed row sorted.
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t k = row_start_[r]; k < row_start_[r + 1]; ++k) {
            const std::size_t slot = fill[cols_[k]]++;
            t.cols_[slot] = static_cast<std::uint32_t>(r);
            t.values_[slot] = values_[k];
        }
    }
    return t;
}

StencilOperator StencilOperator::with_zero_rows(const std::vector<bool>& rows_to_zero) const {
    StencilOperator z;
    z.grid_ = grid_;
    z.row_start_.assign(rows() + 1, 0);
    for (std::size_t r = 0; r < rows(); ++r) {
        if (!(r < rows_to_zero.size() && rows_to_zero[r])) {
            for (std::size_t k = row_start_[r]; k < row_start_[r + 1]; ++k) {
                z.cols_.push_back(cols_[k]);
                z.values_.push_back(values_[k]);
            }
        }
        z.row_start_[r + 1] = z.cols_.size();
    }
    return z;
}

void StencilOperator::write_coordinates(std::ostream& out) const {
    for (std::size_t r = 0; r < rows(); ++r) {
        for (std::size_t k = row_start_[r]; k < row_start_[r + 1]; ++k) {
            out << r << ' ' << cols_[k] << ' ' << format_double(values_[k]) << '\n';
        }
    }
}

}  // namespace adjoint_fp
