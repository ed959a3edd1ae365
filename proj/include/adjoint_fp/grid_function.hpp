#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "adjoint_fp/grid.hpp"

namespace adjoint_fp {

/// Real values on the nodes of a grid. The grid is shared, the values owned.
class GridFunction {
public:
    GridFunction() = default;
    explicit GridFunction(GridPtr grid, double fill = 0.0);
    GridFunction(GridPtr grid, std::vector<double> values);

    /// Samples f at every node position.
    static GridFunction sample(GridPtr grid, const std::function<double(const Point&)>& f);

    bool empty() const { return !grid_; }
    const Grid& grid() const { return *grid_; }
    const GridPtr& grid_ptr() const { return grid_; }
    std::size_t size() const { return values_.size(); }

    double& operator[](std::size_t i) { return values_[i]; }
    double operator[](std::size_t i) const { return values_[i]; }
    std::span<double> values() { return values_; }
    std::span<const double> values() const { return values_; }
    std::vector<double>& data() { return values_; }
    const std::vector<double>& data() const { return values_; }

    double min() const;
    double max() const;
    bool all_finite() const;

    GridFunction& operator+=(const GridFunction& other);
    GridFunction& operator-=(const GridFunction& other);
    GridFunction& operator*=(double s);
    /// this += s * other
    GridFunction& axpy(double s, const GridFunction& other);

    friend bool operator==(const GridFunction& a, const GridFunction& b) { return a.values_ == b.values_; }

private:
    GridPtr grid_;
    std::vector<double> values_;
};

GridFunction operator+(GridFunction a, const GridFunction& b);
GridFunction operator-(GridFunction a, const GridFunction& b);
GridFunction operator*(double s, GridFunction a);

bool same_grid(const Grid& a, const Grid& b);
/// Throws GridMismatch unless the two functions share a grid.
void require_same_grid(const GridFunction& a, const GridFunction& b, const char* what);

// ---------------------------------------------------------------------------
// Discrete calculus
// ---------------------------------------------------------------------------

/// (u[i+1] - u[i]) / dx along `axis`. On a bounded grid the ghost value past
/// the last node equals the node value, so the difference there is 0.
GridFunction diff_forward(const GridFunction& u, int axis);

/// (u[i] - u[i-1]) / dx along `axis`, adjoint to -diff_forward on the torus.
GridFunction diff_backward(const GridFunction& u, int axis);

/// Negative five-point (three-point in 1-D) Laplacian:
/// sum over axes of (2u[i] - u[i+1] - u[i-1]) / dx^2.
GridFunction neg_laplacian(const GridFunction& u);

/// dx^dim * sum f g
double inner_product(const GridFunction& f, const GridFunction& g);
double total_mass(const GridFunction& m);

// ---------------------------------------------------------------------------
// Multilinear interpolation
// ---------------------------------------------------------------------------

/// Up to four nodes and their nonnegative weights (summing to one).
struct InterpolationStencil {
    std::array<std::size_t, 4> index{};
    std::array<double, 4> weight{};
    int count = 0;
};

/// Periodic grids wrap x into the domain; bounded grids clamp it to the hull
/// of the nodes.
InterpolationStencil interpolation_stencil(const Grid& grid, const Point& x);
double interpolate(const GridFunction& u, const Point& x);

inline double apply_stencil(const InterpolationStencil& s, std::span<const double> values) {
    double v = 0.0;
    for (int k = 0; k < s.count; ++k) v += s.weight[static_cast<std::size_t>(k)] * values[s.index[static_cast<std::size_t>(k)]];
    return v;
}

}  // namespace adjoint_fp
