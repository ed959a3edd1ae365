#include "adjoint_fp/grid_function.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "adjoint_fp/errors.hpp"

namespace adjoint_fp {

GridFunction::GridFunction(GridPtr grid, double fill) : grid_(std::move(grid)) {
    if (!grid_) throw std::invalid_argument("grid function needs a grid");
    values_.assign(grid_->size(), fill);
}

GridFunction::GridFunction(GridPtr grid, std::vector<double> values)
    : grid_(std::move(grid)), values_(std::move(values)) {
    if (!grid_) throw std::invalid_argument("grid function needs a grid");
    if (values_.size() != grid_->size()) {
        throw std::invalid_argument("grid function has " + std::to_string(values_.size()) + " values for " +
                                    std::to_string(grid_->size()) + " nodes");
    }
}

GridFunction GridFunction::sample(GridPtr grid, const std::function<double(const Point&)>& f) {
    GridFunction u(grid);
    for (std::size_t i = 0; i < u.size(); ++i) u[i] = f(grid->position(i));
    return u;
}

double GridFunction::min() const { return *std::min_element(values_.begin(), values_.end()); }
double GridFunction::max() const { return *std::max_element(values_.begin(), values_.end()); }

bool GridFunction::all_finite() const {
    return std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); });
}

GridFunction& GridFunction::operator+=(const GridFunction& other) { return axpy(1.0, other); }
GridFunction& GridFunction::operator-=(const GridFunction& other) { return axpy(-1.0, other); }

GridFunction& GridFunction::operator*=(double s) {
    for (auto& v : values_) v *= s;
    return *this;
}

GridFunction& GridFunction::axpy(double s, const GridFunction& other) {
    require_same_grid(*this, other, "axpy");
    for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += s * other.values_[i];
    return *this;
}

GridFunction operator+(GridFunction a, const GridFunction& b) { return a += b; }
GridFunction operator-(GridFunction a, const GridFunction& b) { return a -= b; }
GridFunction operator*(double s, GridFunction a) { return a *= s; }

bool same_grid(const Grid& a, const Grid& b) { return &a == &b || a == b; }

void require_same_grid(const GridFunction& a, const GridFunction& b, const char* what) {
    if (a.empty() || b.empty() || !same_grid(a.grid(), b.grid())) {
        throw GridMismatch(std::string(what) + ": grid functions live on different grids");
    }
}

namespace {

void check_axis(const Grid& grid, int axis) {
    if (axis < 0 || axis >= grid.dim()) {
        throw std::out_of_range("axis " + std::to_string(axis) + " invalid for a " + std::to_string(grid.dim()) +
                                "-D grid");
    }
}

}  // namespace

GridFunction diff_forward(const GridFunction& u, int axis) {
    const Grid& g = u.grid();
    check_axis(g, axis);
    GridFunction out(u.grid_ptr());
    const double inv = 1.0 / g.dx(axis);
    for (std::size_t i = 0; i < g.size(); ++i) {
        auto nb = g.neighbor(i, axis, +1);
        out[i] = nb ? (u[*nb] - u[i]) * inv : 0.0;
    }
    return out;
}

GridFunction diff_backward(const GridFunction& u, int axis) {
    const Grid& g = u.grid();
    check_axis(g, axis);
    GridFunction out(u.grid_ptr());
    const double inv = 1.0 / g.dx(axis);
    for (std::size_t i = 0; i < g.size(); ++i) {
        auto nb = g.neighbor(i, axis, -1);
        out[i] = nb ? (u[i] - u[*nb]) * inv : 0.0;
    }
    return out;
}

GridFunction neg_laplacian(const GridFunction& u) {
    const Grid& g = u.grid();
    GridFunction out(u.grid_ptr());
    for (std::size_t i = 0; i < g.size(); ++i) {
        double acc = 0.0;
        for (int a = 0; a < g.dim(); ++a) {
            const double inv2 = 1.0 / (g.dx(a) * g.dx(a));
            for (int step : {+1, -1}) {
                auto nb = g.neighbor(i, a, step);
                if (nb) acc += (u[i] - u[*nb]) * inv2;
            }
        }
        out[i] = acc;
    }
    return out;
}

double inner_product(const GridFunction& f, const GridFunction& g) {
    require_same_grid(f, g, "inner_product");
    double acc = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) acc += f[i] * g[i];
    return acc * f.grid().cell_volume();
}

double total_mass(const GridFunction& m) {
    double acc = 0.0;
    for (double v : m.values()) acc += v;
    return acc * m.grid().cell_volume();
}

namespace {

// Node coordinate of x along one axis, as (lower node, fraction in [0,1)).
struct AxisLocation {
    int lower;
    int upper;
    double fraction;
};

AxisLocation locate(const Grid& grid, int axis, double x) {
    const auto k = static_cast<std::size_t>(axis);
    const int n = grid.n(axis);
    const double lo = grid.domain().lower[k];
    const double dx = grid.dx(axis);
    if (grid.periodic()) {
        double t = (x - lo) / dx;
        t -= n * std::floor(t / n);
        const double r = std::round(t);
        if (std::abs(t - r) < 1e-11) t = r;
        if (t >= n) t -= n;
        int i0 = static_cast<int>(std::floor(t));
        if (i0 >= n) i0 = n - 1;
        return {i0, (i0 + 1) % n, t - i0};
    }
    double t = (x - lo) / dx - 0.5;
    t = std::clamp(t, 0.0, static_cast<double>(n - 1));
    const double r = std::round(t);
    if (std::abs(t - r) < 1e-11) t = r;
    int i0 = std::min(static_cast<int>(std::floor(t)), n - 2);
    return {i0, i0 + 1, t - i0};
}

}  // namespace

InterpolationStencil interpolation_stencil(const Grid& grid, const Point& x) {
    InterpolationStencil s;
    const AxisLocation ax = locate(grid, 0, x[0]);
    if (grid.dim() == 1) {
        s.count = 2;
        s.index = {grid.index(ax.lower), grid.index(ax.upper), 0, 0};
        s.weight = {1.0 - ax.fraction, ax.fraction, 0.0, 0.0};
        return s;
    }
    const AxisLocation ay = locate(grid, 1, x[1]);
    s.count = 4;
    s.index = {grid.index(ax.lower, ay.lower), grid.index(ax.upper, ay.lower), grid.index(ax.lower, ay.upper),
               grid.index(ax.upper, ay.upper)};
    const double fx = ax.fraction, fy = ay.fraction;
    s.weight = {(1.0 - fx) * (1.0 - fy), fx * (1.0 - fy), (1.0 - fx) * fy, fx * fy};
    return s;
}

double interpolate(const GridFunction& u, const Point& x) {
    return apply_stencil(interpolation_stencil(u.grid(), x), u.values());
}

}  // namespace adjoint_fp
