#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "adjoint_fp/grid_function.hpp"
#include "adjoint_fp/hamiltonian.hpp"

namespace adjoint_fp {

inline double pos_part(double r) { return r > 0.0 ? r : 0.0; }
inline double neg_part(double r) { return r < 0.0 ? -r : 0.0; }

/// (p1^2 + p2^2 + p3^2 + p4^2)^(alpha/2); callers pass the already filtered
/// (p1^-, p2^+, p3^-, p4^+) arguments.
inline double upwind_G(double p1, double p2, double p3, double p4, double alpha) {
    const double s = p1 * p1 + p2 * p2 + p3 * p3 + p4 * p4;
    return s == 0.0 ? 0.0 : std::pow(s, 0.5 * alpha);
}

/// Monotone upwind finite differences. Slots per axis are (D+ U, D- U) with
/// D- the backward difference (U[i] - U[i-1]) / dx.
struct UpwindFD {};

/// Semi-Lagrangian discretization: the Hamiltonian part is a max over
/// displacements gamma*h (controls in the closed unit ball, h = min dx) of
/// interpolated differences, and the viscous part averages interpolated values
/// at x +- sqrt(2 d eps h) e_i.
struct SemiLagrangian {
    /// Empty means default_controls(dim).
    std::vector<Point> controls;

    /// 2-D: {0} followed by r (cos t_k, sin t_k) for r in {1/2, 1} and
    /// t_k = 2 pi k / 16 (33 controls). 1-D: {0, +-1/2, +-1}.
    static std::vector<Point> default_controls(int dim);
    /// {0} followed by `directions` equally spaced directions for each radius.
    static std::vector<Point> ring_controls(int directions, const std::vector<double>& radii);
};

using Discretization = std::variant<UpwindFD, SemiLagrangian>;

struct SchemeSpec {
    HamiltonianSpec hamiltonian;
    Discretization discretization = UpwindFD{};
    double epsilon = 0.0;

    void validate(const Grid& grid) const;
    bool semi_lagrangian() const { return std::holds_alternative<SemiLagrangian>(discretization); }
};

/// One coefficient d N_row / d U_col. Rows may list a column more than once;
/// consumers sum duplicates.
struct RowEntry {
    std::size_t col;
    double value;
};

/**
 * Value of the numerical operator N at one node. When `row` is non-null the
 * partial derivatives of that value with respect to U are appended to it,
 * using the branch (upwind side, argmax control) taken for the value.
 */
double evaluate_node(const SchemeSpec& scheme, const Grid& grid, std::span<const double> U, std::size_t node,
                     std::vector<RowEntry>* row);

/// Node-wise monotone approximation of H(x, DU) - eps Lap U.
GridFunction apply_N(const SchemeSpec& scheme, const GridFunction& U);

struct MonotonicityReport {
    bool passed = true;
    /// Largest off-diagonal d N_i / d U_j found (j != i).
    double worst_off_diagonal = 0.0;
    std::size_t row = 0;
    std::size_t col = 0;
    std::string describe() const;
};

/// Inspects the Jacobian of the scheme at U for positive off-diagonals.
MonotonicityReport check_monotone(const SchemeSpec& scheme, const GridFunction& U, double tol = 1e-10);

/// Same audit for an arbitrary node operator, by one-sided finite-difference
/// probes of amplitude `probe`. A monotone operator gives nonpositive
/// quotients for any probe size, so `probe` can be large to suppress rounding.
MonotonicityReport check_monotone(const std::function<GridFunction(const GridFunction&)>& op, const GridFunction& U,
                                  double tol = 1e-10, double probe = 1e-2);

}  // namespace adjoint_fp
