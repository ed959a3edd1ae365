#pragma once

#include "adjoint_fp/grid_function.hpp"

namespace adjoint_fp {

struct EikonalOptions {
    double tol = 1e-8;
    /// 0 selects 10 * n0 * n1.
    int max_iter = 0;
    /// Finite stand-in for the infinite value on walls.
    double wall_value = 1e6;
};

struct EikonalResult {
    GridFunction U;
    int iterations = 0;
    /// Sup-norm change during the last iteration.
    double residual = 0.0;
    bool converged = false;
};

/**
 * Upwind (Godunov) discretization of |DU| = c on a bounded grid, U = 0 on
 * exit nodes and U = wall_value on wall nodes, solved by Gauss-Seidel value
 * iteration with alternating sweep orders (one iteration = one pass in every
 * order). Interior nodes start at wall_value, a supersolution, so iterates
 * decrease monotonically to the discrete solution.
 *
 * Does not throw on non-convergence; the result carries the flag.
 */
EikonalResult solve_eikonal(const GridFunction& c_field, const EikonalOptions& options = {});

}  // namespace adjoint_fp
