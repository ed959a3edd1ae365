#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "adjoint_fp/grid_function.hpp"
#include "adjoint_fp/scheme.hpp"
#include "adjoint_fp/stencil_operator.hpp"

namespace adjoint_fp {

/**
 * Linearization of the semi-discrete HJ operator at a frozen U together with
 * the Fokker-Planck right-hand side it induces.
 *
 * J = dN/dU is assembled row by row from the same node kernel that evaluates
 * N, so the upwind side / argmax control chosen at U is the one
 * differentiated. The density evolves by M_t = -J^T M; because N commutes
 * with constants the rows of J sum to zero, hence the columns of -J^T do and
 * mass is conserved, and monotonicity of N makes -J^T a Metzler matrix.
 */
class FpGenerator {
public:
    static FpGenerator linearize(const SchemeSpec& scheme, const GridFunction& U);
    /// Rows of `fixed_nodes` (Dirichlet nodes whose value is prescribed) are
    /// zeroed, so mass reaching them stays until the caller removes it.
    static FpGenerator linearize(const SchemeSpec& scheme, const GridFunction& U, const std::vector<bool>& fixed_nodes);

    const StencilOperator& jacobian() const { return jacobian_; }
    const StencilOperator& jacobian_transpose() const { return jacobian_t_; }
    const SchemeSpec& scheme() const { return scheme_; }
    const GridFunction& frozen_value() const { return frozen_; }

    /// -J^T M
    GridFunction fp_rhs(const GridFunction& M) const;
    /// J W (the linearized HJ generator applied to a test function)
    GridFunction apply_linearized(const GridFunction& W) const { return jacobian_.apply(W); }

    /// 1 / max |diag J| (+inf when the diagonal vanishes). Any Euler step
    /// dt <= this keeps I - dt J^T entrywise nonnegative.
    double cfl_max_step() const { return cfl_step_; }

private:
    FpGenerator(SchemeSpec scheme, GridFunction frozen, StencilOperator jacobian);

    SchemeSpec scheme_;
    GridFunction frozen_;
    StencilOperator jacobian_;
    StencilOperator jacobian_t_;
    double cfl_step_;
};

struct AdjointReport {
    bool passed = true;
    double max_relative_defect = 0.0;
    int trials = 0;
};

/// Worst |<fp(M), W> + <M, J W>| over random (M, W) pairs, relative to
/// dx^d * sum |fp(M)_i W_i| + |M_i (J W)_i|.
AdjointReport adjoint_defect(const FpGenerator& gen, const std::function<GridFunction(const GridFunction&)>& fp,
                             int trials, std::uint64_t seed = 12345, double tol = 1e-12);
/// adjoint_defect with fp = gen.fp_rhs.
AdjointReport check_adjoint(const FpGenerator& gen, int trials, std::uint64_t seed = 12345, double tol = 1e-12);

}  // namespace adjoint_fp
