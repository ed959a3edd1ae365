#pragma once

#include <variant>
#include <vector>

#include "adjoint_fp/grid_function.hpp"

namespace adjoint_fp {

/// H(x,p) = g(x) + |p|^alpha, alpha > 1.
struct PowerNorm {
    GridFunction potential;
    double alpha = 2.0;
};

/// Transport of the density with velocity b: H(x,p) = -b(x).p, so the adjoint
/// equation is rho_t + div(b rho) = eps Lap rho.
struct LinearDrift {
    /// One component per grid axis.
    std::vector<GridFunction> velocity;
};

/// H(x,p) = c(x) |p + shift e_0|^2 / 2 with c >= 0 (frozen-coefficient form of
/// congestion and crowd Hamiltonians). The shift acts on axis 0.
struct ScaledQuadratic {
    GridFunction coefficient;
    double shift = 0.0;
};

using HamiltonianSpec = std::variant<PowerNorm, LinearDrift, ScaledQuadratic>;

/// Throws ValidationError on alpha <= 1, negative coefficients, or fields
/// that do not live on `grid`.
void validate(const HamiltonianSpec& h, const Grid& grid);

/// Continuous H(x_node, p).
double hamiltonian_value(const HamiltonianSpec& h, std::size_t node, const Point& p);
/// Continuous D_pH(x_node, p).
Point hamiltonian_gradient(const HamiltonianSpec& h, std::size_t node, const Point& p);

/// Velocity field -D_pH(x, DU) of the optimal trajectories, sampled with
/// centred differences of U (per axis, one GridFunction each).
std::vector<GridFunction> optimal_velocity(const HamiltonianSpec& h, const GridFunction& U);

}  // namespace adjoint_fp
