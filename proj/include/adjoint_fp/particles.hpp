#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "adjoint_fp/grid_function.hpp"

namespace adjoint_fp {

enum class SdeBoundary { PeriodicWrap, Absorb };

/// dX = b(X) dt + sqrt(2 eps) dW with X(0) distributed like rho0.
struct SdeConfig {
    /// One node-sampled component per axis (bilinearly interpolated).
    /// Empty means b = 0.
    std::vector<GridFunction> drift;
    double epsilon = 0.0;
    std::size_t particles = 100000;
    double dt = 1e-3;
    double t_final = 0.5;
    SdeBoundary boundary = SdeBoundary::PeriodicWrap;
    std::uint64_t seed = 1;

    void validate(const Grid& grid) const;
};

/// Histogram on the solver grid in units of particles per volume, normalized
/// by the initial particle count.
struct EmpiricalDensity {
    GridFunction density;
    double surviving_fraction = 1.0;
    std::uint64_t seed = 0;
    std::size_t particles = 0;
};

/// Final particle states. `displacement` is X(T) - X(0) without wrapping.
struct ParticleCloud {
    std::vector<Point> position;
    std::vector<Point> displacement;
    std::vector<bool> alive;
};

/**
 * Euler-Maruyama with the step t_final / ceil(t_final / dt). Particle p draws
 * from its own generator seeded with (seed, p), so results do not depend on
 * scheduling. Initial positions are drawn by inverse CDF over the cells of
 * rho0, uniformly within a cell.
 */
ParticleCloud simulate_particles(const SdeConfig& cfg, const GridFunction& rho0);

/// Nearest-node histogram of the surviving particles of a cloud.
EmpiricalDensity histogram(const ParticleCloud& cloud, const GridPtr& grid, std::size_t initial_count);

EmpiricalDensity simulate(const SdeConfig& cfg, const GridFunction& rho0);

/// dx^d sum |f - m| after scaling f to the surviving fraction of m.
/// Throws GridMismatch.
double compare(const GridFunction& fp_result, const EmpiricalDensity& mc_result);

}  // namespace adjoint_fp
