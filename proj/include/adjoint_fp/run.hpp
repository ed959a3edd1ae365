#pragma once

#include <exception>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

#include "adjoint_fp/config.hpp"

namespace adjoint_fp {

/**
 * Density transported by the generator frozen at u0: M_t = -J(u0)^T M.
 * On bounded grids boundary rows are zeroed and M is reset to 0 on boundary
 * nodes after every step (absorbing exits and walls).
 */
Trajectory solve_fp(const SchemeSpec& scheme, const GridFunction& u0, const GridFunction& rho0,
                    const IntegratorSpec& integrator);

struct RunSummary {
    double final_mass = 0.0;
    double final_min = 0.0;
    double wall_seconds = 0.0;
    /// FP vs particle L1 distance (validate only).
    std::optional<double> l1_distance;
    std::string line() const;
};

/// Runs cfg.command, writing outputs under cfg.output_dir and progress notes
/// to `log`. Throws the library's error types.
RunSummary execute(const RunConfig& cfg, std::ostream& log);

/// 2 for ConfigError, 3 for NumericalError, 4 for IoError and filesystem
/// errors, 1 otherwise.
int exit_code_for(const std::exception& e);

/// execute() with the summary printed to `out`; failures are reported on
/// `err` as `<error class>: <message>` and mapped by exit_code_for().
int run(const RunConfig& cfg, std::ostream& out, std::ostream& err);

}  // namespace adjoint_fp
