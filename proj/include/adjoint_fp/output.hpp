#pragma once

#include <filesystem>
#include <vector>

#include "adjoint_fp/hughes.hpp"
#include "adjoint_fp/particles.hpp"
#include "adjoint_fp/time_march.hpp"

namespace adjoint_fp {

/**
 * Writes, under out_dir:
 *   <field>/snapshot_NNNN.csv  one grid_core CSV per snapshot and field
 *   <field>/snapshot_NNNN.mat  dense matrix (rows = y index), 2-D only
 *   manifest.txt               `time file...` per snapshot
 *   diagnostics.csv            time,mass,min,max of the density per snapshot
 *   steps.csv                  time,dt,mass,min,max after every step
 * Throws IoError.
 */
void emit_plotdata(const Trajectory& traj, const std::filesystem::path& out_dir);

/// step,iterations,residual
void write_eikonal_log(const std::vector<EikonalLogEntry>& log, const std::filesystem::path& file);

/// grid_core CSV with a `# meta seed=.. particles=.. surviving_fraction=..` line.
void write_empirical(const EmpiricalDensity& d, const std::filesystem::path& file);

void write_grid_function(const GridFunction& u, const std::filesystem::path& file);
void write_text(const std::string& text, const std::filesystem::path& file);

}  // namespace adjoint_fp
