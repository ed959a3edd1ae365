#pragma once

#include <iosfwd>
#include <string>
#include <string_view>

#include "adjoint_fp/grid_function.hpp"

namespace adjoint_fp {

/// Shortest decimal text that parses back to the same double.
std::string format_double(double v);

/// `# grid dim=<d> n=<n0>[,<n1>] domain=<lo0>,<hi0>[;<lo1>,<hi1>] topology=<periodic|bounded>`
std::string grid_header(const Grid& grid);
/// Inverse of grid_header. Boundary tags of bounded grids are not part of the
/// header; the returned grid has no exits (all boundary nodes are walls).
Grid parse_grid_header(std::string_view line);

/// One row per node: index coordinates then value, preceded by the grid header
/// and any extra `#` lines given.
void write_csv(std::ostream& out, const GridFunction& u, std::string_view extra_header = {});
GridFunction read_csv(std::istream& in);

/// Dense matrix with one text row per y index (2-D heat maps). 1-D functions
/// produce a single row.
void write_matrix(std::ostream& out, const GridFunction& u);

}  // namespace adjoint_fp
