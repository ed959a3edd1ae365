#include "adjoint_fp/hamiltonian.hpp"

#include <cmath>

#include "adjoint_fp/detail/overloaded.hpp"
#include "adjoint_fp/errors.hpp"

namespace adjoint_fp {

namespace {

using detail::overloaded;

void require_on_grid(const GridFunction& f, const Grid& grid, const char* field) {
    if (f.empty() || !same_grid(f.grid(), grid)) throw ValidationError(field, "must be sampled on the scheme grid");
}

}  // namespace

void validate(const HamiltonianSpec& h, const Grid& grid) {
    std::visit(overloaded{
                   [&](const PowerNorm& pn) {
                       require_on_grid(pn.potential, grid, "hamiltonian.potential");
                       if (!(pn.alpha > 1.0)) throw ValidationError("hamiltonian.alpha", "must be > 1");
                   },
                   [&](const LinearDrift& ld) {
                       if (static_cast<int>(ld.velocity.size()) != grid.dim()) {
                           throw ValidationError("hamiltonian.drift", "needs one component per axis");
                       }
                       for (const auto& b : ld.velocity) require_on_grid(b, grid, "hamiltonian.drift");
                   },
                   [&](const ScaledQuadratic& sq) {
                       require_on_grid(sq.coefficient, grid, "hamiltonian.coefficient");
                       if (sq.coefficient.min() < 0.0) throw ValidationError("hamiltonian.coefficient", "must be >= 0");
                   },
               },
               h);
}

double hamiltonian_value(const HamiltonianSpec& h, std::size_t node, const Point& p) {
    return std::visit(overloaded{
                          [&](const PowerNorm& pn) {
                              return pn.potential[node] + std::pow(std::hypot(p[0], p[1]), pn.alpha);
                          },
                          [&](const LinearDrift& ld) {
                              double v = 0.0;
                              for (std::size_t a = 0; a < ld.velocity.size(); ++a) v -= ld.velocity[a][node] * p[a];
                              return v;
                          },
                          [&](const ScaledQuadratic& sq) {
                              const double q0 = p[0] + sq.shift;
                              return 0.5 * sq.coefficient[node] * (q0 * q0 + p[1] * p[1]);
                          },
                      },
                      h);
}

Point hamiltonian_gradient(const HamiltonianSpec& h, std::size_t node, const Point& p) {
    return std::visit(overloaded{
                          [&](const PowerNorm& pn) -> Point {
                              const double r = std::hypot(p[0], p[1]);
                              if (r == 0.0) return {0.0, 0.0};
                              const double s = pn.alpha * std::pow(r, pn.alpha - 2.0);
                              return {s * p[0], s * p[1]};
                          },
                          [&](const LinearDrift& ld) -> Point {
                              Point g{0.0, 0.0};
                              for (std::size_t a = 0; a < ld.velocity.size(); ++a) g[a] = -ld.velocity[a][node];
                              return g;
                          },
                          [&](const ScaledQuadratic& sq) -> Point {
                              const double c = sq.coefficient[node];
                              return {c * (p[0] + sq.shift), c * p[1]};
                          },
                      },
                      h);
}

std::vector<GridFunction> optimal_velocity(const HamiltonianSpec& h, const GridFunction& U) {
    const Grid& g = U.grid();
    std::vector<GridFunction> out(static_cast<std::size_t>(g.dim()), GridFunction(U.grid_ptr()));
    for (std::size_t i = 0; i < g.size(); ++i) {
        Point p{0.0, 0.0};
        for (int a = 0; a < g.dim(); ++a) {
            auto fw = g.neighbor(i, a, +1), bw = g.neighbor(i, a, -1);
            const double up = fw ? U[*fw] : U[i], down = bw ? U[*bw] : U[i];
            const double span = (fw ? 1.0 : 0.0) + (bw ? 1.0 : 0.0);
            p[static_cast<std::size_t>(a)] = span > 0 ? (up - down) / (span * g.dx(a)) : 0.0;
        }
        const Point dp = hamiltonian_gradient(h, i, p);
        for (int a = 0; a < g.dim(); ++a) out[static_cast<std::size_t>(a)][i] = -dp[static_cast<std::size_t>(a)];
    }
    return out;
}

}  // namespace adjoint_fp
