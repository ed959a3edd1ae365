#include "adjoint_fp/eikonal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "adjoint_fp/errors.hpp"

namespace adjoint_fp {

namespace {

// Smallest u with sum_k ((u - a_k)^+ / h_k)^2 = c^2.
double local_solve(double a, double ha, double b, double hb, double c) {
    const double one_sided = std::min(a + c * ha, b + c * hb);
    if (one_sided <= std::max(a, b)) return one_sided;
    const double wa = 1.0 / (ha * ha), wb = 1.0 / (hb * hb);
    const double disc = (wa + wb) * c * c - wa * wb * (a - b) * (a - b);
    if (disc < 0.0) return one_sided;
    const double u = (wa * a + wb * b + std::sqrt(disc)) / (wa + wb);
    return u >= std::max(a, b) ? std::min(u, one_sided) : one_sided;
}

}  // namespace

EikonalResult solve_eikonal(const GridFunction& c_field, const EikonalOptions& options) {
    const Grid& g = c_field.grid();
    if (g.periodic()) throw ValidationError("eikonal.grid", "needs a bounded grid");
    if (!(options.tol > 0.0)) throw ValidationError("eikonal.tol", "must be > 0");
    if (c_field.min() <= 0.0 || !c_field.all_finite()) {
        throw ValidationError("eikonal.c_field", "right-hand side must be positive and finite");
    }

    EikonalResult res;
    res.U = GridFunction(c_field.grid_ptr(), options.wall_value);
    auto& U = res.U;
    bool any_exit = false;
    for (std::size_t i = 0; i < g.size(); ++i) {
        if (g.tag(i) == NodeTag::Exit) {
            U[i] = 0.0;
            any_exit = true;
        }
    }
    if (!any_exit) throw ValidationError("eikonal.exit", "grid has no exit nodes");

    const int n0 = g.n(0), n1 = g.n(1);
    const int max_iter = options.max_iter > 0 ? options.max_iter : 10 * n0 * n1;
    const double h0 = g.dx(0), h1 = g.dim() == 2 ? g.dx(1) : 1.0;
    const double inf = std::numeric_limits<double>::infinity();

    auto update = [&](int i, int j) {
        const std::size_t idx = g.index(i, j);
        if (g.is_boundary(idx)) return 0.0;
        const double a = std::min(i > 0 ? U[idx - 1] : inf, i + 1 < n0 ? U[idx + 1] : inf);
        double b = inf;
        if (g.dim() == 2) {
            const auto row = static_cast<std::size_t>(n0);
            b = std::min(j > 0 ? U[idx - row] : inf, j + 1 < n1 ? U[idx + row] : inf);
        }
        const double u = local_solve(a, h0, b, h1, c_field[idx]);
        if (u < U[idx]) {
            const double change = U[idx] - u;
            U[idx] = u;
            return change;
        }
        return 0.0;
    };

    const int orders = g.dim() == 2 ? 4 : 2;
    for (res.iterations = 1; res.iterations <= max_iter; ++res.iterations) {
        double change = 0.0;
        for (int o = 0; o < orders; ++o) {
            const bool rev_i = o & 1, rev_j = o & 2;
            for (int jj = 0; jj < n1; ++jj) {
                const int j = rev_j ? n1 - 1 - jj : jj;
                for (int ii = 0; ii < n0; ++ii) {
                    const int i = rev_i ? n0 - 1 - ii : ii;
                    change = std::max(change, update(i, j));
                }
            }
        }
        res.residual = change;
        if (change < options.tol) {
            res.converged = true;
            return res;
        }
    }
    res.iterations = max_iter;
    return res;
}

}  // namespace adjoint_fp
