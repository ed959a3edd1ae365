#include "adjoint_fp/scheme.hpp"

#include <limits>
#include <numbers>
#include <sstream>

#include "adjoint_fp/detail/overloaded.hpp"
#include "adjoint_fp/errors.hpp"
#include "adjoint_fp/fp_generator.hpp"
#include "adjoint_fp/parallel.hpp"

namespace adjoint_fp {

using detail::overloaded;

std::vector<Point> SemiLagrangian::default_controls(int dim) {
    if (dim == 1) return {{0.0, 0.0}, {0.5, 0.0}, {-0.5, 0.0}, {1.0, 0.0}, {-1.0, 0.0}};
    return ring_controls(16, {0.5, 1.0});
}

std::vector<Point> SemiLagrangian::ring_controls(int directions, const std::vector<double>& radii) {
    std::vector<Point> out{{0.0, 0.0}};
    for (double r : radii) {
        for (int k = 0; k < directions; ++k) {
            const double t = 2.0 * std::numbers::pi * k / directions;
            out.push_back({r * std::cos(t), r * std::sin(t)});
        }
    }
    return out;
}

void SchemeSpec::validate(const Grid& grid) const {
    adjoint_fp::validate(hamiltonian, grid);
    if (!(epsilon >= 0.0)) throw ValidationError("scheme.epsilon", "must be >= 0");
    if (const auto* sl = std::get_if<SemiLagrangian>(&discretization)) {
        if (sl->controls.empty()) return;
        bool has_zero = false;
        for (const auto& c : sl->controls) {
            const double r = std::hypot(c[0], c[1]);
            if (r > 1.0 + 1e-12) throw ValidationError("scheme.controls", "controls must lie in the closed unit ball");
            if (grid.dim() == 1 && c[1] != 0.0) throw ValidationError("scheme.controls", "1-D controls must have no y part");
            has_zero |= r == 0.0;
        }
        if (!has_zero) throw ValidationError("scheme.controls", "control set must contain the zero vector");
    }
}

namespace {

inline void push(std::vector<RowEntry>* row, std::size_t col, double v) {
    if (row) row->push_back({col, v});
}

struct AxisDiffs {
    std::optional<std::size_t> fw, bw;
    double pf = 0.0, pb = 0.0, dx = 1.0;
};

double upwind_node(const SchemeSpec& scheme, const Grid& g, std::span<const double> U, std::size_t i,
                   std::vector<RowEntry>* row) {
    const double ui = U[i];
    const int dim = g.dim();
    std::array<AxisDiffs, 2> ax{};
    for (int a = 0; a < dim; ++a) {
        auto& d = ax[static_cast<std::size_t>(a)];
        d.dx = g.dx(a);
        d.fw = g.neighbor(i, a, +1);
        d.bw = g.neighbor(i, a, -1);
        d.pf = d.fw ? (U[*d.fw] - ui) / d.dx : 0.0;
        d.pb = d.bw ? (ui - U[*d.bw]) / d.dx : 0.0;
    }

    double value = 0.0;
    const double eps = scheme.epsilon;
    if (eps > 0.0) {
        for (int a = 0; a < dim; ++a) {
            const auto& d = ax[static_cast<std::size_t>(a)];
            value -= eps * (d.pf - d.pb) / d.dx;
            const double w = eps / (d.dx * d.dx);
            if (d.fw) { push(row, *d.fw, -w); push(row, i, w); }
            if (d.bw) { push(row, *d.bw, -w); push(row, i, w); }
        }
    }

    // Quadratic-type terms share one derivative pattern: k * (f dF + b dB)
    // where f = (forward slot)^-, b = (backward slot)^+.
    auto filtered_derivatives = [&](const std::array<double, 2>& f, const std::array<double, 2>& b, double k) {
        if (!row || k == 0.0) return;
        for (int a = 0; a < dim; ++a) {
            const auto s = static_cast<std::size_t>(a);
            const auto& d = ax[s];
            if (f[s] > 0.0 && d.fw) { push(row, *d.fw, -k * f[s] / d.dx); push(row, i, k * f[s] / d.dx); }
            if (b[s] > 0.0 && d.bw) { push(row, *d.bw, -k * b[s] / d.dx); push(row, i, k * b[s] / d.dx); }
        }
    };

    std::visit(overloaded{
                   [&](const PowerNorm& pn) {
                       std::array<double, 2> f{}, b{};
                       double s = 0.0;
                       for (int a = 0; a < dim; ++a) {
                           const auto k = static_cast<std::size_t>(a);
                           f[k] = neg_part(ax[k].pf);
                           b[k] = pos_part(ax[k].pb);
                           s += f[k] * f[k] + b[k] * b[k];
                       }
                       value += pn.potential[i] + upwind_G(f[0], b[0], f[1], b[1], pn.alpha);
                       if (s > 0.0) filtered_derivatives(f, b, pn.alpha * std::pow(s, 0.5 * pn.alpha - 1.0));
                   },
                   [&](const ScaledQuadratic& sq) {
                       std::array<double, 2> f{}, b{};
                       const double c = sq.coefficient[i];
                       for (int a = 0; a < dim; ++a) {
                           const auto k = static_cast<std::size_t>(a);
                           const double shift = a == 0 ? sq.shift : 0.0;
                           f[k] = neg_part(ax[k].pf + shift);
                           b[k] = pos_part(ax[k].pb + shift);
                           value += 0.5 * c * (f[k] * f[k] + b[k] * b[k]);
                       }
                       // Slots frozen by a wall ghost carry no U dependence.
                       for (int a = 0; a < dim; ++a) {
                           const auto k = static_cast<std::size_t>(a);
                           if (!ax[k].fw) f[k] = 0.0;
                           if (!ax[k].bw) b[k] = 0.0;
                       }
                       filtered_derivatives(f, b, c);
                   },
                   [&](const LinearDrift& ld) {
                       for (int a = 0; a < dim; ++a) {
                           const auto k = static_cast<std::size_t>(a);
                           const auto& d = ax[k];
                           const double bv = ld.velocity[k][i];
                           const double bp = pos_part(bv), bm = neg_part(bv);
                           value += bm * d.pb - bp * d.pf;
                           if (d.fw && bp > 0.0) { push(row, *d.fw, -bp / d.dx); push(row, i, bp / d.dx); }
                           if (d.bw && bm > 0.0) { push(row, *d.bw, -bm / d.dx); push(row, i, bm / d.dx); }
                       }
                   },
               },
               scheme.hamiltonian);
    return value;
}

Point shifted(const Point& x, const Point& v, double h, int dim) {
    return {x[0] + h * v[0], dim == 2 ? x[1] + h * v[1] : 0.0};
}

// Appends coef * d/dU (U_i - I[U](stencil)).
void push_difference(std::vector<RowEntry>* row, std::size_t i, const InterpolationStencil& s, double coef) {
    if (!row || coef == 0.0) return;
    push(row, i, coef);
    for (int k = 0; k < s.count; ++k) {
        const auto kk = static_cast<std::size_t>(k);
        if (s.weight[kk] != 0.0) push(row, s.index[kk], -coef * s.weight[kk]);
    }
}

const std::vector<Point>& resolved_controls(const SemiLagrangian& sl, int dim) {
    static const std::vector<Point> one_d = SemiLagrangian::default_controls(1);
    static const std::vector<Point> two_d = SemiLagrangian::default_controls(2);
    if (!sl.controls.empty()) return sl.controls;
    return dim == 1 ? one_d : two_d;
}

double semi_lagrangian_node(const SchemeSpec& scheme, const std::vector<Point>& controls, const Grid& g,
                            std::span<const double> U, std::size_t i, std::vector<RowEntry>* row) {
    const int dim = g.dim();
    const double h = g.min_dx();
    const double ui = U[i];
    const Point x = g.position(i);
    double value = 0.0;

    // Largest (U_i - I[U](x + h gamma)) / h - shift . gamma over the controls,
    // first occurrence wins ties.
    auto best_control = [&](double shift) {
        double best = -std::numeric_limits<double>::infinity();
        std::size_t best_k = 0;
        for (std::size_t k = 0; k < controls.size(); ++k) {
            const auto s = interpolation_stencil(g, shifted(x, controls[k], h, dim));
            const double d = (ui - apply_stencil(s, U)) / h - shift * controls[k][0];
            if (d > best) {
                best = d;
                best_k = k;
            }
        }
        return std::pair{best, best_k};
    };

    std::visit(overloaded{
                   [&](const PowerNorm& pn) {
                       auto [best, k] = best_control(0.0);
                       const double p = pos_part(best);
                       value += pn.potential[i] + (p > 0.0 ? std::pow(p, pn.alpha) : 0.0);
                       if (p > 0.0) {
                           const auto s = interpolation_stencil(g, shifted(x, controls[k], h, dim));
                           push_difference(row, i, s, pn.alpha * std::pow(p, pn.alpha - 1.0) / h);
                       }
                   },
                   [&](const ScaledQuadratic& sq) {
                       auto [best, k] = best_control(sq.shift);
                       const double p = pos_part(best);
                       const double c = sq.coefficient[i];
                       value += 0.5 * c * p * p;
                       if (p > 0.0) {
                           const auto s = interpolation_stencil(g, shifted(x, controls[k], h, dim));
                           push_difference(row, i, s, c * p / h);
                       }
                   },
                   [&](const LinearDrift& ld) {
                       Point b{ld.velocity[0][i], dim == 2 ? ld.velocity[1][i] : 0.0};
                       const double speed = std::hypot(b[0], b[1]);
                       if (speed == 0.0) return;
                       const Point dir{b[0] / speed, b[1] / speed};
                       const auto s = interpolation_stencil(g, shifted(x, dir, h, dim));
                       value += speed * (ui - apply_stencil(s, U)) / h;
                       push_difference(row, i, s, speed / h);
                   },
               },
               scheme.hamiltonian);

    const double eps = scheme.epsilon;
    if (eps > 0.0) {
        // (U_i - S[U]) / h with S the average over x +- a e_axis, a^2 = 2 d eps h,
        // which is consistent with -eps Lap U.
        const double a = std::sqrt(2.0 * dim * eps * h);
        const double w = 1.0 / (2.0 * dim);
        double avg = 0.0;
        if (row) push(row, i, 1.0 / h);
        for (int axis = 0; axis < dim; ++axis) {
            for (double sign : {1.0, -1.0}) {
                Point y = x;
                y[static_cast<std::size_t>(axis)] += sign * a;
                const auto s = interpolation_stencil(g, y);
                avg += w * apply_stencil(s, U);
                if (row) {
                    for (int k = 0; k < s.count; ++k) {
                        const auto kk = static_cast<std::size_t>(k);
                        if (s.weight[kk] != 0.0) push(row, s.index[kk], -w * s.weight[kk] / h);
                    }
                }
            }
        }
        value += (ui - avg) / h;
    }
    return value;
}

}  // namespace

double evaluate_node(const SchemeSpec& scheme, const Grid& grid, std::span<const double> U, std::size_t node,
                     std::vector<RowEntry>* row) {
    if (const auto* sl = std::get_if<SemiLagrangian>(&scheme.discretization)) {
        return semi_lagrangian_node(scheme, resolved_controls(*sl, grid.dim()), grid, U, node, row);
    }
    return upwind_node(scheme, grid, U, node, row);
}

GridFunction apply_N(const SchemeSpec& scheme, const GridFunction& U) {
    scheme.validate(U.grid());
    GridFunction out(U.grid_ptr());
    const Grid& g = U.grid();
    auto in = U.values();
    parallel_for(g.size(), [&](std::size_t b, std::size_t e) {
        for (std::size_t i = b; i < e; ++i) out[i] = evaluate_node(scheme, g, in, i, nullptr);
    });
    return out;
}

std::string MonotonicityReport::describe() const {
    std::ostringstream os;
    os << (passed ? "monotone" : "NOT monotone") << ": worst off-diagonal " << worst_off_diagonal << " at (" << row
       << ", " << col << ")";
    return os.str();
}

MonotonicityReport check_monotone(const SchemeSpec& scheme, const GridFunction& U, double tol) {
    const auto gen = FpGenerator::linearize(scheme, U);
    const auto& J = gen.jacobian();
    MonotonicityReport rep;
    rep.worst_off_diagonal = -std::numeric_limits<double>::infinity();
    for (std::size_t r = 0; r < J.rows(); ++r) {
        auto cols = J.row_columns(r);
        auto vals = J.row_values(r);
        for (std::size_t k = 0; k < cols.size(); ++k) {
            if (cols[k] == r) continue;
            if (vals[k] > rep.worst_off_diagonal) {
                rep.worst_off_diagonal = vals[k];
                rep.row = r;
                rep.col = cols[k];
            }
        }
    }
    if (rep.worst_off_diagonal == -std::numeric_limits<double>::infinity()) rep.worst_off_diagonal = 0.0;
    rep.passed = rep.worst_off_diagonal <= tol;
    return rep;
}

MonotonicityReport check_monotone(const std::function<GridFunction(const GridFunction&)>& op, const GridFunction& U,
                                  double tol, double probe) {
    const GridFunction base = op(U);
    MonotonicityReport rep;
    rep.worst_off_diagonal = -std::numeric_limits<double>::infinity();
    GridFunction pert = U;
    for (std::size_t j = 0; j < U.size(); ++j) {
        pert[j] = U[j] + probe;
        const GridFunction moved = op(pert);
        pert[j] = U[j];
        for (std::size_t i = 0; i < U.size(); ++i) {
            if (i == j) continue;
            const double q = (moved[i] - base[i]) / probe;
            if (q > rep.worst_off_diagonal) {
                rep.worst_off_diagonal = q;
                rep.row = i;
                rep.col = j;
            }
        }
    }
    if (U.size() < 2) rep.worst_off_diagonal = 0.0;
    rep.passed = rep.worst_off_diagonal <= tol;
    return rep;
}

}  // namespace adjoint_fp
