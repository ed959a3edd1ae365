#include "adjoint_fp/hughes.hpp"

#include <algorithm>
#include <string>

#include "adjoint_fp/errors.hpp"

namespace adjoint_fp {

void HughesConfig::validate() const {
    if (rho0.empty()) throw ValidationError("initial.rho0", "is required");
    const Grid& g = rho0.grid();
    if (g.dim() != 2 || g.periodic()) throw ValidationError("grid", "the crowd model needs a bounded 2-D grid");
    if (!(rho_cap > 0.0 && rho_cap < 1.0)) throw ValidationError("hughes.rho_cap", "must lie in (0, 1)");
    if (rho0.min() < 0.0) throw ValidationError("initial.rho0", "must be >= 0");
    if (rho0.max() > rho_cap) throw ValidationError("initial.rho0", "must not exceed rho_cap");
    for (std::size_t i = 0; i < g.size(); ++i) {
        if (g.is_boundary(i) && rho0[i] != 0.0) throw ValidationError("initial.rho0", "must vanish on the boundary");
    }
    if (!(epsilon >= 0.0)) throw ValidationError("scheme.epsilon", "must be >= 0");
    if (eikonal_every_k < 1) throw ValidationError("hughes.eikonal_every_k", "must be >= 1");
    if (!(eikonal.wall_value > 0.0)) throw ValidationError("hughes.wall_value", "must be > 0");
    integrator.validate();
    if (integrator.method != Method::Euler) {
        throw ValidationError("integrator.method", "the crowd model is advanced with explicit Euler only");
    }
}

GridPtr HughesConfig::room_grid(int nodes_per_unit) {
    return make_grid(2, std::array<int, 2>{3 * nodes_per_unit, nodes_per_unit}, Box{{0.0, 0.0}, {3.0, 1.0}},
                     Topology::Bounded, std::vector<ExitSegment>{{Side::Top, 2.25, 3.0}});
}

HughesSystem::HughesSystem(const HughesConfig& cfg) : cfg_(cfg), boundary_(cfg.rho0.grid().boundary_mask()) {}

void HughesSystem::prepare(double, State& s) {
    const GridFunction& M = s[1];
    const GridPtr& grid = M.grid_ptr();
    GridFunction rho(grid);
    for (std::size_t i = 0; i < M.size(); ++i) rho[i] = std::clamp(M[i], 0.0, cfg_.rho_cap);

    if (prepared_ % cfg_.eikonal_every_k == 0 || value_.empty()) {
        GridFunction c(grid);
        for (std::size_t i = 0; i < M.size(); ++i) c[i] = 1.0 / (1.0 - rho[i]);
        auto res = solve_eikonal(c, cfg_.eikonal);
        log_.push_back({prepared_, res.iterations, res.residual});
        if (!res.converged) {
            throw NoConvergenceError("eikonal: no convergence at step " + std::to_string(prepared_) + " (residual " +
                                     std::to_string(res.residual) + ")");
        }
        value_ = std::move(res.U);
    }
    ++prepared_;
    s[0] = value_;

    GridFunction mobility(grid);
    for (std::size_t i = 0; i < M.size(); ++i) mobility[i] = (1.0 - rho[i]) * (1.0 - rho[i]);
    SchemeSpec scheme{ScaledQuadratic{std::move(mobility), 0.0}, UpwindFD{}, cfg_.epsilon};
    generator_.emplace(FpGenerator::linearize(scheme, value_, boundary_));
}

State HughesSystem::rhs(double, const State& s, bool) {
    State out(2);
    out[0] = GridFunction(s[0].grid_ptr());
    out[1] = generator_->fp_rhs(s[1]);
    return out;
}

void HughesSystem::post_step(double, State& s) {
    for (std::size_t i = 0; i < boundary_.size(); ++i) {
        if (boundary_[i]) s[1][i] = 0.0;
    }
}

HughesResult solve_hughes(const HughesConfig& cfg) {
    cfg.validate();
    HughesSystem sys(cfg);
    HughesResult res;
    res.trajectory = integrate(sys, State{GridFunction(cfg.rho0.grid_ptr()), cfg.rho0}, cfg.integrator);
    res.eikonal = sys.eikonal_log();
    return res;
}

}  // namespace adjoint_fp
