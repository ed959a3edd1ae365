#include "adjoint_fp/ffmfg.hpp"

#include <cmath>

#include "adjoint_fp/errors.hpp"

namespace adjoint_fp {

std::vector<std::string> FfmfgConfig::validate() const {
    std::vector<std::string> warnings;
    if (u0.empty() || rho0.empty()) throw ValidationError("initial", "u0 and rho0 are required");
    if (!same_grid(u0.grid(), rho0.grid())) throw ValidationError("initial", "u0 and rho0 must share a grid");
    const Grid& g = rho0.grid();
    if (g.dim() != 1 || !g.periodic()) throw ValidationError("grid", "forward-forward runs need a 1-D periodic grid");
    if (rho0.min() < 0.0) throw ValidationError("initial.rho0", "must be >= 0");
    if (!(total_mass(rho0) > 0.0)) throw ValidationError("initial.rho0", "must have positive mass");
    if (!(density_floor > 0.0)) throw ValidationError("mfg.density_floor", "must be > 0");
    if (!(epsilon >= 0.0)) throw ValidationError("scheme.epsilon", "must be >= 0");
    if (const auto* c = std::get_if<Congestion>(&coupling)) {
        if (!(c->alpha >= 0.0)) throw ValidationError("mfg.alpha", "must be >= 0");
    } else if (epsilon == 0.0) {
        warnings.emplace_back("log coupling without viscosity: the density may concentrate");
    }
    integrator.validate();
    return warnings;
}

FfmfgSystem::FfmfgSystem(const FfmfgConfig& cfg) : cfg_(cfg) {
    const GridPtr& grid = cfg.rho0.grid_ptr();
    scheme_.discretization = cfg.discretization;
    scheme_.epsilon = cfg.epsilon;
    if (std::holds_alternative<LogDensity>(cfg.coupling)) {
        scheme_.hamiltonian = ScaledQuadratic{GridFunction(grid, 1.0), 0.0};
    } else {
        scheme_.hamiltonian = ScaledQuadratic{GridFunction(grid, 1.0), std::get<Congestion>(cfg.coupling).p_bar};
    }
    frozen_density_ = GridFunction(grid, 1.0);
}

void FfmfgSystem::prepare(double, State& s) {
    const GridFunction& M = s[1];
    frozen_density_ = M;
    for (std::size_t i = 0; i < M.size(); ++i) {
        if (M[i] < cfg_.density_floor) {
            frozen_density_[i] = cfg_.density_floor;
            ++floored_;
        }
    }
    if (const auto* c = std::get_if<Congestion>(&cfg_.coupling)) {
        auto& sq = std::get<ScaledQuadratic>(scheme_.hamiltonian);
        for (std::size_t i = 0; i < M.size(); ++i) sq.coefficient[i] = std::pow(frozen_density_[i], -c->alpha);
    }
    generator_.emplace(FpGenerator::linearize(scheme_, s[0]));
}

GridFunction FfmfgSystem::source(const GridFunction& M) const {
    GridFunction g(M.grid_ptr());
    if (const auto* c = std::get_if<Congestion>(&cfg_.coupling)) {
        // Frozen with the coefficients for the whole step.
        for (std::size_t i = 0; i < M.size(); ++i) g[i] = 1.5 * std::pow(frozen_density_[i], c->alpha);
    } else {
        for (std::size_t i = 0; i < M.size(); ++i) g[i] = std::log(std::max(M[i], cfg_.density_floor));
    }
    return g;
}

State FfmfgSystem::rhs(double, const State& s, bool step_start) {
    const GridFunction& U = s[0];
    const GridFunction& M = s[1];
    State out(2);
    if (step_start) {
        out[0] = apply_N(scheme_, U);
        out[1] = generator_->fp_rhs(M);
    } else {
        const auto gen = FpGenerator::linearize(scheme_, U);
        out[0] = apply_N(scheme_, U);
        out[1] = gen.fp_rhs(M);
    }
    out[0] *= -1.0;
    out[0] += source(M);
    return out;
}

double FfmfgSystem::max_stable_step() const { return generator_->cfl_max_step(); }

FfmfgResult solve_ffmfg(const FfmfgConfig& cfg) {
    FfmfgResult res;
    res.warnings = cfg.validate();
    FfmfgSystem sys(cfg);
    res.trajectory = integrate(sys, State{cfg.u0, cfg.rho0}, cfg.integrator);
    res.floored_nodes = sys.floored_nodes();
    return res;
}

}  // namespace adjoint_fp
