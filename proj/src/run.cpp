#include "adjoint_fp/run.hpp"

#include <algorithm>
#include <chrono>
#include <ostream>
#include <sstream>

#include "adjoint_fp/errors.hpp"
#include "adjoint_fp/fp_generator.hpp"
#include "adjoint_fp/grid_io.hpp"
#include "adjoint_fp/output.hpp"

namespace adjoint_fp {

namespace fs = std::filesystem;

namespace {

class FrozenFpSystem final : public OdeSystem {
public:
    FrozenFpSystem(const SchemeSpec& scheme, const GridFunction& u0)
        : boundary_(u0.grid().boundary_mask()),
          bounded_(!u0.grid().periodic()),
          gen_(bounded_ ? FpGenerator::linearize(scheme, u0, boundary_) : FpGenerator::linearize(scheme, u0)) {}

    std::vector<std::string> field_names() const override { return {"M"}; }
    State rhs(double, const State& s, bool) override {
        State out(1);
        out[0] = gen_.fp_rhs(s[0]);
        return out;
    }
    double max_stable_step() const override { return gen_.cfl_max_step(); }
    void post_step(double, State& s) override {
        if (!bounded_) return;
        for (std::size_t i = 0; i < boundary_.size(); ++i) {
            if (boundary_[i]) s[0][i] = 0.0;
        }
    }

private:
    std::vector<bool> boundary_;
    bool bounded_;
    FpGenerator gen_;
};

RunSummary summarize(const Diagnostics& d) {
    RunSummary s;
    s.final_mass = d.mass;
    s.final_min = d.min;
    return s;
}

}  // namespace

Trajectory solve_fp(const SchemeSpec& scheme, const GridFunction& u0, const GridFunction& rho0,
                    const IntegratorSpec& integrator) {
    require_same_grid(u0, rho0, "solve_fp");
    FrozenFpSystem sys(scheme, u0);
    return integrate(sys, State{rho0}, integrator);
}

std::string RunSummary::line() const {
    std::ostringstream os;
    os << "final mass=" << format_double(final_mass) << " min=" << format_double(final_min);
    if (l1_distance) os << " l1=" << format_double(*l1_distance);
    os << " wall=" << wall_seconds << "s";
    return os.str();
}

RunSummary execute(const RunConfig& cfg, std::ostream& log) {
    validate_config(cfg);
    const auto start = std::chrono::steady_clock::now();
    const fs::path out = cfg.output_dir;
    RunSummary summary;

    switch (cfg.command) {
        case Command::Fp: {
            const GridPtr grid = build_grid(cfg);
            const SchemeSpec scheme = build_scheme(cfg, grid);
            const auto traj = solve_fp(scheme, build_value(cfg, grid), build_density(cfg, grid), cfg.integrator);
            emit_plotdata(traj, out);
            summary = summarize(traj.diagnostics.back());
            break;
        }
        case Command::Mfg: {
            const FfmfgConfig f = build_ffmfg(cfg);
            const auto res = solve_ffmfg(f);
            for (const auto& w : res.warnings) log << "warning: " << w << "\n";
            if (res.floored_nodes > 0) log << "density floor hit at " << res.floored_nodes << " node-steps\n";
            emit_plotdata(res.trajectory, out);
            summary = summarize(res.trajectory.diagnostics.back());
            break;
        }
        case Command::Hughes: {
            const HughesConfig h = build_hughes(cfg);
            const auto res = solve_hughes(h);
            emit_plotdata(res.trajectory, out);
            write_eikonal_log(res.eikonal, out / "eikonal_iters.csv");
            summary = summarize(res.trajectory.diagnostics.back());
            break;
        }
        case Command::Validate: {
            const GridPtr grid = build_grid(cfg);
            const SchemeSpec scheme = build_scheme(cfg, grid);
            const GridFunction u0 = build_value(cfg, grid);
            const GridFunction rho0 = build_density(cfg, grid);
            const auto traj = solve_fp(scheme, u0, rho0, cfg.integrator);
            const auto mc = simulate(build_sde(cfg, scheme, u0), rho0);
            emit_plotdata(traj, out / "fp");
            write_empirical(mc, out / "particles.csv");
            summary = summarize(traj.diagnostics.back());
            summary.l1_distance = compare(traj.final_state()[0], mc);
            write_text("l1=" + format_double(*summary.l1_distance) + "\n", out / "comparison.txt");
            log << "fp vs particles: L1 distance " << format_double(*summary.l1_distance) << "\n";
            break;
        }
        case Command::Eikonal: {
            const GridPtr grid = build_grid(cfg);
            const GridFunction rho = build_density(cfg, grid);
            GridFunction c(grid);
            for (std::size_t i = 0; i < c.size(); ++i) c[i] = 1.0 / (1.0 - std::clamp(rho[i], 0.0, cfg.hughes.rho_cap));
            EikonalOptions opt;
            opt.tol = cfg.hughes.eikonal_tol;
            opt.max_iter = cfg.hughes.eikonal_max_iter;
            opt.wall_value = cfg.hughes.wall_value;
            const auto res = solve_eikonal(c, opt);
            if (!res.converged) {
                throw NoConvergenceError("eikonal: no convergence after " + std::to_string(res.iterations) +
                                         " iterations (residual " + format_double(res.residual) + ")");
            }
            write_grid_function(res.U, out / "U.csv");
            if (grid->dim() == 2) {
                std::ostringstream os;
                write_matrix(os, res.U);
                write_text(os.str(), out / "U.mat");
            }
            write_eikonal_log({{0, res.iterations, res.residual}}, out / "eikonal_iters.csv");
            log << "eikonal: " << res.iterations << " iterations, residual " << format_double(res.residual) << "\n";
            // The summary describes the density the travel times were computed for.
            summary.final_mass = total_mass(rho);
            summary.final_min = rho.min();
            break;
        }
    }
    summary.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return summary;
}

int exit_code_for(const std::exception& e) {
    if (dynamic_cast<const ConfigError*>(&e)) return 2;
    if (dynamic_cast<const NumericalError*>(&e)) return 3;
    if (dynamic_cast<const IoError*>(&e) || dynamic_cast<const fs::filesystem_error*>(&e)) return 4;
    return 1;
}

namespace {

const char* error_class(const std::exception& e) {
    if (dynamic_cast<const ParseError*>(&e)) return "parse error";
    if (dynamic_cast<const ValidationError*>(&e)) return "validation error";
    if (dynamic_cast<const ConfigError*>(&e)) return "config error";
    if (dynamic_cast<const NonFiniteError*>(&e)) return "non-finite state";
    if (dynamic_cast<const StepUnderflowError*>(&e)) return "step underflow";
    if (dynamic_cast<const NoConvergenceError*>(&e)) return "no convergence";
    if (dynamic_cast<const NumericalError*>(&e)) return "numerical error";
    if (dynamic_cast<const IoError*>(&e) || dynamic_cast<const fs::filesystem_error*>(&e)) return "io error";
    return "error";
}

}  // namespace

int run(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    try {
        const auto summary = execute(cfg, err);
        out << command_name(cfg.command) << ": " << summary.line() << "\n";
        return 0;
    } catch (const std::exception& e) {
        err << command_name(cfg.command) << ": " << error_class(e) << ": " << e.what() << "\n";
        return exit_code_for(e);
    }
}

}  // namespace adjoint_fp
