#pragma once

#include <optional>
#include <vector>

#include "adjoint_fp/eikonal.hpp"
#include "adjoint_fp/fp_generator.hpp"
#include "adjoint_fp/time_march.hpp"

namespace adjoint_fp {

/// Crowd model rho_t - div(rho (1-rho)^2 DU) = eps Lap rho with
/// |DU| = 1/(1-rho), U = 0 on the exit and "infinite" on walls.
struct HughesConfig {
    GridFunction rho0;
    /// Density used for coefficients is clamped to [0, rho_cap].
    double rho_cap = 0.99;
    double epsilon = 0.0;
    EikonalOptions eikonal;
    /// Re-solve the Eikonal equation every k steps (1 = every step).
    int eikonal_every_k = 1;
    IntegratorSpec integrator;

    void validate() const;

    /// [0,3]x[0,1] with the exit x in [2.25, 3] on the top side and
    /// `nodes_per_unit` nodes per unit length on both axes.
    static GridPtr room_grid(int nodes_per_unit = 100);
};

struct EikonalLogEntry {
    int step = 0;
    int iterations = 0;
    double residual = 0.0;
};

/// State {U, M}. U is not evolved; prepare() overwrites it with the Eikonal
/// solution for the current density. After every step M is zeroed on the
/// boundary, which is where mass leaves.
class HughesSystem final : public OdeSystem {
public:
    explicit HughesSystem(const HughesConfig& cfg);

    std::vector<std::string> field_names() const override { return {"U", "M"}; }
    void prepare(double t, State& s) override;
    State rhs(double t, const State& s, bool step_start) override;
    double max_stable_step() const override { return generator_->cfl_max_step(); }
    void post_step(double t, State& s) override;
    std::size_t density_field() const override { return 1; }

    const std::vector<EikonalLogEntry>& eikonal_log() const { return log_; }
    const FpGenerator& generator() const { return *generator_; }

private:
    const HughesConfig& cfg_;
    std::vector<bool> boundary_;
    std::optional<FpGenerator> generator_;
    GridFunction value_;
    std::vector<EikonalLogEntry> log_;
    int prepared_ = 0;
};

struct HughesResult {
    Trajectory trajectory;
    std::vector<EikonalLogEntry> eikonal;
};

/// Throws NoConvergenceError if an Eikonal solve does not converge.
HughesResult solve_hughes(const HughesConfig& cfg);

}  // namespace adjoint_fp
