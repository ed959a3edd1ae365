#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "adjoint_fp/fp_generator.hpp"
#include "adjoint_fp/scheme.hpp"
#include "adjoint_fp/time_march.hpp"

namespace adjoint_fp {

/// H = p^2 / 2, g(rho) = ln rho.
struct LogDensity {
    friend bool operator==(const LogDensity&, const LogDensity&) = default;
};

/// H = (p_bar + p)^2 / (2 rho^alpha), g(rho) = (3/2) rho^alpha, first order.
struct Congestion {
    double alpha = 1.0;
    double p_bar = 1.0;
    friend bool operator==(const Congestion&, const Congestion&) = default;
};

using Coupling = std::variant<LogDensity, Congestion>;

/// Forward-forward MFG on a 1-D torus:
///   u_t + H(x, u_x, rho) = eps u_xx + g(rho),
///   rho_t - (D_pH rho)_x = eps rho_xx,
/// both with initial data.
struct FfmfgConfig {
    Coupling coupling = LogDensity{};
    double epsilon = 0.01;
    Discretization discretization = UpwindFD{};
    GridFunction u0;
    GridFunction rho0;
    IntegratorSpec integrator;
    double density_floor = 1e-8;

    /// Throws ValidationError. Returns warnings (non-fatal findings).
    std::vector<std::string> validate() const;
};

/// Semi-discrete system on the state {U, M}: U_t = -N(U) + g(M),
/// M_t = -J(U)^T M, with density-dependent coefficients frozen per step.
class FfmfgSystem final : public OdeSystem {
public:
    explicit FfmfgSystem(const FfmfgConfig& cfg);

    std::vector<std::string> field_names() const override { return {"U", "M"}; }
    void prepare(double t, State& s) override;
    State rhs(double t, const State& s, bool step_start) override;
    double max_stable_step() const override;
    std::size_t density_field() const override { return 1; }

    /// Scheme used for the current step (coefficients frozen at its start).
    const SchemeSpec& scheme() const { return scheme_; }
    /// Node-steps at which M fell below the density floor.
    std::size_t floored_nodes() const { return floored_; }

private:
    GridFunction source(const GridFunction& M) const;

    const FfmfgConfig& cfg_;
    SchemeSpec scheme_;
    GridFunction frozen_density_;
    std::optional<FpGenerator> generator_;
    std::size_t floored_ = 0;
};

struct FfmfgResult {
    Trajectory trajectory;
    std::size_t floored_nodes = 0;
    std::vector<std::string> warnings;
};

FfmfgResult solve_ffmfg(const FfmfgConfig& cfg);

}  // namespace adjoint_fp
