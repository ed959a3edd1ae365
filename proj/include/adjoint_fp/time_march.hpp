#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <variant>
#include <vector>

#include "adjoint_fp/grid_function.hpp"

namespace adjoint_fp {

/// Fields of a semi-discrete system, e.g. {U, M} for a coupled run.
using State = std::vector<GridFunction>;

enum class Method { Euler, RK4 };

/// dt = safety * (largest stable step reported by the system).
struct AutoStep {
    double safety = 0.9;
    friend bool operator==(const AutoStep&, const AutoStep&) = default;
};

struct IntegratorSpec {
    Method method = Method::Euler;
    std::variant<double, AutoStep> dt = AutoStep{};
    double t_final = 1.0;
    int snapshot_count = 50;

    void validate() const;
    bool automatic() const { return std::holds_alternative<AutoStep>(dt); }
    friend bool operator==(const IntegratorSpec&, const IntegratorSpec&) = default;
};

/**
 * A method-of-lines system. The integrator calls prepare() once per step on
 * the step's initial state (the system may rebuild generators or overwrite
 * fields that are not evolved, such as a stationary value function), then
 * rhs() on every stage, then post_step() on the result.
 */
class OdeSystem {
public:
    virtual ~OdeSystem() = default;

    virtual std::vector<std::string> field_names() const = 0;
    virtual void prepare(double /*t*/, State& /*s*/) {}
    /// `step_start` is true when s is the state passed to the last prepare().
    virtual State rhs(double t, const State& s, bool step_start) = 0;
    /// Largest stable step at the last prepared state (+inf if unbounded).
    virtual double max_stable_step() const;
    virtual void post_step(double /*t*/, State& /*s*/) {}
    /// Field whose mass / min / max enter the diagnostics.
    virtual std::size_t density_field() const { return 0; }
};

struct Diagnostics {
    double mass = 0.0;
    double min = 0.0;
    double max = 0.0;
};

struct StepRecord {
    double time = 0.0;  ///< time at the end of the step
    double dt = 0.0;
    Diagnostics density;
};

struct Trajectory {
    std::vector<std::string> field_names;
    std::vector<double> times;
    std::vector<State> snapshots;
    std::vector<Diagnostics> diagnostics;
    std::vector<StepRecord> steps;

    std::size_t density_field = 0;
    const State& final_state() const { return snapshots.back(); }
};

Diagnostics diagnose(const GridFunction& m);

State euler_step(const std::function<State(const State&)>& rhs, const State& s, double dt);
State rk4_step(const std::function<State(const State&)>& rhs, const State& s, double dt);

/**
 * Advances `state0` to spec.t_final. Steps are shortened so that every one
 * of the snapshot_count + 1 evenly spaced snapshot times is hit by a
 * completed step. Throws NonFiniteError and StepUnderflowError.
 */
Trajectory integrate(OdeSystem& system, State state0, const IntegratorSpec& spec);

/// Autonomous convenience form. `stable_step` is required in Auto mode and
/// is evaluated at the start of each step.
Trajectory integrate(const std::function<State(const State&)>& rhs, State state0, const IntegratorSpec& spec,
                     const std::function<double(const State&)>& stable_step = {});

}  // namespace adjoint_fp
