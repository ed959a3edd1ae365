#include "adjoint_fp/time_march.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "adjoint_fp/errors.hpp"

namespace adjoint_fp {

void IntegratorSpec::validate() const {
    if (!(t_final > 0.0) || !std::isfinite(t_final)) throw ValidationError("integrator.t_final", "must be > 0");
    if (snapshot_count < 1) throw ValidationError("integrator.snapshots", "must be >= 1");
    if (const auto* fixed = std::get_if<double>(&dt)) {
        if (!(*fixed > 0.0)) throw ValidationError("integrator.dt", "must be > 0");
    } else {
        const double s = std::get<AutoStep>(dt).safety;
        if (!(s > 0.0 && s <= 1.0)) throw ValidationError("integrator.safety", "must lie in (0, 1]");
    }
}

double OdeSystem::max_stable_step() const { return std::numeric_limits<double>::infinity(); }

Diagnostics diagnose(const GridFunction& m) {
    double sum = 0.0, lo = m[0], hi = m[0];
    for (double v : m.values()) {
        sum += v;
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    return {sum * m.grid().cell_volume(), lo, hi};
}

namespace {

State combine(const State& s, double dt, const State& k) {
    State out = s;
    for (std::size_t f = 0; f < out.size(); ++f) out[f].axpy(dt, k[f]);
    return out;
}

State rk4_combine(const State& s, double dt, const State& k1, const State& k2, const State& k3, const State& k4) {
    State out = s;
    for (std::size_t f = 0; f < out.size(); ++f) {
        auto& o = out[f];
        for (std::size_t i = 0; i < o.size(); ++i) {
            o[i] += dt / 6.0 * (k1[f][i] + 2.0 * k2[f][i] + 2.0 * k3[f][i] + k4[f][i]);
        }
    }
    return out;
}

bool finite(const State& s) {
    for (const auto& f : s) {
        // Any NaN or infinity makes the sum of magnitudes non-finite.
        double acc = 0.0;
        for (double v : f.values()) acc += std::abs(v);
        if (!std::isfinite(acc) && !f.all_finite()) return false;
    }
    return true;
}

class FunctionSystem final : public OdeSystem {
public:
    FunctionSystem(const std::function<State(const State&)>& rhs, const std::function<double(const State&)>& stable,
                   std::size_t fields)
        : rhs_(rhs), stable_(stable), fields_(fields) {}

    std::vector<std::string> field_names() const override {
        std::vector<std::string> names;
        for (std::size_t f = 0; f < fields_; ++f) names.push_back("f" + std::to_string(f));
        return names;
    }
    void prepare(double, State& s) override {
        if (stable_) step_ = stable_(s);
    }
    State rhs(double, const State& s, bool) override { return rhs_(s); }
    double max_stable_step() const override { return step_; }

private:
    const std::function<State(const State&)>& rhs_;
    const std::function<double(const State&)>& stable_;
    std::size_t fields_;
    double step_ = std::numeric_limits<double>::infinity();
};

}  // namespace

State euler_step(const std::function<State(const State&)>& rhs, const State& s, double dt) {
    return combine(s, dt, rhs(s));
}

State rk4_step(const std::function<State(const State&)>& rhs, const State& s, double dt) {
    const State k1 = rhs(s);
    const State k2 = rhs(combine(s, 0.5 * dt, k1));
    const State k3 = rhs(combine(s, 0.5 * dt, k2));
    const State k4 = rhs(combine(s, dt, k3));
    return rk4_combine(s, dt, k1, k2, k3, k4);
}

Trajectory integrate(OdeSystem& system, State state, const IntegratorSpec& spec) {
    spec.validate();
    if (state.empty()) throw std::invalid_argument("integrate: empty state");

    Trajectory traj;
    traj.field_names = system.field_names();
    traj.density_field = system.density_field();
    const std::size_t dfield = traj.density_field;
    const double T = spec.t_final;
    const int count = spec.snapshot_count;

    double t = 0.0;
    auto record = [&](double time, const State& s) {
        traj.times.push_back(time);
        traj.snapshots.push_back(s);
        traj.diagnostics.push_back(diagnose(s[dfield]));
    };

    // Non-evolved fields (such as a stationary value function) are filled by
    // the first prepare() so snapshot 0 is consistent with later ones.
    system.prepare(0.0, state);
    record(0.0, state);
    bool prepared = true;

    for (int snap = 1; snap <= count; ++snap) {
        const double target = snap == count ? T : T * snap / count;
        while (t < target) {
            if (!prepared) system.prepare(t, state);
            prepared = false;

            double dt;
            if (const auto* fixed = std::get_if<double>(&spec.dt)) {
                dt = *fixed;
            } else {
                dt = std::get<AutoStep>(spec.dt).safety * system.max_stable_step();
                if (!(dt >= 1e-12 * T)) throw StepUnderflowError(t, dt);
            }
            // Land exactly on the snapshot time; absorb round-off sized leftovers.
            if (t + dt >= target - 1e-12 * T) dt = target - t;

            State next;
            if (spec.method == Method::Euler) {
                const State k = system.rhs(t, state, true);
                next = std::move(state);
                for (std::size_t f = 0; f < next.size(); ++f) next[f].axpy(dt, k[f]);
            } else {
                const State k1 = system.rhs(t, state, true);
                const State s2 = combine(state, 0.5 * dt, k1);
                const State k2 = system.rhs(t + 0.5 * dt, s2, false);
                const State s3 = combine(state, 0.5 * dt, k2);
                const State k3 = system.rhs(t + 0.5 * dt, s3, false);
                const State s4 = combine(state, dt, k3);
                const State k4 = system.rhs(t + dt, s4, false);
                next = rk4_combine(state, dt, k1, k2, k3, k4);
            }
            const double t_next = (dt == target - t) ? target : t + dt;
            system.post_step(t_next, next);
            if (!finite(next)) throw NonFiniteError(t_next);
            state = std::move(next);
            t = t_next;
            traj.steps.push_back({t, dt, diagnose(state[dfield])});
        }
        // The snapshot shows the state the next step would start from, with
        // any non-evolved fields refreshed.
        system.prepare(t, state);
        prepared = true;
        record(t, state);
    }
    return traj;
}

Trajectory integrate(const std::function<State(const State&)>& rhs, State state0, const IntegratorSpec& spec,
                     const std::function<double(const State&)>& stable_step) {
    if (spec.automatic() && !stable_step) {
        throw ValidationError("integrator.dt", "automatic step needs a stable-step provider");
    }
    FunctionSystem sys(rhs, stable_step, state0.size());
    return integrate(sys, std::move(state0), spec);
}

}  // namespace adjoint_fp
