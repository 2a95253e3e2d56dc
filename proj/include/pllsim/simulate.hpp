#pragma once

#include "pllsim/core.hpp"
#include "pllsim/models.hpp"
#include "pllsim/odeint.hpp"

namespace pllsim {

/// Default fixed step for the signal-space model: 20 samples per carrier
/// cycle, enough to resolve the double-frequency content of the multiplier PD.
inline double default_signal_dt(const PllParams& p) { return 2.0 * M_PI / (20.0 * p.omega1); }

inline odeint::IntegratorConfig default_signal_config(const PllParams& p, double t_end = 5.0) {
    odeint::IntegratorConfig c;
    c.method = odeint::Method::fixed_rk4;
    c.dt = default_signal_dt(p);
    c.t_end = t_end;
    return c;
}

/// Reference ("truth") configuration for the phase model.
inline odeint::IntegratorConfig reference_phase_config(double t_end = 5.0) {
    odeint::IntegratorConfig c;
    c.method = odeint::Method::adaptive_rk45;
    c.rtol = 1e-9;
    c.atol = 1e-12;
    c.t_end = t_end;
    return c;
}

inline SignalTrajectory simulate_signal(const PllParams& params, const SignalState& initial,
                                        const odeint::IntegratorConfig& config) {
    const auto sol = odeint::integrate<3>(signal_rhs_fn(params), to_vec(initial), config);
    SignalTrajectory traj;
    traj.times = sol.times;
    traj.x.reserve(sol.size());
    traj.theta1.reserve(sol.size());
    traj.theta2.reserve(sol.size());
    traj.g.reserve(sol.size());
    for (const auto& y : sol.states) {
        traj.x.push_back(y[0]);
        traj.theta1.push_back(y[1]);
        traj.theta2.push_back(y[2]);
        traj.g.push_back(filter_output(params.filter, y[0], pd_instant(y[1], y[2])));
    }
    return traj;
}

inline PhaseTrajectory simulate_phase(const PllParams& params, const PhaseState& initial,
                                      const odeint::IntegratorConfig& config) {
    const auto sol = odeint::integrate<2>(phase_rhs_fn(params), to_vec(initial), config);
    PhaseTrajectory traj;
    traj.times = sol.times;
    traj.x.reserve(sol.size());
    traj.theta_delta.reserve(sol.size());
    traj.g.reserve(sol.size());
    for (const auto& y : sol.states) {
        traj.x.push_back(y[0]);
        traj.theta_delta.push_back(y[1]);
        traj.g.push_back(filter_output(params.filter, y[0], pd_averaged(y[1])));
    }
    return traj;
}

}  // namespace pllsim
