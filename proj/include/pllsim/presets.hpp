#pragma once

#include "pllsim/analysis.hpp"
#include "pllsim/core.hpp"
#include "pllsim/odeint.hpp"

namespace pllsim::presets {

/// Lead-lag filter shared by all four experiments.
inline LeadLagFilter loop_filter() { return LeadLagFilter{0.0448, 0.0185}; }

/// Loop constants of experiments 1-3: omega1 = 1e5, detuning 95, gain 250.
inline PllParams params_123() {
    PllParams p;
    p.omega1 = 100000.0;
    p.omega2_free = 100000.0 - 95.0;
    p.gain = 250.0;
    p.filter = lead_lag_realization(loop_filter());
    return p;
}

/// Loop constants of experiment 4: omega1 = 1e4, detuning 178.9, gain 500.
inline PllParams params_4() {
    PllParams p;
    p.omega1 = 10000.0;
    p.omega2_free = 10000.0 - 178.9;
    p.gain = 500.0;
    p.filter = lead_lag_realization(loop_filter());
    return p;
}

inline PllParams params_for_example(int n) { return n == 4 ? params_4() : params_123(); }

constexpr double kHorizon = 5.0;  // seconds, enough to separate lock from beat at these constants

inline LockCriteria lock_criteria_123() { return LockCriteria{}; }

/// Experiment 4 starts high on the filter axis; the capture transient swings
/// theta_delta by ~35 rad, so the escape threshold must sit well above that.
inline LockCriteria lock_criteria_4() {
    LockCriteria c;
    c.escape_threshold = 40.0 * M_PI;
    return c;
}

inline LockCriteria lock_criteria_for_example(int n) {
    return n == 4 ? lock_criteria_4() : lock_criteria_123();
}

/// Coarse configuration of experiment 4 (the "1e-3" run). The absolute
/// tolerance matches the tool-default auto scaling for states that reach
/// around a hundred radians.
inline odeint::IntegratorConfig coarse_phase_config(double t_end = kHorizon) {
    odeint::IntegratorConfig c;
    c.method = odeint::Method::adaptive_rk45;
    c.rtol = 1e-3;
    c.atol = 1e-1;
    c.t_end = t_end;
    return c;
}

/// Seed and accuracy that land on the rotation band from high above it and
/// then track it, as in the classical phase-portrait pictures. In the exact
/// flow every trajectory from this height is captured into lock; the ride
/// along the hidden orbit exists only at finite accuracy, and which initial
/// phase lands on the band is a discretization coin toss, so the seed below
/// is frozen against this exact build.
inline PhaseState portrait_high_seed() { return PhaseState{0.2206, 6.0500000000000007}; }

inline odeint::IntegratorConfig portrait_anchor_config(double t_end = 8.0) {
    odeint::IntegratorConfig c;
    c.method = odeint::Method::adaptive_rk45;
    c.rtol = 3e-3;
    c.atol = 1e-3;
    c.t_end = t_end;
    return c;
}

/// Configuration for return-map work: reference tolerances, generous horizon.
inline odeint::IntegratorConfig orbit_config(double t_end = 10.0) {
    odeint::IntegratorConfig c;
    c.method = odeint::Method::adaptive_rk45;
    c.rtol = 1e-9;
    c.atol = 1e-12;
    c.t_end = t_end;
    return c;
}

/// Scan range that brackets the rotation orbits of the experiment-4 family.
inline OrbitScanRange orbit_scan_4() { return OrbitScanRange{-0.05, 0.06, 220}; }

}  // namespace pllsim::presets
