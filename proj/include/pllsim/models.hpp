#pragma once

#include <Eigen/Dense>
#include <cmath>

#include "pllsim/core.hpp"

namespace pllsim {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;

/// Multiplier phase-detector output phi(t) = sin(theta1) * cos(theta2).
inline double pd_instant(double theta1, double theta2) {
    return std::sin(theta1) * std::cos(theta2);
}

/// Averaged phase-detector characteristic phi(theta_delta) = sin(theta_delta)/2,
/// the mean of pd_instant over one carrier cycle at fixed phase difference.
inline double pd_averaged(double theta_delta) {
    return 0.5 * std::sin(theta_delta);
}

/// Signal-space model:
///   x'      = A x + b phi(t)
///   theta1' = omega1
///   theta2' = omega2_free + L (c x) + L h phi(t)
/// with phi(t) = sin(theta1) cos(theta2).
inline SignalState signal_rhs(const SignalState& s, const PllParams& p) {
    const double phi = pd_instant(s.theta1, s.theta2);
    const FilterRealization& f = p.filter;
    SignalState d;
    d.x = f.A * s.x + f.b * phi;
    d.theta1 = p.omega1;
    d.theta2 = p.omega2_free + p.gain * filter_output(f, s.x, phi);
    return d;
}

/// Phase-space model:
///   x'           = A x + b phi(theta_delta)
///   theta_delta' = omega_delta - L (c x) - L h phi(theta_delta)
inline PhaseState phase_rhs(const PhaseState& s, const PllParams& p) {
    const double phi = pd_averaged(s.theta_delta);
    const FilterRealization& f = p.filter;
    PhaseState d;
    d.x = f.A * s.x + f.b * phi;
    d.theta_delta = p.omega_delta() - p.gain * filter_output(f, s.x, phi);
    return d;
}

// Eigen-vector views of the two models, for the integrators.

inline Vec3 to_vec(const SignalState& s) { return Vec3(s.x, s.theta1, s.theta2); }
inline SignalState signal_from_vec(const Vec3& v) { return SignalState{v[0], v[1], v[2]}; }

inline Vec2 to_vec(const PhaseState& s) { return Vec2(s.x, s.theta_delta); }
inline PhaseState phase_from_vec(const Vec2& v) { return PhaseState{v[0], v[1]}; }

/// Right-hand side of the signal model on Eigen vectors (x, theta1, theta2).
inline auto signal_rhs_fn(const PllParams& p) {
    return [p](double /*t*/, const Vec3& y) -> Vec3 {
        const SignalState d = signal_rhs(SignalState{y[0], y[1], y[2]}, p);
        return Vec3(d.x, d.theta1, d.theta2);
    };
}

/// Right-hand side of the phase model on Eigen vectors (x, theta_delta).
inline auto phase_rhs_fn(const PllParams& p) {
    return [p](double /*t*/, const Vec2& y) -> Vec2 {
        const PhaseState d = phase_rhs(PhaseState{y[0], y[1]}, p);
        return Vec2(d.x, d.theta_delta);
    };
}

}  // namespace pllsim
