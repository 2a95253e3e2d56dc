#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

namespace pllsim {

/// Passive lead-lag loop filter F(s) = (1 + s*tau2) / (1 + s*(tau1 + tau2)).
struct LeadLagFilter {
    double tau1 = 0.0;  // seconds, > 0
    double tau2 = 0.0;  // seconds, >= 0
};

/// First-order state-space realization of the loop filter:
///   x' = A*x + b*phi,   g = c*x + h*phi.
struct FilterRealization {
    double A = 0.0;  // 1/s, < 0 (stable pole)
    double b = 0.0;  // dimensionless input gain
    double c = 0.0;  // 1/s output gain
    double h = 0.0;  // dimensionless feed-through
};

/// Loop constants of the PLL.
struct PllParams {
    double omega1 = 0.0;       // rad/s, input signal frequency
    double omega2_free = 0.0;  // rad/s, VCO free-running frequency
    double gain = 0.0;         // rad/s per filter-output unit (the VCO input gain L)
    FilterRealization filter;

    double omega_delta() const { return omega1 - omega2_free; }
};

/// State of the signal-space model: filter state and the two absolute phases.
struct SignalState {
    double x = 0.0;
    double theta1 = 0.0;  // rad
    double theta2 = 0.0;  // rad

    double theta_delta() const { return theta1 - theta2; }
};

/// State of the averaged phase-space model.
struct PhaseState {
    double x = 0.0;
    double theta_delta = 0.0;  // rad
};

inline void validate(const LeadLagFilter& f) {
    if (!(f.tau1 > 0.0) || !(f.tau2 >= 0.0))
        throw std::domain_error("lead-lag filter requires tau1 > 0 and tau2 >= 0");
}

inline void validate(const FilterRealization& r) {
    if (!(r.A < 0.0)) throw std::domain_error("filter realization requires A < 0");
    if (!(r.h >= 0.0 && r.h < 1.0)) throw std::domain_error("filter realization requires 0 <= h < 1");
}

inline void validate(const PllParams& p) {
    if (!(p.omega1 > 0.0)) throw std::domain_error("omega1 must be positive");
    // gain = 0 decouples the loop; useful for closed-form oracles, so only negative is rejected.
    if (!(p.gain >= 0.0)) throw std::domain_error("VCO gain must be non-negative");
    validate(p.filter);
}

/// State-space coefficients of the lead-lag filter:
///   A = -1/(tau1+tau2), b = 1 - tau2/(tau1+tau2), c = 1/(tau1+tau2), h = tau2/(tau1+tau2).
inline FilterRealization lead_lag_realization(const LeadLagFilter& f) {
    validate(f);
    const double tau = f.tau1 + f.tau2;
    if (tau == 0.0) throw std::domain_error("tau1 + tau2 must be positive");
    FilterRealization r;
    r.A = -1.0 / tau;
    r.h = f.tau2 / tau;
    r.b = 1.0 - r.h;
    r.c = 1.0 / tau;
    return r;
}

/// Loop filter output g = c*x + h*phi.
inline double filter_output(const FilterRealization& r, double x, double phi) {
    return r.c * x + r.h * phi;
}

/// Reduce an angle to [0, 2*pi).
inline double wrap_angle(double theta) {
    const double two_pi = 2.0 * M_PI;
    double w = std::fmod(theta, two_pi);
    if (w < 0.0) w += two_pi;
    return w;
}

/// Time-stamped samples of a phase-space run. Columns share one length;
/// times are strictly increasing.
struct PhaseTrajectory {
    std::vector<double> times;
    std::vector<double> x;
    std::vector<double> theta_delta;
    std::vector<double> g;

    std::size_t size() const { return times.size(); }
};

/// Time-stamped samples of a signal-space run.
struct SignalTrajectory {
    std::vector<double> times;
    std::vector<double> x;
    std::vector<double> theta1;
    std::vector<double> theta2;
    std::vector<double> g;

    std::size_t size() const { return times.size(); }
    double theta_delta(std::size_t i) const { return theta1[i] - theta2[i]; }
};

}  // namespace pllsim
