#pragma once

#include <complex>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "pllsim/core.hpp"
#include "pllsim/odeint.hpp"
#include "pllsim/simulate.hpp"

namespace pllsim {

struct TrajectoryTooShort : std::runtime_error {
    TrajectoryTooShort() : std::runtime_error("trajectory shorter than twice the lock window") {}
};

struct NoStableOrbit : std::invalid_argument {
    NoStableOrbit() : std::invalid_argument("classify_attractor requires a stable orbit") {}
};

struct NoSignChange : std::runtime_error {
    NoSignChange() : std::runtime_error("orbit-pair predicate does not change over the range") {}
};

struct LockCriteria {
    double window = 1.0;              // seconds, tail window
    double freq_tol = 1.0;            // rad/s
    double phase_drift_tol = 0.1;     // rad
    double escape_threshold = 4.0 * M_PI;  // rad
};

enum class LockStatus { Locked, NotLocked, Undecided };

struct LockVerdict {
    LockStatus status = LockStatus::Undecided;
    double final_theta_delta = 0.0;
    double residual_freq = 0.0;  // |mean theta_delta'| over the tail window
};

const char* to_string(LockStatus s);

/// Lock verdict from a sampled theta_delta(t) series.
/// Locked: over the tail window the unwrapped theta_delta range stays within
/// phase_drift_tol and the residual frequency within freq_tol. NotLocked: the
/// phase ever escapes by more than escape_threshold from its start, or the
/// residual frequency exceeds freq_tol at the horizon.
LockVerdict detect_lock(std::span<const double> times, std::span<const double> theta_delta,
                        const LockCriteria& criteria);

LockVerdict detect_lock(const PhaseTrajectory& traj, const LockCriteria& criteria);
LockVerdict detect_lock(const SignalTrajectory& traj, const LockCriteria& criteria);

enum class EquilibriumStability { stable, saddle, unstable };

struct Equilibrium {
    double x_star = 0.0;
    double theta_delta_star = 0.0;  // in [0, 2*pi)
    std::complex<double> eig1, eig2;
    EquilibriumStability stability = EquilibriumStability::stable;
};

/// All rest points of the phase model with theta_delta in [0, 2*pi), with the
/// eigenvalues of the 2x2 Jacobian attached. Empty when 2|omega_delta|/L > 1.
std::vector<Equilibrium> find_equilibria(const PllParams& params);

struct PoincareReturn {
    double next_x = 0.0;
    double return_time = 0.0;
};

/// One application of the Poincare return map of the phase model: integrate
/// from (section_x, section_theta) until theta_delta first crosses
/// section_theta + 2*pi rising. nullopt = no return within config.t_end
/// (the trajectory was captured into lock).
std::optional<PoincareReturn> poincare_map(double section_x, double section_theta,
                                           const PllParams& params,
                                           const odeint::IntegratorConfig& config);

enum class OrbitStability { stable, unstable, semistable };

struct PeriodicOrbit {
    double section_x = 0.0;   // fixed point of the return map at theta_delta = 0
    double period = 0.0;      // time for theta_delta to advance 2*pi
    double multiplier = 0.0;  // return-map derivative at the fixed point
    OrbitStability stability = OrbitStability::stable;
};

const char* to_string(OrbitStability s);

struct OrbitScanRange {
    double lo = -0.5;
    double hi = 0.5;
    int points = 200;
};

/// Rotation orbits of the phase model, located as fixed points of the return
/// map on the section theta_delta = 0. Sign changes of P(x)-x over the scan
/// grid are bisected to a bracket width of 1e-10; sub-grid pairs near a fold
/// and orbits hugging the capture boundary are recovered by a local minimum
/// search and by probing toward the boundary. Sorted by section_x.
std::vector<PeriodicOrbit> find_periodic_orbits(const PllParams& params,
                                                const OrbitScanRange& scan,
                                                const odeint::IntegratorConfig& config);

/// |section_x(stable) - section_x(unstable)| when the list holds exactly one
/// of each; the Fig-7-style gap the coarse integrator can slip through.
std::optional<double> orbit_gap(const std::vector<PeriodicOrbit>& orbits);

enum class AttractorClass { SelfExcited, Hidden };

const char* to_string(AttractorClass c);

/// Perturbation protocol around non-stable equilibria: 16 seeds on a circle of
/// radius 1e-3 plus seeds along the unstable eigenvectors; SelfExcited when
/// any such trajectory ends up within 1e-2 of the orbit in (x, theta mod 2pi).
AttractorClass classify_attractor(const PeriodicOrbit& orbit,
                                  const std::vector<Equilibrium>& equilibria,
                                  const PllParams& params,
                                  const odeint::IntegratorConfig& config);

struct ToleranceEntry {
    double rtol = 0.0;
    LockVerdict verdict;
};

struct ToleranceSweep {
    std::vector<ToleranceEntry> entries;
    LockVerdict reference;                // verdict at rtol = 1e-9, atol = 1e-12
    std::optional<double> coarsest_agreeing_rtol;
};

/// Lock verdict of the phase model under a list of relative tolerances. Each
/// run uses atol = rtol so one knob scales the whole error bound; the
/// reference verdict is computed at the fixed reference configuration.
ToleranceSweep tolerance_sensitivity(const PhaseState& initial, const PllParams& params,
                                     std::span<const double> rtol_list,
                                     const LockCriteria& criteria, double t_end);

/// Detuning at which the stable/unstable rotation-orbit pair is born
/// (fold of cycles, the semistable trajectory). The [lo, hi] range is scanned
/// for a two-orbit window first, then the boundary is bisected to 1e-3 rad/s.
double locate_cycle_fold(const PllParams& params_template, double omega_delta_lo,
                         double omega_delta_hi, const OrbitScanRange& scan,
                         const odeint::IntegratorConfig& config);

struct ModelComparison {
    LockVerdict signal_verdict;
    LockVerdict phase_verdict;
    double max_smoothed_g_deviation = 0.0;
};

/// Runs the signal model and the matched phase model (theta_delta(0) =
/// theta1(0) - theta2(0)) and compares lock verdicts; the g(t) deviation is
/// measured against the signal-model output smoothed over one carrier period.
ModelComparison compare_models(const SignalState& signal_initial, const PllParams& params,
                               const odeint::IntegratorConfig& signal_config,
                               const odeint::IntegratorConfig& phase_config,
                               const LockCriteria& criteria);

}  // namespace pllsim
