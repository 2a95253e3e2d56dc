#include "pllsim/analysis.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <map>

#include "pllsim/models.hpp"

namespace pllsim {

namespace {

constexpr double kTwoPi = 2.0 * M_PI;

// Signed angular distance to (-pi, pi].
double wrap_pm_pi(double theta) { return std::remainder(theta, kTwoPi); }

}  // namespace

const char* to_string(LockStatus s) {
    switch (s) {
        case LockStatus::Locked: return "locked";
        case LockStatus::NotLocked: return "not_locked";
        case LockStatus::Undecided: return "undecided";
    }
    return "?";
}

const char* to_string(OrbitStability s) {
    switch (s) {
        case OrbitStability::stable: return "stable";
        case OrbitStability::unstable: return "unstable";
        case OrbitStability::semistable: return "semistable";
    }
    return "?";
}

const char* to_string(AttractorClass c) {
    return c == AttractorClass::SelfExcited ? "self-excited" : "hidden";
}

LockVerdict detect_lock(std::span<const double> times, std::span<const double> theta_delta,
                        const LockCriteria& criteria) {
    if (times.size() != theta_delta.size() || times.size() < 2) throw TrajectoryTooShort();
    const double span = times.back() - times.front();
    if (span < 2.0 * criteria.window) throw TrajectoryTooShort();

    bool escaped = false;
    const double th0 = theta_delta.front();
    for (double th : theta_delta) {
        if (std::abs(th - th0) > criteria.escape_threshold) {
            escaped = true;
            break;
        }
    }

    // Tail window statistics. The anchor sample sits at or before the window
    // start so the secant always spans at least the window, even when the
    // integrator took steps wider than the window itself.
    const double tail_start = times.back() - criteria.window;
    const auto it = std::upper_bound(times.begin(), times.end(), tail_start);
    const auto a = static_cast<std::size_t>(std::distance(times.begin(), it)) - 1;
    double lo = theta_delta[a], hi = theta_delta[a];
    for (std::size_t i = a; i < theta_delta.size(); ++i) {
        lo = std::min(lo, theta_delta[i]);
        hi = std::max(hi, theta_delta[i]);
    }
    LockVerdict v;
    v.final_theta_delta = theta_delta.back();
    // Net drift rate across the tail; the mean of theta_delta' telescopes to
    // the secant slope, which ignores the double-frequency ripple of the
    // signal model.
    v.residual_freq = std::abs(theta_delta.back() - theta_delta[a]) / (times.back() - times[a]);

    if (escaped)
        v.status = LockStatus::NotLocked;
    else if (hi - lo <= criteria.phase_drift_tol && v.residual_freq <= criteria.freq_tol)
        v.status = LockStatus::Locked;
    else if (v.residual_freq > criteria.freq_tol)
        v.status = LockStatus::NotLocked;
    else
        v.status = LockStatus::Undecided;
    return v;
}

LockVerdict detect_lock(const PhaseTrajectory& traj, const LockCriteria& criteria) {
    return detect_lock(traj.times, traj.theta_delta, criteria);
}

LockVerdict detect_lock(const SignalTrajectory& traj, const LockCriteria& criteria) {
    std::vector<double> thd(traj.size());
    for (std::size_t i = 0; i < traj.size(); ++i) thd[i] = traj.theta1[i] - traj.theta2[i];
    return detect_lock(traj.times, thd, criteria);
}

std::vector<Equilibrium> find_equilibria(const PllParams& params) {
    const FilterRealization& f = params.filter;
    const double wd = params.omega_delta();
    // x' = 0 fixes x = -(b/A) phi(theta); substituting into theta' = 0 leaves
    // a scalar equation over one period of theta.
    const auto x_of = [&](double theta) { return -(f.b / f.A) * pd_averaged(theta); };
    const auto residual = [&](double theta) {
        const double phi = pd_averaged(theta);
        return wd - params.gain * filter_output(f, x_of(theta), phi);
    };

    std::vector<double> roots;
    const int n_scan = 720;
    double prev_theta = 0.0;
    double prev_val = residual(0.0);
    for (int i = 1; i <= n_scan; ++i) {
        const double theta = kTwoPi * static_cast<double>(i) / n_scan;
        const double val = residual(theta);
        if (prev_val == 0.0) roots.push_back(prev_theta);
        else if ((prev_val < 0.0) != (val < 0.0)) {
            double lo = prev_theta, hi = theta, f_lo = prev_val;
            for (int it = 0; it < 80; ++it) {
                const double mid = 0.5 * (lo + hi);
                const double fm = residual(mid);
                if ((f_lo < 0.0) == (fm < 0.0)) {
                    lo = mid;
                    f_lo = fm;
                } else {
                    hi = mid;
                }
            }
            roots.push_back(0.5 * (lo + hi));
        }
        prev_theta = theta;
        prev_val = val;
    }

    std::vector<Equilibrium> out;
    for (double theta : roots) {
        Equilibrium eq;
        eq.theta_delta_star = wrap_angle(theta);
        eq.x_star = x_of(theta);
        const double dphi = 0.5 * std::cos(theta);  // d/dtheta of the averaged PD
        Eigen::Matrix2d jac;
        jac << f.A, f.b * dphi, -params.gain * f.c, -params.gain * f.h * dphi;
        const Eigen::EigenSolver<Eigen::Matrix2d> es(jac);
        eq.eig1 = es.eigenvalues()[0];
        eq.eig2 = es.eigenvalues()[1];
        const double r1 = eq.eig1.real(), r2 = eq.eig2.real();
        if (r1 < 0.0 && r2 < 0.0) eq.stability = EquilibriumStability::stable;
        else if (r1 * r2 < 0.0) eq.stability = EquilibriumStability::saddle;
        else eq.stability = EquilibriumStability::unstable;
        out.push_back(eq);
    }
    std::sort(out.begin(), out.end(), [](const Equilibrium& a, const Equilibrium& b) {
        return a.theta_delta_star < b.theta_delta_star;
    });
    // Collapse duplicates from the wrap seam.
    out.erase(std::unique(out.begin(), out.end(),
                          [](const Equilibrium& a, const Equilibrium& b) {
                              return std::abs(wrap_pm_pi(a.theta_delta_star -
                                                         b.theta_delta_star)) < 1e-9;
                          }),
              out.end());
    return out;
}

namespace {

// Capture shortcut: a trajectory entering a small ball around a stable
// equilibrium can no longer return to the section, so the run may stop early.
constexpr double kCaptureRadius = 1e-3;

// Returns cross the section after a full turn in the drift direction:
// theta advances +2pi (rising) for positive detuning, -2pi (falling) for
// negative detuning.
std::vector<odeint::EventSpec<2>> poincare_events(double target, bool rising,
                                                  const std::vector<Equilibrium>& equilibria) {
    std::vector<odeint::EventSpec<2>> events;
    events.push_back({[target](double, const Vec2& y) { return y[1] - target; },
                      rising ? odeint::EventDirection::rising : odeint::EventDirection::falling,
                      true});
    for (const Equilibrium& eq : equilibria) {
        if (eq.stability != EquilibriumStability::stable) continue;
        const double xs = eq.x_star, ts = eq.theta_delta_star;
        events.push_back({[xs, ts](double, const Vec2& y) {
                              const double dx = y[0] - xs;
                              const double dth = wrap_pm_pi(y[1] - ts);
                              return dx * dx + dth * dth - kCaptureRadius * kCaptureRadius;
                          },
                          odeint::EventDirection::falling, true});
    }
    return events;
}

}  // namespace

std::optional<PoincareReturn> poincare_map(double section_x, double section_theta,
                                           const PllParams& params,
                                           const odeint::IntegratorConfig& config) {
    const bool rising = params.omega_delta() >= 0.0;
    const double target = section_theta + (rising ? kTwoPi : -kTwoPi);
    const auto events = poincare_events(target, rising, find_equilibria(params));
    const auto [sol, hits] = odeint::integrate_with_events<2>(
        phase_rhs_fn(params), Vec2(section_x, section_theta), config, events);
    if (hits.empty() || hits.back().event_index != 0) return std::nullopt;
    return PoincareReturn{hits.back().y[0], hits.back().t};
}

namespace {

// Memoized displacement map x -> P(x) - x on the section theta_delta = 0.
class ReturnDisplacement {
public:
    ReturnDisplacement(const PllParams& params, const odeint::IntegratorConfig& config)
        : params_(params), config_(config), equilibria_(find_equilibria(params)) {}

    std::optional<double> operator()(double x) {
        const auto found = cache_.find(x);
        if (found != cache_.end()) return found->second;
        const bool rising = params_.omega_delta() >= 0.0;
        const auto events = poincare_events(rising ? kTwoPi : -kTwoPi, rising, equilibria_);
        const auto [sol, hits] =
            odeint::integrate_with_events<2>(phase_rhs_fn(params_), Vec2(x, 0.0), config_, events);
        std::optional<double> value;
        if (!hits.empty() && hits.back().event_index == 0) value = hits.back().y[0] - x;
        cache_.emplace(x, value);
        return value;
    }

    std::optional<PoincareReturn> map(double x) const {
        return poincare_map(x, 0.0, params_, config_);
    }

private:
    const PllParams& params_;
    const odeint::IntegratorConfig& config_;
    std::vector<Equilibrium> equilibria_;
    std::map<double, std::optional<double>> cache_;
};

// Bisects a sign change of the displacement to a bracket narrower than
// 1e-11. Grid points that stop returning inside the bracket lie above the
// unstable orbit, so the root is kept on the lower side.
double bisect_displacement(ReturnDisplacement& f, double lo, double hi, bool f_lo_negative) {
    while (hi - lo > 1e-11) {
        const double mid = 0.5 * (lo + hi);
        const auto fm = f(mid);
        if (!fm) {
            hi = mid;
            continue;
        }
        if ((*fm < 0.0) == f_lo_negative) lo = mid;
        else hi = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace

std::vector<PeriodicOrbit> find_periodic_orbits(const PllParams& params,
                                                const OrbitScanRange& scan,
                                                const odeint::IntegratorConfig& config) {
    ReturnDisplacement disp(params, config);
    const int n = std::max(scan.points, 2);
    std::vector<double> xs(n);
    std::vector<std::optional<double>> fs(n);
    for (int i = 0; i < n; ++i) {
        xs[i] = scan.lo + (scan.hi - scan.lo) * static_cast<double>(i) / (n - 1);
        fs[i] = disp(xs[i]);
    }

    std::vector<std::pair<double, double>> brackets;  // (lo, hi) with a sign change
    auto add_bracket = [&](double lo, double hi) { brackets.emplace_back(lo, hi); };

    // Plain sign changes between adjacent returning grid points.
    for (int i = 0; i + 1 < n; ++i) {
        if (fs[i] && fs[i + 1] && (*fs[i] < 0.0) != (*fs[i + 1] < 0.0))
            add_bracket(xs[i], xs[i + 1]);
    }

    // Runs of returning grid points, for the sub-grid refinements below.
    int i = 0;
    while (i < n) {
        if (!fs[i]) {
            ++i;
            continue;
        }
        int j = i;
        while (j + 1 < n && fs[j + 1]) ++j;

        bool run_has_sign_change = false;
        for (int k = i; k < j; ++k)
            if ((*fs[k] < 0.0) != (*fs[k + 1] < 0.0)) run_has_sign_change = true;

        // An orbit pair whose displacement dip fits between grid points: probe
        // the extremum around the interior grid arg-extremum. The dip points
        // down for positive detuning and up for the mirrored flow.
        if (!run_has_sign_change && j - i >= 2) {
            for (double sgn : {1.0, -1.0}) {
                int k_ext = i;
                for (int k = i; k <= j; ++k)
                    if (sgn * *fs[k] < sgn * *fs[k_ext]) k_ext = k;
                if (k_ext <= i || k_ext >= j || sgn * *fs[k_ext] <= 0.0) continue;
                double a = xs[k_ext - 1], b = xs[k_ext + 1];
                auto value = [&](double x) {
                    const auto v = disp(x);
                    return v ? sgn * *v : 1e9;
                };
                // Golden-section minimum of the signed displacement.
                const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
                double c1 = b - gr * (b - a), c2 = a + gr * (b - a);
                double v1 = value(c1), v2 = value(c2);
                for (int it = 0; it < 80 && b - a > 1e-12; ++it) {
                    if (v1 < v2) {
                        b = c2;
                        c2 = c1;
                        v2 = v1;
                        c1 = b - gr * (b - a);
                        v1 = value(c1);
                    } else {
                        a = c1;
                        c1 = c2;
                        v1 = v2;
                        c2 = a + gr * (b - a);
                        v2 = value(c2);
                    }
                }
                const double x_ext = 0.5 * (a + b);
                const auto f_ext = disp(x_ext);
                if (f_ext && sgn * *f_ext < 0.0) {
                    add_bracket(xs[k_ext - 1], x_ext);
                    add_bracket(x_ext, xs[k_ext + 1]);
                }
            }
        }

        // A capture boundary adjacent to the run: an unstable orbit may hug it
        // closer than the grid spacing. Locate the boundary, then probe
        // geometrically toward it for a sign change.
        if (j + 1 < n && *fs[j] < 0.0) {
            double lo = xs[j], hi = xs[j + 1];
            for (int it = 0; it < 60 && hi - lo > 1e-13; ++it) {
                const double mid = 0.5 * (lo + hi);
                if (disp(mid)) lo = mid;
                else hi = mid;
            }
            for (int m = 1; m <= 16; ++m) {
                const double xp = lo - (lo - xs[j]) * std::pow(2.0, -m);
                const auto fp = disp(xp);
                if (fp && *fp > 0.0) {
                    add_bracket(xs[j], xp);
                    break;
                }
            }
        }
        if (i > 0 && *fs[i] > 0.0) {  // mirrored case, boundary left of the run
            double lo = xs[i - 1], hi = xs[i];
            for (int it = 0; it < 60 && hi - lo > 1e-13; ++it) {
                const double mid = 0.5 * (lo + hi);
                if (disp(mid)) hi = mid;
                else lo = mid;
            }
            for (int m = 1; m <= 16; ++m) {
                const double xp = hi + (xs[i] - hi) * std::pow(2.0, -m);
                const auto fp = disp(xp);
                if (fp && *fp < 0.0) {
                    add_bracket(xp, xs[i]);
                    break;
                }
            }
        }

        i = j + 1;
    }

    std::vector<PeriodicOrbit> orbits;
    for (const auto& [blo, bhi] : brackets) {
        const auto f_lo = disp(blo);
        if (!f_lo) continue;
        const double x_star = bisect_displacement(disp, blo, bhi, *f_lo < 0.0);
        const auto ret = disp.map(x_star);
        if (!ret) continue;

        PeriodicOrbit orbit;
        orbit.section_x = x_star;
        orbit.period = ret->return_time;

        const double delta = 1e-6 * (1.0 + std::abs(x_star));
        const auto p_plus = disp.map(x_star + delta);
        const auto p_minus = disp.map(x_star - delta);
        if (p_plus && p_minus)
            orbit.multiplier = (p_plus->next_x - p_minus->next_x) / (2.0 * delta);
        else if (p_minus)
            orbit.multiplier = (ret->next_x - p_minus->next_x) / delta;
        else if (p_plus)
            orbit.multiplier = (p_plus->next_x - ret->next_x) / delta;
        else
            orbit.multiplier = std::numeric_limits<double>::quiet_NaN();

        if (std::abs(std::abs(orbit.multiplier) - 1.0) < 1e-3)
            orbit.stability = OrbitStability::semistable;
        else if (std::abs(orbit.multiplier) < 1.0)
            orbit.stability = OrbitStability::stable;
        else
            orbit.stability = OrbitStability::unstable;
        orbits.push_back(orbit);
    }

    std::sort(orbits.begin(), orbits.end(),
              [](const PeriodicOrbit& a, const PeriodicOrbit& b) {
                  return a.section_x < b.section_x;
              });
    orbits.erase(std::unique(orbits.begin(), orbits.end(),
                             [](const PeriodicOrbit& a, const PeriodicOrbit& b) {
                                 return std::abs(a.section_x - b.section_x) <
                                        1e-8 * (1.0 + std::abs(a.section_x));
                             }),
                 orbits.end());
    return orbits;
}

std::optional<double> orbit_gap(const std::vector<PeriodicOrbit>& orbits) {
    const PeriodicOrbit* stable = nullptr;
    const PeriodicOrbit* unstable = nullptr;
    for (const auto& o : orbits) {
        if (o.stability == OrbitStability::stable) {
            if (stable) return std::nullopt;
            stable = &o;
        } else if (o.stability == OrbitStability::unstable) {
            if (unstable) return std::nullopt;
            unstable = &o;
        }
    }
    if (!stable || !unstable) return std::nullopt;
    return std::abs(stable->section_x - unstable->section_x);
}

AttractorClass classify_attractor(const PeriodicOrbit& orbit,
                                  const std::vector<Equilibrium>& equilibria,
                                  const PllParams& params,
                                  const odeint::IntegratorConfig& config) {
    if (orbit.stability != OrbitStability::stable) throw NoStableOrbit();

    // Sample the orbit over one period.
    odeint::IntegratorConfig orbit_cfg = config;
    orbit_cfg.t_end = orbit.period;
    const auto orbit_sol =
        odeint::integrate<2>(phase_rhs_fn(params), Vec2(orbit.section_x, 0.0), orbit_cfg);
    std::vector<double> ox, oth;
    const std::size_t stride = std::max<std::size_t>(1, orbit_sol.size() / 2000);
    for (std::size_t k = 0; k < orbit_sol.size(); k += stride) {
        ox.push_back(orbit_sol.states[k][0]);
        oth.push_back(orbit_sol.states[k][1]);
    }

    auto distance_to_orbit = [&](double x, double theta) {
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t k = 0; k < ox.size(); ++k) {
            const double dx = x - ox[k];
            const double dth = wrap_pm_pi(theta - oth[k]);
            best = std::min(best, dx * dx + dth * dth);
        }
        return std::sqrt(best);
    };

    // The proximity threshold may not exceed the orbit's clearance from the
    // stable equilibria, or settled trajectories would register as visits.
    double proximity = 1e-2;
    for (const Equilibrium& eq : equilibria) {
        if (eq.stability != EquilibriumStability::stable) continue;
        proximity = std::min(proximity,
                             0.45 * distance_to_orbit(eq.x_star, eq.theta_delta_star));
    }

    const double r = 1e-3;
    for (const Equilibrium& eq : equilibria) {
        if (eq.stability == EquilibriumStability::stable) continue;

        std::vector<Vec2> seeds;
        for (int k = 0; k < 16; ++k) {
            const double a = kTwoPi * static_cast<double>(k) / 16.0;
            seeds.emplace_back(eq.x_star + r * std::cos(a),
                               eq.theta_delta_star + r * std::sin(a));
        }
        // Unstable eigendirections, both senses.
        Eigen::Matrix2d jac;
        const double dphi = 0.5 * std::cos(eq.theta_delta_star);
        const FilterRealization& f = params.filter;
        jac << f.A, f.b * dphi, -params.gain * f.c, -params.gain * f.h * dphi;
        const Eigen::EigenSolver<Eigen::Matrix2d> es(jac);
        for (int k = 0; k < 2; ++k) {
            if (es.eigenvalues()[k].real() <= 0.0) continue;
            const Eigen::Vector2d v = es.eigenvectors().col(k).real().normalized();
            seeds.emplace_back(eq.x_star + r * v[0], eq.theta_delta_star + r * v[1]);
            seeds.emplace_back(eq.x_star - r * v[0], eq.theta_delta_star - r * v[1]);
        }

        for (const Vec2& seed : seeds) {
            const auto sol = odeint::integrate<2>(phase_rhs_fn(params), seed, config);
            const double t_tail = 0.8 * config.t_end;
            const auto begin_it =
                std::lower_bound(sol.times.begin(), sol.times.end(), t_tail);
            std::size_t k0 = static_cast<std::size_t>(
                std::distance(sol.times.begin(), begin_it));
            const std::size_t tail_stride = std::max<std::size_t>(1, (sol.size() - k0) / 500);
            for (std::size_t k = k0; k < sol.size(); k += tail_stride) {
                if (distance_to_orbit(sol.states[k][0], sol.states[k][1]) < proximity)
                    return AttractorClass::SelfExcited;
            }
        }
    }
    return AttractorClass::Hidden;
}

ToleranceSweep tolerance_sensitivity(const PhaseState& initial, const PllParams& params,
                                     std::span<const double> rtol_list,
                                     const LockCriteria& criteria, double t_end) {
    ToleranceSweep sweep;
    sweep.reference = detect_lock(simulate_phase(params, initial, reference_phase_config(t_end)),
                                  criteria);
    for (double rtol : rtol_list) {
        odeint::IntegratorConfig c;
        c.method = odeint::Method::adaptive_rk45;
        c.rtol = rtol;
        // One knob scales the whole error bound; the absolute floor sits an
        // order above rtol because theta_delta runs in whole radians.
        c.atol = 10.0 * rtol;
        c.t_end = t_end;
        sweep.entries.push_back({rtol, detect_lock(simulate_phase(params, initial, c), criteria)});
    }
    for (const auto& e : sweep.entries) {
        if (e.verdict.status != sweep.reference.status) continue;
        if (!sweep.coarsest_agreeing_rtol || e.rtol > *sweep.coarsest_agreeing_rtol)
            sweep.coarsest_agreeing_rtol = e.rtol;
    }
    return sweep;
}

double locate_cycle_fold(const PllParams& params_template, double omega_delta_lo,
                         double omega_delta_hi, const OrbitScanRange& scan,
                         const odeint::IntegratorConfig& config) {
    auto has_pair = [&](double omega_delta) {
        PllParams p = params_template;
        p.omega2_free = p.omega1 - omega_delta;
        return find_periodic_orbits(p, scan, config).size() >= 2;
    };

    // The two-orbit window may sit strictly inside the range, so scan before
    // bisecting.
    const int n_grid = 11;
    double lo = omega_delta_lo, hi = omega_delta_hi;
    bool lo_pair = has_pair(lo);
    bool found = false;
    for (int k = 1; k < n_grid && !found; ++k) {
        const double w = omega_delta_lo +
                         (omega_delta_hi - omega_delta_lo) * static_cast<double>(k) / (n_grid - 1);
        const bool pair = has_pair(w);
        if (pair != lo_pair) {
            hi = w;
            found = true;
        } else {
            lo = w;
        }
    }
    if (!found) throw NoSignChange();

    while (hi - lo > 1e-3) {
        const double mid = 0.5 * (lo + hi);
        if (has_pair(mid) == lo_pair) lo = mid;
        else hi = mid;
    }
    return 0.5 * (lo + hi);
}

ModelComparison compare_models(const SignalState& signal_initial, const PllParams& params,
                               const odeint::IntegratorConfig& signal_config,
                               const odeint::IntegratorConfig& phase_config,
                               const LockCriteria& criteria) {
    const SignalTrajectory sig = simulate_signal(params, signal_initial, signal_config);
    const PhaseState phase_initial{signal_initial.x, signal_initial.theta_delta()};
    const PhaseTrajectory pha = simulate_phase(params, phase_initial, phase_config);

    ModelComparison cmp;
    cmp.signal_verdict = detect_lock(sig, criteria);
    cmp.phase_verdict = detect_lock(pha, criteria);

    // Moving average of the signal-model g over one carrier period, compared
    // against the phase-model g interpolated onto the signal time grid.
    const double carrier_period = kTwoPi / params.omega1;
    const double dt = sig.times.size() > 1 ? sig.times[1] - sig.times[0] : carrier_period;
    const auto half = static_cast<std::size_t>(std::max(1.0, std::round(carrier_period / dt / 2)));
    std::vector<double> prefix(sig.size() + 1, 0.0);
    for (std::size_t k = 0; k < sig.size(); ++k) prefix[k + 1] = prefix[k] + sig.g[k];

    double max_dev = 0.0;
    std::size_t j = 0;
    for (std::size_t k = half; k + half < sig.size(); ++k) {
        const double g_smooth =
            (prefix[k + half + 1] - prefix[k - half]) / static_cast<double>(2 * half + 1);
        const double t = sig.times[k];
        while (j + 1 < pha.size() && pha.times[j + 1] < t) ++j;
        double g_phase = pha.g[j];
        if (j + 1 < pha.size() && pha.times[j + 1] > pha.times[j]) {
            const double w = (t - pha.times[j]) / (pha.times[j + 1] - pha.times[j]);
            g_phase += w * (pha.g[j + 1] - pha.g[j]);
        }
        max_dev = std::max(max_dev, std::abs(g_phase - g_smooth));
    }
    cmp.max_smoothed_g_deviation = max_dev;
    return cmp;
}

}  // namespace pllsim
