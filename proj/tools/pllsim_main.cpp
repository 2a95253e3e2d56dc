// Command-line experiment runner: transient simulation of the two loop
// models, lock maps, rotation-orbit localization and the cycle-fold search.

#include <CLI11.hpp>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "pllsim/analysis.hpp"
#include "pllsim/csv.hpp"
#include "pllsim/presets.hpp"

using namespace pllsim;
namespace fs = std::filesystem;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitMismatch = 1;
constexpr int kExitConfig = 2;
constexpr int kExitIntegrator = 3;
constexpr int kExitEmpty = 4;

struct RunSpec {
    std::string model = "phase";
    PllParams params;
    LockCriteria criteria;
    double x0 = 0.0;
    double theta0 = 0.0;    // phase difference theta1(0) - theta2(0)
    double theta1_0 = 0.0;  // absolute phases, signal model
    double theta2_0 = 0.0;
    odeint::Method method = odeint::Method::adaptive_rk45;
    double dt = 0.0;  // 0 = derive from omega1
    double rtol = 1e-9;
    double atol = 0.0;  // 0 = 10*rtol
    double t_end = presets::kHorizon;
    std::string out = "trajectory.csv";
    std::size_t stride = 0;  // 0 = decimate to at most 1e5 rows
};

// Registers the shared model/loop/integrator options on a subcommand. The
// option names double as the config-file keys.
struct RunOptions {
    std::string preset;
    std::string model;
    double w1 = 0, w2free = 0, L = 0, tau1 = 0, tau2 = 0;
    double x0 = 0, theta0 = 0, theta1_0 = 0, theta2_0 = 0;
    std::string method;
    double dt = 0, rtol = 0, atol = 0, t_end = 0;
    double window = 0, freq_tol = 0, phase_drift_tol = 0, escape_threshold = 0;
    std::string out;
    std::size_t stride = 0;
    std::string config_path;

    CLI::Option *o_preset, *o_model, *o_w1, *o_w2free, *o_L, *o_tau1, *o_tau2;
    CLI::Option *o_x0, *o_theta0, *o_theta1_0, *o_theta2_0;
    CLI::Option *o_method, *o_dt, *o_rtol, *o_atol, *o_t_end;
    CLI::Option *o_window, *o_freq_tol, *o_phase_drift_tol, *o_escape_threshold;
    CLI::Option *o_out, *o_stride;

    void attach(CLI::App* cmd) {
        o_preset = cmd->add_option("--preset", preset, "Experiment preset: example1..example4");
        o_model = cmd->add_option("--model", model, "Model: signal or phase");
        o_w1 = cmd->add_option("--w1", w1, "Input signal frequency, rad/s");
        o_w2free = cmd->add_option("--w2free", w2free, "VCO free-running frequency, rad/s");
        o_L = cmd->add_option("--L", L, "VCO input gain, rad/s per filter-output unit");
        o_tau1 = cmd->add_option("--tau1", tau1, "Loop-filter time constant tau1, s");
        o_tau2 = cmd->add_option("--tau2", tau2, "Loop-filter time constant tau2, s");
        o_x0 = cmd->add_option("--x0", x0, "Initial loop-filter state");
        o_theta0 = cmd->add_option("--theta0", theta0, "Initial phase difference, rad");
        o_theta1_0 = cmd->add_option("--theta1_0,--theta1-0", theta1_0,
                                     "Initial input phase (signal model), rad");
        o_theta2_0 = cmd->add_option("--theta2_0,--theta2-0", theta2_0,
                                     "Initial VCO phase (signal model), rad");
        o_method = cmd->add_option("--method", method, "Integrator: fixed_rk4 or adaptive_rk45");
        o_dt = cmd->add_option("--dt", dt, "Fixed step size, s (default 2*pi/(20*w1))");
        o_rtol = cmd->add_option("--rtol", rtol, "Relative tolerance, adaptive integrator");
        o_atol = cmd->add_option("--atol", atol, "Absolute tolerance (default 10*rtol)");
        o_t_end = cmd->add_option("--t_end,--t-end", t_end, "Horizon, s");
        o_window = cmd->add_option("--window", window, "Lock detection tail window, s");
        o_freq_tol = cmd->add_option("--freq_tol,--freq-tol", freq_tol,
                                     "Residual frequency bound, rad/s");
        o_phase_drift_tol = cmd->add_option("--phase_drift_tol,--phase-drift-tol",
                                            phase_drift_tol, "Tail phase range bound, rad");
        o_escape_threshold = cmd->add_option("--escape_threshold,--escape-threshold",
                                             escape_threshold,
                                             "Phase escape threshold, rad");
        o_out = cmd->add_option("--out", out, "Output CSV path");
        o_stride = cmd->add_option("--stride", stride, "Row decimation stride (0 = auto)");
        cmd->add_option("--config", config_path, "Flat key=value config file; flags override");
    }

    std::map<std::string, std::string> load_config() const {
        std::map<std::string, std::string> kv;
        if (config_path.empty()) return kv;
        std::ifstream is(config_path);
        if (!is) throw std::domain_error("cannot read config file: " + config_path);
        static const std::set<std::string> known = {
            "model", "w1", "w2free", "L", "tau1", "tau2", "x0", "theta0",
            "theta1_0", "theta2_0", "method", "dt", "rtol", "atol", "t_end",
            "window", "freq_tol", "phase_drift_tol", "escape_threshold", "out", "stride"};
        std::string line;
        while (std::getline(is, line)) {
            const auto hash = line.find('#');
            if (hash != std::string::npos) line.erase(hash);
            const auto trim = [](std::string s) {
                const auto b = s.find_first_not_of(" \t\r");
                const auto e = s.find_last_not_of(" \t\r");
                return b == std::string::npos ? std::string{} : s.substr(b, e - b + 1);
            };
            if (trim(line).empty()) continue;
            const auto eq = line.find('=');
            if (eq == std::string::npos)
                throw std::domain_error("config line is not key=value: " + line);
            const std::string key = trim(line.substr(0, eq));
            const std::string value = trim(line.substr(eq + 1));
            if (!known.count(key)) throw std::domain_error("unknown config key: " + key);
            kv[key] = value;
        }
        return kv;
    }

    // Resolution order: preset defaults, then config-file values, then flags.
    RunSpec build() const {
        const auto file = load_config();
        const auto num = [&](const CLI::Option* o, double flag_value,
                             const char* key) -> std::optional<double> {
            if (o->count() > 0) return flag_value;
            const auto it = file.find(key);
            if (it == file.end()) return std::nullopt;
            try {
                return std::stod(it->second);
            } catch (const std::exception&) {
                throw std::domain_error(std::string("bad numeric value for config key ") + key);
            }
        };
        const auto str = [&](const CLI::Option* o, const std::string& flag_value,
                             const char* key) -> std::optional<std::string> {
            if (o->count() > 0) return flag_value;
            const auto it = file.find(key);
            if (it == file.end()) return std::nullopt;
            return it->second;
        };

        RunSpec spec;
        int preset_n = 0;
        if (*o_preset) {
            if (preset.size() != 8 || preset.rfind("example", 0) != 0 || preset[7] < '1' ||
                preset[7] > '4')
                throw CLI::ValidationError("--preset", "expected example1..example4");
            preset_n = preset[7] - '0';
        }
        spec.params = preset_n == 0 ? presets::params_123() : presets::params_for_example(preset_n);
        spec.criteria =
            preset_n == 0 ? presets::lock_criteria_123() : presets::lock_criteria_for_example(preset_n);
        spec.model = preset_n == 4 ? "phase" : "signal";
        if (preset_n == 1) spec.x0 = 0.18;
        if (preset_n == 2) {
            spec.x0 = 0.01;
            spec.theta0 = M_PI;
            spec.theta2_0 = -M_PI;
        }
        if (preset_n == 3) {
            spec.x0 = 0.017;
            spec.theta0 = 2.276;
            spec.theta2_0 = -2.276;
        }
        if (preset_n == 4) spec.x0 = 0.1318;

        LeadLagFilter filter = presets::loop_filter();
        PllParams& p = spec.params;
        if (const auto v = num(o_w1, w1, "w1")) p.omega1 = *v;
        if (const auto v = num(o_w2free, w2free, "w2free")) p.omega2_free = *v;
        if (const auto v = num(o_L, L, "L")) p.gain = *v;
        const auto v_tau1 = num(o_tau1, tau1, "tau1");
        const auto v_tau2 = num(o_tau2, tau2, "tau2");
        if (v_tau1) filter.tau1 = *v_tau1;
        if (v_tau2) filter.tau2 = *v_tau2;
        if (v_tau1 || v_tau2) p.filter = lead_lag_realization(filter);
        validate(p);

        if (const auto v = str(o_model, model, "model")) spec.model = *v;
        if (spec.model != "signal" && spec.model != "phase")
            throw std::domain_error("model must be signal or phase");

        if (const auto v = num(o_x0, x0, "x0")) spec.x0 = *v;
        const auto v_theta0 = num(o_theta0, theta0, "theta0");
        const auto v_theta1 = num(o_theta1_0, theta1_0, "theta1_0");
        const auto v_theta2 = num(o_theta2_0, theta2_0, "theta2_0");
        if (v_theta0) {
            spec.theta0 = *v_theta0;
            spec.theta1_0 = 0.0;
            spec.theta2_0 = -*v_theta0;
        }
        if (v_theta1) spec.theta1_0 = *v_theta1;
        if (v_theta2) spec.theta2_0 = *v_theta2;
        if (v_theta0 && (v_theta1 || v_theta2) &&
            std::abs((spec.theta1_0 - spec.theta2_0) - spec.theta0) > 1e-12)
            throw std::domain_error("theta0 is inconsistent with theta1_0/theta2_0");
        if (!v_theta0) spec.theta0 = spec.theta1_0 - spec.theta2_0;

        spec.method = spec.model == "signal" ? odeint::Method::fixed_rk4
                                             : odeint::Method::adaptive_rk45;
        if (const auto v = str(o_method, method, "method")) {
            if (*v == "fixed_rk4") spec.method = odeint::Method::fixed_rk4;
            else if (*v == "adaptive_rk45") spec.method = odeint::Method::adaptive_rk45;
            else throw std::domain_error("method must be fixed_rk4 or adaptive_rk45");
        }
        if (const auto v = num(o_rtol, rtol, "rtol")) spec.rtol = *v;
        const auto v_atol = num(o_atol, atol, "atol");
        spec.atol = v_atol ? *v_atol : 10.0 * spec.rtol;
        if (const auto v = num(o_t_end, t_end, "t_end")) spec.t_end = *v;
        const auto v_dt = num(o_dt, dt, "dt");
        spec.dt = v_dt ? *v_dt : default_signal_dt(p);

        if (const auto v = num(o_window, window, "window")) spec.criteria.window = *v;
        if (const auto v = num(o_freq_tol, freq_tol, "freq_tol")) spec.criteria.freq_tol = *v;
        if (const auto v = num(o_phase_drift_tol, phase_drift_tol, "phase_drift_tol"))
            spec.criteria.phase_drift_tol = *v;
        if (const auto v = num(o_escape_threshold, escape_threshold, "escape_threshold"))
            spec.criteria.escape_threshold = *v;

        if (const auto v = str(o_out, out, "out")) spec.out = *v;
        if (const auto v = num(o_stride, static_cast<double>(stride), "stride"))
            spec.stride = static_cast<std::size_t>(*v);
        return spec;
    }

    odeint::IntegratorConfig integrator(const RunSpec& spec) const {
        odeint::IntegratorConfig c;
        c.method = spec.method;
        c.dt = spec.dt;
        c.rtol = spec.rtol;
        c.atol = spec.atol;
        c.t_end = spec.t_end;
        return c;
    }
};

void print_verdict(const char* tag, const LockVerdict& v) {
    std::printf("%s: %s (final theta_delta %.6f rad, residual %.6f rad/s)\n", tag,
                to_string(v.status), v.final_theta_delta, v.residual_freq);
}

template <class Traj>
void write_csv_file(const std::string& path, const Traj& traj, std::size_t stride) {
    if (path.empty()) return;
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open output file: " + path);
    const std::size_t s = stride > 0 ? stride : csv::decimation_stride(traj.size());
    csv::write_trajectory(os, traj, s);
}

int cmd_simulate(const RunOptions& opts) {
    const RunSpec spec = opts.build();
    const auto cfg = opts.integrator(spec);
    LockVerdict v;
    if (spec.model == "signal") {
        const auto traj =
            simulate_signal(spec.params, SignalState{spec.x0, spec.theta1_0, spec.theta2_0}, cfg);
        v = detect_lock(traj, spec.criteria);
        write_csv_file(spec.out, traj, spec.stride);
    } else {
        const auto traj = simulate_phase(spec.params, PhaseState{spec.x0, spec.theta0}, cfg);
        v = detect_lock(traj, spec.criteria);
        write_csv_file(spec.out, traj, spec.stride);
    }
    print_verdict("verdict", v);
    return kExitOk;
}

int cmd_example(int n, const std::string& out_dir) {
    fs::create_directories(out_dir.empty() ? "." : out_dir);
    const auto path = [&](const std::string& name) {
        return (fs::path(out_dir.empty() ? "." : out_dir) / name).string();
    };
    const PllParams p = presets::params_for_example(n);
    const LockCriteria crit = presets::lock_criteria_for_example(n);
    bool match = false;

    if (n == 1 || n == 2) {
        const auto cfg = default_signal_config(p, presets::kHorizon);
        const SignalState first = n == 1 ? SignalState{0.18, 0.0, 0.0}
                                         : SignalState{0.01, 0.0, -M_PI};
        const SignalState second = n == 1 ? SignalState{0.0, 0.0, 0.0}
                                          : SignalState{0.01, 0.0, 0.0};
        const auto ta = simulate_signal(p, first, cfg);
        const auto tb = simulate_signal(p, second, cfg);
        const auto va = detect_lock(ta, crit);
        const auto vb = detect_lock(tb, crit);
        write_csv_file(path("example" + std::to_string(n) + "_a.csv"), ta, 0);
        write_csv_file(path("example" + std::to_string(n) + "_b.csv"), tb, 0);
        print_verdict(n == 1 ? "x0=0.18" : "theta0=pi", va);
        print_verdict(n == 1 ? "x0=0" : "theta0=0", vb);
        match = va.status == LockStatus::NotLocked && vb.status == LockStatus::Locked;
    } else if (n == 3) {
        const auto cmp = compare_models(SignalState{0.017, 0.0, -2.276}, p,
                                        default_signal_config(p, presets::kHorizon),
                                        reference_phase_config(presets::kHorizon), crit);
        const auto ts = simulate_signal(p, SignalState{0.017, 0.0, -2.276},
                                        default_signal_config(p, presets::kHorizon));
        const auto tp = simulate_phase(p, PhaseState{0.017, 2.276},
                                       reference_phase_config(presets::kHorizon));
        write_csv_file(path("example3_signal.csv"), ts, 0);
        write_csv_file(path("example3_phase.csv"), tp, 0);
        print_verdict("signal model", cmp.signal_verdict);
        print_verdict("phase model", cmp.phase_verdict);
        std::printf("max smoothed-g deviation: %.6f\n", cmp.max_smoothed_g_deviation);
        match = cmp.signal_verdict.status == LockStatus::NotLocked &&
                cmp.phase_verdict.status == LockStatus::Locked;
    } else if (n == 4) {
        const PhaseState init{0.1318, 0.0};
        const auto tr = simulate_phase(p, init, reference_phase_config(presets::kHorizon));
        const auto tc = simulate_phase(p, init, presets::coarse_phase_config(presets::kHorizon));
        const auto vr = detect_lock(tr, crit);
        const auto vc = detect_lock(tc, crit);
        write_csv_file(path("example4_reference.csv"), tr, 0);
        write_csv_file(path("example4_coarse.csv"), tc, 0);
        print_verdict("reference tolerance", vr);
        print_verdict("coarse tolerance", vc);
        match = vr.status != vc.status;
    } else {
        throw CLI::ValidationError("example", "expected 1..4");
    }

    std::printf("expected verdict pattern: %s\n", match ? "MATCH" : "MISMATCH");
    return match ? kExitOk : kExitMismatch;
}

int cmd_portrait(const RunOptions& opts, const std::vector<std::string>& seeds,
                 const std::string& out_dir, const OrbitScanRange& scan) {
    if (seeds.empty()) throw CLI::ValidationError("--seed", "at least one seed is required");
    const RunSpec spec = opts.build();
    auto cfg = opts.integrator(spec);
    cfg.method = odeint::Method::adaptive_rk45;
    fs::create_directories(out_dir.empty() ? "." : out_dir);
    const auto path = [&](const std::string& name) {
        return (fs::path(out_dir.empty() ? "." : out_dir) / name).string();
    };

    int k = 0;
    for (const auto& seed : seeds) {
        double x0 = 0.0, th0 = 0.0;
        if (std::sscanf(seed.c_str(), "%lf,%lf", &x0, &th0) != 2)
            throw CLI::ValidationError("--seed", "expected x0,theta0");
        const auto traj = simulate_phase(spec.params, PhaseState{x0, th0}, cfg);
        std::ofstream os(path("portrait_" + std::to_string(k) + ".csv"));
        os << "theta_delta_mod,x\n";
        const std::size_t stride =
            spec.stride > 0 ? spec.stride : csv::decimation_stride(traj.size());
        for (std::size_t i = 0; i < traj.size(); i += stride)
            os << csv::format_double(wrap_angle(traj.theta_delta[i])) << ','
               << csv::format_double(traj.x[i]) << '\n';
        std::printf("portrait_%d.csv: seed (%g, %g), %zu samples\n", k, x0, th0, traj.size());
        ++k;
    }

    const auto orbits = find_periodic_orbits(spec.params, scan, presets::orbit_config());
    std::ofstream os(path("orbits.csv"));
    os << "section_x,period,multiplier,stability\n";
    for (const auto& o : orbits)
        os << csv::format_double(o.section_x) << ',' << csv::format_double(o.period) << ','
           << csv::format_double(o.multiplier) << ',' << to_string(o.stability) << '\n';
    std::printf("orbits.csv: %zu orbit(s)\n", orbits.size());
    return kExitOk;
}

int cmd_basin(const RunOptions& opts, double x0_min, double x0_max, int x0_steps,
              double th0_min, double th0_max, int th0_steps) {
    if (x0_steps < 2 || th0_steps < 2)
        throw CLI::ValidationError("--x0-steps", "resolution must be at least 2 per axis");
    const RunSpec spec = opts.build();
    const auto cfg = opts.integrator(spec);

    std::ofstream os(spec.out == "trajectory.csv" ? "basin.csv" : spec.out);
    os << "x0,theta0,verdict\n";
    int counts[3] = {0, 0, 0};
    for (int i = 0; i < x0_steps; ++i) {
        const double x0 = x0_min + (x0_max - x0_min) * i / (x0_steps - 1);
        for (int j = 0; j < th0_steps; ++j) {
            const double th0 = th0_min + (th0_max - th0_min) * j / (th0_steps - 1);
            LockVerdict v;
            if (spec.model == "signal") {
                const auto traj =
                    simulate_signal(spec.params, SignalState{x0, 0.0, -th0}, cfg);
                v = detect_lock(traj, spec.criteria);
            } else {
                const auto traj = simulate_phase(spec.params, PhaseState{x0, th0}, cfg);
                v = detect_lock(traj, spec.criteria);
            }
            ++counts[static_cast<int>(v.status)];
            os << csv::format_double(x0) << ',' << csv::format_double(th0) << ','
               << to_string(v.status) << '\n';
        }
    }
    std::printf("%d locked, %d not_locked, %d undecided\n",
                counts[static_cast<int>(LockStatus::Locked)],
                counts[static_cast<int>(LockStatus::NotLocked)],
                counts[static_cast<int>(LockStatus::Undecided)]);
    return kExitOk;
}

int cmd_orbits(const RunOptions& opts, const OrbitScanRange& scan, double t_wait) {
    const RunSpec spec = opts.build();
    const auto orbits =
        find_periodic_orbits(spec.params, scan, presets::orbit_config(t_wait));
    if (orbits.empty()) {
        std::printf("no rotation orbits in [%g, %g]\n", scan.lo, scan.hi);
        return kExitEmpty;
    }
    std::printf("%-16s %-14s %-12s %s\n", "section_x", "period_s", "multiplier", "stability");
    for (const auto& o : orbits)
        std::printf("%-16.10f %-14.9f %-12.6f %s\n", o.section_x, o.period, o.multiplier,
                    to_string(o.stability));
    if (const auto gap = orbit_gap(orbits))
        std::printf("stable-unstable gap: %.6e\n", *gap);
    return kExitOk;
}

int cmd_bifurcate(const RunOptions& opts, double wd_lo, double wd_hi,
                  const OrbitScanRange& scan) {
    const RunSpec spec = opts.build();
    try {
        const double fold =
            locate_cycle_fold(spec.params, wd_lo, wd_hi, scan, presets::orbit_config());
        std::printf("cycle fold at omega_delta = %.6f rad/s\n", fold);
        return kExitOk;
    } catch (const NoSignChange&) {
        std::printf("no orbit-pair boundary inside [%g, %g]\n", wd_lo, wd_hi);
        return kExitEmpty;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Classical PLL simulation and nonlinear analysis toolkit"};
    app.require_subcommand(1);

    auto* sim = app.add_subcommand("simulate", "Integrate one model and report the lock verdict");
    RunOptions sim_opts;
    sim_opts.attach(sim);

    auto* ex = app.add_subcommand("example", "Run a bundled experiment preset (1..4)");
    int example_n = 0;
    std::string example_out_dir = ".";
    ex->add_option("n", example_n, "Experiment number")->required();
    ex->add_option("--out-dir", example_out_dir, "Directory for the scenario CSV files");

    auto* por = app.add_subcommand("portrait", "Phase-portrait trajectories plus located orbits");
    RunOptions por_opts;
    por_opts.attach(por);
    std::vector<std::string> seeds;
    std::string por_out_dir = ".";
    OrbitScanRange por_scan;
    por->add_option("--seed", seeds, "Initial state x0,theta0 (repeatable)");
    por->add_option("--out-dir", por_out_dir, "Directory for the portrait CSV files");
    por->add_option("--scan-lo", por_scan.lo, "Orbit scan lower bound");
    por->add_option("--scan-hi", por_scan.hi, "Orbit scan upper bound");
    por->add_option("--scan-points", por_scan.points, "Orbit scan grid points");

    auto* bas = app.add_subcommand("basin", "Lock map over a grid of initial states");
    RunOptions bas_opts;
    bas_opts.attach(bas);
    double x0_min = -0.5, x0_max = 0.5, th0_min = 0.0, th0_max = 2.0 * M_PI;
    int x0_steps = 11, th0_steps = 11;
    bas->add_option("--x0-min", x0_min, "Filter-state range start");
    bas->add_option("--x0-max", x0_max, "Filter-state range end");
    bas->add_option("--x0-steps", x0_steps, "Grid points along x0");
    bas->add_option("--theta0-min", th0_min, "Phase-difference range start");
    bas->add_option("--theta0-max", th0_max, "Phase-difference range end");
    bas->add_option("--theta0-steps", th0_steps, "Grid points along theta0");

    auto* orb = app.add_subcommand("orbits", "Locate rotation orbits on the section");
    RunOptions orb_opts;
    orb_opts.attach(orb);
    OrbitScanRange orb_scan;
    double orb_wait = 10.0;
    orb->add_option("--scan-lo", orb_scan.lo, "Scan lower bound");
    orb->add_option("--scan-hi", orb_scan.hi, "Scan upper bound");
    orb->add_option("--scan-points", orb_scan.points, "Scan grid points");
    orb->add_option("--t-wait", orb_wait, "Return-map horizon, s");

    auto* bif = app.add_subcommand("bifurcate", "Bisect the birth of the rotation-orbit pair");
    RunOptions bif_opts;
    bif_opts.attach(bif);
    OrbitScanRange bif_scan;
    double wd_lo = 0.0, wd_hi = 0.0;
    bif->add_option("--wd-lo", wd_lo, "Detuning range start, rad/s")->required();
    bif->add_option("--wd-hi", wd_hi, "Detuning range end, rad/s")->required();
    bif->add_option("--scan-lo", bif_scan.lo, "Orbit scan lower bound");
    bif->add_option("--scan-hi", bif_scan.hi, "Orbit scan upper bound");
    bif->add_option("--scan-points", bif_scan.points, "Orbit scan grid points");

    try {
        app.parse(argc, argv);
        if (sim->parsed()) return cmd_simulate(sim_opts);
        if (ex->parsed()) return cmd_example(example_n, example_out_dir);
        if (por->parsed()) return cmd_portrait(por_opts, seeds, por_out_dir, por_scan);
        if (bas->parsed())
            return cmd_basin(bas_opts, x0_min, x0_max, x0_steps, th0_min, th0_max, th0_steps);
        if (orb->parsed()) return cmd_orbits(orb_opts, orb_scan, orb_wait);
        if (bif->parsed()) return cmd_bifurcate(bif_opts, wd_lo, wd_hi, bif_scan);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitConfig;
    } catch (const std::domain_error& e) {
        std::fprintf(stderr, "configuration error: %s\n", e.what());
        return kExitConfig;
    } catch (const odeint::StepLimitExceeded& e) {
        std::fprintf(stderr, "integrator error: %s\n", e.what());
        return kExitIntegrator;
    } catch (const odeint::StepUnderflow& e) {
        std::fprintf(stderr, "integrator error: %s\n", e.what());
        return kExitIntegrator;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitConfig;
    }
    return kExitOk;
}
