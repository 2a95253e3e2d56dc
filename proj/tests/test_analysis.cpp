#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "pllsim/analysis.hpp"
#include "pllsim/presets.hpp"

using namespace pllsim;
using doctest::Approx;

namespace {

constexpr double kStableX = 0.004908904245;   // rotation pair of the detuning-178.9 loop,
constexpr double kUnstableX = 0.005535958805;  // frozen from the refined return map

std::vector<double> ramp_times(double t_end, double dt) {
    std::vector<double> t;
    for (double v = 0.0; v <= t_end + 1e-12; v += dt) t.push_back(v);
    return t;
}

}  // namespace

TEST_CASE("detect_lock on synthetic phase series") {
    const LockCriteria crit;
    const auto times = ramp_times(5.0, 0.01);

    SUBCASE("constant phase locks") {
        std::vector<double> thd(times.size(), 0.8);
        const auto v = detect_lock(times, thd, crit);
        CHECK(v.status == LockStatus::Locked);
        CHECK(v.residual_freq == 0.0);
        CHECK(v.final_theta_delta == 0.8);
    }
    SUBCASE("steady drift escapes") {
        std::vector<double> thd;
        for (double t : times) thd.push_back(95.0 * t);
        const auto v = detect_lock(times, thd, crit);
        CHECK(v.status == LockStatus::NotLocked);
    }
    SUBCASE("escape overrides a quiet tail") {
        std::vector<double> thd;
        for (double t : times) thd.push_back(t < 1.0 ? 15.0 * t : 15.0);
        const auto v = detect_lock(times, thd, crit);
        CHECK(v.status == LockStatus::NotLocked);  // 15 rad > escape threshold
    }
    SUBCASE("slow large swing is undecided") {
        std::vector<double> thd;
        for (double t : times) thd.push_back(0.5 * std::sin(2.0 * t));
        const auto v = detect_lock(times, thd, crit);
        CHECK(v.status == LockStatus::Undecided);
    }
    SUBCASE("short trajectory is rejected") {
        const auto st = ramp_times(1.5, 0.01);
        std::vector<double> thd(st.size(), 0.0);
        CHECK_THROWS_AS(detect_lock(st, thd, crit), TrajectoryTooShort);
    }
}

TEST_CASE("signal-model lock verdict ignores a 2pi relabeling of theta1") {
    const auto p = presets::params_123();
    auto cfg = default_signal_config(p, 2.5);
    const LockCriteria crit;
    const auto a = detect_lock(simulate_signal(p, SignalState{0.18, 0.0, 0.0}, cfg), crit);
    const auto b =
        detect_lock(simulate_signal(p, SignalState{0.18, 2.0 * M_PI, 0.0}, cfg), crit);
    CHECK(a.status == b.status);
}

TEST_CASE("equilibria at zero detuning") {
    PllParams p = presets::params_123();
    p.omega2_free = p.omega1;
    const auto eqs = find_equilibria(p);
    REQUIRE(eqs.size() == 2);
    CHECK(eqs[0].theta_delta_star == Approx(0.0).scale(1.0).epsilon(1e-9));
    CHECK(eqs[1].theta_delta_star == Approx(M_PI).epsilon(1e-9));
    CHECK(eqs[0].x_star == Approx(0.0).scale(1.0).epsilon(1e-12));
    CHECK(eqs[0].stability == EquilibriumStability::stable);
    CHECK(eqs[1].stability == EquilibriumStability::saddle);
}

TEST_CASE("equilibria of the detuning-178.9 loop") {
    const auto p = presets::params_4();
    const auto eqs = find_equilibria(p);
    REQUIRE(eqs.size() == 2);
    CHECK(eqs[0].theta_delta_star == Approx(0.7974826998815102).epsilon(1e-8));
    CHECK(eqs[1].theta_delta_star == Approx(2.344109953708283).epsilon(1e-8));
    CHECK(eqs[0].x_star == Approx(0.01602944).epsilon(1e-8));
    CHECK(eqs[1].x_star == Approx(0.01602944).epsilon(1e-8));
    CHECK(eqs[0].stability == EquilibriumStability::stable);
    CHECK(eqs[1].stability == EquilibriumStability::saddle);
    CHECK(eqs[1].eig1.real() * eqs[1].eig2.real() < 0.0);

    for (const auto& eq : eqs) {
        const auto d = phase_rhs(PhaseState{eq.x_star, eq.theta_delta_star}, p);
        const double norm = std::hypot(d.x, d.theta_delta);
        CHECK(norm <= 1e-9 * (1.0 + std::abs(p.omega_delta())));
    }
}

TEST_CASE("no equilibria beyond the sinusoidal pull-out") {
    PllParams p = presets::params_4();
    p.omega2_free = p.omega1 - 300.0;  // 2 wd / L = 1.2
    const auto eqs = find_equilibria(p);
    CHECK(eqs.empty());
    // theta' stays bounded away from zero on the x-nullcline.
    for (int k = 0; k < 1000; ++k) {
        const double th = 2.0 * M_PI * k / 1000.0;
        const double x = -(p.filter.b / p.filter.A) * pd_averaged(th);
        CHECK(std::abs(phase_rhs(PhaseState{x, th}, p).theta_delta) > 1.0);
    }
}

TEST_CASE("equilibria satisfy the closed form over random loop constants") {
    std::mt19937 rng(31);
    std::uniform_real_distribution<double> uw(-200.0, 200.0);
    std::uniform_real_distribution<double> ul(100.0, 1000.0);
    const auto filter = lead_lag_realization(presets::loop_filter());
    int tested = 0;
    while (tested < 25) {
        const double wd = uw(rng), L = ul(rng);
        if (std::abs(2.0 * wd / L) >= 0.99) continue;
        ++tested;
        PllParams p;
        p.omega1 = 10000.0;
        p.omega2_free = p.omega1 - wd;
        p.gain = L;
        p.filter = filter;
        const auto eqs = find_equilibria(p);
        REQUIRE(eqs.size() == 2);
        for (const auto& eq : eqs) {
            CHECK(std::sin(eq.theta_delta_star) == Approx(2.0 * wd / L).epsilon(1e-8).scale(1.0));
            CHECK(eq.x_star == Approx(0.0448 * wd / L).epsilon(1e-8).scale(1.0));
        }
    }
}

TEST_CASE("return map of the decoupled loop matches the linear solution") {
    PllParams p;
    p.omega1 = 1000.0;
    p.omega2_free = 950.0;  // wd = 50
    p.gain = 0.0;
    p.filter = FilterRealization{-1.0, 0.0, 1.0, 0.0};
    const auto r = poincare_map(0.3, 0.0, p, presets::orbit_config());
    REQUIRE(r.has_value());
    const double period = 2.0 * M_PI / 50.0;
    CHECK(r->return_time == Approx(period).epsilon(1e-9));
    CHECK(r->next_x == Approx(0.3 * std::exp(-period)).epsilon(1e-8));
}

TEST_CASE("return map around the rotation pair") {
    const auto p = presets::params_4();
    const auto cfg = presets::orbit_config();

    SUBCASE("capture region gives no return") {
        CHECK_FALSE(poincare_map(0.0108, 0.0, p, cfg).has_value());
    }
    SUBCASE("between the orbits the map contracts toward the stable one") {
        const double x = 0.5 * (kStableX + kUnstableX);
        const auto r = poincare_map(x, 0.0, p, cfg);
        REQUIRE(r.has_value());
        CHECK(std::abs(r->next_x - kStableX) < std::abs(x - kStableX));
    }
    SUBCASE("a seed above the unstable orbit is captured in the exact flow") {
        // No trajectory may cross the unstable rotation, so every return-map
        // call from this height ends in lock regardless of the phase.
        for (double th0 : {0.0, 2.0, 4.0}) {
            CHECK_FALSE(poincare_map(0.2206, th0, p, cfg).has_value());
        }
    }
}

TEST_CASE("rotation-orbit pair of the detuning-178.9 loop") {
    const auto p = presets::params_4();
    const auto orbits = find_periodic_orbits(p, presets::orbit_scan_4(), presets::orbit_config());
    REQUIRE(orbits.size() == 2);

    const auto& stable = orbits[0];
    const auto& unstable = orbits[1];
    CHECK(stable.stability == OrbitStability::stable);
    CHECK(unstable.stability == OrbitStability::unstable);
    // The stable rotation sits below the unstable one on this section.
    CHECK(stable.section_x == Approx(kStableX).epsilon(1e-6));
    CHECK(unstable.section_x == Approx(kUnstableX).epsilon(1e-6));
    CHECK(stable.multiplier == Approx(0.8172).epsilon(1e-3));
    CHECK(unstable.multiplier == Approx(1.4411).epsilon(1e-3));
    CHECK(stable.period == Approx(0.082676662).epsilon(1e-6));
    CHECK(orbit_gap(orbits).value() == Approx(6.271e-4).epsilon(1e-2));

    // Fixed-point residuals.
    for (const auto& o : orbits) {
        const auto r = poincare_map(o.section_x, 0.0, p, presets::orbit_config());
        REQUIRE(r.has_value());
        CHECK(std::abs(r->next_x - o.section_x) <= 1e-8 * (1.0 + std::abs(o.section_x)));
    }
}

TEST_CASE("multipliers classify the contraction direction") {
    const auto p = presets::params_4();
    const auto cfg = presets::orbit_config();
    const double delta = 1e-4;

    // Stable orbit: both-sided approach.
    for (double s : {-1.0, 1.0}) {
        double x = kStableX + s * delta;
        for (int k = 0; k < 3; ++k) {
            const auto r = poincare_map(x, 0.0, p, cfg);
            REQUIRE(r.has_value());
            x = r->next_x;
        }
        CHECK(std::abs(x - kStableX) < delta * 0.7);
    }
    // Unstable orbit: one-sided divergence (the lower side falls to the stable
    // orbit, the upper side leaves toward the capture boundary).
    {
        double x = kUnstableX - delta;
        const auto r = poincare_map(x, 0.0, p, cfg);
        REQUIRE(r.has_value());
        CHECK(r->next_x < x);  // moving away, down
    }
    {
        double x = kUnstableX + 1e-5;
        const auto r = poincare_map(x, 0.0, p, cfg);
        REQUIRE(r.has_value());
        CHECK(r->next_x > x);  // moving away, up
    }
}

TEST_CASE("no rotation orbits at zero detuning") {
    PllParams p = presets::params_123();
    p.omega2_free = p.omega1;
    const auto orbits =
        find_periodic_orbits(p, OrbitScanRange{-0.02, 0.02, 41}, presets::orbit_config(3.0));
    CHECK(orbits.empty());
}

TEST_CASE("single stable rotation at the detuning-95 loop") {
    const auto p = presets::params_123();
    const auto orbits = find_periodic_orbits(p, OrbitScanRange{}, presets::orbit_config());
    REQUIRE(orbits.size() >= 1);
    int stable_count = 0;
    for (const auto& o : orbits)
        if (o.stability == OrbitStability::stable) ++stable_count;
    CHECK(stable_count == 1);
}

TEST_CASE("orbit set mirrors under negated detuning") {
    PllParams p = presets::params_4();
    p.omega2_free = p.omega1 + 178.9;  // wd = -178.9
    const auto orbits =
        find_periodic_orbits(p, OrbitScanRange{-0.06, 0.05, 220}, presets::orbit_config());
    REQUIRE(orbits.size() == 2);
    CHECK(orbits[0].section_x == Approx(-kUnstableX).epsilon(1e-5));
    CHECK(orbits[1].section_x == Approx(-kStableX).epsilon(1e-5));
    CHECK(orbits[0].stability == OrbitStability::unstable);
    CHECK(orbits[1].stability == OrbitStability::stable);
}

TEST_CASE("attractor classification") {
    SUBCASE("the detuning-178.9 rotation is hidden") {
        const auto p = presets::params_4();
        const auto orbits =
            find_periodic_orbits(p, presets::orbit_scan_4(), presets::orbit_config());
        REQUIRE(!orbits.empty());
        const auto cls =
            classify_attractor(orbits.front(), find_equilibria(p), p, presets::orbit_config(4.0));
        CHECK(cls == AttractorClass::Hidden);
    }
    SUBCASE("the detuning-95 rotation is self-excited") {
        const auto p = presets::params_123();
        const auto orbits = find_periodic_orbits(p, OrbitScanRange{}, presets::orbit_config());
        REQUIRE(!orbits.empty());
        const auto cls =
            classify_attractor(orbits.front(), find_equilibria(p), p, presets::orbit_config(4.0));
        CHECK(cls == AttractorClass::SelfExcited);
    }
    SUBCASE("with no equilibria every attractor is hidden") {
        PllParams p = presets::params_4();
        p.omega2_free = p.omega1 - 300.0;
        const auto orbits =
            find_periodic_orbits(p, presets::orbit_scan_4(), presets::orbit_config());
        REQUIRE(!orbits.empty());
        REQUIRE(orbits.front().stability == OrbitStability::stable);
        const auto cls =
            classify_attractor(orbits.front(), find_equilibria(p), p, presets::orbit_config(4.0));
        CHECK(cls == AttractorClass::Hidden);
    }
    SUBCASE("an unstable orbit is rejected") {
        PeriodicOrbit o;
        o.stability = OrbitStability::unstable;
        CHECK_THROWS_AS(
            classify_attractor(o, {}, presets::params_4(), presets::orbit_config(1.0)),
            NoStableOrbit);
    }
}

TEST_CASE("tolerance sensitivity") {
    SUBCASE("the detuning-178.9 run flips between coarse and reference") {
        const double rtols[] = {1e-3, 1e-9};
        const auto sweep = tolerance_sensitivity(PhaseState{0.1318, 0.0}, presets::params_4(),
                                                 rtols, presets::lock_criteria_4(), 5.0);
        CHECK(sweep.reference.status == LockStatus::Locked);
        CHECK(sweep.entries[0].verdict.status != LockStatus::Locked);
        CHECK(sweep.entries[1].verdict.status == LockStatus::Locked);
        REQUIRE(sweep.coarsest_agreeing_rtol.has_value());
        CHECK(*sweep.coarsest_agreeing_rtol == 1e-9);

        // The bundled coarse configuration gives the full lock/no-lock flip.
        const auto coarse = detect_lock(
            simulate_phase(presets::params_4(), PhaseState{0.1318, 0.0},
                           presets::coarse_phase_config()),
            presets::lock_criteria_4());
        CHECK(coarse.status == LockStatus::NotLocked);
    }
    SUBCASE("a state far from the basin boundary is tolerance-robust") {
        const double rtols[] = {1e-3, 1e-9};
        const auto sweep = tolerance_sensitivity(PhaseState{0.01, 0.0}, presets::params_123(),
                                                 rtols, presets::lock_criteria_123(), 5.0);
        for (const auto& e : sweep.entries) CHECK(e.verdict.status == LockStatus::Locked);
        CHECK(*sweep.coarsest_agreeing_rtol == 1e-3);
    }
    SUBCASE("repeated runs are identical") {
        const double rtols[] = {1e-3, 1e-3};
        const auto sweep = tolerance_sensitivity(PhaseState{0.1318, 0.0}, presets::params_4(),
                                                 rtols, presets::lock_criteria_4(), 5.0);
        CHECK(sweep.entries[0].verdict.status == sweep.entries[1].verdict.status);
        CHECK(sweep.entries[0].verdict.final_theta_delta ==
              sweep.entries[1].verdict.final_theta_delta);
    }
}

TEST_CASE("cycle fold of the detuning family") {
    const auto p = presets::params_4();
    const auto scan = presets::orbit_scan_4();
    const auto cfg = presets::orbit_config();

    const double fold = locate_cycle_fold(p, 150.0, 250.0, scan, cfg);
    CHECK(fold == Approx(178.5696).epsilon(3e-5));

    SUBCASE("just above the fold the pair is nearly coincident") {
        PllParams q = p;
        q.omega2_free = q.omega1 - (fold + 1e-3);
        const auto orbits = find_periodic_orbits(q, scan, cfg);
        REQUIRE(orbits.size() == 2);
        CHECK(std::abs(orbits[0].section_x - orbits[1].section_x) < 1e-4);
    }
    SUBCASE("gap grows monotonically away from the fold") {
        double prev = 0.0;
        for (double wd : {178.7, 178.9, 179.4}) {
            PllParams q = p;
            q.omega2_free = q.omega1 - wd;
            const auto g = orbit_gap(find_periodic_orbits(q, scan, cfg));
            REQUIRE(g.has_value());
            CHECK(*g > prev);
            prev = *g;
        }
    }
    SUBCASE("a range with two orbits at both ends has no sign change") {
        CHECK_THROWS_AS(locate_cycle_fold(p, 178.8, 179.0, scan, cfg), NoSignChange);
    }
}

TEST_CASE("experiment presets carry the exact loop constants") {
    const auto p123 = presets::params_123();
    CHECK(p123.omega1 == 100000.0);
    CHECK(p123.omega2_free == 99905.0);
    CHECK(p123.gain == 250.0);
    const auto p4 = presets::params_4();
    CHECK(p4.omega1 == 10000.0);
    CHECK(p4.omega_delta() == doctest::Approx(178.9).epsilon(1e-12));
    CHECK(p4.gain == 500.0);
    CHECK(presets::loop_filter().tau1 == 0.0448);
    CHECK(presets::loop_filter().tau2 == 0.0185);
}

TEST_CASE("tightening the reference tolerance never flips the verdict back") {
    // A seed between the two rotation orbits: the coarse verdict may differ,
    // but the reference verdict must agree with an even finer run.
    const auto p = presets::params_4();
    const auto crit = presets::lock_criteria_4();
    const PhaseState seed{0.5 * (kStableX + kUnstableX), 0.0};

    const auto fine = detect_lock(simulate_phase(p, seed, reference_phase_config(5.0)), crit);
    odeint::IntegratorConfig finer;
    finer.rtol = 1e-11;
    finer.atol = 1e-14;
    finer.t_end = 5.0;
    const auto finest = detect_lock(simulate_phase(p, seed, finer), crit);
    CHECK(fine.status == finest.status);
    CHECK(fine.status == LockStatus::NotLocked);  // it rides the rotation
}

TEST_CASE("model comparison") {
    const auto p = presets::params_123();
    const auto crit = presets::lock_criteria_123();

    SUBCASE("zero-difference start locks in both models") {
        const auto cmp = compare_models(SignalState{0.01, 0.0, 0.0}, p,
                                        default_signal_config(p), reference_phase_config(), crit);
        CHECK(cmp.signal_verdict.status == LockStatus::Locked);
        CHECK(cmp.phase_verdict.status == LockStatus::Locked);
        CHECK(cmp.max_smoothed_g_deviation < 0.05);
    }
    SUBCASE("zero detuning from rest locks trivially with tiny deviation") {
        PllParams p0 = p;
        p0.omega2_free = p0.omega1;
        const auto cmp = compare_models(SignalState{0.0, 0.0, 0.0}, p0,
                                        default_signal_config(p0), reference_phase_config(), crit);
        CHECK(cmp.signal_verdict.status == LockStatus::Locked);
        CHECK(cmp.phase_verdict.status == LockStatus::Locked);
        CHECK(cmp.max_smoothed_g_deviation < 0.01);
    }
    SUBCASE("near the saddle both models lock once integrated accurately") {
        const auto cmp = compare_models(SignalState{0.017, 0.0, -2.276}, p,
                                        default_signal_config(p), reference_phase_config(), crit);
        CHECK(cmp.phase_verdict.status == LockStatus::Locked);
        CHECK(cmp.signal_verdict.status == LockStatus::Locked);
        CHECK(cmp.max_smoothed_g_deviation < 0.1);
    }
}
