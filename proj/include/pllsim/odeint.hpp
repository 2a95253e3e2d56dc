#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

namespace pllsim::odeint {

enum class Method { fixed_rk4, adaptive_rk45 };

struct IntegratorConfig {
    Method method = Method::adaptive_rk45;
    double dt = 0.0;      // fixed-step size, fixed_rk4 only
    double rtol = 1e-9;   // relative tolerance, adaptive_rk45
    double atol = 1e-12;  // absolute tolerance, per component
    double t_end = 5.0;
    std::int64_t max_steps = 50'000'000;
};

inline void validate(const IntegratorConfig& c) {
    if (c.method == Method::fixed_rk4 && !(c.dt > 0.0))
        throw std::domain_error("fixed_rk4 requires dt > 0");
    if (c.method == Method::adaptive_rk45 && !(c.rtol > 0.0 && c.rtol <= 1e-2 && c.atol > 0.0))
        throw std::domain_error("adaptive_rk45 requires 0 < rtol <= 1e-2 and atol > 0");
    if (!(c.t_end > 0.0)) throw std::domain_error("t_end must be positive");
    if (c.max_steps <= 0) throw std::domain_error("max_steps must be positive");
}

struct StepLimitExceeded : std::runtime_error {
    explicit StepLimitExceeded(std::int64_t n)
        : std::runtime_error("integration exceeded max_steps = " + std::to_string(n)) {}
};

struct StepUnderflow : std::runtime_error {
    StepUnderflow() : std::runtime_error("adaptive step size underflow") {}
};

enum class EventDirection { rising, falling, both };

template <int N>
using StateVec = Eigen::Matrix<double, N, 1>;

template <int N>
struct EventSpec {
    std::function<double(double, const StateVec<N>&)> fn;
    EventDirection direction = EventDirection::both;
    bool terminal = false;
};

template <int N>
struct EventHit {
    double t = 0.0;
    StateVec<N> y;
    int event_index = -1;
};

template <int N>
struct Solution {
    std::vector<double> times;
    std::vector<StateVec<N>> states;

    std::size_t size() const { return times.size(); }
};

namespace detail {

// Dormand-Prince 5(4) tableau.
inline constexpr double kC[7] = {0.0, 1.0 / 5, 3.0 / 10, 4.0 / 5, 8.0 / 9, 1.0, 1.0};
inline constexpr double kA[7][6] = {
    {},
    {1.0 / 5},
    {3.0 / 40, 9.0 / 40},
    {44.0 / 45, -56.0 / 15, 32.0 / 9},
    {19372.0 / 6561, -25360.0 / 2187, 64448.0 / 6561, -212.0 / 729},
    {9017.0 / 3168, -355.0 / 33, 46732.0 / 5247, 49.0 / 176, -5103.0 / 18656},
    {35.0 / 384, 0.0, 500.0 / 1113, 125.0 / 192, -2187.0 / 6784, 11.0 / 84},
};
// 5th-order weights coincide with the last tableau row; these are the 4th-order weights.
inline constexpr double kB4[7] = {5179.0 / 57600, 0.0,           7571.0 / 16695, 393.0 / 640,
                                  -92097.0 / 339200, 187.0 / 2100, 1.0 / 40};

template <int N, class Rhs>
StateVec<N> rk4_step(Rhs&& rhs, double t, const StateVec<N>& y, double h) {
    const StateVec<N> k1 = rhs(t, y);
    const StateVec<N> k2 = rhs(t + 0.5 * h, (y + 0.5 * h * k1).eval());
    const StateVec<N> k3 = rhs(t + 0.5 * h, (y + 0.5 * h * k2).eval());
    const StateVec<N> k4 = rhs(t + h, (y + h * k3).eval());
    return y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

// One Dormand-Prince step; returns the 5th-order solution and fills the scaled
// error estimate. k1 may be reused from the previous step (FSAL); k_last is the
// derivative at the step end.
template <int N, class Rhs>
StateVec<N> dopri_step(Rhs&& rhs, double t, const StateVec<N>& y, double h,
                       const StateVec<N>& k1, StateVec<N>& k_last, StateVec<N>& err) {
    StateVec<N> k[7];
    k[0] = k1;
    for (int s = 1; s < 7; ++s) {
        StateVec<N> ys = y;
        for (int j = 0; j < s; ++j) ys += (h * kA[s][j]) * k[j];
        k[s] = rhs(t + kC[s] * h, ys);
    }
    // Stage 7 is evaluated at the 5th-order result (c7 = 1, row 7 = b5).
    StateVec<N> y5 = y;
    for (int j = 0; j < 6; ++j) y5 += (h * kA[6][j]) * k[j];
    StateVec<N> y4 = y;
    for (int j = 0; j < 7; ++j) y4 += (h * kB4[j]) * k[j];
    k_last = k[6];
    err = y5 - y4;
    return y5;
}

// Componentwise: a step is accepted only when every |err_i| fits its own
// atol + rtol*|y_i| budget.
template <int N>
double error_norm(const StateVec<N>& err, const StateVec<N>& y0, const StateVec<N>& y1,
                  double rtol, double atol) {
    double worst = 0.0;
    for (int i = 0; i < N; ++i) {
        const double scale = atol + rtol * std::max(std::abs(y0[i]), std::abs(y1[i]));
        worst = std::max(worst, std::abs(err[i]) / scale);
    }
    return worst;
}

// Starting step size from the derivative magnitude at t = 0 (Hairer's heuristic).
template <int N, class Rhs>
double initial_step(Rhs&& rhs, const StateVec<N>& y0, const StateVec<N>& f0, double rtol,
                    double atol, double t_end) {
    auto scaled_norm = [&](const StateVec<N>& v, const StateVec<N>& ref) {
        double acc = 0.0;
        for (int i = 0; i < N; ++i) {
            const double scale = atol + rtol * std::abs(ref[i]);
            const double e = v[i] / scale;
            acc += e * e;
        }
        return std::sqrt(acc / N);
    };
    const double d0 = scaled_norm(y0, y0);
    const double d1 = scaled_norm(f0, y0);
    double h0 = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
    h0 = std::min(h0, t_end);
    const StateVec<N> y1 = y0 + h0 * f0;
    const StateVec<N> f1 = rhs(h0, y1);
    const double d2 = scaled_norm((f1 - f0).eval(), y0) / h0;
    double h1;
    if (std::max(d1, d2) <= 1e-15)
        h1 = std::max(1e-6, h0 * 1e-3);
    else
        h1 = std::pow(0.01 / std::max(d1, d2), 1.0 / 5.0);
    // A near-zero initial state can drive h0 below the underflow guard; the
    // controller recovers from a short first step in a few accepted steps, so
    // floor it instead.
    return std::clamp(std::min(100.0 * h0, h1), 1e-9 * t_end, t_end);
}

}  // namespace detail

/// Integrate y' = rhs(t, y) from t = 0 to config.t_end, recording every
/// accepted step. Adaptive steps satisfy the componentwise local error bound
/// atol + rtol*|y|; the controller is a PI one with safety 0.9 and step growth
/// clamped to [0.2, 5].
template <int N, class Rhs>
Solution<N> integrate(Rhs&& rhs, const StateVec<N>& y0, const IntegratorConfig& config) {
    validate(config);
    Solution<N> out;
    if (config.method == Method::fixed_rk4) {
        const auto n_steps = static_cast<std::int64_t>(std::ceil(config.t_end / config.dt - 1e-9));
        if (n_steps > config.max_steps) throw StepLimitExceeded(config.max_steps);
        out.times.reserve(n_steps + 1);
        out.states.reserve(n_steps + 1);
        out.times.push_back(0.0);
        out.states.push_back(y0);
        StateVec<N> y = y0;
        for (std::int64_t i = 0; i < n_steps; ++i) {
            const double t = static_cast<double>(i) * config.dt;
            const double h = std::min(config.dt, config.t_end - t);
            y = detail::rk4_step<N>(rhs, t, y, h);
            out.times.push_back(std::min(t + h, config.t_end));
            out.states.push_back(y);
        }
        return out;
    }

    // adaptive_rk45
    out.times.push_back(0.0);
    out.states.push_back(y0);
    StateVec<N> y = y0;
    StateVec<N> f = rhs(0.0, y);
    double t = 0.0;
    double h = detail::initial_step<N>(rhs, y, f, config.rtol, config.atol, config.t_end);
    double err_prev = 1e-4;
    std::int64_t steps = 0;
    const double t_tiny = 1e-14 * config.t_end;
    while (config.t_end - t > t_tiny) {
        if (++steps > config.max_steps) throw StepLimitExceeded(config.max_steps);
        if (h < t_tiny) throw StepUnderflow();
        h = std::min(h, config.t_end - t);
        StateVec<N> k_last, err_vec;
        const StateVec<N> y_new = detail::dopri_step<N>(rhs, t, y, h, f, k_last, err_vec);
        const double err = detail::error_norm<N>(err_vec, y, y_new, config.rtol, config.atol);
        if (err <= 1.0) {
            t += h;
            y = y_new;
            f = k_last;  // FSAL
            out.times.push_back(t);
            out.states.push_back(y);
            const double e = std::max(err, 1e-10);
            double factor = 0.9 * std::pow(e, -0.17) * std::pow(err_prev, 0.04);
            factor = std::clamp(factor, 0.2, 5.0);
            h *= factor;
            err_prev = e;
        } else {
            const double factor = std::max(0.2, 0.9 * std::pow(err, -0.2));
            h *= factor;
        }
    }
    return out;
}

/// As integrate(), additionally watching a list of event functions for sign
/// changes. Each reported event is refined by bisection over the bracketing
/// step until |f| <= 1e-12*(1 + |state|); terminal events stop the run at the
/// refined time.
template <int N, class Rhs>
std::pair<Solution<N>, std::vector<EventHit<N>>> integrate_with_events(
    Rhs&& rhs, const StateVec<N>& y0, const IntegratorConfig& config,
    const std::vector<EventSpec<N>>& events) {
    validate(config);
    Solution<N> out;
    std::vector<EventHit<N>> hits;
    out.times.push_back(0.0);
    out.states.push_back(y0);

    std::vector<double> f_prev(events.size());
    for (std::size_t e = 0; e < events.size(); ++e) f_prev[e] = events[e].fn(0.0, y0);

    // Re-integrates the bracketing step from its left endpoint with step dt.
    auto substep = [&](double t0, const StateVec<N>& ya, const StateVec<N>& fa,
                       double dt) -> StateVec<N> {
        if (config.method == Method::fixed_rk4) return detail::rk4_step<N>(rhs, t0, ya, dt);
        StateVec<N> k_last, err_vec;
        return detail::dopri_step<N>(rhs, t0, ya, dt, fa, k_last, err_vec);
    };

    auto crossed = [](double a, double b, EventDirection dir) {
        switch (dir) {
            case EventDirection::rising: return a < 0.0 && b >= 0.0;
            case EventDirection::falling: return a > 0.0 && b <= 0.0;
            case EventDirection::both: return (a < 0.0 && b >= 0.0) || (a > 0.0 && b <= 0.0);
        }
        return false;
    };

    // Performs one accepted macro step [t0, t0+h] -> y1 and processes events.
    // Returns false when a terminal event ended the run.
    auto process_step = [&](double t0, const StateVec<N>& ya, const StateVec<N>& fa, double h,
                            const StateVec<N>& y1) -> bool {
        std::optional<EventHit<N>> terminal_hit;
        std::vector<EventHit<N>> step_hits;
        for (std::size_t e = 0; e < events.size(); ++e) {
            const double f1 = events[e].fn(t0 + h, y1);
            if (crossed(f_prev[e], f1, events[e].direction)) {
                double lo = 0.0, hi = h;
                double f_lo = f_prev[e];
                StateVec<N> y_mid = y1;
                double mid = h;
                for (int it = 0; it < 100; ++it) {
                    mid = 0.5 * (lo + hi);
                    y_mid = substep(t0, ya, fa, mid);
                    const double f_mid = events[e].fn(t0 + mid, y_mid);
                    if (std::abs(f_mid) <= 1e-12 * (1.0 + y_mid.template lpNorm<Eigen::Infinity>()))
                        break;
                    if ((f_lo < 0.0) == (f_mid < 0.0)) {
                        lo = mid;
                        f_lo = f_mid;
                    } else {
                        hi = mid;
                    }
                }
                EventHit<N> hit{t0 + mid, y_mid, static_cast<int>(e)};
                step_hits.push_back(hit);
                if (events[e].terminal && (!terminal_hit || hit.t < terminal_hit->t))
                    terminal_hit = hit;
            }
            f_prev[e] = f1;
        }
        std::sort(step_hits.begin(), step_hits.end(),
                  [](const EventHit<N>& a, const EventHit<N>& b) { return a.t < b.t; });
        for (const auto& hit : step_hits) {
            if (terminal_hit && hit.t > terminal_hit->t) break;
            hits.push_back(hit);
        }
        if (terminal_hit) {
            out.times.push_back(terminal_hit->t);
            out.states.push_back(terminal_hit->y);
            return false;
        }
        out.times.push_back(t0 + h);
        out.states.push_back(y1);
        return true;
    };

    StateVec<N> y = y0;
    StateVec<N> f = rhs(0.0, y);
    double t = 0.0;
    const double t_tiny = 1e-14 * config.t_end;
    std::int64_t steps = 0;

    if (config.method == Method::fixed_rk4) {
        while (config.t_end - t > t_tiny) {
            if (++steps > config.max_steps) throw StepLimitExceeded(config.max_steps);
            const double h = std::min(config.dt, config.t_end - t);
            const StateVec<N> y_new = detail::rk4_step<N>(rhs, t, y, h);
            if (!process_step(t, y, f, h, y_new)) return {std::move(out), std::move(hits)};
            y = y_new;
            t += h;
            f = rhs(t, y);  // only needed as bisection seed; cheap relative to the step
        }
        return {std::move(out), std::move(hits)};
    }

    double h = detail::initial_step<N>(rhs, y, f, config.rtol, config.atol, config.t_end);
    double err_prev = 1e-4;
    while (config.t_end - t > t_tiny) {
        if (++steps > config.max_steps) throw StepLimitExceeded(config.max_steps);
        if (h < t_tiny) throw StepUnderflow();
        h = std::min(h, config.t_end - t);
        StateVec<N> k_last, err_vec;
        const StateVec<N> y_new = detail::dopri_step<N>(rhs, t, y, h, f, k_last, err_vec);
        const double err = detail::error_norm<N>(err_vec, y, y_new, config.rtol, config.atol);
        if (err <= 1.0) {
            if (!process_step(t, y, f, h, y_new)) return {std::move(out), std::move(hits)};
            t += h;
            y = y_new;
            f = k_last;
            const double e = std::max(err, 1e-10);
            double factor = 0.9 * std::pow(e, -0.17) * std::pow(err_prev, 0.04);
            factor = std::clamp(factor, 0.2, 5.0);
            h *= factor;
            err_prev = e;
        } else {
            const double factor = std::max(0.2, 0.9 * std::pow(err, -0.2));
            h *= factor;
        }
    }
    return {std::move(out), std::move(hits)};
}

/// Observed convergence order of fixed-step RK4 on a problem with a known
/// solution: least-squares slope of log(error) vs log(dt). Returns nullopt
/// when the measured errors sit at rounding level.
template <int N, class Rhs, class Exact>
std::optional<double> order_check(Rhs&& rhs, const StateVec<N>& y0, Exact&& exact, double t_end,
                                  const std::vector<double>& dts) {
    std::vector<double> log_dt, log_err;
    for (double dt : dts) {
        IntegratorConfig c;
        c.method = Method::fixed_rk4;
        c.dt = dt;
        c.t_end = t_end;
        const auto sol = integrate<N>(rhs, y0, c);
        const StateVec<N> ref = exact(t_end);
        const double err = (sol.states.back() - ref).template lpNorm<Eigen::Infinity>();
        if (err < 1e3 * std::numeric_limits<double>::epsilon() *
                       (1.0 + ref.template lpNorm<Eigen::Infinity>()))
            return std::nullopt;
        log_dt.push_back(std::log(dt));
        log_err.push_back(std::log(err));
    }
    const auto n = static_cast<double>(log_dt.size());
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < log_dt.size(); ++i) {
        sx += log_dt[i];
        sy += log_err[i];
        sxx += log_dt[i] * log_dt[i];
        sxy += log_dt[i] * log_err[i];
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace pllsim::odeint
