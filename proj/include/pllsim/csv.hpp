#pragma once

#include <cstdio>
#include <ostream>
#include <string>

#include "pllsim/core.hpp"

namespace pllsim::csv {

/// 17 significant digits round-trips a double exactly and keeps the files
/// bit-reproducible across runs.
inline std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

/// Stride that keeps at most max_rows samples.
inline std::size_t decimation_stride(std::size_t rows, std::size_t max_rows = 100000) {
    if (max_rows == 0 || rows <= max_rows) return 1;
    return (rows + max_rows - 1) / max_rows;
}

inline void write_trajectory(std::ostream& os, const PhaseTrajectory& traj,
                             std::size_t stride = 1) {
    os << "t,x,theta_delta,g\n";
    for (std::size_t i = 0; i < traj.size(); i += stride) {
        os << format_double(traj.times[i]) << ',' << format_double(traj.x[i]) << ','
           << format_double(traj.theta_delta[i]) << ',' << format_double(traj.g[i]) << '\n';
    }
}

inline void write_trajectory(std::ostream& os, const SignalTrajectory& traj,
                             std::size_t stride = 1) {
    os << "t,x,theta_delta,g\n";
    for (std::size_t i = 0; i < traj.size(); i += stride) {
        os << format_double(traj.times[i]) << ',' << format_double(traj.x[i]) << ','
           << format_double(traj.theta_delta(i)) << ',' << format_double(traj.g[i]) << '\n';
    }
}

}  // namespace pllsim::csv
