#include "bottleneck/config.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace bottleneck {

const char* to_string(ErrorKind kind) {
    switch (kind) {
    case ErrorKind::CflViolation: return "CflViolation";
    case ErrorKind::MisalignedGrids: return "MisalignedGrids";
    case ErrorKind::BadCosts: return "BadCosts";
    case ErrorKind::BadHorizon: return "BadHorizon";
    case ErrorKind::LengthMismatch: return "LengthMismatch";
    case ErrorKind::NonInvertible: return "NonInvertible";
    case ErrorKind::OutOfRange: return "OutOfRange";
    case ErrorKind::PerturbationTooLarge: return "PerturbationTooLarge";
    case ErrorKind::ConfigParse: return "ConfigParse";
    case ErrorKind::Io: return "Io";
    }
    return "Unknown";
}

SimConfig demo_config() { return SimConfig{}; }

namespace {

constexpr double kIntegerTol = 1e-9;

// Returns the integer nearest to `ratio`, or -1 when `ratio` is not a
// positive integer within relative tolerance.
long as_positive_integer(double ratio) {
    if (!std::isfinite(ratio)) {
        return -1;
    }
    const double nearest = std::round(ratio);
    if (nearest < 1.0 || std::abs(ratio - nearest) > kIntegerTol * std::max(1.0, nearest)) {
        return -1;
    }
    return static_cast<long>(nearest);
}

[[noreturn]] void fail(ErrorKind kind, const std::string& message) { throw Error(kind, message); }

void require_positive(double value, const char* name, ErrorKind kind) {
    if (!(value > 0.0) || !std::isfinite(value)) {
        std::ostringstream os;
        os << name << " must be positive (got " << value << ")";
        fail(kind, os.str());
    }
}

long aligned(double ratio, const char* what) {
    const long n = as_positive_integer(ratio);
    if (n < 0) {
        std::ostringstream os;
        os << what << " must be a positive integer (got " << ratio << ")";
        fail(ErrorKind::MisalignedGrids, os.str());
    }
    return n;
}

} // namespace

ValidatedConfig validate(const SimConfig& c) {
    require_positive(c.alpha, "alpha", ErrorKind::BadCosts);
    require_positive(c.beta, "beta", ErrorKind::BadCosts);
    require_positive(c.gamma, "gamma", ErrorKind::BadCosts);
    if (!(c.beta < c.alpha)) {
        fail(ErrorKind::BadCosts, "beta must be < alpha");
    }

    require_positive(c.N, "N", ErrorKind::BadHorizon);
    require_positive(c.C, "C", ErrorKind::BadHorizon);
    if (!(c.t0 < c.t_star && c.t_star < c.t0p)) {
        fail(ErrorKind::BadHorizon, "t0 < t_star < t0p is required");
    }
    const double early_cost = c.beta * (c.t_star - c.t0);
    const double late_cost = c.gamma * (c.t0p - c.t_star);
    if (std::abs(early_cost - late_cost) > 1e-12 * std::max(early_cost, late_cost)) {
        std::ostringstream os;
        os << "scheduling costs at t0 and t0p must be equal (beta*(t_star-t0) = " << early_cost
           << ", gamma*(t0p-t_star) = " << late_cost << ")";
        fail(ErrorKind::BadHorizon, os.str());
    }

    require_positive(c.u, "u", ErrorKind::CflViolation);
    require_positive(c.w, "w", ErrorKind::CflViolation);
    require_positive(c.dt, "dt", ErrorKind::MisalignedGrids);
    require_positive(c.dx, "dx", ErrorKind::MisalignedGrids);
    require_positive(c.dr, "dr", ErrorKind::CflViolation);

    ValidatedConfig v;
    v.params_ = c;
    v.tube_length_ = early_cost;
    v.early_per_cell_ = static_cast<int>(aligned(c.dx / (c.beta * c.dt), "dx/(beta*dt)"));
    v.late_per_cell_ = static_cast<int>(aligned(c.dx / (c.gamma * c.dt), "dx/(gamma*dt)"));
    v.early_intervals_ = static_cast<int>(aligned((c.t_star - c.t0) / c.dt, "(t_star-t0)/dt"));
    const long late_intervals = aligned((c.t0p - c.t_star) / c.dt, "(t0p-t_star)/dt");
    v.cells_ = static_cast<int>(aligned(v.tube_length_ / c.dx, "L/dx"));
    v.intervals_ = v.early_intervals_ + static_cast<int>(late_intervals);
    if (static_cast<long>(v.cells_) * v.early_per_cell_ != v.early_intervals_ ||
        static_cast<long>(v.cells_) * v.late_per_cell_ != late_intervals) {
        fail(ErrorKind::MisalignedGrids, "payoff cells do not tile the study period");
    }

    // A triangular diagram stays in [0, kappa] only if both wave speeds satisfy the bound.
    if (c.dx / c.dr < std::max(c.u, c.w)) {
        std::ostringstream os;
        os << "CFL condition violated: dx/dr = " << c.dx / c.dr << " < " << std::max(c.u, c.w);
        fail(ErrorKind::CflViolation, os.str());
    }

    v.kappa_ = (1.0 / c.beta + 1.0 / c.gamma) * c.C;
    v.kappa_c_ = c.w * v.kappa_ / (c.u + c.w);
    if (c.N > v.kappa_ * v.tube_length_ * (1.0 + 1e-12)) {
        fail(ErrorKind::BadHorizon, "demand N exceeds the tube capacity kappa*L");
    }

    if (!(c.jam_tol > 0.0 && c.jam_tol < 1.0)) {
        fail(ErrorKind::ConfigParse, "jam_tol must lie in (0, 1)");
    }
    if (!(c.ue_gap_tol > 0.0)) {
        fail(ErrorKind::ConfigParse, "ue_gap_tol must be positive");
    }
    if (!(c.max_days >= 0.0)) {
        fail(ErrorKind::ConfigParse, "max_days must be nonnegative");
    }
    return v;
}

} // namespace bottleneck
