#pragma once

#include <stdexcept>
#include <string>

namespace bottleneck {

enum class ErrorKind {
    CflViolation,
    MisalignedGrids,
    BadCosts,
    BadHorizon,
    LengthMismatch,
    NonInvertible,
    OutOfRange,
    PerturbationTooLarge,
    ConfigParse,
    Io,
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
    ErrorKind kind() const { return kind_; }

private:
    ErrorKind kind_;
};

/// Scalar parameters of one experiment. Units: vehicles, hours, dollars, days.
struct SimConfig {
    double N = 3600.0;        // total demand (veh)
    double C = 1800.0;        // bottleneck capacity (veh/h)
    double alpha = 50.0;      // queueing-cost rate ($/h)
    double beta = 25.0;       // early-arrival rate ($/h)
    double gamma = 100.0;     // late-arrival rate ($/h)
    double t_star = 0.0;      // ideal arrival time (h)
    double t0 = -4.0;         // study period start (h)
    double t0p = 1.0;         // study period end (h)
    double u = 1.0;           // imaginary free-flow speed ($/day)
    double w = 1.0;           // imaginary shock speed ($/day)
    double dt = 1.0 / 1000.0; // time step (h)
    double dx = 0.5;          // payoff cell size ($)
    double dr = 0.5;          // day step (days)
    double jam_tol = 1e-3;
    double ue_gap_tol = 1e-3;
    double max_days = 1000.0;

    friend bool operator==(const SimConfig&, const SimConfig&) = default;
};

/// The numerical example configuration (single bottleneck, 3600 vehicles).
SimConfig demo_config();

/// A SimConfig that passed validation, plus the quantities derived from it.
/// Only `validate` constructs one.
class ValidatedConfig {
public:
    const SimConfig& params() const { return params_; }

    double tube_length() const { return tube_length_; } // L ($)
    int cells() const { return cells_; }                 // I
    int intervals() const { return intervals_; }         // M
    int early_intervals() const { return early_intervals_; }
    int early_per_cell() const { return early_per_cell_; } // dx / (beta dt)
    int late_per_cell() const { return late_per_cell_; }   // dx / (gamma dt)
    double kappa() const { return kappa_; }
    double kappa_c() const { return kappa_c_; }

private:
    friend ValidatedConfig validate(const SimConfig&);
    ValidatedConfig() = default;

    SimConfig params_;
    double tube_length_ = 0.0;
    int cells_ = 0;
    int intervals_ = 0;
    int early_intervals_ = 0;
    int early_per_cell_ = 0;
    int late_per_cell_ = 0;
    double kappa_ = 0.0;
    double kappa_c_ = 0.0;
};

/// Checks rates, horizon, grid alignment and the CFL condition.
/// Throws Error with kind BadCosts, BadHorizon, MisalignedGrids or CflViolation.
ValidatedConfig validate(const SimConfig& config);

} // namespace bottleneck
