#pragma once

#include <Eigen/Dense>
#include <vector>

#include "bottleneck/config.hpp"
#include "bottleneck/costs.hpp"
#include "bottleneck/driver.hpp"
#include "bottleneck/grids.hpp"
#include "bottleneck/payoff_road.hpp"
#include "bottleneck/point_queue.hpp"

namespace bottleneck {

/// Scheduling-payoff user equilibrium: the road is jammed on [-L*, 0] with
/// L* = N / kappa and empty elsewhere.
struct SpueSolution {
    double kappa = 0.0;
    double L_star = 0.0;
    double t1 = 0.0; // first arrival
    double t2 = 0.0; // last arrival
    double cost = 0.0;
    double t_switch = 0.0;   // departure time of the on-time vehicle
    double early_rate = 0.0; // C / (1 - beta/alpha)
    double late_rate = 0.0;  // C / (1 + gamma/alpha)
    DensityProfile k_star;
    FlowProfile flows;
    CostProfile costs;
};

SpueSolution analytic_spue(const ValidatedConfig& config, const Grids& grids);

/// Equilibrium residuals of one day.
struct UeReport {
    double phi_min = 0.0;           // least total cost over used arrival intervals
    double atue_residual = 0.0;     // max over used arrival intervals of phi - phi_min
    double dtue_residual = 0.0;     // max over used departure intervals of |phi(t + Y') - phi_min|
    double unused_min_excess = 0.0; // min over unused arrival intervals of phi - phi_min

    bool holds(double tol) const {
        return atue_residual <= tol && dtue_residual <= tol && unused_min_excess >= -tol;
    }
};

UeReport check_ue(const DayRecord& record, const Grids& grids, const ValidatedConfig& config);

/// epsilon0 e^{-min(u,w) r / L*}.
double perturbation_closed_form(double epsilon0, double rate, double r);

struct PerturbationSample {
    double day = 0.0;
    double numeric = 0.0;     // density of cell -1 on the two-cell grid
    double closed_form = 0.0;
};

struct PerturbationResult {
    double epsilon0 = 0.0;
    double L_star = 0.0;
    double decay_rate_theory = 0.0; // min(u,w) / L*  (1/day)
    double decay_rate_fit = 0.0;    // from a log-linear fit of the CTM trajectory
    double fit_r_squared = 0.0;
    std::vector<PerturbationSample> trajectory;

    // Same perturbation on the configured fine grid: the day the displaced
    // mass upstream of -L* first drops below 1e-3 of its initial value, and
    // whether it never increased on the way.
    double fine_settle_day = 0.0;
    bool fine_monotone = false;
    bool fine_settled = false;

    double relative_rate_error() const {
        return std::abs(decay_rate_fit - decay_rate_theory) / decay_rate_theory;
    }
};

/// Two-cell linearized stability experiment around the SPUE. Throws
/// PerturbationTooLarge unless 0 <= epsilon0 <= 0.1 kappa_c.
PerturbationResult perturbation_experiment(const ValidatedConfig& config, double epsilon0);

} // namespace bottleneck
