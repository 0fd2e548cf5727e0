#pragma once

#include <Eigen/Dense>

#include "bottleneck/config.hpp"
#include "bottleneck/costs.hpp"
#include "bottleneck/grids.hpp"
#include "bottleneck/payoff_road.hpp"
#include "bottleneck/point_queue.hpp"

namespace bottleneck {

/// The largest run of jammed cells touching payoff 0 and the arrival window
/// it maps to.
struct JammedInterval {
    int cells = 0;        // I*_j
    double x_star = 0.0;  // -cells * dx
    double t1_star = 0.0; // early end of the window
    double t2_star = 0.0; // late end of the window

    bool empty() const { return cells == 0; }
};

/// Scans from cell 0 while k >= kappa (1 - jam_tol).
JammedInterval detect_jammed_interval(const DensityProfile& density, const ValidatedConfig& config);

/// Departure time of the vehicle that arrives at t_star when the window is
/// [t1, t2]: (beta / alpha) t1 + (1 - beta / alpha) t_star.
double switch_time(double t1_star, const SimConfig& c);

struct BalancedDay {
    JammedInterval jam;
    double t_star_switch = 0.0;
    FlowProfile flows;
    CostProfile costs;
};

/// Reconstructs departures, cumulative curves, queueing times and costs of a
/// day from its arrival rates. Inside the jammed window the queue equalizes
/// every total cost at -x_star: departures run at C / (1 - beta/alpha) until
/// the switch time and at C / (1 + gamma/alpha) after it. Outside, departures
/// equal arrivals and there is no queue.
BalancedDay balance(const DensityProfile& density, const Eigen::VectorXd& g, const Grids& grids,
                    const ValidatedConfig& config);

} // namespace bottleneck
