#pragma once

#include <Eigen/Dense>

#include "bottleneck/config.hpp"
#include "bottleneck/grids.hpp"
#include "bottleneck/point_queue.hpp"

namespace bottleneck {

/// Costs per time interval, evaluated at the interval centers ($).
struct CostProfile {
    Eigen::VectorXd phi1; // queueing
    Eigen::VectorXd phi2; // scheduling
    Eigen::VectorXd phi;  // total
};

/// V-shaped scheduling cost beta (t* - t)+ + gamma (t - t*)+.
inline double scheduling_cost(double t, double t_star, double beta, double gamma) {
    return t < t_star ? beta * (t_star - t) : gamma * (t - t_star);
}

inline double scheduling_cost(double t, const SimConfig& c) { return scheduling_cost(t, c.t_star, c.beta, c.gamma); }

/// Elementwise scheduling cost over a vector of times.
Eigen::VectorXd scheduling_costs(const Eigen::VectorXd& t, const SimConfig& c);

/// The two arrival times whose scheduling cost equals the payoff -x.
struct ArrivalPair {
    double early; // t1(x) <= t*
    double late;  // t2(x) >= t*
};

/// Inverse of the payoff x = -scheduling_cost(t) on [-L, 0]. Throws OutOfRange.
ArrivalPair payoff_inverse(double x, const ValidatedConfig& config);

/// phi1 = alpha * queueing time at the centers, phi2 at the centers, phi = sum.
CostProfile total_costs(const FlowProfile& profile, const TimeGrid& time, const ValidatedConfig& config);

} // namespace bottleneck
