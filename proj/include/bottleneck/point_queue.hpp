#pragma once

#include <Eigen/Dense>

#include "bottleneck/config.hpp"

namespace bottleneck {

/// Within-day flows of one day. Rates are per interval (length M); cumulative
/// curves, queue sizes and queueing times are sampled at the M + 1 interval
/// boundaries t0 + m dt.
struct FlowProfile {
    Eigen::VectorXd f;       // departure rates (veh/h)
    Eigen::VectorXd g;       // arrival rates (veh/h)
    Eigen::VectorXd F;       // cumulative departures (veh)
    Eigen::VectorXd G;       // cumulative arrivals (veh)
    Eigen::VectorXd delta;   // queue size (veh)
    Eigen::VectorXd upsilon; // queueing time of vehicles arriving at the boundary (h)

    Eigen::Index intervals() const { return f.size(); }
};

/// Discrete point queue with zero free-flow time and delta(t0) = 0:
///   delta[m+1] = max(0, delta[m] + (f[m] - C) dt)
///   g[m]       = min(delta[m] / dt + f[m], C)
/// Fills f, g, F, G and delta; upsilon is filled by queueing_times.
FlowProfile propagate_queue(const Eigen::VectorXd& f, double capacity, double dt);

/// Same, checking that f has one entry per time interval of `config`.
FlowProfile propagate_queue(const Eigen::VectorXd& f, const ValidatedConfig& config);

/// Queueing time of the vehicle arriving at each boundary, by inverting the
/// piecewise-linear departure curve: zero when F = G, otherwise
/// (m - m') dt - (G[m] - F[m']) / f[m'] with m' the largest index such that
/// F[m'] < G[m].
Eigen::VectorXd queueing_times(const FlowProfile& profile, double dt);

/// Queueing time at the interval centers. Under-utilized intervals (g < C)
/// carry no queueing time; the rest use the same inversion at the center.
Eigen::VectorXd queueing_times_at_centers(const FlowProfile& profile, double capacity, double dt);

/// Piecewise-linear interpolation of the cumulative departures at offset
/// `s` hours from t0 (clamped to the study period).
double departures_at(const FlowProfile& profile, double dt, double s);

/// Queue size at the departure interval centers, F(t_c) - G(t_c).
Eigen::VectorXd queue_at_centers(const FlowProfile& profile, double dt);

} // namespace bottleneck
