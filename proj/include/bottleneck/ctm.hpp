#pragma once

#include <Eigen/Dense>
#include <functional>
#include <vector>

#include "bottleneck/config.hpp"
#include "bottleneck/payoff_road.hpp"

namespace bottleneck {

/// Cell Transmission Model on the payoff road with a triangular fundamental
/// diagram Q(k) = min(u k, w (kappa - k)). Flow runs from deep cells toward
/// cell 0; the boundary at payoff 0 is closed and nothing enters past -L.
struct CtmParams {
    double dx = 0.0;
    double dr = 0.0;
    double u = 0.0;
    double w = 0.0;
    double kappa = 0.0;

    double kappa_c() const { return w * kappa / (u + w); }

    static CtmParams from(const ValidatedConfig& config);
};

/// Demands, supplies and boundary fluxes of one day.
/// q[b] is the flux across the boundary at payoff -b dx, from cell b into
/// cell b - 1; q[0] and q[I] are zero.
struct FluxState {
    Eigen::VectorXd d;
    Eigen::VectorXd s;
    Eigen::VectorXd q;
};

FluxState compute_fluxes(const Eigen::VectorXd& k, const CtmParams& params);

/// One Godunov step: k'[c] = k[c] + (dr / dx) (q[c + 1] - q[c]).
Eigen::VectorXd day_step(const Eigen::VectorXd& k, const CtmParams& params);
DensityProfile day_step(const DensityProfile& density, const CtmParams& params);

struct StopRule {
    int max_steps = 0;
    double change_tol = 0.0;      // absolute, on max_c |k'[c] - k[c]|
    bool keep_trajectory = false; // hold every day's density in memory
};

enum class StopReason { Stationary, Observer, MaxDays };

const char* to_string(StopReason reason);

struct CtmRun {
    int steps = 0;
    StopReason reason = StopReason::MaxDays;
    double last_change = 0.0;
    DensityProfile final_density;
    std::vector<DensityProfile> trajectory; // day 0 first, when kept
};

/// Called after each step with (step, density, max change); return true to stop.
using DayObserver = std::function<bool(int, const DensityProfile&, double)>;

CtmRun run_until(const DensityProfile& initial, const CtmParams& params, const StopRule& rule,
                 const DayObserver& observer = {});

} // namespace bottleneck
