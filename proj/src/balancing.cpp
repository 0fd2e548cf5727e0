#include "bottleneck/balancing.hpp"

#include <algorithm>

namespace bottleneck {

JammedInterval detect_jammed_interval(const DensityProfile& density, const ValidatedConfig& config) {
    const double threshold = density.kappa * (1.0 - config.params().jam_tol);
    JammedInterval jam;
    while (jam.cells < density.cells() && density.k[jam.cells] >= threshold) {
        ++jam.cells;
    }
    jam.x_star = -jam.cells * config.params().dx;
    const ArrivalPair window = payoff_inverse(jam.x_star, config);
    jam.t1_star = window.early;
    jam.t2_star = window.late;
    return jam;
}

double switch_time(double t1_star, const SimConfig& c) {
    const double ratio = c.beta / c.alpha;
    return ratio * t1_star + (1.0 - ratio) * c.t_star;
}

BalancedDay balance(const DensityProfile& density, const Eigen::VectorXd& g, const Grids& grids,
                    const ValidatedConfig& config) {
    const SimConfig& c = config.params();
    const Eigen::Index M = grids.time.M;
    if (g.size() != M) {
        throw Error(ErrorKind::LengthMismatch, "arrival profile length does not match the time grid");
    }
    const double dt = c.dt;

    BalancedDay day;
    day.jam = detect_jammed_interval(density, config);
    day.t_star_switch = switch_time(day.jam.t1_star, c);

    // The window is exactly the union of the jammed cells' preimages.
    const int first = config.early_intervals() - day.jam.cells * config.early_per_cell();
    const int last = config.early_intervals() + day.jam.cells * config.late_per_cell();

    FlowProfile& p = day.flows;
    p.g = g;
    p.g.segment(first, last - first).setConstant(c.C);
    p.G.resize(M + 1);
    p.G[0] = 0.0;
    for (Eigen::Index m = 0; m < M; ++m) {
        p.G[m + 1] = p.G[m] + p.g[m] * dt;
    }

    const double early_rate = c.C / (1.0 - c.beta / c.alpha);
    const double late_rate = c.C / (1.0 + c.gamma / c.alpha);
    p.F = p.G;
    for (int m = first + 1; m < last; ++m) {
        const double from_start = p.G[first] + early_rate * (m - first) * dt;
        const double from_end = p.G[last] + late_rate * (m - last) * dt;
        p.F[m] = std::min(from_start, from_end);
    }
    p.f = p.g;
    for (int m = first; m < last; ++m) {
        p.f[m] = (p.F[m + 1] - p.F[m]) / dt;
    }
    p.delta = (p.F - p.G).cwiseMax(0.0);

    const double t1 = day.jam.t1_star;
    const double t2 = day.jam.t2_star;
    const auto queueing_time = [&](double t) {
        if (!(t > t1 && t < t2)) {
            return 0.0;
        }
        return t <= c.t_star ? c.beta / c.alpha * (t - t1) : c.gamma / c.alpha * (t2 - t);
    };
    p.upsilon = Eigen::VectorXd::Zero(M + 1);
    for (int m = first + 1; m < last; ++m) {
        p.upsilon[m] = queueing_time(grids.time.boundaries[m]);
    }

    CostProfile& costs = day.costs;
    costs.phi2 = scheduling_costs(grids.time.centers, c);
    costs.phi = costs.phi2;
    costs.phi.segment(first, last - first).setConstant(-day.jam.x_star);
    costs.phi1 = (costs.phi - costs.phi2).cwiseMax(0.0);
    return day;
}

} // namespace bottleneck
