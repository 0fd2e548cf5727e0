#include "bottleneck/grids.hpp"

namespace bottleneck {

Grids build_grids(const ValidatedConfig& config) {
    const SimConfig& p = config.params();
    Grids grids;

    TimeGrid& time = grids.time;
    time.M = config.intervals();
    time.t0 = p.t0;
    time.dt = p.dt;
    time.boundaries = Eigen::VectorXd::LinSpaced(time.M + 1, 0.0, time.M) * p.dt;
    time.boundaries.array() += p.t0;
    time.centers = (Eigen::VectorXd::LinSpaced(time.M, 0.0, time.M - 1).array() + 0.5) * p.dt + p.t0;

    PayoffGrid& payoff = grids.payoff;
    payoff.I = config.cells();
    payoff.dx = p.dx;
    payoff.t_star = p.t_star;
    payoff.beta = p.beta;
    payoff.gamma = p.gamma;
    payoff.early.resize(payoff.I);
    payoff.late.resize(payoff.I);
    payoff.cell_of_interval.assign(time.M, -1);

    // Interval n_early is the first one after t_star; early runs count down
    // from it, late runs count up.
    const int n_early = config.early_intervals();
    const int per_early = config.early_per_cell();
    const int per_late = config.late_per_cell();
    for (int c = 0; c < payoff.I; ++c) {
        payoff.early[c] = {n_early - (c + 1) * per_early, n_early - c * per_early};
        payoff.late[c] = {n_early + c * per_late, n_early + (c + 1) * per_late};
        for (int m = payoff.early[c].begin; m < payoff.early[c].end; ++m) {
            payoff.cell_of_interval[m] = c;
        }
        for (int m = payoff.late[c].begin; m < payoff.late[c].end; ++m) {
            payoff.cell_of_interval[m] = c;
        }
    }
    return grids;
}

} // namespace bottleneck
