#pragma once

#include <Eigen/Dense>
#include <vector>

#include "bottleneck/config.hpp"

namespace bottleneck {

/// Uniform within-day time axis: M intervals of width dt on [t0, t0p].
struct TimeGrid {
    int M = 0;
    double t0 = 0.0;
    double dt = 0.0;
    Eigen::VectorXd centers;    // M midpoints t0 + (m + 1/2) dt
    Eigen::VectorXd boundaries; // M + 1 points t0 + m dt
};

/// Half-open range [begin, end) of time-interval indices.
struct IndexRange {
    int begin = 0;
    int end = 0;
    int size() const { return end - begin; }
    bool contains(int m) const { return m >= begin && m < end; }
    friend bool operator==(const IndexRange&, const IndexRange&) = default;
};

/// Payoff axis split into I cells. Cells are stored by depth c = 0..I-1,
/// cell c spanning payoffs (-(c+1) dx, -c dx]; in payoff-index terms this
/// is cell i = -c.
///
/// Every cell owns two runs of time intervals: an early run ending at or
/// before t_star and a late run starting at or after it. Grid alignment makes
/// both runs exact, so each interval belongs to exactly one cell.
struct PayoffGrid {
    int I = 0;
    double dx = 0.0;
    double t_star = 0.0;
    double beta = 0.0;
    double gamma = 0.0;
    std::vector<IndexRange> early; // intervals with centers in (t_{1,i-1}, t_{1,i}]
    std::vector<IndexRange> late;  // intervals with centers in [t_{2,i}, t_{2,i-1})
    std::vector<int> cell_of_interval;

    /// t_{1,i} for payoff index i = -depth.
    double early_boundary(int depth) const { return t_star - depth * dx / beta; }
    /// t_{2,i} for payoff index i = -depth.
    double late_boundary(int depth) const { return t_star + depth * dx / gamma; }
    /// Payoff coordinate of a cell center, (i - 1/2) dx.
    double cell_center(int depth) const { return -(depth + 0.5) * dx; }
};

struct Grids {
    TimeGrid time;
    PayoffGrid payoff;
};

Grids build_grids(const ValidatedConfig& config);

} // namespace bottleneck
