#pragma once

#include <Eigen/Dense>

#include "bottleneck/config.hpp"
#include "bottleneck/grids.hpp"

namespace bottleneck {

/// Imaginary densities on the payoff road (veh/$), one per cell, indexed by
/// depth (cell 0 touches the closed boundary at payoff 0).
struct DensityProfile {
    Eigen::VectorXd k;
    double kappa = 0.0;   // jam density
    double kappa_c = 0.0; // critical density

    Eigen::Index cells() const { return k.size(); }
    double mass(double dx) const { return k.sum() * dx; }
};

/// Averages the arrival rates over both preimages of every cell:
/// k[c] = (dt / dx) * sum of g over the cell's early and late intervals.
DensityProfile density_from_arrivals(const Eigen::VectorXd& g, const Grids& grids, const ValidatedConfig& config);

/// Equal splitting: every interval in either preimage of cell c receives
/// g = beta gamma / (beta + gamma) * k[c].
Eigen::VectorXd arrivals_from_density(const DensityProfile& density, const Grids& grids, const ValidatedConfig& config);

} // namespace bottleneck
