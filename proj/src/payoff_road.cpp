#include "bottleneck/payoff_road.hpp"

#include <string>

namespace bottleneck {

DensityProfile density_from_arrivals(const Eigen::VectorXd& g, const Grids& grids, const ValidatedConfig& config) {
    if (g.size() != grids.time.M) {
        throw Error(ErrorKind::LengthMismatch, "arrival profile has " + std::to_string(g.size()) + " entries, expected " +
                                                   std::to_string(grids.time.M));
    }
    const PayoffGrid& payoff = grids.payoff;
    const double scale = grids.time.dt / payoff.dx;
    DensityProfile density;
    density.kappa = config.kappa();
    density.kappa_c = config.kappa_c();
    density.k.resize(payoff.I);
    for (int c = 0; c < payoff.I; ++c) {
        const IndexRange& early = payoff.early[c];
        const IndexRange& late = payoff.late[c];
        density.k[c] = scale * (g.segment(early.begin, early.size()).sum() + g.segment(late.begin, late.size()).sum());
    }
    return density;
}

Eigen::VectorXd arrivals_from_density(const DensityProfile& density, const Grids& grids, const ValidatedConfig& config) {
    const PayoffGrid& payoff = grids.payoff;
    if (density.cells() != payoff.I) {
        throw Error(ErrorKind::LengthMismatch, "density profile has " + std::to_string(density.cells()) +
                                                   " cells, expected " + std::to_string(payoff.I));
    }
    const SimConfig& c = config.params();
    const double split = c.beta * c.gamma / (c.beta + c.gamma);
    Eigen::VectorXd g(grids.time.M);
    for (int cell = 0; cell < payoff.I; ++cell) {
        const double rate = split * density.k[cell];
        g.segment(payoff.early[cell].begin, payoff.early[cell].size()).setConstant(rate);
        g.segment(payoff.late[cell].begin, payoff.late[cell].size()).setConstant(rate);
    }
    return g;
}

} // namespace bottleneck
