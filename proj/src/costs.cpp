#include "bottleneck/costs.hpp"

#include <sstream>

namespace bottleneck {

Eigen::VectorXd scheduling_costs(const Eigen::VectorXd& t, const SimConfig& c) {
    return t.unaryExpr([&](double s) { return scheduling_cost(s, c); });
}

ArrivalPair payoff_inverse(double x, const ValidatedConfig& config) {
    const SimConfig& c = config.params();
    const double L = config.tube_length();
    if (!(x <= 0.0 && x >= -L * (1.0 + 1e-12))) {
        std::ostringstream os;
        os << "payoff " << x << " outside [" << -L << ", 0]";
        throw Error(ErrorKind::OutOfRange, os.str());
    }
    return {c.t_star + x / c.beta, c.t_star - x / c.gamma};
}

CostProfile total_costs(const FlowProfile& profile, const TimeGrid& time, const ValidatedConfig& config) {
    const SimConfig& c = config.params();
    CostProfile costs;
    costs.phi1 = c.alpha * queueing_times_at_centers(profile, c.C, c.dt);
    costs.phi2 = scheduling_costs(time.centers, c);
    costs.phi = costs.phi1 + costs.phi2;
    return costs;
}

} // namespace bottleneck
