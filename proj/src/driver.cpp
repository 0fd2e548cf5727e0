#include "bottleneck/driver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace bottleneck {

double ue_gap(const Eigen::VectorXd& g, const Eigen::VectorXd& phi, const SimConfig& c) {
    const double used_rate = kUsedRateFraction * c.C;
    double phi_min = std::numeric_limits<double>::infinity();
    for (Eigen::Index m = 0; m < g.size(); ++m) {
        if (g[m] > used_rate) {
            phi_min = std::min(phi_min, phi[m]);
        }
    }
    if (!std::isfinite(phi_min)) {
        return 0.0;
    }
    double excess = 0.0;
    for (Eigen::Index m = 0; m < g.size(); ++m) {
        if (g[m] > used_rate) {
            excess += g[m] * c.dt * (phi[m] - phi_min);
        }
    }
    return excess / (c.N * std::max(phi_min, c.dx));
}

namespace {

void fill_diagnostics(DayRecord& record, double max_change, const ValidatedConfig& config) {
    const SimConfig& c = config.params();
    record.diagnostics.mass = record.density.mass(c.dx);
    record.diagnostics.ue_gap = ue_gap(record.flows.g, record.costs.phi, c);
    record.diagnostics.max_density_change = max_change;
    record.diagnostics.mass_mismatch = std::abs(record.diagnostics.mass - c.N) > 1e-9 * c.N;
}

} // namespace

DayRecord build_initial_day(const Eigen::VectorXd& f0, const Grids& grids, const ValidatedConfig& config) {
    DayRecord record;
    record.flows = propagate_queue(f0, config);
    record.costs = total_costs(record.flows, grids.time, config);
    record.density = density_from_arrivals(record.flows.g, grids, config);
    record.jam = detect_jammed_interval(record.density, config);
    fill_diagnostics(record, 0.0, config);
    return record;
}

DayRecord build_day(int step, const DensityProfile& density, double max_change, const Grids& grids,
                    const ValidatedConfig& config) {
    DayRecord record;
    record.step = step;
    record.day = step * config.params().dr;
    record.density = density;
    const Eigen::VectorXd g = arrivals_from_density(density, grids, config);
    BalancedDay balanced = balance(density, g, grids, config);
    record.flows = std::move(balanced.flows);
    record.costs = std::move(balanced.costs);
    record.jam = balanced.jam;
    fill_diagnostics(record, max_change, config);
    return record;
}

RunSummary run(const ValidatedConfig& config, const Eigen::VectorXd& f0, const std::vector<DaySink*>& sinks,
               const RunOptions& options) {
    const SimConfig& c = config.params();
    const Grids grids = build_grids(config);
    RunSummary summary;

    const auto emit = [&](const DayRecord& record) {
        for (DaySink* sink : sinks) {
            sink->consume(record);
        }
        summary.final_gap = record.diagnostics.ue_gap;
        summary.final_x_star = record.jam.x_star;
        summary.final_day = record.day;
        summary.steps = record.step;
        if (!summary.convergence_day && record.diagnostics.ue_gap <= c.ue_gap_tol) {
            summary.convergence_day = record.day;
        }
        return options.stop_on_gap && record.diagnostics.ue_gap <= c.ue_gap_tol;
    };

    const DayRecord initial = build_initial_day(f0, grids, config);
    summary.initial_gap = initial.diagnostics.ue_gap;
    if (initial.diagnostics.mass_mismatch) {
        std::ostringstream os;
        os << "MassMismatch: initial imaginary mass " << initial.diagnostics.mass << " differs from N = " << c.N;
        summary.warnings.push_back(os.str());
    }
    if (emit(initial)) {
        summary.reason = StopReason::Observer;
        summary.converged = true;
        return summary;
    }

    const double max_days = options.max_days_override.value_or(c.max_days);
    StopRule rule;
    rule.max_steps = static_cast<int>(std::floor(max_days / c.dr + 1e-9));
    rule.change_tol = options.stationary_tol * config.kappa();

    const CtmRun ctm = run_until(initial.density, CtmParams::from(config), rule,
                                 [&](int step, const DensityProfile& density, double change) {
                                     return emit(build_day(step, density, change, grids, config));
                                 });
    summary.reason = ctm.reason;
    summary.converged = summary.final_gap <= c.ue_gap_tol;
    return summary;
}

} // namespace bottleneck
