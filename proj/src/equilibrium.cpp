#include "bottleneck/equilibrium.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "bottleneck/balancing.hpp"
#include "bottleneck/ctm.hpp"

namespace bottleneck {

SpueSolution analytic_spue(const ValidatedConfig& config, const Grids& grids) {
    const SimConfig& c = config.params();
    SpueSolution s;
    s.kappa = config.kappa();
    s.L_star = c.N / s.kappa;
    const ArrivalPair window = payoff_inverse(-s.L_star, config);
    s.t1 = window.early;
    s.t2 = window.late;
    s.cost = s.L_star;
    s.t_switch = switch_time(s.t1, c);
    s.early_rate = c.C / (1.0 - c.beta / c.alpha);
    s.late_rate = c.C / (1.0 + c.gamma / c.alpha);

    // kappa times the covered fraction of each cell.
    s.k_star.kappa = s.kappa;
    s.k_star.kappa_c = config.kappa_c();
    s.k_star.k.resize(grids.payoff.I);
    for (int cell = 0; cell < grids.payoff.I; ++cell) {
        const double covered = std::clamp(s.L_star - cell * c.dx, 0.0, c.dx);
        s.k_star.k[cell] = s.kappa * covered / c.dx;
    }

    BalancedDay day = balance(s.k_star, arrivals_from_density(s.k_star, grids, config), grids, config);
    s.flows = std::move(day.flows);
    s.costs = std::move(day.costs);
    return s;
}

namespace {

// Linear interpolation of per-interval values sampled at the centers.
double sample_at(const Eigen::VectorXd& values, const TimeGrid& time, double t) {
    const double pos = (t - time.t0) / time.dt - 0.5;
    if (pos <= 0.0) {
        return values[0];
    }
    const auto last = static_cast<double>(values.size() - 1);
    if (pos >= last) {
        return values[values.size() - 1];
    }
    const auto m = static_cast<Eigen::Index>(std::floor(pos));
    const double frac = pos - static_cast<double>(m);
    return (1.0 - frac) * values[m] + frac * values[m + 1];
}

} // namespace

UeReport check_ue(const DayRecord& record, const Grids& grids, const ValidatedConfig& config) {
    const SimConfig& c = config.params();
    const double used_rate = kUsedRateFraction * c.C;
    const FlowProfile& flows = record.flows;
    const Eigen::VectorXd& phi = record.costs.phi;
    const Eigen::Index M = phi.size();

    UeReport report;
    report.phi_min = std::numeric_limits<double>::infinity();
    for (Eigen::Index m = 0; m < M; ++m) {
        if (flows.g[m] > used_rate) {
            report.phi_min = std::min(report.phi_min, phi[m]);
        }
    }
    if (!std::isfinite(report.phi_min)) {
        report.phi_min = 0.0;
        report.unused_min_excess = (phi.array() - report.phi_min).minCoeff();
        return report;
    }

    report.unused_min_excess = std::numeric_limits<double>::infinity();
    for (Eigen::Index m = 0; m < M; ++m) {
        const double excess = phi[m] - report.phi_min;
        if (flows.g[m] > used_rate) {
            report.atue_residual = std::max(report.atue_residual, excess);
        } else {
            report.unused_min_excess = std::min(report.unused_min_excess, excess);
        }
    }

    // Departing at the center t, a vehicle waits delta(t) / C.
    const Eigen::VectorXd queue = queue_at_centers(flows, c.dt);
    for (Eigen::Index m = 0; m < M; ++m) {
        if (flows.f[m] > used_rate) {
            const double arrival = grids.time.centers[m] + std::max(queue[m], 0.0) / c.C;
            report.dtue_residual =
                std::max(report.dtue_residual, std::abs(sample_at(phi, grids.time, arrival) - report.phi_min));
        }
    }
    return report;
}

double perturbation_closed_form(double epsilon0, double rate, double r) { return epsilon0 * std::exp(-rate * r); }

PerturbationResult perturbation_experiment(const ValidatedConfig& config, double epsilon0) {
    const SimConfig& c = config.params();
    if (!(epsilon0 >= 0.0 && epsilon0 <= 0.1 * config.kappa_c())) {
        std::ostringstream os;
        os << "epsilon0 = " << epsilon0 << " outside the small-perturbation range [0, " << 0.1 * config.kappa_c() << "]";
        throw Error(ErrorKind::PerturbationTooLarge, os.str());
    }

    PerturbationResult result;
    result.epsilon0 = epsilon0;
    result.L_star = c.N / config.kappa();
    const double min_speed = std::min(c.u, c.w);
    result.decay_rate_theory = min_speed / result.L_star;

    // Two-cell grid: cell size L*, perturbation moved from cell 0 into cell -1.
    CtmParams coarse{result.L_star, std::min(c.dr, result.L_star / std::max(c.u, c.w)), c.u, c.w, config.kappa()};
    Eigen::VectorXd k = Eigen::VectorXd::Zero(3);
    k[0] = config.kappa() - epsilon0;
    k[1] = epsilon0;

    const double horizon = 4.0 / result.decay_rate_theory;
    const int steps = static_cast<int>(std::ceil(horizon / coarse.dr));
    result.trajectory.reserve(steps + 1);
    for (int j = 0; j <= steps; ++j) {
        const double r = j * coarse.dr;
        result.trajectory.push_back({r, k[1], perturbation_closed_form(epsilon0, result.decay_rate_theory, r)});
        k = day_step(k, coarse);
    }

    std::vector<std::pair<double, double>> points;
    for (const PerturbationSample& s : result.trajectory) {
        if (s.numeric > 0.0) {
            points.emplace_back(s.day, std::log(s.numeric));
        }
    }
    if (points.size() >= 2) {
        Eigen::MatrixXd design(points.size(), 2);
        Eigen::VectorXd rhs(points.size());
        for (std::size_t n = 0; n < points.size(); ++n) {
            design(n, 0) = 1.0;
            design(n, 1) = points[n].first;
            rhs[n] = points[n].second;
        }
        const Eigen::Vector2d coef = design.colPivHouseholderQr().solve(rhs);
        result.decay_rate_fit = -coef[1];
        const Eigen::VectorXd residual = rhs - design * coef;
        const double total = (rhs.array() - rhs.mean()).square().sum();
        result.fit_r_squared = total > 0.0 ? 1.0 - residual.squaredNorm() / total : 1.0;
    }

    // Fine grid: same blocks resolved by the configured cells.
    const CtmParams fine = CtmParams::from(config);
    const int block = static_cast<int>(std::ceil(result.L_star / c.dx - 1e-9));
    Eigen::VectorXd kf = Eigen::VectorXd::Zero(2 * block + 1);
    for (int cell = 0; cell < block; ++cell) {
        const double covered = std::clamp(result.L_star - cell * c.dx, 0.0, c.dx) / c.dx;
        kf[cell] = (config.kappa() - epsilon0) * covered;
        kf[block + cell] = epsilon0 * covered;
    }
    const auto upstream_mass = [&](const Eigen::VectorXd& v) { return v.tail(v.size() - block).sum() * c.dx; };
    const double initial_mass = upstream_mass(kf);
    result.fine_monotone = true;
    result.fine_settled = initial_mass == 0.0;
    double previous = initial_mass;
    const int fine_steps = static_cast<int>(std::ceil(2.0 * horizon / fine.dr));
    for (int j = 1; j <= fine_steps && !result.fine_settled; ++j) {
        kf = day_step(kf, fine);
        const double mass = upstream_mass(kf);
        if (mass > previous * (1.0 + 1e-12)) {
            result.fine_monotone = false;
        }
        previous = mass;
        if (mass < 1e-3 * initial_mass) {
            result.fine_settled = true;
            result.fine_settle_day = j * fine.dr;
        }
    }
    return result;
}

} // namespace bottleneck
