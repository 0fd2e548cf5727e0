#include "bottleneck/ctm.hpp"

#include <algorithm>
#include <sstream>

namespace bottleneck {

CtmParams CtmParams::from(const ValidatedConfig& config) {
    const SimConfig& c = config.params();
    return {c.dx, c.dr, c.u, c.w, config.kappa()};
}

const char* to_string(StopReason reason) {
    switch (reason) {
    case StopReason::Stationary: return "stationary";
    case StopReason::Observer: return "ue_gap";
    case StopReason::MaxDays: return "max_days";
    }
    return "unknown";
}

FluxState compute_fluxes(const Eigen::VectorXd& k, const CtmParams& params) {
    const Eigen::Index I = k.size();
    const double kc = params.kappa_c();
    FluxState state;
    state.d = params.u * k.array().min(kc);
    state.s = params.w * (params.kappa - k.array().max(kc));
    state.q = Eigen::VectorXd::Zero(I + 1);
    if (I > 1) {
        state.q.segment(1, I - 1) = state.d.tail(I - 1).cwiseMin(state.s.head(I - 1));
    }
    return state;
}

Eigen::VectorXd day_step(const Eigen::VectorXd& k, const CtmParams& params) {
    const Eigen::Index I = k.size();
    const FluxState flux = compute_fluxes(k, params);
    Eigen::VectorXd next = k + (params.dr / params.dx) * (flux.q.tail(I) - flux.q.head(I));

    // Rounding can leave a filled cell an ulp above kappa or an emptied one an
    // ulp below zero; anything larger means the step-size bound was broken.
    const double slack = 1e-12 * params.kappa;
    if ((next.array() < -slack).any() || (next.array() > params.kappa + slack).any()) {
        std::ostringstream os;
        os << "CTM density left [0, kappa]: min " << next.minCoeff() << ", max " << next.maxCoeff();
        throw Error(ErrorKind::CflViolation, os.str());
    }
    return next.cwiseMax(0.0).cwiseMin(params.kappa);
}

DensityProfile day_step(const DensityProfile& density, const CtmParams& params) {
    DensityProfile next = density;
    next.k = day_step(density.k, params);
    return next;
}

CtmRun run_until(const DensityProfile& initial, const CtmParams& params, const StopRule& rule,
                 const DayObserver& observer) {
    CtmRun run;
    run.final_density = initial;
    if (rule.keep_trajectory) {
        run.trajectory.push_back(initial);
    }
    while (run.steps < rule.max_steps) {
        DensityProfile next = day_step(run.final_density, params);
        run.last_change = (next.k - run.final_density.k).cwiseAbs().maxCoeff();
        run.final_density = std::move(next);
        ++run.steps;
        if (rule.keep_trajectory) {
            run.trajectory.push_back(run.final_density);
        }
        const bool observer_stop = observer && observer(run.steps, run.final_density, run.last_change);
        if (run.last_change < rule.change_tol) {
            run.reason = StopReason::Stationary;
            return run;
        }
        if (observer_stop) {
            run.reason = StopReason::Observer;
            return run;
        }
    }
    run.reason = StopReason::MaxDays;
    return run;
}

} // namespace bottleneck
