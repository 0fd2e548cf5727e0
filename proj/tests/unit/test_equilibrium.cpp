#include <doctest.h>

#include <cmath>

#include "bottleneck/ctm.hpp"
#include "bottleneck/equilibrium.hpp"
#include "bottleneck/io.hpp"

using namespace bottleneck;

TEST_CASE("analytic equilibrium of the demo") {
    const ValidatedConfig v = validate(demo_config());
    const Grids grids = build_grids(v);
    const SpueSolution s = analytic_spue(v, grids);
    CHECK(s.kappa == 90.0); // (1/25 + 1/100) * 1800
    CHECK(s.L_star == 40.0);
    CHECK(s.t1 == doctest::Approx(-1.6).epsilon(1e-15));
    CHECK(s.t2 == doctest::Approx(0.4).epsilon(1e-15));
    CHECK(s.cost == 40.0);
    CHECK(s.t_switch == doctest::Approx(-0.8).epsilon(1e-15));
    CHECK(s.early_rate == 3600.0);
    CHECK(s.late_rate == 600.0);

    CHECK(s.k_star.k.head(80).minCoeff() == 90.0);
    CHECK(s.k_star.k.tail(120).maxCoeff() == 0.0);
    for (int m = 0; m < grids.time.M; ++m) {
        const double t = grids.time.centers[m];
        CHECK(s.flows.g[m] == ((t > -1.6 && t < 0.4) ? 1800.0 : 0.0));
    }

    // Exact fixed point of the day step.
    const CtmParams params = CtmParams::from(v);
    CHECK(compute_fluxes(s.k_star.k, params).q.cwiseAbs().maxCoeff() == 0.0);
    CHECK(day_step(s.k_star.k, params) == s.k_star.k);
}

TEST_CASE("tiny demand gives a near-empty equilibrium") {
    SimConfig c = demo_config();
    c.N = 1e-9;
    const ValidatedConfig v = validate(c);
    const SpueSolution s = analytic_spue(v, build_grids(v));
    CHECK(s.L_star == doctest::Approx(0.0).epsilon(1e-9));
    CHECK(s.t2 - s.t1 == doctest::Approx(0.0).epsilon(1e-9));
}

TEST_CASE("equilibrium checks") {
    const ValidatedConfig v = validate(demo_config());
    const Grids grids = build_grids(v);
    const SimConfig& c = v.params();
    const double floor = c.dt * std::max(c.beta, c.gamma);

    SUBCASE("balanced equilibrium day") {
        const SpueSolution s = analytic_spue(v, grids);
        const DayRecord day = build_day(1, s.k_star, 0.0, grids, v);
        const UeReport r = check_ue(day, grids, v);
        CHECK(r.phi_min == 40.0);
        CHECK(r.atue_residual <= floor);
        CHECK(r.dtue_residual <= floor);
        CHECK(r.unused_min_excess >= -floor);
        CHECK(r.holds(floor));
    }
    SUBCASE("equilibrium departures through the point queue") {
        const SpueSolution s = analytic_spue(v, grids);
        const DayRecord day = build_initial_day(s.flows.f, grids, v);
        const UeReport r = check_ue(day, grids, v);
        CHECK(r.atue_residual <= floor);
        CHECK(r.dtue_residual <= floor);
        CHECK(r.unused_min_excess >= -floor);
    }
    SUBCASE("demo day 0 is far from equilibrium") {
        const DayRecord day = build_initial_day(departures_on_grid(demo_departures(c), grids.time), grids, v);
        const UeReport r = check_ue(day, grids, v);
        CHECK(r.atue_residual > 10.0);
        CHECK(r.dtue_residual > 10.0);
        CHECK_FALSE(r.holds(0.05 * 40.0));
    }
}

TEST_CASE("closed-form perturbation decay") {
    const double rate = 1.0 / 40.0;
    CHECK(perturbation_closed_form(0.0, rate, 25.0) == 0.0);
    CHECK(perturbation_closed_form(0.9, rate, 40.0) / 0.9 == doctest::Approx(std::exp(-1.0)).epsilon(1e-12));
    // d/dr eps + rate eps = 0, by central differences.
    for (double r : {0.0, 5.0, 40.0, 120.0}) {
        const double h = 1e-4;
        const double slope =
            (perturbation_closed_form(0.9, rate, r + h) - perturbation_closed_form(0.9, rate, r - h)) / (2 * h);
        CHECK(std::abs(slope + rate * perturbation_closed_form(0.9, rate, r)) <= 1e-9);
    }
}

TEST_CASE("perturbation experiment") {
    const ValidatedConfig v = validate(demo_config());
    const PerturbationResult r = perturbation_experiment(v, 0.01 * v.kappa());
    CHECK(r.L_star == 40.0);
    CHECK(r.decay_rate_theory == doctest::Approx(0.025).epsilon(1e-15));
    CHECK(r.relative_rate_error() <= 0.10);
    CHECK(r.fit_r_squared >= 0.99);
    CHECK(r.fine_settled);
    CHECK(r.fine_monotone);
    double previous = r.trajectory.front().numeric;
    for (const PerturbationSample& s : r.trajectory) {
        CHECK(s.numeric >= 0.0);
        CHECK(s.numeric <= previous);
        previous = s.numeric;
    }

    const PerturbationResult zero = perturbation_experiment(v, 0.0);
    for (const PerturbationSample& s : zero.trajectory) {
        CHECK(s.numeric == 0.0);
        CHECK(s.closed_form == 0.0);
    }

    try {
        perturbation_experiment(v, 0.2 * v.kappa_c());
        FAIL("expected PerturbationTooLarge");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::PerturbationTooLarge);
    }
    CHECK_THROWS_AS(perturbation_experiment(v, -0.1), Error);
}
