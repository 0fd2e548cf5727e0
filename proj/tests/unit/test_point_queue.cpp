#include <doctest.h>

#include <algorithm>
#include <random>
#include <vector>

#include "bottleneck/point_queue.hpp"

using namespace bottleneck;

namespace {

constexpr double kC = 1800.0;

struct Piece {
    int steps;
    double rate;
};

Eigen::VectorXd expand(const std::vector<Piece>& pieces) {
    std::vector<double> values;
    for (const Piece& p : pieces) {
        values.insert(values.end(), p.steps, p.rate);
    }
    return Eigen::Map<Eigen::VectorXd>(values.data(), static_cast<Eigen::Index>(values.size()));
}

// Exact queue of d(delta)/dt = f - C projected onto delta >= 0 for a constant
// rate over a piece of length T: max(0, delta + (f - C) T).
std::vector<double> exact_queue_at_piece_ends(const std::vector<Piece>& pieces, double dt) {
    std::vector<double> out;
    double delta = 0.0;
    for (const Piece& p : pieces) {
        delta = std::max(0.0, delta + (p.rate - kC) * p.steps * dt);
        out.push_back(delta);
    }
    return out;
}

} // namespace

TEST_CASE("under-capacity departures pass straight through") {
    const Eigen::VectorXd f = Eigen::VectorXd::Constant(500, kC / 2);
    const FlowProfile p = propagate_queue(f, kC, 1e-3);
    CHECK(p.delta.cwiseAbs().maxCoeff() == 0.0);
    CHECK((p.g - p.f).cwiseAbs().maxCoeff() == 0.0);
    CHECK((p.G - p.F).cwiseAbs().maxCoeff() == 0.0);
    CHECK(p.upsilon.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("a 0.3 h burst at twice capacity builds a 540-vehicle queue") {
    const double dt = 1e-3;
    // (-0.3, 0] at 2C with t0 = -1, nothing after until t = 1.
    const Eigen::VectorXd f = expand({{700, 0.0}, {300, 2.0 * kC}, {1000, 0.0}});
    const FlowProfile p = propagate_queue(f, kC, dt);
    CHECK(p.delta[1000] == doctest::Approx(540.0).epsilon(1e-12));
    CHECK(p.delta.maxCoeff() == doctest::Approx(540.0).epsilon(1e-12));
    // The queue drains at C after the burst: gone 0.3 h later.
    CHECK(p.delta[1300] == doctest::Approx(0.0).epsilon(1e-9));
    CHECK(p.G[2000] == doctest::Approx(p.F[2000]).epsilon(1e-12));
}

TEST_CASE("queueing time hand traces") {
    const double dt = 0.01;
    SUBCASE("one interval at 2C") {
        const Eigen::VectorXd f = expand({{1, 2.0 * kC}, {4, 0.0}});
        const FlowProfile p = propagate_queue(f, kC, dt);
        // F = 0, 2C dt, 2C dt, ...; G = 0, C dt, 2C dt, ...
        CHECK(p.G[1] == doctest::Approx(kC * dt));
        CHECK(p.upsilon[1] == doctest::Approx(dt / 2)); // departed at t0 + dt/2
        CHECK(p.upsilon[2] == 0.0);                     // queue empty again
    }
    SUBCASE("two intervals at 2C") {
        const Eigen::VectorXd f = expand({{2, 2.0 * kC}, {4, 0.0}});
        const FlowProfile p = propagate_queue(f, kC, dt);
        CHECK(p.G[2] == doctest::Approx(2.0 * kC * dt));
        CHECK(p.upsilon[1] == doctest::Approx(0.5 * dt));
        CHECK(p.upsilon[2] == doctest::Approx(dt)); // vehicle at G = 2C dt waits dt
        CHECK(p.upsilon[3] == doctest::Approx(1.5 * dt));
        CHECK(p.upsilon[4] == 0.0);
    }
}

TEST_CASE("length mismatch and invalid rates") {
    const ValidatedConfig v = validate(demo_config());
    CHECK_THROWS_AS(propagate_queue(Eigen::VectorXd::Zero(10), v), Error);
    try {
        propagate_queue(Eigen::VectorXd::Zero(10), v);
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::LengthMismatch);
    }
    Eigen::VectorXd f = Eigen::VectorXd::Zero(5);
    f[2] = -1.0;
    CHECK_THROWS_AS(propagate_queue(f, kC, 0.1), Error);
}

TEST_CASE("random piecewise-constant profiles: oracle, FIFO, invariants") {
    std::mt19937_64 rng(20240601);
    std::uniform_int_distribution<int> n_pieces(1, 5);
    std::uniform_int_distribution<int> steps(1, 400);
    std::uniform_real_distribution<double> rate(0.0, 3.0 * kC);
    const double dt = 1e-3;

    for (int trial = 0; trial < 100; ++trial) {
        std::vector<Piece> pieces;
        const int n = n_pieces(rng);
        for (int k = 0; k < n; ++k) {
            pieces.push_back({steps(rng), rng() % 4 == 0 ? 0.0 : rate(rng)});
        }
        pieces.push_back({2000, 0.0}); // drain
        const Eigen::VectorXd f = expand(pieces);
        const FlowProfile p = propagate_queue(f, kC, dt);
        const double f_max = f.maxCoeff();

        const std::vector<double> exact = exact_queue_at_piece_ends(pieces, dt);
        int boundary = 0;
        for (std::size_t k = 0; k < pieces.size(); ++k) {
            boundary += pieces[k].steps;
            CHECK(std::abs(p.delta[boundary] - exact[k]) <= f_max * dt + 1e-9);
        }

        // Invariants.
        CHECK(p.g.minCoeff() >= 0.0);
        CHECK(p.g.maxCoeff() <= kC);
        CHECK(p.delta.minCoeff() >= 0.0);
        for (Eigen::Index m = 0; m < p.F.size(); ++m) {
            CHECK(p.G[m] <= p.F[m] + 1e-9);
            CHECK(std::abs(p.delta[m] - (p.F[m] - p.G[m])) <= 1e-9);
            // A queue left at the end of an interval means it discharged at capacity.
            if (m < p.g.size()) {
                CHECK(std::min(p.delta[m + 1], kC - p.g[m]) <= 1e-9);
            }
            if (m > 0) {
                CHECK(p.F[m] >= p.F[m - 1]);
                CHECK(p.G[m] >= p.G[m - 1]);
            }
            // FIFO: the vehicle arriving at boundary m departed at t_m - upsilon.
            const double s = m * dt - p.upsilon[m];
            CHECK(std::abs(departures_at(p, dt, s) - p.G[m]) <= 1e-9);
            CHECK(p.upsilon[m] >= 0.0);
        }
        CHECK(p.G[p.G.size() - 1] == doctest::Approx(p.F[p.F.size() - 1]).epsilon(1e-12));
    }
}

TEST_CASE("raising any departure rate never lowers a later queue") {
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> rate(0.0, 2.5 * kC);
    std::uniform_int_distribution<int> where(0, 299);
    for (int trial = 0; trial < 50; ++trial) {
        Eigen::VectorXd f(300);
        for (Eigen::Index m = 0; m < f.size(); ++m) {
            f[m] = rate(rng);
        }
        const FlowProfile base = propagate_queue(f, kC, 1e-3);
        const int m = where(rng);
        f[m] += rate(rng);
        const FlowProfile raised = propagate_queue(f, kC, 1e-3);
        for (Eigen::Index k = m; k < base.delta.size(); ++k) {
            CHECK(raised.delta[k] >= base.delta[k]);
        }
    }
}

TEST_CASE("center queueing times vanish on under-utilized intervals") {
    const double dt = 1e-2;
    const Eigen::VectorXd f = expand({{10, 2.0 * kC}, {10, 0.25 * kC}, {20, 0.0}});
    const FlowProfile p = propagate_queue(f, kC, dt);
    const Eigen::VectorXd ups = queueing_times_at_centers(p, kC, dt);
    for (Eigen::Index m = 0; m < ups.size(); ++m) {
        if (p.g[m] < kC) {
            CHECK(ups[m] == 0.0);
        } else {
            const double G_c = p.G[m] + 0.5 * p.g[m] * dt;
            CHECK(std::abs(departures_at(p, dt, (m + 0.5) * dt - ups[m]) - G_c) <= 1e-9);
        }
    }
    CHECK(ups.maxCoeff() > 0.0);
}
