#include "bottleneck/point_queue.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace bottleneck {

FlowProfile propagate_queue(const Eigen::VectorXd& f, double capacity, double dt) {
    if ((f.array() < 0.0).any() || !f.allFinite()) {
        throw Error(ErrorKind::OutOfRange, "departure rates must be finite and nonnegative");
    }
    const Eigen::Index M = f.size();
    FlowProfile p;
    p.f = f;
    p.g.resize(M);
    p.F.resize(M + 1);
    p.G.resize(M + 1);
    p.delta.resize(M + 1);
    p.upsilon = Eigen::VectorXd::Zero(M + 1);
    p.F[0] = 0.0;
    p.G[0] = 0.0;
    p.delta[0] = 0.0;
    for (Eigen::Index m = 0; m < M; ++m) {
        p.g[m] = std::min(p.delta[m] / dt + f[m], capacity);
        p.delta[m + 1] = std::max(0.0, p.delta[m] + (f[m] - capacity) * dt);
        p.F[m + 1] = p.F[m] + f[m] * dt;
        p.G[m + 1] = p.G[m] + p.g[m] * dt;
    }
    p.upsilon = queueing_times(p, dt);
    return p;
}

FlowProfile propagate_queue(const Eigen::VectorXd& f, const ValidatedConfig& config) {
    if (f.size() != config.intervals()) {
        throw Error(ErrorKind::LengthMismatch, "departure profile has " + std::to_string(f.size()) +
                                                   " entries, expected " + std::to_string(config.intervals()));
    }
    return propagate_queue(f, config.params().C, config.params().dt);
}

namespace {

// Cumulative sums drift apart by rounding once the queue has cleared.
constexpr double kEmptyQueueRel = 1e-10;

bool queued(double F, double G) { return F - G > kEmptyQueueRel * F; }

// Largest m' with F[m'] < level. F is nondecreasing, so this is the start of
// the segment where the interpolated departure curve first reaches `level`.
Eigen::Index last_below(const FlowProfile& p, double level) {
    const double* begin = p.F.data();
    const double* it = std::lower_bound(begin, begin + p.F.size(), level);
    if (it == begin) {
        throw Error(ErrorKind::NonInvertible, "no departure precedes cumulative level " + std::to_string(level));
    }
    const Eigen::Index mp = static_cast<Eigen::Index>(it - begin) - 1;
    if (mp >= p.f.size()) {
        throw Error(ErrorKind::NonInvertible, "cumulative level " + std::to_string(level) + " exceeds total departures");
    }
    return mp;
}

} // namespace

Eigen::VectorXd queueing_times(const FlowProfile& p, double dt) {
    const Eigen::Index n = p.F.size();
    Eigen::VectorXd upsilon = Eigen::VectorXd::Zero(n);
    for (Eigen::Index m = 0; m < n; ++m) {
        if (!queued(p.F[m], p.G[m])) {
            continue;
        }
        const Eigen::Index mp = last_below(p, p.G[m]);
        upsilon[m] = static_cast<double>(m - mp) * dt - (p.G[m] - p.F[mp]) / p.f[mp];
    }
    return upsilon;
}

Eigen::VectorXd queueing_times_at_centers(const FlowProfile& p, double capacity, double dt) {
    const Eigen::Index M = p.f.size();
    Eigen::VectorXd upsilon = Eigen::VectorXd::Zero(M);
    for (Eigen::Index m = 0; m < M; ++m) {
        if (p.g[m] < capacity) {
            continue;
        }
        const double F_c = p.F[m] + 0.5 * p.f[m] * dt;
        const double G_c = p.G[m] + 0.5 * p.g[m] * dt;
        if (!queued(F_c, G_c)) {
            continue;
        }
        const Eigen::Index mp = last_below(p, G_c);
        const double departed = static_cast<double>(mp) * dt + (G_c - p.F[mp]) / p.f[mp];
        upsilon[m] = (static_cast<double>(m) + 0.5) * dt - departed;
    }
    return upsilon;
}

double departures_at(const FlowProfile& p, double dt, double s) {
    const Eigen::Index M = p.f.size();
    if (s <= 0.0) {
        return p.F[0];
    }
    const double steps = s / dt;
    const Eigen::Index m = std::min<Eigen::Index>(static_cast<Eigen::Index>(std::floor(steps)), M);
    if (m >= M) {
        return p.F[M];
    }
    return p.F[m] + (s - static_cast<double>(m) * dt) * p.f[m];
}

Eigen::VectorXd queue_at_centers(const FlowProfile& p, double dt) {
    const Eigen::Index M = p.f.size();
    return (p.F.head(M) - p.G.head(M)) + 0.5 * dt * (p.f - p.g);
}

} // namespace bottleneck
