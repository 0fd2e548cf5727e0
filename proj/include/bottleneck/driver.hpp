#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

#include "bottleneck/balancing.hpp"
#include "bottleneck/config.hpp"
#include "bottleneck/costs.hpp"
#include "bottleneck/ctm.hpp"
#include "bottleneck/grids.hpp"
#include "bottleneck/payoff_road.hpp"
#include "bottleneck/point_queue.hpp"

namespace bottleneck {

struct DayDiagnostics {
    double mass = 0.0;               // sum k dx (veh)
    double ue_gap = 0.0;             // demand-weighted relative excess cost
    double max_density_change = 0.0; // vs the previous day (veh/$)
    bool mass_mismatch = false;      // |mass - N| > 1e-9 N
};

struct DayRecord {
    int step = 0;     // CTM step j
    double day = 0.0; // j * dr
    DensityProfile density;
    FlowProfile flows;
    CostProfile costs;
    JammedInterval jam;
    DayDiagnostics diagnostics;
};

/// Arrivals at or below this fraction of capacity do not make a time "used".
inline constexpr double kUsedRateFraction = 1e-6;

/// sum_m g dt (phi - phi_min) / (N max(phi_min, dx)), phi_min the least
/// total cost over used intervals. Zero when nothing is used.
double ue_gap(const Eigen::VectorXd& g, const Eigen::VectorXd& phi, const SimConfig& config);

/// Day 0: point queue from the initial departures, costs, initial density.
DayRecord build_initial_day(const Eigen::VectorXd& f0, const Grids& grids, const ValidatedConfig& config);

/// Day j > 0: split the density into arrivals and balance departures.
DayRecord build_day(int step, const DensityProfile& density, double max_change, const Grids& grids,
                    const ValidatedConfig& config);

class DaySink {
public:
    virtual ~DaySink() = default;
    virtual void consume(const DayRecord& record) = 0;
};

class MemorySink : public DaySink {
public:
    void consume(const DayRecord& record) override { records_.push_back(record); }
    const std::vector<DayRecord>& records() const { return records_; }

private:
    std::vector<DayRecord> records_;
};

struct RunOptions {
    bool stop_on_gap = true;                 // stop once ue_gap <= ue_gap_tol
    double stationary_tol = 1e-10;           // relative to kappa
    std::optional<double> max_days_override; // replaces config max_days
};

struct RunSummary {
    bool converged = false; // final gap <= ue_gap_tol
    std::optional<double> convergence_day;
    double initial_gap = 0.0;
    double final_gap = 0.0;
    double final_x_star = 0.0;
    double final_day = 0.0;
    int steps = 0;
    StopReason reason = StopReason::MaxDays;
    std::vector<std::string> warnings;
};

/// Runs the day-to-day dynamics from the initial departure rates, handing
/// every DayRecord (day 0 included) to each sink in order.
RunSummary run(const ValidatedConfig& config, const Eigen::VectorXd& f0, const std::vector<DaySink*>& sinks,
               const RunOptions& options = {});

} // namespace bottleneck
