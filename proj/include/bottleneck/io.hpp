#pragma once

#include <Eigen/Dense>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include "bottleneck/config.hpp"
#include "bottleneck/driver.hpp"
#include "bottleneck/grids.hpp"

namespace bottleneck {

/// Renders with 12 significant digits so tables diff cleanly.
std::string format_number(double value);

/// Flat JSON object whose keys are exactly the SimConfig field names.
/// jam_tol, ue_gap_tol and max_days may be omitted; unknown keys are errors.
SimConfig parse_config(const std::string& text);
SimConfig load_config(const std::filesystem::path& path);
std::string config_to_json(const SimConfig& config);

/// One piece of a piecewise-constant departure profile: `rate` from
/// `t_start` until the next piece starts (or the end of the period).
struct RatePiece {
    double t_start = 0.0;
    double rate = 0.0;
};

/// The initial departures of the demo: C/2, 2C, C/4, 2C, 0.4C over
/// (-2.2, -1.4], (-1.4, -1.1], (-1.1, -0.3], (-0.3, 0], (0, 0.5].
std::vector<RatePiece> demo_departures(const SimConfig& config);

/// Two numeric columns `t_start,rate` per line; a header line and `#`
/// comments are skipped.
std::vector<RatePiece> parse_departures(const std::string& text);
std::vector<RatePiece> load_departures(const std::filesystem::path& path);

/// Samples the pieces at the interval centers. Throws ConfigParse when
/// starts are unordered, off the time grid or outside [t0, t0p).
Eigen::VectorXd departures_on_grid(const std::vector<RatePiece>& pieces, const TimeGrid& time);

/// Streams run tables into a directory:
///   summary.csv  day,mass,ue_gap,x_star,max_density_change
///   density.csv  day,cell_index,x_center,k
///   flows.csv    day,t_center,f,g,F,G,delta,upsilon,phi1,phi2,phi
/// The flow table holds every `flow_every`-th step plus the last one.
/// Each day's rows reach the files in a single write.
class CsvRunWriter : public DaySink {
public:
    CsvRunWriter(const std::filesystem::path& dir, const Grids& grids, const SimConfig& config, int flow_every);

    void consume(const DayRecord& record) override;
    /// Writes the pending final flow rows and flushes every table.
    void finish();

private:
    void write_flows(const DayRecord& record);

    const Grids& grids_;
    SimConfig config_;
    int flow_every_;
    std::ofstream summary_;
    std::ofstream density_;
    std::ofstream flows_;
    std::optional<DayRecord> pending_;
};

/// Writes `content` to `path` through a temporary file and a rename.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

} // namespace bottleneck
