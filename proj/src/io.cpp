#include "bottleneck/io.hpp"

#include <array>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <string_view>

#include <json.hpp>

namespace bottleneck {

std::string format_number(double value) {
    if (value == 0.0) {
        return "0"; // folds -0
    }
    std::array<char, 40> buf{};
    std::snprintf(buf.data(), buf.size(), "%.12g", value);
    return buf.data();
}

namespace {

struct Field {
    const char* name;
    double SimConfig::*member;
    bool required;
};

constexpr std::array<Field, 16> kFields{{
    {"N", &SimConfig::N, true},
    {"C", &SimConfig::C, true},
    {"alpha", &SimConfig::alpha, true},
    {"beta", &SimConfig::beta, true},
    {"gamma", &SimConfig::gamma, true},
    {"t_star", &SimConfig::t_star, true},
    {"t0", &SimConfig::t0, true},
    {"t0p", &SimConfig::t0p, true},
    {"u", &SimConfig::u, true},
    {"w", &SimConfig::w, true},
    {"dt", &SimConfig::dt, true},
    {"dx", &SimConfig::dx, true},
    {"dr", &SimConfig::dr, true},
    {"jam_tol", &SimConfig::jam_tol, false},
    {"ue_gap_tol", &SimConfig::ue_gap_tol, false},
    {"max_days", &SimConfig::max_days, false},
}};

std::string read_text(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error(ErrorKind::Io, "cannot read " + path.string());
    }
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

} // namespace

SimConfig parse_config(const std::string& text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw Error(ErrorKind::ConfigParse, std::string("config is not valid JSON: ") + e.what());
    }
    if (!doc.is_object()) {
        throw Error(ErrorKind::ConfigParse, "config must be a JSON object");
    }
    for (const auto& [key, value] : doc.items()) {
        bool known = false;
        for (const Field& field : kFields) {
            known = known || key == field.name;
        }
        if (!known) {
            throw Error(ErrorKind::ConfigParse, "unknown config key '" + key + "'");
        }
        if (!value.is_number()) {
            throw Error(ErrorKind::ConfigParse, "config key '" + key + "' must be a number");
        }
    }
    SimConfig config;
    for (const Field& field : kFields) {
        const auto it = doc.find(field.name);
        if (it == doc.end()) {
            if (field.required) {
                throw Error(ErrorKind::ConfigParse, std::string("missing config key '") + field.name + "'");
            }
            continue;
        }
        config.*field.member = it->get<double>();
    }
    return config;
}

SimConfig load_config(const std::filesystem::path& path) { return parse_config(read_text(path)); }

std::string config_to_json(const SimConfig& config) {
    nlohmann::ordered_json doc;
    for (const Field& field : kFields) {
        doc[field.name] = config.*field.member;
    }
    return doc.dump(2) + "\n";
}

std::vector<RatePiece> demo_departures(const SimConfig& c) {
    return {{-2.2, 0.5 * c.C}, {-1.4, 2.0 * c.C}, {-1.1, 0.25 * c.C}, {-0.3, 2.0 * c.C}, {0.0, 0.4 * c.C}, {0.5, 0.0}};
}

std::vector<RatePiece> parse_departures(const std::string& text) {
    std::vector<RatePiece> pieces;
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    bool header_seen = false;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) {
            line.erase(hash);
        }
        if (line.find_first_not_of(" \t\r") == std::string::npos) {
            continue;
        }
        for (char& ch : line) {
            if (ch == ',') {
                ch = ' ';
            }
        }
        std::istringstream fields(line);
        RatePiece piece;
        std::string extra;
        if (!(fields >> piece.t_start >> piece.rate) || (fields >> extra)) {
            if (pieces.empty() && !header_seen) {
                header_seen = true;
                continue;
            }
            throw Error(ErrorKind::ConfigParse, "departure file line " + std::to_string(line_no) +
                                                    ": expected two numeric columns t_start,rate");
        }
        pieces.push_back(piece);
    }
    if (pieces.empty()) {
        throw Error(ErrorKind::ConfigParse, "departure file has no rows");
    }
    return pieces;
}

std::vector<RatePiece> load_departures(const std::filesystem::path& path) { return parse_departures(read_text(path)); }

Eigen::VectorXd departures_on_grid(const std::vector<RatePiece>& pieces, const TimeGrid& time) {
    const double t_end = time.boundaries[time.M];
    for (std::size_t n = 0; n < pieces.size(); ++n) {
        const RatePiece& p = pieces[n];
        std::ostringstream where;
        where << "departure piece starting at " << p.t_start;
        if (!std::isfinite(p.rate) || p.rate < 0.0) {
            throw Error(ErrorKind::ConfigParse, where.str() + ": rate must be finite and nonnegative");
        }
        if (!(p.t_start >= time.t0 - 1e-9 * time.dt && p.t_start < t_end)) {
            throw Error(ErrorKind::ConfigParse, where.str() + ": start outside [t0, t0p)");
        }
        const double steps = (p.t_start - time.t0) / time.dt;
        if (std::abs(steps - std::round(steps)) > 1e-6) {
            throw Error(ErrorKind::ConfigParse, where.str() + ": start is not on the time grid");
        }
        if (n > 0 && !(p.t_start > pieces[n - 1].t_start)) {
            throw Error(ErrorKind::ConfigParse, where.str() + ": starts must be strictly increasing");
        }
    }
    Eigen::VectorXd f = Eigen::VectorXd::Zero(time.M);
    std::size_t piece = 0;
    bool active = false;
    for (int m = 0; m < time.M; ++m) {
        while (piece < pieces.size() && pieces[piece].t_start < time.centers[m]) {
            ++piece;
            active = true;
        }
        if (active) {
            f[m] = pieces[piece - 1].rate;
        }
    }
    return f;
}

CsvRunWriter::CsvRunWriter(const std::filesystem::path& dir, const Grids& grids, const SimConfig& config,
                           int flow_every)
    : grids_(grids), config_(config), flow_every_(std::max(flow_every, 1)) {
    const auto open = [&](std::ofstream& out, const char* name, const char* header) {
        out.open(dir / name, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw Error(ErrorKind::Io, "cannot write " + (dir / name).string());
        }
        out << header << '\n';
    };
    open(summary_, "summary.csv", "day,mass,ue_gap,x_star,max_density_change");
    open(density_, "density.csv", "day,cell_index,x_center,k");
    open(flows_, "flows.csv", "day,t_center,f,g,F,G,delta,upsilon,phi1,phi2,phi");
}

void CsvRunWriter::consume(const DayRecord& record) {
    const std::string day = format_number(record.day);
    const DayDiagnostics& d = record.diagnostics;
    summary_ << day << ',' << format_number(d.mass) << ',' << format_number(d.ue_gap) << ','
             << format_number(record.jam.x_star) << ',' << format_number(d.max_density_change) << '\n';
    summary_.flush();

    std::string rows;
    for (int c = 0; c < grids_.payoff.I; ++c) {
        rows += day;
        rows += ',';
        rows += std::to_string(-c);
        rows += ',';
        rows += format_number(grids_.payoff.cell_center(c));
        rows += ',';
        rows += format_number(record.density.k[c]);
        rows += '\n';
    }
    density_ << rows;
    density_.flush();

    if (record.step % flow_every_ == 0) {
        write_flows(record);
        pending_.reset();
    } else {
        pending_ = record;
    }
}

void CsvRunWriter::write_flows(const DayRecord& record) {
    const std::string day = format_number(record.day);
    const FlowProfile& p = record.flows;
    const CostProfile& costs = record.costs;
    const double dt = config_.dt;
    std::string rows;
    rows.reserve(static_cast<std::size_t>(grids_.time.M) * 128);
    for (int m = 0; m < grids_.time.M; ++m) {
        const double F_c = p.F[m] + 0.5 * p.f[m] * dt;
        const double G_c = p.G[m] + 0.5 * p.g[m] * dt;
        const double values[] = {grids_.time.centers[m], p.f[m],           p.g[m],
                                 F_c,                    G_c,              std::max(F_c - G_c, 0.0),
                                 costs.phi1[m] / config_.alpha, costs.phi1[m], costs.phi2[m],
                                 costs.phi[m]};
        rows += day;
        for (double v : values) {
            rows += ',';
            rows += format_number(v);
        }
        rows += '\n';
    }
    flows_ << rows;
    flows_.flush();
}

void CsvRunWriter::finish() {
    if (pending_) {
        write_flows(*pending_);
        pending_.reset();
    }
    summary_.flush();
    density_.flush();
    flows_.flush();
    if (!summary_ || !density_ || !flows_) {
        throw Error(ErrorKind::Io, "failed writing run tables");
    }
}

void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw Error(ErrorKind::Io, "cannot write " + tmp.string());
        }
        out << content;
        if (!out.flush()) {
            throw Error(ErrorKind::Io, "failed writing " + tmp.string());
        }
    }
    std::filesystem::rename(tmp, path);
}

} // namespace bottleneck
