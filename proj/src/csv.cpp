#include "pdm/csv.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace pdm::io {

namespace {

CsvTable with_manifest(const Manifest& m, std::vector<std::string> header) {
    CsvTable t;
    t.comments = m.comment_lines();
    t.header = std::move(header);
    return t;
}

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> out;
    std::string cell;
    std::istringstream ss(line);
    while (std::getline(ss, cell, ',')) out.push_back(cell);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

}  // namespace

std::string format_number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void Manifest::add(std::string key, std::string value) {
    entries_.emplace_back(std::move(key), std::move(value));
}

void Manifest::add(std::string key, double value) { add(std::move(key), format_number(value)); }

std::vector<std::string> Manifest::comment_lines() const {
    std::vector<std::string> out;
    out.reserve(entries_.size());
    for (const auto& [k, v] : entries_) out.push_back(" " + k + ": " + v);
    return out;
}

void write_csv(std::ostream& os, const CsvTable& table) {
    for (const auto& c : table.comments) os << '#' << c << '\n';
    for (std::size_t i = 0; i < table.header.size(); ++i) {
        os << (i ? "," : "") << table.header[i];
    }
    os << '\n';
    for (const auto& row : table.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << format_number(row[i]);
        os << '\n';
    }
    if (!os) throw std::runtime_error("failed to write CSV output");
}

std::string to_csv_string(const CsvTable& table) {
    std::ostringstream os;
    write_csv(os, table);
    return os.str();
}

CsvTable parse_csv(std::istream& is) {
    CsvTable t;
    std::string line;
    bool have_header = false;
    std::size_t lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        if (!have_header && !line.empty() && line.front() == '#') {
            t.comments.push_back(line.substr(1));
            continue;
        }
        if (!have_header) {
            t.header = split(line);
            have_header = true;
            continue;
        }
        const auto cells = split(line);
        if (cells.size() != t.header.size()) {
            throw std::runtime_error("CSV line " + std::to_string(lineno) + " has " +
                                     std::to_string(cells.size()) + " fields, expected " +
                                     std::to_string(t.header.size()));
        }
        std::vector<double> row;
        row.reserve(cells.size());
        for (const auto& c : cells) {
            char* end = nullptr;
            const double v = std::strtod(c.c_str(), &end);
            if (c.empty() || *end != '\0') {
                throw std::runtime_error("CSV line " + std::to_string(lineno) +
                                         ": not a number: '" + c + "'");
            }
            row.push_back(v);
        }
        t.rows.push_back(std::move(row));
    }
    if (!have_header) throw std::runtime_error("CSV input has no header line");
    return t;
}

CsvTable trajectory_table(const Trajectory& traj, const Manifest& m) {
    CsvTable t = with_manifest(m, {"t", "x", "y", "z"});
    t.rows.reserve(traj.samples.size());
    for (const auto& s : traj.samples) t.rows.push_back({s.t, s.state.x, s.state.y, s.state.z});
    return t;
}

CsvTable phase_table(const Trajectory& traj, const Manifest& m) {
    CsvTable t = with_manifest(m, {"k", "x", "y"});
    t.rows.reserve(traj.samples.size());
    for (std::size_t k = 0; k < traj.samples.size(); ++k) {
        const auto& s = traj.samples[k].state;
        t.rows.push_back({static_cast<double>(k), s.x, s.y});
    }
    return t;
}

CsvTable strobe_table(const StroboSeries& series, const Manifest& m) {
    CsvTable t = with_manifest(m, {"k", "x", "y"});
    t.rows.reserve(series.samples.size());
    for (std::size_t k = 0; k < series.samples.size(); ++k) {
        t.rows.push_back({static_cast<double>(k), series.samples[k].x, series.samples[k].y});
    }
    return t;
}

CsvTable bifurcation_table(const BifurcationData& data, const Manifest& m) {
    CsvTable t = with_manifest(m, {"param", "k", "x", "y"});
    for (const auto& r : data.rows()) {
        t.rows.push_back({r.param, static_cast<double>(r.k), r.x, r.y});
    }
    return t;
}

CsvTable lyapunov_table(const std::vector<LyapunovRow>& rows, const Manifest& m) {
    CsvTable t = with_manifest(m, {"param", "lambda_max"});
    t.rows.reserve(rows.size());
    for (const auto& r : rows) t.rows.push_back({r.param, r.lambda_max});
    return t;
}

}  // namespace pdm::io
