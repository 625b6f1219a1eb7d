// CSV emission and parsing. Files carry '#'-prefixed manifest lines, one
// header line, then data rows; numbers use 17 significant digits so every
// double survives a write/read round trip bit for bit.
#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "pdm/integrate.hpp"
#include "pdm/sweep.hpp"

namespace pdm::io {

std::string format_number(double v);

/// Ordered key/value pairs describing how a dataset was produced.
class Manifest {
public:
    void add(std::string key, std::string value);
    void add(std::string key, double value);

    const std::vector<std::pair<std::string, std::string>>& entries() const { return entries_; }
    /// Comment lines (without the leading '#').
    std::vector<std::string> comment_lines() const;

private:
    std::vector<std::pair<std::string, std::string>> entries_;
};

struct CsvTable {
    std::vector<std::string> comments;  // text after '#'
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;
};

void write_csv(std::ostream& os, const CsvTable& table);
std::string to_csv_string(const CsvTable& table);

/// Throws std::runtime_error on malformed input.
CsvTable parse_csv(std::istream& is);

CsvTable trajectory_table(const Trajectory& traj, const Manifest& m);
/// Header k,x,y: one row per sample.
CsvTable phase_table(const Trajectory& traj, const Manifest& m);
CsvTable strobe_table(const StroboSeries& series, const Manifest& m);
CsvTable bifurcation_table(const BifurcationData& data, const Manifest& m);
CsvTable lyapunov_table(const std::vector<LyapunovRow>& rows, const Manifest& m);

}  // namespace pdm::io
