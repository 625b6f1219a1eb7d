// One-parameter sweeps over the forcing amplitude f or the PDM index xi:
// bifurcation point clouds and Lyapunov scans.
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "pdm/analysis.hpp"
#include "pdm/integrate.hpp"
#include "pdm/model.hpp"

namespace pdm {

enum class Axis { F, Xi };
enum class IcMode { FixedIC, Continuation };

std::string to_string(Axis a);
std::string to_string(IcMode m);

struct SweepConfig {
    Axis axis = Axis::F;
    double start = 0.1;
    double stop = 10.0;
    int steps = 500;
    Params base;
    State initial{0.1, 0.1, 0.0};
    IcMode ic_mode = IcMode::FixedIC;
    long long n_transient = 200;
    long long n_samples = 128;
    /// Averaging length for lyapunov_scan, in drive periods.
    double lyapunov_average_periods = 2000.0;
    /// Run analysis::classify at every point of bifurcation_scan.
    bool classify_points = false;
    std::optional<IntegratorConfig> integrator;  // defaults_for(base) when empty
    /// Worker cap; 0 means resolve_thread_count().
    unsigned threads = 0;

    void validate() const;
    double value_at(int i) const;
    Params params_at(int i) const;
    IntegratorConfig integrator_config() const;
};

struct BifurcationPoint {
    double param = 0.0;
    std::vector<StroboSample> samples;  // exactly n_samples; NaN when `error` is set
    std::optional<std::string> error;
    std::optional<Classification> classification;
};

struct BifurcationRow {
    double param;
    long long k;
    double x;
    double y;
    bool flagged;
};

struct BifurcationData {
    std::vector<BifurcationPoint> points;  // ordered by axis value

    /// Flattened rows ordered by (axis value, sample index).
    std::vector<BifurcationRow> rows() const;
};

struct LyapunovRow {
    double param = 0.0;
    double lambda_max = 0.0;  // NaN when `error` is set
    std::optional<std::string> error;
};

/// Worker count from PDM_THREADS (positive integer) or the hardware.
/// Throws std::invalid_argument for a malformed PDM_THREADS.
unsigned resolve_thread_count();

BifurcationData bifurcation_scan(const SweepConfig& cfg);

std::vector<LyapunovRow> lyapunov_scan(const SweepConfig& cfg);

}  // namespace pdm
