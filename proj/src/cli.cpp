#include "pdm/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cstdio>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "pdm/analysis.hpp"
#include "pdm/csv.hpp"
#include "pdm/integrate.hpp"
#include "pdm/model.hpp"
#include "pdm/svg.hpp"
#include "pdm/sweep.hpp"
#include "pdm/verify.hpp"
#include "pdm/version.hpp"

namespace pdm::cli {

namespace {

class UsageError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

struct PhysicsFlags {
    double xi = 0.0;
    double omega0_sq = 0.25;
    double lambda = 1.0;
    double alpha = 0.2;
    double f = 5.0;
    double omega = 1.0;

    void attach(CLI::App* app) {
        app->add_option("--xi", xi, "PDM index (>= 0)")->capture_default_str();
        app->add_option("--omega0-sq", omega0_sq, "squared natural frequency")->capture_default_str();
        app->add_option("--lambda", lambda, "quartic coefficient")->capture_default_str();
        app->add_option("--alpha", alpha, "damping coefficient")->capture_default_str();
        app->add_option("--f", f, "forcing amplitude")->capture_default_str();
        app->add_option("--omega", omega, "drive angular frequency (> 0)")->capture_default_str();
    }

    Params params() const { return Params::make(xi, omega0_sq, lambda, alpha, f, omega); }

    void record(io::Manifest& m) const {
        m.add("xi", xi);
        m.add("omega0-sq", omega0_sq);
        m.add("lambda", lambda);
        m.add("alpha", alpha);
        m.add("f", f);
        m.add("omega", omega);
    }
};

struct IntegratorFlags {
    double rtol = 1e-9;
    double atol = 1e-9;
    double h_init = 1e-3;
    double h_max = 0.0;  // 0: one twentieth of the drive period
    long long max_steps = 100'000'000;

    void attach(CLI::App* app) {
        app->add_option("--rtol", rtol, "relative tolerance")->capture_default_str();
        app->add_option("--atol", atol, "absolute tolerance")->capture_default_str();
        app->add_option("--h-init", h_init, "initial step")->capture_default_str();
        app->add_option("--h-max", h_max, "maximum step (0 = drive period / 20)")
            ->capture_default_str();
        app->add_option("--max-steps", max_steps, "step budget")->capture_default_str();
    }

    IntegratorConfig config(const Params& p) const {
        IntegratorConfig c = IntegratorConfig::defaults_for(p);
        c.rel_tol = rtol;
        c.abs_tol = atol;
        c.h_init = h_init;
        if (h_max > 0.0) c.h_max = h_max;
        c.max_steps = max_steps;
        c.validate();
        return c;
    }

    void record(io::Manifest& m, const IntegratorConfig& c) const {
        m.add("rtol", c.rel_tol);
        m.add("atol", c.abs_tol);
        m.add("h-init", c.h_init);
        m.add("h-max", c.h_max);
        m.add("max-steps", std::to_string(c.max_steps));
    }
};

struct InitialFlags {
    double x0 = 0.1;
    double y0 = 0.1;
    double z0 = 0.0;

    void attach(CLI::App* app) {
        app->add_option("--x0", x0, "initial position")->capture_default_str();
        app->add_option("--y0", y0, "initial velocity")->capture_default_str();
        app->add_option("--z0", z0, "initial drive phase")->capture_default_str();
    }

    State state() const { return State{x0, y0, z0}; }

    void record(io::Manifest& m) const {
        m.add("x0", x0);
        m.add("y0", y0);
        m.add("z0", z0);
    }
};

struct OutputFlags {
    std::string csv_path;
    std::string svg_path;

    void attach(CLI::App* app, bool with_svg) {
        app->add_option("-o,--output", csv_path, "CSV destination (default: standard output)");
        if (with_svg) app->add_option("--svg", svg_path, "also write an SVG scatter plot here");
    }
};

struct SweepFlags {
    std::string axis = "f";
    double start = 0.1;
    double stop = 10.0;
    int steps = 500;
    long long transient = 200;
    long long samples = 128;
    std::string ic = "fixed";

    void attach(CLI::App* app) {
        app->add_option("--axis", axis, "swept parameter")
            ->check(CLI::IsMember({"f", "xi"}))
            ->capture_default_str();
        app->add_option("--start", start, "first axis value")->capture_default_str();
        app->add_option("--stop", stop, "last axis value")->capture_default_str();
        app->add_option("--steps", steps, "number of axis values")->capture_default_str();
        app->add_option("--transient", transient, "discarded drive periods")->capture_default_str();
        app->add_option("--samples", samples, "stroboscopic samples per point")
            ->capture_default_str();
        app->add_option("--ic", ic, "initial-condition protocol")
            ->check(CLI::IsMember({"fixed", "continuation"}))
            ->capture_default_str();
    }

    SweepConfig config(const Params& base, const State& s0, const IntegratorConfig& icfg) const {
        SweepConfig c;
        c.axis = axis == "f" ? Axis::F : Axis::Xi;
        c.start = start;
        c.stop = stop;
        c.steps = steps;
        c.base = base;
        c.initial = s0;
        c.ic_mode = ic == "fixed" ? IcMode::FixedIC : IcMode::Continuation;
        c.n_transient = transient;
        c.n_samples = samples;
        c.integrator = icfg;
        return c;
    }

    void record(io::Manifest& m) const {
        m.add("axis", axis);
        m.add("start", start);
        m.add("stop", stop);
        m.add("steps", std::to_string(steps));
        m.add("transient", std::to_string(transient));
        m.add("samples", std::to_string(samples));
        m.add("ic", ic);
    }
};

/// Command line that reproduces the run from the recorded flag values.
std::string command_line(const std::string& sub, const io::Manifest& m) {
    std::string cmd = "pdm " + sub;
    for (const auto& [k, v] : m.entries()) {
        if (k == "tool" || k == "version" || k == "subcommand") continue;
        cmd += " --" + k + (v.empty() ? "" : " " + v);
    }
    return cmd;
}

io::Manifest finish_manifest(const std::string& sub, const io::Manifest& flags) {
    io::Manifest m;
    m.add("tool", "pdm");
    m.add("version", std::string(kVersion));
    m.add("subcommand", sub);
    for (const auto& [k, v] : flags.entries()) m.add(k, v);
    m.add("command", command_line(sub, flags));
    return m;
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open '" + path + "' for writing");
    f << text;
    if (!f) throw std::runtime_error("failed writing '" + path + "'");
}

/// Sidecar with the run-dependent facts kept out of the data files.
void write_sidecar(const std::string& data_path, const io::Manifest& m, double seconds,
                   unsigned threads) {
    nlohmann::ordered_json j;
    for (const auto& [k, v] : m.entries()) j[k] = v;
    j["wall_clock_seconds"] = seconds;
    j["threads"] = threads;
    j["data_file"] = data_path;
    write_text_file(data_path + ".manifest.json", j.dump(2) + "\n");
}

struct Emitter {
    std::ostream& out;
    std::ostream& err;
    std::chrono::steady_clock::time_point started = std::chrono::steady_clock::now();

    double elapsed() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    }

    void emit(const OutputFlags& o, const io::CsvTable& table, const io::Manifest& m,
              unsigned threads, const std::vector<io::Point2>& points, io::AxesSpec axes) {
        const std::string csv = io::to_csv_string(table);
        if (o.csv_path.empty()) {
            out << csv;
        } else {
            write_text_file(o.csv_path, csv);
        }
        if (!o.svg_path.empty()) {
            axes.metadata = m.comment_lines();
            write_text_file(o.svg_path, io::render_svg(points, axes));
        }
        const double secs = elapsed();
        if (!o.csv_path.empty()) write_sidecar(o.csv_path, m, secs, threads);
        err << "pdm: done in " << std::fixed << std::setprecision(3) << secs << " s\n";
    }
};

std::string sci(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3e", v);
    return buf;
}

std::string param_annotation(const Params& p) {
    std::ostringstream os;
    os << "xi=" << p.xi << " f=" << p.f << " omega=" << p.omega << " omega0^2=" << p.omega0_sq
       << " lambda=" << p.lambda << " alpha=" << p.alpha;
    return os.str();
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Simulation and chaos analysis of the position-dependent-mass driven Duffing "
                 "oscillator",
                 "pdm"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(kVersion));

    PhysicsFlags phys;
    IntegratorFlags integ;
    InitialFlags init;
    OutputFlags output;
    SweepFlags sweep;

    auto* simulate = app.add_subcommand("simulate", "integrate one trajectory (t,x,y,z CSV)");
    double t1 = 100.0;
    simulate->add_option("--t1", t1, "end time")->capture_default_str();

    auto* phase = app.add_subcommand("phase", "post-transient phase portrait (k,x,y CSV)");
    long long phase_transient = 200, phase_periods = 20, per_period = 200;
    bool strobe_only = false;
    phase->add_option("--transient", phase_transient, "discarded drive periods")
        ->capture_default_str();
    phase->add_option("--periods", phase_periods, "recorded drive periods")->capture_default_str();
    phase->add_option("--per-period", per_period, "samples per drive period")
        ->capture_default_str();
    phase->add_flag("--strobe", strobe_only, "record one sample per drive period instead");

    auto* bifurcation = app.add_subcommand("bifurcation", "stroboscopic bifurcation sweep");
    auto* lyapunov = app.add_subcommand("lyapunov", "largest Lyapunov exponent sweep");
    double average = 2000.0;
    lyapunov->add_option("--average", average, "averaging length in drive periods")
        ->capture_default_str();

    auto* classify_cmd = app.add_subcommand("classify", "label the attractor at one point");
    ClassifyOptions copts;
    classify_cmd->add_option("--transient", copts.n_transient, "discarded drive periods")
        ->capture_default_str();
    classify_cmd->add_option("--samples", copts.n_samples, "stroboscopic samples")
        ->capture_default_str();
    classify_cmd->add_option("--lyap-average", copts.lyapunov_average_periods,
                             "Lyapunov averaging length in drive periods")
        ->capture_default_str();
    classify_cmd->add_option("--chaos-threshold", copts.chaos_threshold, "lambda_max threshold")
        ->capture_default_str();

    auto* verify = app.add_subcommand("verify", "run the built-in oracle checks");

    for (auto* sub : {simulate, phase, bifurcation, lyapunov, classify_cmd}) {
        phys.attach(sub);
        integ.attach(sub);
        init.attach(sub);
    }
    for (auto* sub : {simulate, phase, bifurcation, lyapunov}) {
        output.attach(sub, sub != simulate);
    }
    sweep.attach(bifurcation);
    sweep.attach(lyapunov);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kUsage;
    }

    Emitter emitter{out, err};
    try {
        if (verify->parsed()) {
            bool all = true;
            out << std::left << std::setw(44) << "check" << std::setw(14) << "value"
                << std::setw(12) << "bound" << "result\n";
            for (const auto& c : run_verification()) {
                all = all && c.passed;
                out << std::left << std::setw(44) << c.name << std::setw(14)
                    << sci(c.value) << std::setw(12) << sci(c.threshold)
                    << (c.passed ? "PASS" : "FAIL") << '\n';
            }
            out << (all ? "all checks passed\n" : "verification FAILED\n");
            return all ? kOk : kVerification;
        }

        const Params p = phys.params();
        const IntegratorConfig icfg = integ.config(p);
        const State s0 = init.state();
        if (!s0.finite()) throw UsageError("initial state must be finite");
        io::Manifest flags;
        phys.record(flags);
        integ.record(flags, icfg);
        init.record(flags);

        if (simulate->parsed()) {
            flags.add("t1", t1);
            const auto m = finish_manifest("simulate", flags);
            const Trajectory traj = integrate_adaptive(s0, 0.0, t1, p, icfg);
            emitter.emit(output, io::trajectory_table(traj, m), m, 1, {}, {});
            return kOk;
        }

        if (phase->parsed()) {
            flags.add("transient", std::to_string(phase_transient));
            flags.add("periods", std::to_string(phase_periods));
            flags.add("per-period", std::to_string(per_period));
            if (strobe_only) flags.add("strobe", std::string{});
            auto m = finish_manifest("phase", flags);
            if (phase_transient < 0 || phase_periods < 1 || per_period < 1) {
                throw UsageError("phase needs --transient >= 0, --periods >= 1, --per-period >= 1");
            }
            const double T = p.drive_period();
            Trajectory traj;
            if (strobe_only) {
                const StroboSeries s = integrate_strobe(s0, p, phase_transient, phase_periods, icfg);
                for (const auto& v : s.samples) traj.samples.push_back({0.0, State{v.x, v.y, v.z}});
            } else {
                traj = sample_uniform(s0, p, static_cast<double>(phase_transient) * T,
                                      T / static_cast<double>(per_period),
                                      phase_periods * per_period, icfg);
            }
            std::vector<io::Point2> pts;
            for (const auto& s : traj.samples) pts.push_back({s.state.x, s.state.y});
            io::AxesSpec axes;
            axes.y_label = "y = dx/dt";
            axes.title = "phase portrait";
            axes.annotation = param_annotation(p);
            emitter.emit(output, io::phase_table(traj, m), m, 1, pts, axes);
            return kOk;
        }

        if (bifurcation->parsed() || lyapunov->parsed()) {
            sweep.record(flags);
            const bool bif = bifurcation->parsed();
            if (!bif) flags.add("average", average);
            const auto m = finish_manifest(bif ? "bifurcation" : "lyapunov", flags);
            SweepConfig cfg = sweep.config(p, s0, icfg);
            cfg.lyapunov_average_periods = average;
            cfg.validate();
            const unsigned threads = resolve_thread_count();
            cfg.threads = threads;
            std::vector<io::Point2> pts;
            if (bif) {
                const BifurcationData data = bifurcation_scan(cfg);
                for (const auto& pt : data.points) {
                    if (pt.error) err << "pdm: point " << pt.param << " failed: " << *pt.error << '\n';
                    for (const auto& s : pt.samples) pts.push_back({pt.param, s.x});
                }
                io::AxesSpec axes;
                axes.x_label = sweep.axis;
                axes.y_label = "x (stroboscopic)";
                axes.title = "bifurcation diagram";
                axes.annotation = param_annotation(p);
                emitter.emit(output, io::bifurcation_table(data, m), m, threads, pts, axes);
            } else {
                const auto rows = lyapunov_scan(cfg);
                for (const auto& r : rows) {
                    if (r.error) err << "pdm: point " << r.param << " failed: " << *r.error << '\n';
                    pts.push_back({r.param, r.lambda_max});
                }
                io::AxesSpec axes;
                axes.x_label = sweep.axis;
                axes.y_label = "lambda_max";
                axes.title = "largest Lyapunov exponent";
                axes.annotation = param_annotation(p);
                emitter.emit(output, io::lyapunov_table(rows, m), m, threads, pts, axes);
            }
            return kOk;
        }

        if (classify_cmd->parsed()) {
            copts.integrator = icfg;
            const Classification c = classify(p, s0, copts);
            out << c.to_string() << '\n'
                << "lambda_max=" << io::format_number(c.lambda_max) << " detected_period="
                << (c.detected_period ? std::to_string(*c.detected_period) : "none") << '\n';
            return kOk;
        }
    } catch (const std::invalid_argument& e) {
        err << "pdm: usage error: " << e.what() << '\n' << app.help();
        return kUsage;
    } catch (const std::exception& e) {
        err << "pdm: " << e.what() << '\n';
        return kNumerical;
    }
    return kUsage;
}

}  // namespace pdm::cli
