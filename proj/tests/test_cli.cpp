#include <catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "pdm/cli.hpp"
#include "pdm/csv.hpp"

namespace fs = std::filesystem;

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result run_cli(std::vector<std::string> args) {
    args.insert(args.begin(), "pdm");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = pdm::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

fs::path scratch_dir() {
    const fs::path dir = fs::temp_directory_path() / "pdm_cli_tests";
    fs::create_directories(dir);
    return dir;
}

pdm::io::CsvTable parse(const std::string& text) {
    std::istringstream is(text);
    return pdm::io::parse_csv(is);
}

}  // namespace

TEST_CASE("usage errors exit with 1", "[cli]") {
    CHECK(run_cli({}).code == pdm::cli::kUsage);
    CHECK(run_cli({"bogus"}).code == pdm::cli::kUsage);
    CHECK(run_cli({"simulate", "--no-such-flag"}).code == pdm::cli::kUsage);
    CHECK(run_cli({"simulate", "--xi", "-1"}).code == pdm::cli::kUsage);
    CHECK(run_cli({"bifurcation", "--axis", "omega"}).code == pdm::cli::kUsage);
    CHECK(run_cli({"bifurcation", "--start", "3", "--stop", "1"}).code == pdm::cli::kUsage);
    CHECK(run_cli({"--help"}).code == pdm::cli::kOk);
}

TEST_CASE("numerical failures exit with 2", "[cli]") {
    const auto r = run_cli({"simulate", "--t1", "100", "--max-steps", "5"});
    CHECK(r.code == pdm::cli::kNumerical);
    CHECK(r.err.find("budget") != std::string::npos);
}

TEST_CASE("simulate writes a trajectory with manifest", "[cli]") {
    const auto r = run_cli({"simulate", "--t1", "5", "--f", "5", "--xi", "0.2"});
    REQUIRE(r.code == 0);
    const auto table = parse(r.out);
    CHECK(table.header == std::vector<std::string>{"t", "x", "y", "z"});
    CHECK(table.rows.front()[0] == 0.0);
    CHECK(table.rows.back()[0] == 5.0);
    bool has_command = false;
    for (const auto& c : table.comments) has_command |= c.rfind(" command: pdm simulate", 0) == 0;
    CHECK(has_command);
}

TEST_CASE("manifest command reproduces the data", "[cli]") {
    const auto first = run_cli({"phase", "--f", "5", "--xi", "0.6", "--periods", "3", "--per-period",
                                "20", "--transient", "10"});
    REQUIRE(first.code == 0);
    std::string command;
    for (const auto& c : parse(first.out).comments) {
        if (c.rfind(" command: ", 0) == 0) command = c.substr(10);
    }
    REQUIRE_FALSE(command.empty());
    std::istringstream words(command);
    std::vector<std::string> args;
    for (std::string w; words >> w;) args.push_back(w);
    args.erase(args.begin());  // program name
    const auto again = run_cli(args);
    REQUIRE(again.code == 0);
    CHECK(again.out == first.out);
}

TEST_CASE("phase writes csv, svg and sidecar", "[cli]") {
    const fs::path dir = scratch_dir();
    const auto r = run_cli({"phase", "--f", "5", "--xi", "0", "--periods", "2", "--per-period", "50",
                            "--transient", "20", "-o", (dir / "p.csv").string(), "--svg",
                            (dir / "p.svg").string()});
    REQUIRE(r.code == 0);
    const auto table = parse(slurp(dir / "p.csv"));
    CHECK(table.header == std::vector<std::string>{"k", "x", "y"});
    CHECK(table.rows.size() == 100);
    const std::string svg = slurp(dir / "p.svg");
    std::size_t circles = 0;
    for (auto pos = svg.find("<circle"); pos != std::string::npos; pos = svg.find("<circle", pos + 1)) {
        ++circles;
    }
    CHECK(circles == 100);
    const std::string sidecar = slurp(dir / "p.csv.manifest.json");
    CHECK(sidecar.find("wall_clock_seconds") != std::string::npos);

    const auto strobe = run_cli({"phase", "--strobe", "--periods", "40", "--transient", "100"});
    REQUIRE(strobe.code == 0);
    CHECK(parse(strobe.out).rows.size() == 40);
}

TEST_CASE("bifurcation and lyapunov sweeps", "[cli]") {
    const auto b = run_cli({"bifurcation", "--axis", "f", "--start", "1", "--stop", "2", "--steps", "4",
                            "--samples", "16", "--transient", "20", "--xi", "0.5"});
    REQUIRE(b.code == 0);
    const auto table = parse(b.out);
    CHECK(table.header == std::vector<std::string>{"param", "k", "x", "y"});
    CHECK(table.rows.size() == 64);

    const auto l = run_cli({"lyapunov", "--axis", "xi", "--start", "0", "--stop", "0.2", "--steps",
                            "2", "--transient", "20", "--average", "100"});
    REQUIRE(l.code == 0);
    const auto lt = parse(l.out);
    CHECK(lt.header == std::vector<std::string>{"param", "lambda_max"});
    CHECK(lt.rows.size() == 2);
}

TEST_CASE("classify prints the verdict", "[cli]") {
    const auto r = run_cli({"classify", "--f", "5", "--xi", "0"});
    REQUIRE(r.code == 0);
    CHECK(r.out.rfind("Periodic(1)\n", 0) == 0);
    CHECK(r.out.find("lambda_max=") != std::string::npos);
}

TEST_CASE("verify passes on a correct build", "[cli]") {
    const auto r = run_cli({"verify"});
    CHECK(r.code == 0);
    CHECK(r.out.find("FAIL") == std::string::npos);
    CHECK(r.out.find("all checks passed") != std::string::npos);
}
