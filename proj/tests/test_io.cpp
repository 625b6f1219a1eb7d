#include <catch_amalgamated.hpp>

#include <cstring>
#include <random>
#include <regex>
#include <sstream>

#include "pdm/csv.hpp"
#include "pdm/svg.hpp"

using namespace pdm;
using namespace pdm::io;

namespace {

Manifest sample_manifest() {
    Manifest m;
    m.add("tool", "pdm");
    m.add("xi", 0.5);
    return m;
}

std::vector<Point2> ring(int n, double radius) {
    std::vector<Point2> pts;
    for (int i = 0; i < n; ++i) {
        const double a = 2 * 3.141592653589793 * i / n;
        pts.push_back({radius * std::cos(a), radius * std::sin(a)});
    }
    return pts;
}

std::size_t count(const std::string& hay, const std::string& needle) {
    std::size_t n = 0;
    for (auto pos = hay.find(needle); pos != std::string::npos; pos = hay.find(needle, pos + 1)) ++n;
    return n;
}

}  // namespace

TEST_CASE("number formatting round-trips", "[io][property]") {
    CHECK(std::strtod(format_number(0.1).c_str(), nullptr) == 0.1);
    CHECK(format_number(3.0) == "3");
    CHECK(format_number(NAN) == "nan");
    std::mt19937_64 rng(1);
    for (int i = 0; i < 10000; ++i) {
        std::uint64_t bits = rng();
        double v;
        std::memcpy(&v, &bits, sizeof v);
        if (!std::isfinite(v)) continue;
        const double back = std::strtod(format_number(v).c_str(), nullptr);
        CHECK(std::memcmp(&back, &v, sizeof v) == 0);
    }
}

TEST_CASE("empty dataset is manifest plus header", "[io]") {
    const std::string text = to_csv_string(lyapunov_table({}, sample_manifest()));
    CHECK(text == "# tool: pdm\n# xi: 0.5\nparam,lambda_max\n");
}

TEST_CASE("csv headers", "[io]") {
    Trajectory traj;
    traj.samples.push_back({0.0, State{1, 2, 3}});
    CHECK(trajectory_table(traj, {}).header == std::vector<std::string>{"t", "x", "y", "z"});
    CHECK(phase_table(traj, {}).header == std::vector<std::string>{"k", "x", "y"});
    CHECK(strobe_table(StroboSeries{}, {}).header == std::vector<std::string>{"k", "x", "y"});
    CHECK(bifurcation_table({}, {}).header ==
          std::vector<std::string>{"param", "k", "x", "y"});
}

TEST_CASE("bifurcation csv has one line per row", "[io]") {
    BifurcationData data;
    for (int i = 0; i < 10; ++i) {
        BifurcationPoint pt;
        pt.param = 0.1 * i;
        for (int k = 0; k < 64; ++k) pt.samples.push_back({0.01 * k, -0.02 * k, 0.0});
        data.points.push_back(pt);
    }
    const std::string text = to_csv_string(bifurcation_table(data, sample_manifest()));
    std::istringstream is(text);
    std::string line;
    int data_lines = 0, header_seen = 0;
    while (std::getline(is, line)) {
        if (line.front() == '#') continue;
        if (!header_seen++) {
            CHECK(line == "param,k,x,y");
            continue;
        }
        ++data_lines;
    }
    CHECK(data_lines == 640);
}

TEST_CASE("csv parse and re-emit is byte identical", "[io][property]") {
    std::mt19937_64 rng(2);
    std::normal_distribution<double> g(0, 3);
    std::vector<LyapunovRow> rows;
    for (int i = 0; i < 200; ++i) rows.push_back({g(rng), g(rng) * 1e-3, std::nullopt});
    rows.push_back({7.0, NAN, std::string("failed")});
    const std::string text = to_csv_string(lyapunov_table(rows, sample_manifest()));
    std::istringstream is(text);
    const CsvTable parsed = parse_csv(is);
    CHECK(parsed.rows.size() == rows.size());
    CHECK(to_csv_string(parsed) == text);
}

TEST_CASE("csv parser rejects malformed rows", "[io]") {
    std::istringstream ragged("a,b\n1,2\n3\n");
    CHECK_THROWS_AS(parse_csv(ragged), std::runtime_error);
    std::istringstream junk("a\nhello\n");
    CHECK_THROWS_AS(parse_csv(junk), std::runtime_error);
    std::istringstream nothing("# only a comment\n");
    CHECK_THROWS_AS(parse_csv(nothing), std::runtime_error);
}

TEST_CASE("svg has one marker per point", "[io]") {
    const auto pts = ring(100, 2.0);
    const std::string svg = render_svg(pts, AxesSpec{});
    CHECK(count(svg, "<circle") == 100);
    CHECK(svg.rfind("<?xml", 0) == 0);
    CHECK(svg.find("</svg>") != std::string::npos);

    std::vector<Point2> with_gap = pts;
    with_gap.push_back({NAN, 1.0});
    CHECK(count(render_svg(with_gap, AxesSpec{}), "<circle") == 100);
}

TEST_CASE("svg output is deterministic", "[io]") {
    AxesSpec axes;
    axes.title = "phase portrait";
    axes.annotation = "xi=0.2 f=5";
    axes.metadata = {" command: pdm phase --xi 0.2"};
    const auto pts = ring(500, 1.5);
    CHECK(render_svg(pts, axes) == render_svg(pts, axes));
    CHECK(render_svg(pts, axes).find("xi=0.2 f=5") != std::string::npos);
}

TEST_CASE("svg escapes text", "[io]") {
    AxesSpec axes;
    axes.title = "a < b & c";
    const std::string svg = render_svg(ring(3, 1.0), axes);
    CHECK(svg.find("a &lt; b &amp; c") != std::string::npos);
}

TEST_CASE("svg viewport encloses points with margin", "[io]") {
    std::vector<Point2> pts;
    for (int i = 0; i <= 60; ++i) pts.push_back({-3.0 + 0.1 * i, std::sin(0.3 * i)});
    const Bounds b = padded_bounds(pts);
    CHECK(b.xmin == Catch::Approx(-3.3));
    CHECK(b.xmax == Catch::Approx(3.3));

    AxesSpec axes;
    const std::string svg = render_svg(pts, axes);
    // plot area is the first framed rect; every marker sits at least 5% / 110% inside it
    const std::regex area(R"re(<rect x="([\d.]+)" y="([\d.]+)" width="([\d.]+)" height="([\d.]+)")re");
    std::smatch m;
    REQUIRE(std::regex_search(svg, m, area));
    const double x0 = std::stod(m[1]), y0 = std::stod(m[2]), w = std::stod(m[3]), h = std::stod(m[4]);
    const double gap_x = w * 0.05 / 1.1 - 0.01, gap_y = h * 0.05 / 1.1 - 0.01;
    const std::regex circle(R"re(<circle cx="([-\d.]+)" cy="([-\d.]+)")re");
    int seen = 0;
    for (auto it = std::sregex_iterator(svg.begin(), svg.end(), circle); it != std::sregex_iterator();
         ++it, ++seen) {
        const double cx = std::stod((*it)[1]), cy = std::stod((*it)[2]);
        CHECK(cx >= x0 + gap_x);
        CHECK(cx <= x0 + w - gap_x);
        CHECK(cy >= y0 + gap_y);
        CHECK(cy <= y0 + h - gap_y);
    }
    CHECK(seen == 61);
}

TEST_CASE("svg refuses empty data", "[io]") {
    CHECK_THROWS_AS(render_svg({}, AxesSpec{}), std::invalid_argument);
    const std::vector<Point2> only_nan{{NAN, NAN}};
    CHECK_THROWS_AS(render_svg(only_nan, AxesSpec{}), std::invalid_argument);
    // a single point still gets a window
    const std::vector<Point2> one{{2.0, 2.0}};
    CHECK_NOTHROW(render_svg(one, AxesSpec{}));
}
