#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <sstream>
#include <stdexcept>

#include "oracles.hpp"
#include "purcell/config.hpp"
#include "purcell/csv.hpp"
#include "purcell/errors.hpp"
#include "purcell/svg.hpp"
#include "purcell/sweep.hpp"

using namespace purcell;

namespace {

Config parse(const std::string& text, const std::string& section) {
    std::istringstream in(text);
    return Config::parse(in, "test.ini", section);
}

std::string error_of(const std::string& text, const std::string& section) {
    try {
        parse(text, section);
    } catch (const ConfigError& e) {
        return e.what();
    }
    return "";
}

SweepTable sample_table() {
    SweepTable t;
    t.axis_name = "eta/delta_omega";
    t.axis_values = {0.001, 0.01, 0.1, 1.0};
    t.series = {{"N=60,Ns=15", {318.3, 31.8, 3.2, 0.97}}, {"golden-rule", {1, 1, 1, 1}}};
    t.metadata = {{"tool", "purcell-adsorb"}, {"n_s", "15"}};
    return t;
}

}  // namespace

TEST_CASE("config sections and precedence") {
    const std::string text =
        "# globals\n"
        "e_b = 2.0\n"
        "g = 0.5\n"
        "[rate-sweep]\n"
        "g = 0.7   ; section wins\n"
        "n_modes = 4, 60\n"
        "n_s = [1 15]\n"
        "[dynamics]\n"
        "g = 0.9\n";
    Config rate = parse(text, "rate-sweep");
    CHECK(rate.real("e_b", 0.0) == 2.0);
    CHECK(rate.real("g", 0.0) == 0.7);
    CHECK(rate.integers("n_modes", {}) == std::vector<int>{4, 60});
    CHECK(rate.reals("n_s", {}) == std::vector<double>{1.0, 15.0});
    CHECK(rate.real("eta", 0.25) == 0.25);
    CHECK_FALSE(rate.has("eta"));

    Config dyn = parse(text, "dynamics");
    CHECK(dyn.real("g", 0.0) == 0.9);
    dyn.set("g", "1.5", "--g");
    CHECK(dyn.real("g", 0.0) == 1.5);
    CHECK(dyn.entries().at("g").origin == "--g");

    Config poles = parse(text, "poles");
    CHECK(poles.real("g", 0.0) == 0.5);
}

TEST_CASE("config errors name the line") {
    CHECK(error_of("e_b = 1\nbogus = 3\n", "poles").find("test.ini:2") != std::string::npos);
    CHECK(error_of("e_b = 1\nbogus = 3\n", "poles").find("bogus") != std::string::npos);
    CHECK(error_of("[nowhere]\n", "poles").find("test.ini:1") != std::string::npos);
    CHECK(error_of("\n\ne_b 1\n", "poles").find("test.ini:3") != std::string::npos);
    CHECK(error_of("[poles\n", "poles").find("test.ini:1") != std::string::npos);

    Config c = parse("g = abc\nn_modes = 2.5\n", "poles");
    CHECK_THROWS_WITH_AS((void)c.real("g", 0.0), doctest::Contains("test.ini:1"), ConfigError);
    CHECK_THROWS_WITH_AS((void)c.integer("n_modes", 0), doctest::Contains("test.ini:2"), ConfigError);
    CHECK_THROWS_AS(c.set("nope", "1", "--nope"), ConfigError);
    CHECK_THROWS_AS(Config::load("/nonexistent/file.ini", "poles"), ConfigError);
}

TEST_CASE("csv round trip") {
    const SweepTable t = sample_table();
    const std::string text = to_csv(t);
    CHECK(text.find("\"N=60,Ns=15\"") != std::string::npos);
    CHECK(text.rfind("# ", 0) == 0);
    CHECK(parse_csv(text) == t);
}

TEST_CASE("csv round trip on random tables") {
    for (int trial = 0; trial < 100; ++trial) {
        SweepTable t;
        t.axis_name = "x";
        const int rows = oracle::uniform_int(1, 30);
        double x = oracle::uniform(-5.0, 5.0);
        for (int r = 0; r < rows; ++r) {
            t.axis_values.push_back(std::stod(format_number(x)));
            x += oracle::uniform(0.01, 3.0);
        }
        const int cols = oracle::uniform_int(1, 4);
        for (int c = 0; c < cols; ++c) {
            Series s{"s" + std::to_string(c) + (c % 2 ? ",q" : ""), {}};
            for (int r = 0; r < rows; ++r) {
                const double v = std::exp(oracle::uniform(-30.0, 30.0)) * (oracle::uniform(0, 1) < 0.5 ? -1 : 1);
                s.values.push_back(std::stod(format_number(v)));
            }
            t.series.push_back(s);
        }
        t.metadata["trial"] = std::to_string(trial);
        const SweepTable back = parse_csv(to_csv(t));
        CHECK(back == t);
        CHECK(to_csv(back) == to_csv(t));
    }
}

TEST_CASE("csv footer is parsed as metadata") {
    SweepTable t = sample_table();
    const std::string text = to_csv(t, {{"residue_sum", "1.000000000"}});
    const std::string tail = text.substr(text.size() - 26);
    CHECK(tail == "# residue_sum=1.000000000\n");
    CHECK(parse_csv(text).metadata.at("residue_sum") == "1.000000000");
}

TEST_CASE("csv parse errors") {
    CHECK_THROWS_AS(parse_csv(std::string("# a=1\n")), ConfigError);
    CHECK_THROWS_WITH_AS(parse_csv(std::string("x,y\n1,2\n3\n")), doctest::Contains("row"), ConfigError);
    CHECK_THROWS_AS(parse_csv(std::string("x,y\n1,abc\n")), ConfigError);
    CHECK_THROWS_AS(parse_csv(std::string("x,\"y\n1,2\n")), ConfigError);
}

TEST_CASE("sweep table validation") {
    SweepTable t = sample_table();
    CHECK_NOTHROW(t.validate());
    t.series[0].values.pop_back();
    CHECK_THROWS_AS(t.validate(), InvalidGrid);
    t = sample_table();
    t.axis_values[2] = 0.001;
    CHECK_THROWS_AS(t.validate(), InvalidGrid);
    CHECK_THROWS_AS((void)sample_table().find("missing"), InvalidGrid);
    CHECK(sample_table().find("golden-rule").values.size() == 4);
}

TEST_CASE("grids") {
    const auto g = log_grid(1e-3, 1.0, 200);
    REQUIRE(g.size() == 200);
    CHECK(g.front() == 1e-3);
    CHECK(g.back() == 1.0);
    for (std::size_t i = 1; i < g.size(); ++i) {
        CHECK(std::log(g[i] / g[i - 1]) == doctest::Approx(std::log(1e3) / 199).epsilon(1e-10));
    }
    const auto l = linear_grid(10.0, 16.0, 601);
    CHECK(l.front() == 10.0);
    CHECK(l.back() == 16.0);
    CHECK(l[300] == doctest::Approx(13.0).epsilon(1e-15));
    CHECK_THROWS_AS(log_grid(0.0, 1.0, 10), InvalidGrid);
    CHECK_THROWS_AS(log_grid(1.0, 0.5, 10), InvalidGrid);
    CHECK_THROWS_AS(linear_grid(0.0, 1.0, 1), InvalidGrid);
}

TEST_CASE("parallel_for visits each index once and rethrows") {
    std::vector<std::atomic<int>> hits(5000);
    parallel_for(hits.size(), [&](std::size_t i) { hits[i].fetch_add(1); });
    for (const auto& h : hits) CHECK(h.load() == 1);

    CHECK_THROWS_AS(parallel_for(100, [](std::size_t i) {
                        if (i == 37) throw std::runtime_error("boom");
                    }),
                    std::runtime_error);
    parallel_for(0, [](std::size_t) { FAIL("called"); });
}

TEST_CASE("thread count from the environment") {
    ::setenv("PURCELL_ADSORB_THREADS", "3", 1);
    CHECK(sweep_threads() == 3u);
    ::setenv("PURCELL_ADSORB_THREADS", "junk", 1);
    CHECK(sweep_threads() >= 1u);
    ::setenv("PURCELL_ADSORB_THREADS", "1", 1);
    std::vector<double> serial(300);
    parallel_for(serial.size(), [&](std::size_t i) { serial[i] = std::sin(double(i)); });
    ::setenv("PURCELL_ADSORB_THREADS", "8", 1);
    std::vector<double> threaded(300);
    parallel_for(threaded.size(), [&](std::size_t i) { threaded[i] = std::sin(double(i)); });
    CHECK(serial == threaded);
    ::unsetenv("PURCELL_ADSORB_THREADS");
}

TEST_CASE("number formatting") {
    CHECK(format_number(0.1) == "0.1");
    CHECK(format_number(1.0 / 3.0) == "0.333333333333");
    CHECK(format_number(1e-20) == "1e-20");
}

TEST_CASE("svg rendering") {
    SweepTable t = sample_table();
    t.series.push_back({"asymptote", {318.3, 31.83, 3.183, 0.3183}});
    PlotOptions opts;
    opts.title = "On resonance";
    opts.x_label = "eta / delta_omega";
    const std::string svg = render_svg(t, opts);
    CHECK(svg.find("<svg") != std::string::npos);
    CHECK(svg.find("</svg>") != std::string::npos);
    CHECK(svg.find("On resonance") != std::string::npos);
    CHECK(svg.find("N=60,Ns=15") != std::string::npos);
    CHECK(svg.find("stroke-dasharray") != std::string::npos);
    std::size_t lines = 0;
    for (std::size_t pos = 0; (pos = svg.find("<polyline", pos)) != std::string::npos; ++pos) ++lines;
    CHECK(lines == 3);
    CHECK(render_svg(t, opts) == svg);
}
