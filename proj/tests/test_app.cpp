#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "config.hpp"
#include "figures.hpp"
#include "output.hpp"
#include "run.hpp"

using namespace dicke::app;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
    const auto p = fs::temp_directory_path() / ("dicke_unit_" + name);
    fs::remove_all(p);
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace

TEST_SUITE("app") {

TEST_CASE("grids: lists, linear, log and relative") {
    auto c = parse_config("mode: steady-state\n"
                          "lambda_grid: {start: 0.5, stop: 1.0, count: 3, relative: true}\n");
    REQUIRE(c.lambda_grid.size() == 3);
    const double lc = dicke::critical_coupling(c.params);
    CHECK(c.lambda_grid[0] == doctest::Approx(0.5 * lc));
    CHECK(c.lambda_grid[2] == doctest::Approx(lc));

    c = parse_config("mode: modulate\nlambda_grid: [1, 2]\nnu_grid: {start: 0.1, stop: 10, count: 3, scale: log}\n");
    REQUIRE(c.nu_grid.size() == 3);
    CHECK(c.nu_grid[1] == doctest::Approx(1.0));
}

TEST_CASE("configuration errors name the key and position") {
    try {
        parse_config("mode: steady-state\nparams: {omega: 300, omegaa: 1}\n");
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        const std::string msg = e.what();
        CHECK(msg.find("omegaa") != std::string::npos);
        CHECK(msg.find("line") != std::string::npos);
    }
    CHECK_THROWS_AS(parse_config("mode: nonsense\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("mode: g2\nparams: {omega: abc}\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("mode: steady-state\nlambda_grid: [3, 1, 2]\n"), ConfigError);
}

TEST_CASE("validation: empty grids and missing pieces") {
    CHECK_THROWS_AS(validate(parse_config("mode: steady-state\n")), ConfigError);
    CHECK_THROWS_AS(validate(parse_config("mode: spectrum\nlambda_grid: []\n")), ConfigError);
    CHECK_THROWS_AS(validate(parse_config("mode: modulate\nlambda_grid: [1]\n")), ConfigError);
    CHECK_THROWS_AS(validate(parse_config("mode: map-params\n")), ConfigError);
    CHECK_THROWS_AS(validate(parse_config("mode: reproduce-figure\nfigure: fig9\n")), ConfigError);
    CHECK_THROWS_AS(validate(parse_config("mode: reproduce-figure\nfigure: fig5\n")), ConfigError);
    CHECK_NOTHROW(validate(parse_config("mode: g2\nparams: {lambda: 5}\n")));
}

TEST_CASE("empty grid writes nothing") {
    CHECK_THROWS_AS(parse_config("mode: photon-flux\nlambda_grid: []\n"), ConfigError);
    auto c = parse_config("mode: photon-flux\nlambda_grid: [1, 2]\n");
    c.lambda_grid.clear();
    c.out_dir = scratch("empty").string();
    try {
        run(c, "test");
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(exit_code_for(e) == 2);
    }
    CHECK_FALSE(fs::exists(c.out_dir));
}

TEST_CASE("csv and json writers") {
    Table t{"t", "demo", {"a [1]", "b, quoted", "c"}, {}};
    t.add({1.5, std::string("x\"y"), std::monostate{}});
    t.add({std::nan(""), 7LL, std::string("plain")});
    CHECK(to_csv(t) == "a [1],\"b, quoted\",c\n1.5,\"x\"\"y\",\nnan,7,plain\n");
    const auto j = to_json(t);
    CHECK(j["rows"][1][0].is_null());
    CHECK(j["rows"][0][2].is_null());
    CHECK(j["columns"][1] == "b, quoted");
    CHECK_THROWS_AS(t.add({1.0}), std::logic_error);
    CHECK(format_double(0.1) == "0.1");
    CHECK(format_double(-INFINITY) == "-inf");
}

TEST_CASE("sha256 known answers") {
    CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
    CHECK(sha256_hex("") == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
}

TEST_CASE("runs are byte-for-byte deterministic and the manifest lists checksums") {
    const std::string yaml = "mode: spectrum\n"
                             "lambda_grid: {start: 0.1, stop: 1.2, count: 12, relative: true}\n"
                             "output: {format: both}\n";
    auto a = parse_config(yaml), b = parse_config(yaml);
    a.out_dir = scratch("det_a").string();
    b.out_dir = scratch("det_b").string();
    b.workers = 4;
    const auto ra = run(a, "test"), rb = run(b, "test");
    REQUIRE(ra.files == rb.files);
    REQUIRE_FALSE(ra.files.empty());
    const auto manifest = Json::parse(slurp(fs::path(a.out_dir) / "manifest.json"));
    for (const auto& f : ra.files) {
        const auto x = slurp(fs::path(a.out_dir) / f);
        CHECK(x == slurp(fs::path(b.out_dir) / f));
        bool listed = false;
        for (const auto& e : manifest["files"]) {
            if (e["file"] == f) listed = e["sha256"] == sha256_hex(x);
        }
        CHECK(listed);
    }
    CHECK(manifest["config_sha256"] == sha256_hex(yaml));
    CHECK(manifest["version"] == tool_version());
}

TEST_CASE("figure table covers fig1..fig5") {
    for (const char* id : {"fig1", "fig2", "fig3", "fig4", "fig5"}) {
        const auto s = figure_spec(id);
        CHECK(s.id == id);
        CHECK_FALSE(s.description.empty());
    }
    CHECK_THROWS(figure_spec("fig6"));
}

}
