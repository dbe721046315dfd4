#include <doctest.h>

#include <atomic>
#include <filesystem>
#include <fstream>

#include "kpzlab/figures.hpp"
#include "kpzlab/harness.hpp"
#include "kpzlab/suites.hpp"

using namespace kpzlab;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / ("kpzlab_test_" + name);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

}  // namespace

TEST_CASE("config parsing, sections and overrides") {
    const Config c = Config::parse("seed = 4\n# comment\n[tolerances]\nmv = 1e-7 ; trailing\n[cache]\nenabled=no\n");
    CHECK(c.get_int("run", "seed") == 4);
    CHECK(c.get_double("tolerances", "mv") == 1e-7);
    CHECK_FALSE(c.get_bool("cache", "enabled"));
    Config d = Config::defaults();
    d.merge(c);
    CHECK(d.get_int("run", "seed") == 4);
    CHECK(d.get_int("run", "n") == 500);
    CHECK(d.tolerances().mv == 1e-7);
    CHECK(d.tolerances().stab == Tolerances{}.stab);
    CHECK(Config::parse(d.to_text()).to_json() == d.to_json());
}

TEST_CASE("config errors") {
    CHECK_THROWS_AS(Config::parse("[broken\n"), ConfigError);
    CHECK_THROWS_AS(Config::parse("novalue\n"), ConfigError);
    CHECK_THROWS_AS(Config::parse("x = abc").get_double("run", "x"), ConfigError);
    CHECK_THROWS_AS(Config::parse("x = 1.5").get_int("run", "x"), ConfigError);
    CHECK_THROWS_AS(Config::parse("x = maybe").get_bool("run", "x"), ConfigError);
    CHECK_THROWS_AS(Config::parse("[tolerances]\nbogus = 1").tolerances(), ConfigError);
    CHECK_THROWS_AS(Config{}.get("run", "seed"), ConfigError);
    CHECK_THROWS_AS(Config::load("/nonexistent/kpzlab.cfg"), ConfigError);
}

TEST_CASE("default tolerances are all in the defaults") {
    const Config d = Config::defaults();
    const json tol = to_json(Tolerances{});
    for (const auto& [k, v] : tol.items()) CHECK(d.has("tolerances", k));
}

TEST_CASE("manifests round trip") {
    const fs::path dir = scratch("manifest");
    RunManifest m;
    m.env = EnvironmentSpec{9};
    m.n = 321;
    m.operation = "lpp";
    m.params = {{"argv", {"lpp", "--lattice"}}};
    m.outputs = {"a.csv"};
    m.write(dir / "manifest.json");
    const RunManifest r = RunManifest::read(dir / "manifest.json");
    CHECK(r.env.seed == 9);
    CHECK(r.n == 321);
    CHECK(r.operation == "lpp");
    CHECK(r.params == m.params);
    CHECK(r.outputs == m.outputs);
    CHECK(r.version == kVersion);
}

TEST_CASE("sha256 known answers") {
    CHECK(sha256_hex("") == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
    CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST_CASE("cache: hit, corruption and disable") {
    const fs::path dir = scratch("cache");
    Cache c(dir);
    const json desc{{"what", "test"}, {"k", 1}};
    int computed = 0;
    auto compute = [&] {
        ++computed;
        return std::vector<double>{1.5, -2.0, 3.25};
    };
    CHECK(c.get_or_compute(desc, compute) == std::vector<double>{1.5, -2.0, 3.25});
    CHECK(c.get_or_compute(desc, compute) == std::vector<double>{1.5, -2.0, 3.25});
    CHECK(computed == 1);
    CHECK(c.hits == 1);
    CHECK(fs::exists(dir / (Cache::key(desc) + ".json")));
    {
        std::fstream f(dir / (Cache::key(desc) + ".bin"), std::ios::in | std::ios::out | std::ios::binary);
        f.seekp(3);
        f.put('\x7f');
    }
    CHECK(c.get_or_compute(desc, compute) == std::vector<double>{1.5, -2.0, 3.25});
    CHECK(computed == 2);
    CHECK(c.corrupt == 1);
    CHECK(c.warnings.size() == 1);
    CHECK(c.load(desc).has_value());
    Cache off(dir, false);
    CHECK_FALSE(off.load(desc).has_value());
    CHECK(off.misses == 1);
    CHECK(off.get_or_compute(desc, compute).size() == 3);
    CHECK(computed == 3);
}

TEST_CASE("cached far fields equal computed ones") {
    const fs::path dir = scratch("farfield");
    const ScalingParams p(60);
    const EnvironmentSpec env{3};
    FieldLayout l;
    l.add(p, 0.0, -0.5, 0.5);
    Cache c(dir);
    const FarField a = cached_far_field(&c, env, p, 0.1, 4.0, l);
    const FarField b = cached_far_field(&c, env, p, 0.1, 4.0, l);
    const FarField ref = far_field(env, p, 0.1, 4.0, l);
    CHECK(c.hits == 1);
    REQUIRE(b.slices.size() == ref.slices.size());
    for (size_t i = 0; i < ref.slices.size(); ++i) {
        CHECK(a.slices[i].value == ref.slices[i].value);
        CHECK(b.slices[i].value == ref.slices[i].value);
        CHECK(b.slices[i].m_lo == ref.slices[i].m_lo);
    }
    CHECK(b.v == ref.v);
}

TEST_CASE("parallel map keeps index order") {
    for (int threads : {1, 3}) {
        const auto v = parallel_map<int>(100, threads, [](size_t i) { return int(i * i); });
        for (size_t i = 0; i < v.size(); ++i) CHECK(v[i] == int(i * i));
    }
}

TEST_CASE("figures are deterministic and handle empty input") {
    Plot p;
    p.title = "t";
    p.series.push_back({"a", {0, 1, 2}, {1, 0, 1}});
    CHECK(p.to_svg() == p.to_svg());
    CHECK(p.to_svg().find("<svg") != std::string::npos);
    CHECK(p.to_csv().rfind("series,x,y\n", 0) == 0);
    Plot e;
    CHECK(e.empty());
    CHECK(e.to_svg().find("no data") != std::string::npos);
    const fs::path dir = scratch("figures");
    CHECK(emit_plot(p, dir, "fig").size() == 2);
    CHECK(fs::exists(dir / "fig.svg"));
}

TEST_CASE("interface figure draws rays below the interfaces") {
    const ScalingParams params(100);
    InterfaceTrace t;
    t.levels = {0, 10};
    t.times = {0.0, 0.05};
    t.minus = {Position::at(0), Position::at(-2)};
    t.plus = {Position::at(0), Position::at(4)};
    GeodesicRay r;
    r.levels = {10, 9, 8};
    r.m = {0, 1, 0};
    const Plot p = interface_plot(params, t, {r});
    REQUIRE(p.series.size() == 3);
    CHECK(p.series[0].dashed);
    CHECK(p.series[1].name.find('-') != std::string::npos);
}

TEST_CASE("suite registry and a quick suite") {
    CHECK(find_suite("composition") != nullptr);
    CHECK(find_suite("nope") == nullptr);
    CHECK_THROWS_AS(run_suite("nope", SuiteOptions{}), ConfigError);
    int criteria = 0;
    for (const auto& s : suites()) criteria += s.criterion > 0;
    CHECK(criteria == 13);
    SuiteOptions o;
    const SuiteReport r = run_suite("lpp-core", o);
    CHECK(r.passed());
    CHECK(r.line().rfind("PASS", 0) == 0);
    CHECK(r.to_json()["status"] == "pass");
}
