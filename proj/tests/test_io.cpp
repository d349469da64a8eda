#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <limits>
#include <random>

#include "scenex/io.hpp"
#include "scenex/simulator.hpp"

using namespace scenex;

TEST_CASE("format_double round-trips every value exactly") {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> uniform(-1e6, 1e6);
  std::exponential_distribution<double> expo(1.0);
  for (int i = 0; i < 2000; ++i) {
    double v = uniform(rng);
    if (i % 3 == 0) v = expo(rng) * 1e-200;  // tiny magnitudes
    if (i % 5 == 0) v = uniform(rng) * 1e290;
    const std::string s = format_double(v);
    CHECK(parse_double(s) == v);
  }
  CHECK(format_double(0.0) == "0");
  CHECK(parse_double(format_double(-0.0)) == 0.0);
  CHECK(parse_double(format_double(0.1)) == 0.1);
  CHECK(parse_double(format_double(1.0 / 3.0)) == 1.0 / 3.0);
  const double denorm = std::numeric_limits<double>::denorm_min();
  CHECK(parse_double(format_double(denorm)) == denorm);
}

TEST_CASE("strict parsing rejects trailing garbage") {
  CHECK(parse_double("1.5") == 1.5);
  CHECK(parse_double("-2e3") == -2000.0);
  CHECK_THROWS_AS(parse_double("1.5x"), std::exception);
  CHECK_THROWS_AS(parse_double(""), std::exception);
  CHECK_THROWS_AS(parse_double("abc"), std::exception);
  CHECK(parse_uint("42") == 42u);
  CHECK(parse_uint("0") == 0u);
  CHECK_THROWS_AS(parse_uint("-1"), std::exception);
  CHECK_THROWS_AS(parse_uint("12.5"), std::exception);
  CHECK_THROWS_AS(parse_uint(""), std::exception);
}

TEST_CASE("csv line splitting") {
  const auto f = split_csv_line("a,b,,d");
  REQUIRE(f.size() == 4);
  CHECK(f[0] == "a");
  CHECK(f[2] == "");
  CHECK(f[3] == "d");
  CHECK(split_csv_line("").size() == 1);
  CHECK(split_csv_line("x").size() == 1);
}

TEST_CASE("fnv1a64 matches published vectors") {
  CHECK(fnv1a64("") == 0xcbf29ce484222325ULL);
  CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cULL);
  CHECK(fnv1a64("foobar") == 0x85944171f73967e8ULL);
  CHECK(hex64(0xffULL) == "00000000000000ff");
  CHECK(hex64(0xcbf29ce484222325ULL) == "cbf29ce484222325");
}

TEST_CASE("text files round trip and file hashes match content hashes") {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "scenex_io_test";
  const fs::path file = dir / "nested" / "payload.txt";
  const std::string content = "line one\nline two\n\x01\x02 binary-ish\n";
  write_text_file(file, content);
  CHECK(read_text_file(file) == content);
  CHECK(fnv1a64_file(file) == fnv1a64(content));
  fs::remove_all(dir);
}

TEST_CASE("trace csv round trip is byte identical") {
  const ScenarioTemplate tmpl = ScenarioTemplate::scenario1();
  ScenarioIdAllocator ids;
  const ScenarioSpace space = tmpl.default_space();
  const ConcreteScenario s = make_scenario(space, {10.0, 2.0, 6.0}, ScenarioSource::Grid, ids);
  const SimulationTrace trace = simulate(s, tmpl);
  REQUIRE(!trace.frames.empty());

  const std::string csv = trace_to_csv(trace);
  const SimulationTrace back = trace_from_csv(csv);
  CHECK(trace_to_csv(back) == csv);

  CHECK(back.scenario_id == trace.scenario_id);
  CHECK(back.dt == trace.dt);
  CHECK(back.termination == trace.termination);
  CHECK(back.collision_time == trace.collision_time);
  REQUIRE(back.frames.size() == trace.frames.size());
  for (std::size_t f = 0; f < trace.frames.size(); ++f) {
    CHECK(back.frames[f].t == trace.frames[f].t);
    REQUIRE(back.frames[f].states.size() == trace.frames[f].states.size());
    for (std::size_t i = 0; i < trace.frames[f].states.size(); ++i) {
      const ActorState& x = trace.frames[f].states[i];
      const ActorState& y = back.frames[f].states[i];
      CHECK(x.actor == y.actor);
      CHECK(x.position.x == y.position.x);
      CHECK(x.position.y == y.position.y);
      CHECK(x.velocity.x == y.velocity.x);
      CHECK(x.velocity.y == y.velocity.y);
      CHECK(x.heading == y.heading);
      CHECK(x.path_s == y.path_s);
    }
  }
}

TEST_CASE("trace csv file i/o") {
  namespace fs = std::filesystem;
  const ScenarioTemplate tmpl = ScenarioTemplate::scenario1();
  ScenarioIdAllocator ids;
  const ConcreteScenario s =
      make_scenario(tmpl.default_space(), {0.0, 0.0, 3.0}, ScenarioSource::Initial, ids);
  const SimulationTrace trace = simulate(s, tmpl);

  const fs::path dir = fs::temp_directory_path() / "scenex_trace_test";
  const fs::path file = dir / "trace.csv";
  write_trace_csv(file, trace);
  const SimulationTrace back = read_trace_csv(file);
  CHECK(trace_to_csv(back) == trace_to_csv(trace));
  fs::remove_all(dir);
}

TEST_CASE("malformed trace csv is rejected") {
  CHECK_THROWS_AS(trace_from_csv(""), std::exception);
  CHECK_THROWS_AS(trace_from_csv("# scenario_id=0\nnot,a,header\n"), std::exception);
}
