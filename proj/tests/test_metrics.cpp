#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#include "scenex/metrics.hpp"
#include "scenex/simulator.hpp"

using namespace scenex;

namespace {

// Two straight routes crossing at the origin: A runs south-north (conflict at
// s_a = 10), B runs west-east (conflict at s_b = 5).
ScenarioTemplate cross_template(double r_a, double r_b) {
  ScenarioTemplate t;
  ActorSpec a;
  a.id = ActorId::Ego;
  a.route = Polyline({{0.0, -10.0}, {0.0, 10.0}});
  a.radius = r_a;
  ActorSpec b;
  b.id = ActorId::Pedestrian;
  b.route = Polyline({{-5.0, 0.0}, {5.0, 0.0}});
  b.radius = r_b;
  t.actors = {a, b};
  return t;
}

ActorState state_at(ActorId id, Vec2 pos, Vec2 vel, double path_s = 0.0) {
  ActorState st;
  st.actor = id;
  st.position = pos;
  st.velocity = vel;
  st.path_s = path_s;
  return st;
}

void add_frame(SimulationTrace& trace, double t, std::vector<ActorState> states) {
  Frame f;
  f.t = t;
  f.states = std::move(states);
  trace.frames.push_back(std::move(f));
}

// Reference solver for the worst-case approach time: grow the bracket until
// the travelled distance covers the gap, then bisect.
double wttc_bisection(double speed_sum, double accel, double gap) {
  auto travelled = [&](double t) { return speed_sum * t + 0.5 * accel * t * t; };
  double hi = 1.0;
  while (travelled(hi) < gap) hi *= 2.0;
  double lo = 0.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (travelled(mid) < gap ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

TEST_CASE("metric names and directions") {
  for (Metric m : {Metric::Euclidean, Metric::TrajectoryDistance, Metric::TTC, Metric::WTTC,
                   Metric::PET}) {
    CHECK(metric_from_string(to_string(m)) == m);
    CHECK(direction_of(m) == Direction::Minimize);
  }
  CHECK_THROWS_AS(metric_from_string("drac"), std::invalid_argument);
  CHECK(worst_case_accel_for(ActorId::Pedestrian) == kPedestrianWorstCaseAccel);
  CHECK(worst_case_accel_for(ActorId::Ego) == kVehicleWorstCaseAccel);
  CHECK(worst_case_accel_for(ActorId::CarC) == kVehicleWorstCaseAccel);
}

TEST_CASE("euclidean series records per-frame center distance") {
  SimulationTrace trace;
  add_frame(trace, 0.0,
            {state_at(ActorId::Ego, {0.0, 0.0}, {}), state_at(ActorId::Pedestrian, {3.0, 4.0}, {})});
  add_frame(trace, 0.1,
            {state_at(ActorId::Ego, {0.0, 0.0}, {}), state_at(ActorId::Pedestrian, {0.0, 2.0}, {})});
  const auto s = euclidean_series(trace, ActorId::Ego, ActorId::Pedestrian);
  REQUIRE(s.values.size() == 2);
  CHECK(s.values[0] == doctest::Approx(5.0));
  CHECK(s.values[1] == doctest::Approx(2.0));
  CHECK(s.summary == doctest::Approx(2.0));
  CHECK(s.direction == Direction::Minimize);
}

TEST_CASE("worst-case approach time: stationary analytic case") {
  // gap 8 m, combined worst-case acceleration 4 m/s^2, both at rest:
  // 0.5 * 4 * t^2 = 8  =>  t = 2 s exactly.
  const auto tmpl = cross_template(1.0, 1.0);
  SimulationTrace trace;
  add_frame(trace, 0.0, {state_at(ActorId::Ego, {0.0, 0.0}, {0.0, 0.0}),
                         state_at(ActorId::Pedestrian, {10.0, 0.0}, {0.0, 0.0})});
  const auto s = wttc_series(trace, ActorId::Ego, ActorId::Pedestrian, tmpl, 2.0, 2.0);
  REQUIRE(s.values.size() == 1);
  CHECK(s.values[0] == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("worst-case approach time matches a bisection oracle") {
  const auto tmpl = cross_template(1.0, 0.3);
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> pos(-40.0, 40.0);
  std::uniform_real_distribution<double> vel(-15.0, 15.0);
  for (int trial = 0; trial < 300; ++trial) {
    const Vec2 pa{pos(rng), pos(rng)};
    const Vec2 pb{pos(rng), pos(rng)};
    const Vec2 va{vel(rng), vel(rng)};
    const Vec2 vb{vel(rng), vel(rng)};
    SimulationTrace trace;
    add_frame(trace, 0.0,
              {state_at(ActorId::Ego, pa, va), state_at(ActorId::Pedestrian, pb, vb)});
    const auto s = wttc_series(trace, ActorId::Ego, ActorId::Pedestrian, tmpl);
    const double gap = distance(pa, pb) - 1.0 - 0.3;
    double expected;
    if (gap <= 0.0) {
      expected = 0.0;
    } else {
      const double accel =
          worst_case_accel_for(ActorId::Ego) + worst_case_accel_for(ActorId::Pedestrian);
      expected = std::min(wttc_bisection(va.norm() + vb.norm(), accel, gap), kTimeCap);
    }
    REQUIRE(s.values.size() == 1);
    CHECK(s.values[0] == doctest::Approx(expected).epsilon(1e-6));
  }
}

TEST_CASE("worst-case approach time caps and argument checks") {
  const auto tmpl = cross_template(1.0, 1.0);
  SimulationTrace trace;
  // overlapping discs
  add_frame(trace, 0.0, {state_at(ActorId::Ego, {0.0, 0.0}, {}),
                         state_at(ActorId::Pedestrian, {1.5, 0.0}, {})});
  // far beyond anything reachable inside the horizon
  add_frame(trace, 0.1, {state_at(ActorId::Ego, {0.0, 0.0}, {}),
                         state_at(ActorId::Pedestrian, {5000.0, 0.0}, {})});
  const auto s = wttc_series(trace, ActorId::Ego, ActorId::Pedestrian, tmpl, 2.0, 2.0);
  CHECK(s.values[0] == 0.0);
  CHECK(s.values[1] == kTimeCap);
  CHECK_THROWS_AS(wttc_series(trace, ActorId::Ego, ActorId::Pedestrian, tmpl, 0.0, 2.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(wttc_series(trace, ActorId::Ego, ActorId::Pedestrian, tmpl, 2.0, -1.0),
                  std::invalid_argument);
}

TEST_CASE("time to collision, head-on and receding") {
  const auto tmpl = cross_template(1.0, 1.0);
  SimulationTrace trace;
  // head-on: gap 8, closing speed 2 -> 4 s
  add_frame(trace, 0.0, {state_at(ActorId::Ego, {0.0, 0.0}, {1.0, 0.0}),
                         state_at(ActorId::Pedestrian, {10.0, 0.0}, {-1.0, 0.0})});
  // receding
  add_frame(trace, 0.1, {state_at(ActorId::Ego, {0.0, 0.0}, {-1.0, 0.0}),
                         state_at(ActorId::Pedestrian, {10.0, 0.0}, {1.0, 0.0})});
  // parallel motion: no closing component
  add_frame(trace, 0.2, {state_at(ActorId::Ego, {0.0, 0.0}, {0.0, 3.0}),
                         state_at(ActorId::Pedestrian, {10.0, 0.0}, {0.0, 3.0})});
  // already overlapping
  add_frame(trace, 0.3, {state_at(ActorId::Ego, {0.0, 0.0}, {1.0, 0.0}),
                         state_at(ActorId::Pedestrian, {1.0, 0.0}, {0.0, 0.0})});
  const auto s = ttc_series(trace, ActorId::Ego, ActorId::Pedestrian, tmpl);
  REQUIRE(s.values.size() == 4);
  CHECK(s.values[0] == doctest::Approx(4.0));
  CHECK(s.values[1] == kTimeCap);
  CHECK(s.values[2] == kTimeCap);
  CHECK(s.values[3] == 0.0);
  CHECK(s.summary == 0.0);
}

TEST_CASE("time to collision is capped from above") {
  const auto tmpl = cross_template(1.0, 1.0);
  SimulationTrace trace;
  // gap 98, closing 0.1 -> 980 s, clipped to the horizon
  add_frame(trace, 0.0, {state_at(ActorId::Ego, {0.0, 0.0}, {0.1, 0.0}),
                         state_at(ActorId::Pedestrian, {100.0, 0.0}, {0.0, 0.0})});
  const auto s = ttc_series(trace, ActorId::Ego, ActorId::Pedestrian, tmpl);
  CHECK(s.values[0] == kTimeCap);
}

TEST_CASE("course distance sums remaining route lengths, then freezes") {
  const auto tmpl = cross_template(1.0, 1.0);
  const Polyline& ra = tmpl.actors[0].route;
  const Polyline& rb = tmpl.actors[1].route;
  auto at = [&](double sa, double sb) {
    return std::vector<ActorState>{
        state_at(ActorId::Ego, ra.point_at(sa), {}, sa),
        state_at(ActorId::Pedestrian, rb.point_at(sb), {}, sb)};
  };
  SimulationTrace trace;
  add_frame(trace, 0.0, at(0.0, 0.0));    // 10 + 5
  add_frame(trace, 0.1, at(5.0, 2.0));    // 5 + 3
  add_frame(trace, 0.2, at(12.0, 4.0));   // A past the crossing: hold max(8, dist)
  add_frame(trace, 0.3, at(20.0, 10.0));  // both long gone: plain distance wins
  const auto s =
      trajectory_distance_series(trace, ActorId::Ego, ActorId::Pedestrian, tmpl);
  REQUIRE(s.values.size() == 4);
  CHECK(s.values[0] == doctest::Approx(15.0));
  CHECK(s.values[1] == doctest::Approx(8.0));
  CHECK(s.values[2] == doctest::Approx(8.0));  // dist((0,2),(-1,0)) ~ 2.24 < frozen 8
  CHECK(s.values[3] == doctest::Approx(std::sqrt(125.0)));
  CHECK(s.summary == doctest::Approx(8.0));

  // no shared conflict point: parallel routes
  ScenarioTemplate par = tmpl;
  par.actors[1].route = Polyline({{1.0, -10.0}, {1.0, 10.0}});
  CHECK_THROWS_AS(trajectory_distance_series(trace, ActorId::Ego, ActorId::Pedestrian, par),
                  std::invalid_argument);
}

TEST_CASE("post-encroachment time through a fixed zone") {
  const Disc zone{{0.0, 0.0}, 2.0};
  const Vec2 in{0.0, 0.0};
  const Vec2 out{50.0, 50.0};

  SimulationTrace gapped;
  add_frame(gapped, 0.0, {state_at(ActorId::Ego, in, {}), state_at(ActorId::Pedestrian, out, {})});
  add_frame(gapped, 1.0, {state_at(ActorId::Ego, in, {}), state_at(ActorId::Pedestrian, out, {})});
  add_frame(gapped, 2.0, {state_at(ActorId::Ego, out, {}), state_at(ActorId::Pedestrian, out, {})});
  add_frame(gapped, 3.0, {state_at(ActorId::Ego, out, {}), state_at(ActorId::Pedestrian, in, {})});
  const auto s = pet(gapped, ActorId::Ego, ActorId::Pedestrian, zone);
  REQUIRE(s.values.size() == 1);
  // A exits at t=1, B enters at t=3
  CHECK(s.values[0] == doctest::Approx(2.0));
  CHECK(s.summary == doctest::Approx(2.0));

  // reversed visit order measures the same kind of gap
  const auto r = pet(gapped, ActorId::Pedestrian, ActorId::Ego, zone);
  CHECK(r.values[0] == doctest::Approx(2.0));

  SimulationTrace overlapping;
  add_frame(overlapping, 0.0,
            {state_at(ActorId::Ego, in, {}), state_at(ActorId::Pedestrian, {1.0, 0.0}, {})});
  CHECK(pet(overlapping, ActorId::Ego, ActorId::Pedestrian, zone).values[0] == 0.0);

  SimulationTrace never;
  add_frame(never, 0.0, {state_at(ActorId::Ego, in, {}), state_at(ActorId::Pedestrian, out, {})});
  CHECK(pet(never, ActorId::Ego, ActorId::Pedestrian, zone).values[0] == kTimeCap);
}

TEST_CASE("summarize obeys the series direction and rejects empty input") {
  CriticalitySeries s;
  s.direction = Direction::Minimize;
  s.values = {3.0, 1.0, 2.0};
  CHECK(summarize(s) == 1.0);
  s.direction = Direction::Maximize;
  CHECK(summarize(s) == 3.0);
  s.values.clear();
  CHECK_THROWS_AS(summarize(s), std::invalid_argument);
}

TEST_CASE("metric dispatch agrees with the direct functions") {
  const ScenarioTemplate tmpl = ScenarioTemplate::scenario1();
  ScenarioIdAllocator ids;
  const ConcreteScenario scn =
      make_scenario(tmpl.default_space(), {20.0, 1.0, 6.0}, ScenarioSource::Grid, ids);
  const SimulationTrace trace = simulate(scn, tmpl);
  const ActorId a = ActorId::Ego;
  const ActorId b = ActorId::Pedestrian;

  CHECK(compute_series(trace, Metric::Euclidean, a, b, tmpl).values ==
        euclidean_series(trace, a, b).values);
  CHECK(compute_series(trace, Metric::TrajectoryDistance, a, b, tmpl).values ==
        trajectory_distance_series(trace, a, b, tmpl).values);
  CHECK(compute_series(trace, Metric::TTC, a, b, tmpl).values ==
        ttc_series(trace, a, b, tmpl).values);
  CHECK(compute_series(trace, Metric::WTTC, a, b, tmpl).values ==
        wttc_series(trace, a, b, tmpl).values);
  CHECK(compute_series(trace, Metric::PET, a, b, tmpl).values == pet(trace, a, b, tmpl).values);

  const auto w = compute_series(trace, Metric::WTTC, a, b, tmpl);
  CHECK(w.summary == summarize(w));
  CHECK(w.actor_a == a);
  CHECK(w.actor_b == b);
}
