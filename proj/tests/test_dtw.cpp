#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <random>
#include <stdexcept>
#include <vector>

#include "scenex/dtw.hpp"

using namespace scenex;

namespace {

// Reference alignment cost: enumerate every monotone path from (0,0) to
// (la-1, lb-1) with steps (1,0), (0,1), (1,1) and keep the cheapest. Only
// viable for short sequences, which is the point.
double dtw_by_enumeration(const Sequence& a, const Sequence& b) {
  const std::size_t la = a.length();
  const std::size_t lb = b.length();
  auto cost = [&](std::size_t i, std::size_t j) {
    double acc = 0.0;
    for (std::size_t k = 0; k < a.dim; ++k) {
      const double d = a.data[i * a.dim + k] - b.data[j * b.dim + k];
      acc += d * d;
    }
    return std::sqrt(acc);
  };
  double best = std::numeric_limits<double>::infinity();
  std::function<void(std::size_t, std::size_t, double)> walk =
      [&](std::size_t i, std::size_t j, double acc) {
        acc += cost(i, j);
        if (acc >= best) return;
        if (i + 1 == la && j + 1 == lb) {
          best = acc;
          return;
        }
        if (i + 1 < la) walk(i + 1, j, acc);
        if (j + 1 < lb) walk(i, j + 1, acc);
        if (i + 1 < la && j + 1 < lb) walk(i + 1, j + 1, acc);
      };
  walk(0, 0, 0.0);
  return best;
}

Sequence seq1(std::uint64_t id, std::vector<double> v) {
  return Sequence::from_scalars(id, std::move(v));
}

}  // namespace

TEST_CASE("hand-checked alignment") {
  // costs [[0,2],[1,1],[2,0]]; best path (0,0)->(1,0)->(2,1) = 0+1+0 = 1
  CHECK(dtw(seq1(0, {0.0, 1.0, 2.0}), seq1(1, {0.0, 2.0})) == 1.0);
  // identical sequences align along the diagonal for free
  CHECK(dtw(seq1(0, {3.0, 1.0, 4.0}), seq1(1, {3.0, 1.0, 4.0})) == 0.0);
  // single elements
  CHECK(dtw(seq1(0, {2.0}), seq1(1, {5.0})) == 3.0);
  // stretched plateau costs nothing extra
  CHECK(dtw(seq1(0, {0.0, 1.0}), seq1(1, {0.0, 1.0, 1.0, 1.0})) == 0.0);
}

TEST_CASE("alignment cost equals exhaustive path enumeration") {
  // all pairs of short integer-valued sequences: sums are exact in doubles
  std::vector<Sequence> all;
  for (int len = 1; len <= 4; ++len) {
    const int combos = static_cast<int>(std::pow(3, len));
    for (int c = 0; c < combos; ++c) {
      std::vector<double> v;
      int rest = c;
      for (int i = 0; i < len; ++i) {
        v.push_back(rest % 3);
        rest /= 3;
      }
      all.push_back(seq1(0, std::move(v)));
    }
  }
  // deterministic thinning keeps the runtime reasonable
  for (std::size_t i = 0; i < all.size(); i += 3) {
    for (std::size_t j = i; j < all.size(); j += 5) {
      CHECK(dtw(all[i], all[j]) == dtw_by_enumeration(all[i], all[j]));
    }
  }
}

TEST_CASE("random real-valued and planar sequences match the oracle") {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  std::uniform_int_distribution<int> len(1, 6);
  for (int trial = 0; trial < 150; ++trial) {
    const std::size_t dim = (trial % 2) ? 2u : 1u;
    Sequence a, b;
    a.dim = b.dim = dim;
    for (int i = 0; i < len(rng) * static_cast<int>(dim); ++i) a.data.push_back(u(rng));
    for (int i = 0; i < len(rng) * static_cast<int>(dim); ++i) b.data.push_back(u(rng));
    const double got = dtw(a, b);
    const double want = dtw_by_enumeration(a, b);
    CHECK(got == doctest::Approx(want).epsilon(1e-12));
    CHECK(dtw(b, a) == got);
    CHECK(got >= 0.0);
  }
}

TEST_CASE("band constraints") {
  const Sequence a = seq1(0, {0.0, 0.0, 0.0, 5.0, 0.0});
  const Sequence b = seq1(1, {0.0, 5.0, 0.0, 0.0, 0.0});
  // band 0 on equal lengths forces the diagonal
  double diag = 0.0;
  for (int i = 0; i < 5; ++i) diag += std::abs(a.data[i] - b.data[i]);
  CHECK(dtw(a, b, 0) == diag);
  // a generous band is the same as no band
  CHECK(dtw(a, b, 10) == dtw(a, b));
  // tighter bands can only cost more
  CHECK(dtw(a, b, 1) >= dtw(a, b, 2));
  CHECK(dtw(a, b, 2) >= dtw(a, b));
  // length mismatch widens the band so an alignment still exists
  const Sequence c = seq1(2, {1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0});
  const Sequence d = seq1(3, {1.0, 7.0});
  CHECK(std::isfinite(dtw(c, d, 0)));
  CHECK(dtw(c, d, 0) == dtw(c, d, 5));
}

TEST_CASE("invalid sequences are rejected") {
  CHECK_THROWS_AS(dtw(seq1(0, {}), seq1(1, {1.0})), std::invalid_argument);
  CHECK_THROWS_AS(dtw(seq1(0, {1.0}), seq1(1, {})), std::invalid_argument);
  Sequence planar = Sequence::from_points(0, {{1.0, 2.0}});
  CHECK_THROWS_AS(dtw(planar, seq1(1, {1.0})), std::invalid_argument);
}

TEST_CASE("sequence construction") {
  const Sequence s = Sequence::from_scalars(7, {1.0, 2.0});
  CHECK(s.scenario_id == 7);
  CHECK(s.dim == 1);
  CHECK(s.length() == 2);
  const Sequence p = Sequence::from_points(9, {{1.0, 2.0}, {3.0, 4.0}, {5.0, 6.0}});
  CHECK(p.dim == 2);
  CHECK(p.length() == 3);
  CHECK(p.data == std::vector<double>{1.0, 2.0, 3.0, 4.0, 5.0, 6.0});
}

TEST_CASE("stride sampling keeps the final frame") {
  SimulationTrace trace;
  trace.scenario_id = 42;
  for (int f = 0; f < 11; ++f) {
    Frame frame;
    frame.t = f * 0.05;
    ActorState st;
    st.actor = ActorId::Ego;
    st.position = {static_cast<double>(f), 0.0};
    frame.states.push_back(st);
    trace.frames.push_back(frame);
  }
  const Sequence s4 = extract_trajectory(trace, ActorId::Ego, 4);
  CHECK(s4.scenario_id == 42);
  CHECK(s4.dim == 2);
  // frames 0, 4, 8 plus the final frame 10
  REQUIRE(s4.length() == 4);
  CHECK(s4.data[0] == 0.0);
  CHECK(s4.data[2] == 4.0);
  CHECK(s4.data[4] == 8.0);
  CHECK(s4.data[6] == 10.0);
  // stride 5 lands exactly on the final frame: no duplicate
  CHECK(extract_trajectory(trace, ActorId::Ego, 5).length() == 3);
  CHECK(extract_trajectory(trace, ActorId::Ego, 1).length() == 11);
  // stride beyond the trace keeps first and last
  CHECK(extract_trajectory(trace, ActorId::Ego, 100).length() == 2);
  CHECK_THROWS_AS(extract_trajectory(trace, ActorId::Ego, 0), std::invalid_argument);
  CHECK_THROWS_AS(extract_trajectory(SimulationTrace{}, ActorId::Ego, 1),
                  std::invalid_argument);

  const std::vector<double> vals{0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
  const Sequence d4 = downsample_scalars(13, vals, 4);
  CHECK(d4.data == std::vector<double>{0, 4, 8, 10});
  CHECK(downsample_scalars(13, vals, 1).data == vals);
  CHECK_THROWS_AS(downsample_scalars(13, {}, 2), std::invalid_argument);
  CHECK_THROWS_AS(downsample_scalars(13, vals, 0), std::invalid_argument);
}

TEST_CASE("distance kinds") {
  CHECK(std::string(kKindEgoTrajectoryDtw) == "ego_trajectory_dtw");
  CHECK(metric_dtw_kind("wttc") == "metric_dtw:wttc");
  CHECK(metric_dtw_kind("ttc") == "metric_dtw:ttc");
}

TEST_CASE("pairwise matrix: one evaluation per pair, deterministic, symmetric") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 10.0);
  std::vector<Sequence> seqs;
  for (std::uint64_t i = 0; i < 6; ++i) {
    std::vector<double> v;
    for (int j = 0; j < 8 + static_cast<int>(i); ++j) v.push_back(u(rng));
    seqs.push_back(Sequence::from_scalars(100 + i, v));
  }
  std::size_t evals = 0;
  const DistanceMatrix m = build_distance_matrix(seqs, "metric_dtw:test", std::nullopt, &evals);
  CHECK(evals == 15);  // 6*5/2
  CHECK(m.kind == "metric_dtw:test");
  REQUIRE(m.ids.size() == 6);
  CHECK(m.ids[0] == 100);
  CHECK(m.ids[5] == 105);
  for (int i = 0; i < 6; ++i) {
    CHECK(m.D(i, i) == 0.0);
    for (int j = 0; j < 6; ++j) {
      CHECK(m.D(i, j) == m.D(j, i));
      if (i != j) {
        CHECK(m.D(i, j) ==
              dtw(seqs[static_cast<std::size_t>(i)], seqs[static_cast<std::size_t>(j)]));
      }
    }
  }
  const DistanceMatrix again = build_distance_matrix(seqs, "metric_dtw:test");
  CHECK(m.to_csv() == again.to_csv());
  CHECK_THROWS_AS(build_distance_matrix({seqs[0]}, "x"), std::invalid_argument);
}

TEST_CASE("matrix CSV round trip and validation") {
  std::vector<Sequence> seqs{seq1(3, {1.0, 2.5, -0.125}), seq1(5, {0.0, 1e-3}),
                             seq1(9, {7.0})};
  const DistanceMatrix m = build_distance_matrix(seqs, "ego_trajectory_dtw");
  const std::string csv = m.to_csv();
  const DistanceMatrix r = DistanceMatrix::from_csv(csv);
  CHECK(r.kind == m.kind);
  CHECK(r.ids == m.ids);
  CHECK(r.D == m.D);
  CHECK(r.to_csv() == csv);

  CHECK_THROWS_AS(DistanceMatrix::from_csv("garbage\n1,2\n"), std::runtime_error);
  CHECK_THROWS_AS(DistanceMatrix::from_csv("# kind=x\nid,3,5\n3,0,1\n"), std::runtime_error);
  CHECK_THROWS_AS(DistanceMatrix::from_csv("# kind=x\nid,3,5\n4,0,1\n5,1,0\n"),
                  std::runtime_error);
}
