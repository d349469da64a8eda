#include "scenex/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace scenex {

std::string to_string(Metric m) {
  switch (m) {
    case Metric::Euclidean: return "euclidean";
    case Metric::TrajectoryDistance: return "trajectory_distance";
    case Metric::TTC: return "ttc";
    case Metric::WTTC: return "wttc";
    case Metric::PET: return "pet";
  }
  return "euclidean";
}

Metric metric_from_string(const std::string& s) {
  if (s == "euclidean") return Metric::Euclidean;
  if (s == "trajectory_distance") return Metric::TrajectoryDistance;
  if (s == "ttc") return Metric::TTC;
  if (s == "wttc") return Metric::WTTC;
  if (s == "pet") return Metric::PET;
  throw std::invalid_argument("unknown metric: " + s);
}

Direction direction_of(Metric) {
  // All built-in metrics are most critical at their smallest value.
  return Direction::Minimize;
}

double worst_case_accel_for(ActorId a) {
  return a == ActorId::Pedestrian ? kPedestrianWorstCaseAccel : kVehicleWorstCaseAccel;
}

namespace {

CriticalitySeries make_series(Metric metric, ActorId a, ActorId b) {
  CriticalitySeries s;
  s.metric = metric;
  s.actor_a = a;
  s.actor_b = b;
  s.direction = direction_of(metric);
  return s;
}

void finish(CriticalitySeries& s) { s.summary = summarize(s); }

}  // namespace

CriticalitySeries euclidean_series(const SimulationTrace& trace, ActorId a, ActorId b) {
  auto s = make_series(Metric::Euclidean, a, b);
  s.values.reserve(trace.frames.size());
  for (std::size_t f = 0; f < trace.frames.size(); ++f) {
    s.values.push_back(distance(trace.state(f, a).position, trace.state(f, b).position));
  }
  finish(s);
  return s;
}

CriticalitySeries trajectory_distance_series(const SimulationTrace& trace, ActorId a, ActorId b,
                                             const ScenarioTemplate& tmpl) {
  auto cp = tmpl.conflict_between(a, b);
  if (!cp) {
    throw std::invalid_argument("trajectory distance needs a conflict point between " +
                                to_string(a) + " and " + to_string(b));
  }
  auto s = make_series(Metric::TrajectoryDistance, a, b);
  s.values.reserve(trace.frames.size());
  double frozen = -std::numeric_limits<double>::infinity();
  for (std::size_t f = 0; f < trace.frames.size(); ++f) {
    const auto& sa = trace.state(f, a);
    const auto& sb = trace.state(f, b);
    const double rem_a = cp->s_a - sa.path_s;
    const double rem_b = cp->s_b - sb.path_s;
    double v;
    if (rem_a >= 0.0 && rem_b >= 0.0) {
      v = rem_a + rem_b;
      frozen = v;
    } else {
      v = std::max(frozen, distance(sa.position, sb.position));
    }
    s.values.push_back(v);
  }
  finish(s);
  return s;
}

CriticalitySeries ttc_series(const SimulationTrace& trace, ActorId a, ActorId b,
                             const ScenarioTemplate& tmpl) {
  const double r_a = tmpl.actor(a).radius;
  const double r_b = tmpl.actor(b).radius;
  auto s = make_series(Metric::TTC, a, b);
  s.values.reserve(trace.frames.size());
  for (std::size_t f = 0; f < trace.frames.size(); ++f) {
    const auto& sa = trace.state(f, a);
    const auto& sb = trace.state(f, b);
    const double dist = distance(sa.position, sb.position);
    const double gap = dist - r_a - r_b;
    if (gap <= 0.0) {
      s.values.push_back(0.0);
      continue;
    }
    const Vec2 dp = sa.position - sb.position;
    const Vec2 dv = sa.velocity - sb.velocity;
    const double closing = -dp.dot(dv) / dist;
    s.values.push_back(closing <= 1e-6 ? kTimeCap : std::min(gap / closing, kTimeCap));
  }
  finish(s);
  return s;
}

CriticalitySeries wttc_series(const SimulationTrace& trace, ActorId a, ActorId b,
                              const ScenarioTemplate& tmpl, double a_max_a, double a_max_b) {
  if (a_max_a <= 0.0 || a_max_b <= 0.0) {
    throw std::invalid_argument("worst-case accelerations must be positive");
  }
  const double r_a = tmpl.actor(a).radius;
  const double r_b = tmpl.actor(b).radius;
  const double accel = a_max_a + a_max_b;
  auto s = make_series(Metric::WTTC, a, b);
  s.values.reserve(trace.frames.size());
  for (std::size_t f = 0; f < trace.frames.size(); ++f) {
    const auto& sa = trace.state(f, a);
    const auto& sb = trace.state(f, b);
    const double gap = distance(sa.position, sb.position) - r_a - r_b;
    if (gap <= 0.0) {
      s.values.push_back(0.0);
      continue;
    }
    const double speed_sum = sa.velocity.norm() + sb.velocity.norm();
    const double t = (-speed_sum + std::sqrt(speed_sum * speed_sum + 2.0 * accel * gap)) / accel;
    s.values.push_back(std::min(t, kTimeCap));
  }
  finish(s);
  return s;
}

CriticalitySeries wttc_series(const SimulationTrace& trace, ActorId a, ActorId b,
                              const ScenarioTemplate& tmpl) {
  return wttc_series(trace, a, b, tmpl, worst_case_accel_for(a), worst_case_accel_for(b));
}

namespace {

struct Occupancy {
  bool entered = false;
  double entry = 0.0;
  double exit = 0.0;
};

Occupancy zone_occupancy(const SimulationTrace& trace, ActorId actor, const Disc& zone) {
  Occupancy occ;
  for (const auto& frame : trace.frames) {
    for (const auto& st : frame.states) {
      if (st.actor != actor) continue;
      if (distance(st.position, zone.center) <= zone.radius) {
        if (!occ.entered) {
          occ.entered = true;
          occ.entry = frame.t;
        }
        occ.exit = frame.t;
      }
    }
  }
  return occ;
}

}  // namespace

CriticalitySeries pet(const SimulationTrace& trace, ActorId a, ActorId b, const Disc& zone) {
  auto s = make_series(Metric::PET, a, b);
  const Occupancy oa = zone_occupancy(trace, a, zone);
  const Occupancy ob = zone_occupancy(trace, b, zone);
  double value;
  if (!oa.entered || !ob.entered) {
    value = kTimeCap;
  } else if (oa.entry <= ob.exit && ob.entry <= oa.exit) {
    value = 0.0;
  } else {
    value = oa.exit < ob.entry ? ob.entry - oa.exit : oa.entry - ob.exit;
    value = std::min(value, kTimeCap);
  }
  s.values.push_back(value);
  finish(s);
  return s;
}

CriticalitySeries pet(const SimulationTrace& trace, ActorId a, ActorId b,
                      const ScenarioTemplate& tmpl) {
  auto cp = tmpl.conflict_between(a, b);
  if (!cp) {
    throw std::invalid_argument("PET needs a conflict point between " + to_string(a) + " and " +
                                to_string(b));
  }
  return pet(trace, a, b, Disc{cp->point, kConflictZoneRadius});
}

double summarize(const CriticalitySeries& series) {
  if (series.values.empty()) throw std::invalid_argument("cannot summarize an empty series");
  if (series.direction == Direction::Minimize) {
    return *std::min_element(series.values.begin(), series.values.end());
  }
  return *std::max_element(series.values.begin(), series.values.end());
}

CriticalitySeries compute_series(const SimulationTrace& trace, Metric metric, ActorId a,
                                 ActorId b, const ScenarioTemplate& tmpl) {
  switch (metric) {
    case Metric::Euclidean: return euclidean_series(trace, a, b);
    case Metric::TrajectoryDistance: return trajectory_distance_series(trace, a, b, tmpl);
    case Metric::TTC: return ttc_series(trace, a, b, tmpl);
    case Metric::WTTC: return wttc_series(trace, a, b, tmpl);
    case Metric::PET: return pet(trace, a, b, tmpl);
  }
  throw std::invalid_argument("unknown metric enum value");
}

}  // namespace scenex
