#pragma once

#include <string>
#include <vector>

#include "scenex/geometry.hpp"
#include "scenex/simulator.hpp"

namespace scenex {

/// Conflict values above this cap mean "no conflict within the horizon".
inline constexpr double kTimeCap = 30.0;  // s

/// Worst-case acceleration defaults used by the weighted time-to-collision.
inline constexpr double kVehicleWorstCaseAccel = 7.0;     // m/s^2
inline constexpr double kPedestrianWorstCaseAccel = 1.5;  // m/s^2

/// Radius of the occupancy disc around a conflict point used by PET.
inline constexpr double kConflictZoneRadius = 2.0;  // m

enum class Metric { Euclidean, TrajectoryDistance, TTC, WTTC, PET };
enum class Direction { Minimize, Maximize };

std::string to_string(Metric m);
Metric metric_from_string(const std::string& s);
Direction direction_of(Metric m);

struct Disc {
  Vec2 center;
  double radius = 0.0;
};

/// One criticality metric evaluated over a trace for an actor pair.
/// `values` is frame-aligned except for PET, which is a single scalar.
struct CriticalitySeries {
  Metric metric = Metric::Euclidean;
  ActorId actor_a = ActorId::Ego;
  ActorId actor_b = ActorId::Pedestrian;
  Direction direction = Direction::Minimize;
  std::vector<double> values;
  double summary = 0.0;
};

/// Center-to-center distance per frame.
CriticalitySeries euclidean_series(const SimulationTrace& trace, ActorId a, ActorId b);

/// Sum of both actors' remaining route lengths to their shared conflict point
/// while both are upstream of it. Afterwards the larger of the frozen last
/// upstream value and the plain euclidean distance, so the series does not
/// signal criticality once the encounter is over.
CriticalitySeries trajectory_distance_series(const SimulationTrace& trace, ActorId a, ActorId b,
                                             const ScenarioTemplate& tmpl);

/// Disc-gap over closing speed from current velocities; kTimeCap when not
/// closing, 0 once the discs overlap.
CriticalitySeries ttc_series(const SimulationTrace& trace, ActorId a, ActorId b,
                             const ScenarioTemplate& tmpl);

/// Worst-case time to collision: both actors are assumed to accelerate
/// straight at each other at a_max from their current speeds. Smallest t with
/// (|v_a|+|v_b|) t + (a_max_a + a_max_b) t^2 / 2 == disc gap.
CriticalitySeries wttc_series(const SimulationTrace& trace, ActorId a, ActorId b,
                              const ScenarioTemplate& tmpl, double a_max_a, double a_max_b);

/// As above with per-actor defaults (pedestrians accelerate less than cars).
CriticalitySeries wttc_series(const SimulationTrace& trace, ActorId a, ActorId b,
                              const ScenarioTemplate& tmpl);

double worst_case_accel_for(ActorId a);

/// Post-encroachment time through the given occupancy disc: second entry
/// minus first exit, 0 when the occupancies overlap, kTimeCap when either
/// actor never enters. Single-element series.
CriticalitySeries pet(const SimulationTrace& trace, ActorId a, ActorId b, const Disc& zone);

/// PET with the zone centered on the template's conflict point for the pair.
CriticalitySeries pet(const SimulationTrace& trace, ActorId a, ActorId b,
                      const ScenarioTemplate& tmpl);

/// Scalar fed to the optimizer: min over the series for Minimize metrics,
/// max for Maximize.
double summarize(const CriticalitySeries& series);

/// Dispatch by metric enum; PET uses the template conflict zone.
CriticalitySeries compute_series(const SimulationTrace& trace, Metric metric, ActorId a,
                                 ActorId b, const ScenarioTemplate& tmpl);

}  // namespace scenex
