#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "scenex/geometry.hpp"
#include "scenex/scenario.hpp"

namespace scenex {

enum class ActorId { Ego, Pedestrian, CarC, Truck };

std::string to_string(ActorId a);
ActorId actor_id_from_string(const std::string& s);

struct ActorState {
  ActorId actor = ActorId::Ego;
  Vec2 position;
  Vec2 velocity;
  double heading = 0.0;
  double path_s = 0.0;
};

struct Frame {
  double t = 0.0;
  std::vector<ActorState> states;  // template actor order
};

enum class Termination { ReachedGoal, Collision, Timeout };

std::string to_string(Termination t);
Termination termination_from_string(const std::string& s);

struct SimulationTrace {
  std::uint64_t scenario_id = 0;
  double dt = 0.0;
  std::vector<Frame> frames;
  Termination termination = Termination::Timeout;
  std::optional<double> collision_time;

  const ActorState& state(std::size_t frame, ActorId actor) const;
  std::optional<std::size_t> actor_index(ActorId actor) const;
};

enum class BehaviorProfile { Cautious, Normal, Aggressive };

std::string to_string(BehaviorProfile p);
BehaviorProfile behavior_profile_from_string(const std::string& s);

struct BehaviorParams {
  double cruise_gain = 1.0;           // s^-1
  double max_accel = 2.0;             // m/s^2
  double max_brake = 7.0;             // m/s^2
  double headway_cautious = 3.0;      // s
  double headway_normal = 2.0;        // s
  double headway_aggressive = 1.2;    // s
  double conflict_zone_margin = 2.0;  // m, along the conflicting actor's route
  double moving_speed_eps = 0.05;     // m/s, below this an actor counts as stationary
  double sensing_range = 40.0;        // m
  double prediction_speed_floor = 0.5;  // m/s, used when predicting arrival times

  double headway(BehaviorProfile p) const;
};

/// What the ego knows about one conflicting actor at the current step.
struct ConflictPercept {
  bool visible = false;
  bool moving = false;
  bool passed = false;   // actor has cleared the conflict point
  bool in_zone = false;  // actor currently inside the conflict zone
  bool ego_passed = false;
  double actor_time_to_conflict = std::numeric_limits<double>::infinity();
  double ego_time_to_conflict = std::numeric_limits<double>::infinity();
  double range = std::numeric_limits<double>::infinity();  // ego-to-actor distance
};

struct EgoState {
  double speed = 0.0;
  double target_speed = 0.0;
};

/// Longitudinal acceleration command: proportional cruise toward the target
/// speed, overridden by an emergency brake when a visible moving actor is on
/// a conflicting course within the profile's time headway.
double ego_behavior_step(const EgoState& ego, const std::vector<ConflictPercept>& percepts,
                         BehaviorProfile profile, const BehaviorParams& params);

struct ActorSpec {
  ActorId id = ActorId::Ego;
  Polyline route;
  double radius = 1.0;          // collision disc, m
  double max_speed = 15.0;      // m/s
  bool occluder = false;        // body blocks sight lines
  double body_half_length = 2.25;
  double body_half_width = 1.0;
};

/// Fixed geometry plus behavior constants of one logical scenario.
/// The actor at index 0 is always the ego.
struct ScenarioTemplate {
  TemplateId id = TemplateId::Scenario1;
  std::vector<ActorSpec> actors;
  double dt = 0.05;          // s
  double timeout = 60.0;     // s
  bool collision_terminates = false;
  double ego_target_speed = 4.0;  // m/s
  BehaviorParams behavior;
  BehaviorProfile profile = BehaviorProfile::Normal;

  // Conflict points between the ego route and each non-ego actor's route,
  // where one exists. Parallel to `actors` (entry 0 unused).
  std::vector<std::optional<ConflictPoint>> ego_conflicts;

  // Actor pair the criticality objective is evaluated on.
  ActorId objective_actor_a = ActorId::Ego;
  ActorId objective_actor_b = ActorId::Pedestrian;

  // Non-ego motion constants (used by whichever template defines the actor).
  double pedestrian_walk_speed = 1.4;  // m/s
  double truck_speed = 6.0;            // m/s
  double car_c_base_speed = 9.0;       // m/s, before synchronization
  double car_c_min_speed = 2.0;        // m/s, lower clamp after synchronization

  const ActorSpec& actor(ActorId id) const;
  std::optional<std::size_t> actor_index(ActorId id) const;
  std::optional<ConflictPoint> conflict_between(ActorId a, ActorId b) const;

  /// Default parameter ranges of this template's logical scenario.
  ScenarioSpace default_space() const;

  static ScenarioTemplate scenario1();
  static ScenarioTemplate scenario2();
  static ScenarioTemplate for_id(TemplateId id);
};

/// Run one concrete scenario to completion. Deterministic: identical input
/// produces an identical trace. Never throws on timeout; the trace then
/// carries termination == Timeout.
SimulationTrace simulate(const ConcreteScenario& scenario, const ScenarioTemplate& tmpl);

}  // namespace scenex
