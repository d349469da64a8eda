#include "scenex/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace scenex {

std::string to_string(ActorId a) {
  switch (a) {
    case ActorId::Ego: return "ego";
    case ActorId::Pedestrian: return "pedestrian";
    case ActorId::CarC: return "car_c";
    case ActorId::Truck: return "truck";
  }
  return "ego";
}

ActorId actor_id_from_string(const std::string& s) {
  if (s == "ego") return ActorId::Ego;
  if (s == "pedestrian") return ActorId::Pedestrian;
  if (s == "car_c") return ActorId::CarC;
  if (s == "truck") return ActorId::Truck;
  throw std::invalid_argument("unknown actor id: " + s);
}

std::string to_string(Termination t) {
  switch (t) {
    case Termination::ReachedGoal: return "reached_goal";
    case Termination::Collision: return "collision";
    case Termination::Timeout: return "timeout";
  }
  return "timeout";
}

Termination termination_from_string(const std::string& s) {
  if (s == "reached_goal") return Termination::ReachedGoal;
  if (s == "collision") return Termination::Collision;
  if (s == "timeout") return Termination::Timeout;
  throw std::invalid_argument("unknown termination: " + s);
}

std::string to_string(BehaviorProfile p) {
  switch (p) {
    case BehaviorProfile::Cautious: return "cautious";
    case BehaviorProfile::Normal: return "normal";
    case BehaviorProfile::Aggressive: return "aggressive";
  }
  return "normal";
}

BehaviorProfile behavior_profile_from_string(const std::string& s) {
  if (s == "cautious") return BehaviorProfile::Cautious;
  if (s == "normal") return BehaviorProfile::Normal;
  if (s == "aggressive") return BehaviorProfile::Aggressive;
  throw std::invalid_argument("unknown behavior profile: " + s);
}

double BehaviorParams::headway(BehaviorProfile p) const {
  switch (p) {
    case BehaviorProfile::Cautious: return headway_cautious;
    case BehaviorProfile::Normal: return headway_normal;
    case BehaviorProfile::Aggressive: return headway_aggressive;
  }
  return headway_normal;
}

const ActorState& SimulationTrace::state(std::size_t frame, ActorId actor) const {
  const auto& f = frames.at(frame);
  for (const auto& s : f.states) {
    if (s.actor == actor) return s;
  }
  throw std::invalid_argument("actor not present in trace: " + to_string(actor));
}

std::optional<std::size_t> SimulationTrace::actor_index(ActorId actor) const {
  if (frames.empty()) return std::nullopt;
  const auto& f = frames.front();
  for (std::size_t i = 0; i < f.states.size(); ++i) {
    if (f.states[i].actor == actor) return i;
  }
  return std::nullopt;
}

double ego_behavior_step(const EgoState& ego, const std::vector<ConflictPercept>& percepts,
                         BehaviorProfile profile, const BehaviorParams& params) {
  const double headway = params.headway(profile);
  for (const auto& p : percepts) {
    if (!p.visible || !p.moving || p.passed || p.ego_passed) continue;
    if (p.range > params.sensing_range) continue;
    if (std::abs(p.ego_time_to_conflict - p.actor_time_to_conflict) < headway) {
      return -params.max_brake;
    }
  }
  const double cmd = params.cruise_gain * (ego.target_speed - ego.speed);
  return std::clamp(cmd, -params.max_brake, params.max_accel);
}

const ActorSpec& ScenarioTemplate::actor(ActorId id) const {
  for (const auto& a : actors) {
    if (a.id == id) return a;
  }
  throw std::invalid_argument("template has no actor " + to_string(id));
}

std::optional<std::size_t> ScenarioTemplate::actor_index(ActorId id) const {
  for (std::size_t i = 0; i < actors.size(); ++i) {
    if (actors[i].id == id) return i;
  }
  return std::nullopt;
}

std::optional<ConflictPoint> ScenarioTemplate::conflict_between(ActorId a, ActorId b) const {
  auto ia = actor_index(a);
  auto ib = actor_index(b);
  if (!ia || !ib || a == b) return std::nullopt;
  return unique_conflict_point(actors[*ia].route, actors[*ib].route);
}

ScenarioSpace ScenarioTemplate::default_space() const {
  if (id == TemplateId::Scenario1) {
    return ScenarioSpace(TemplateId::Scenario1,
                         {{"ego_start_offset", 0.0, 40.0, "m"},
                          {"pedestrian_wait", 0.0, 10.0, "s"},
                          {"car_c_speed", 3.0, 12.0, "m/s"}});
  }
  return ScenarioSpace(TemplateId::Scenario2,
                       {{"sync_point_s", 5.0, 25.0, "m"},
                        {"car_c_start_time", 0.0, 6.0, "s"},
                        {"ego_trigger_distance", 0.0, 30.0, "m"}});
}

namespace {

void finalize_template(ScenarioTemplate& t) {
  t.ego_conflicts.assign(t.actors.size(), std::nullopt);
  for (std::size_t i = 1; i < t.actors.size(); ++i) {
    t.ego_conflicts[i] = unique_conflict_point(t.actors[0].route, t.actors[i].route);
  }
  auto ib = t.actor_index(t.objective_actor_b);
  if (!ib || !t.ego_conflicts[*ib]) {
    throw std::logic_error("template objective pair has no unique conflict point");
  }
}

}  // namespace

ScenarioTemplate ScenarioTemplate::scenario1() {
  // Right turn at an X intersection. The ego crosses the pedestrian's
  // crosswalk on the exit road; the truck and car C drive across the ego's
  // sight line toward the waiting pedestrian.
  ScenarioTemplate t;
  t.id = TemplateId::Scenario1;
  t.collision_terminates = false;
  t.ego_target_speed = 4.0;

  ActorSpec ego;
  ego.id = ActorId::Ego;
  ego.route = Polyline({{1.75, -50.0}, {1.75, -6.0}, {6.0, -1.75}, {60.0, -1.75}});
  ego.radius = 1.0;
  ego.max_speed = 15.0;
  t.actors.push_back(std::move(ego));

  ActorSpec ped;
  ped.id = ActorId::Pedestrian;
  ped.route = Polyline({{8.0, 6.5}, {8.0, -6.5}});
  ped.radius = 0.3;
  ped.max_speed = 2.5;
  t.actors.push_back(std::move(ped));

  ActorSpec car;
  car.id = ActorId::CarC;
  car.route = Polyline({{25.0, 1.75}, {-60.0, 1.75}});
  car.radius = 1.0;
  car.max_speed = 15.0;
  car.occluder = true;
  car.body_half_length = 2.25;
  car.body_half_width = 1.0;
  t.actors.push_back(std::move(car));

  ActorSpec truck;
  truck.id = ActorId::Truck;
  truck.route = Polyline(
      {{45.0, 1.75}, {5.0, 1.75}, {0.5, -0.5}, {-1.75, -8.0}, {-1.75, -60.0}});
  truck.radius = 1.8;
  truck.max_speed = 15.0;
  truck.occluder = true;
  truck.body_half_length = 3.5;
  truck.body_half_width = 1.25;
  t.actors.push_back(std::move(truck));

  t.objective_actor_b = ActorId::Pedestrian;
  finalize_template(t);
  return t;
}

ScenarioTemplate ScenarioTemplate::scenario2() {
  // Left turn at a T intersection across car C's through lane. Car C paces
  // itself against the ego's predicted arrival once triggered; a crash ends
  // the simulation.
  ScenarioTemplate t;
  t.id = TemplateId::Scenario2;
  t.collision_terminates = true;
  t.ego_target_speed = 8.0;

  ActorSpec ego;
  ego.id = ActorId::Ego;
  ego.route = Polyline({{55.0, 1.75},
                        {5.0, 1.75},
                        {1.0, -0.5},
                        {-1.3, -4.5},
                        {-1.75, -7.0},
                        {-1.75, -60.0}});
  ego.radius = 1.0;
  ego.max_speed = 15.0;
  t.actors.push_back(std::move(ego));

  ActorSpec car;
  car.id = ActorId::CarC;
  car.route = Polyline({{-55.0, -1.75}, {60.0, -1.75}});
  car.radius = 1.0;
  car.max_speed = 15.0;
  t.actors.push_back(std::move(car));

  t.objective_actor_b = ActorId::CarC;
  finalize_template(t);
  return t;
}

ScenarioTemplate ScenarioTemplate::for_id(TemplateId id) {
  return id == TemplateId::Scenario1 ? scenario1() : scenario2();
}

namespace {

struct ActorRuntime {
  double s = 0.0;
  double speed = 0.0;        // current scalar speed along the route
  double policy_speed = 0.0; // commanded speed for non-ego actors
  double start_time = 0.0;   // stationary before this
};

struct StepContext {
  const ScenarioTemplate& tmpl;
  std::vector<ActorRuntime>& actors;
  double ego_start_s = 0.0;
  // scenario 2 synchronization
  bool sync_pending = false;
  bool sync_done = false;
  double sync_point_s = 0.0;
  double trigger_distance = 0.0;
};

ActorState snapshot(const ScenarioTemplate& tmpl, std::size_t idx, const ActorRuntime& rt) {
  const ActorSpec& spec = tmpl.actors[idx];
  ActorState st;
  st.actor = spec.id;
  st.position = spec.route.point_at(rt.s);
  st.heading = spec.route.heading_at(rt.s);
  st.path_s = rt.s;
  st.velocity = Vec2{std::cos(st.heading), std::sin(st.heading)} * rt.speed;
  return st;
}

std::vector<OrientedRect> occluder_rects(const ScenarioTemplate& tmpl,
                                         const std::vector<ActorRuntime>& actors,
                                         std::size_t exclude_idx) {
  std::vector<OrientedRect> rects;
  for (std::size_t i = 0; i < tmpl.actors.size(); ++i) {
    if (i == 0 || i == exclude_idx) continue;
    const ActorSpec& spec = tmpl.actors[i];
    if (!spec.occluder) continue;
    OrientedRect r;
    r.center = spec.route.point_at(actors[i].s);
    r.heading = spec.route.heading_at(actors[i].s);
    r.half_length = spec.body_half_length;
    r.half_width = spec.body_half_width;
    rects.push_back(r);
  }
  return rects;
}

std::vector<ConflictPercept> build_percepts(const StepContext& ctx) {
  const ScenarioTemplate& tmpl = ctx.tmpl;
  const BehaviorParams& bp = tmpl.behavior;
  const ActorRuntime& ego = ctx.actors[0];
  const Vec2 ego_pos = tmpl.actors[0].route.point_at(ego.s);

  std::vector<ConflictPercept> percepts;
  for (std::size_t i = 1; i < tmpl.actors.size(); ++i) {
    const auto& cp = tmpl.ego_conflicts[i];
    if (!cp) continue;
    const ActorRuntime& other = ctx.actors[i];
    const Vec2 pos = tmpl.actors[i].route.point_at(other.s);

    ConflictPercept p;
    p.range = distance(ego_pos, pos);
    p.moving = other.speed > bp.moving_speed_eps;
    p.passed = other.s > cp->s_b + bp.conflict_zone_margin;
    p.in_zone = std::abs(other.s - cp->s_b) <= bp.conflict_zone_margin;
    p.ego_passed = ego.s > cp->s_a + bp.conflict_zone_margin;
    if (p.in_zone) {
      p.actor_time_to_conflict = 0.0;
    } else if (!p.passed && p.moving) {
      p.actor_time_to_conflict = (cp->s_b - other.s) / other.speed;
    }
    if (!p.ego_passed) {
      p.ego_time_to_conflict =
          std::max(cp->s_a - ego.s, 0.0) / std::max(ego.speed, bp.prediction_speed_floor);
    }
    p.visible = line_of_sight(ego_pos, pos, occluder_rects(tmpl, ctx.actors, i));
    percepts.push_back(p);
  }
  return percepts;
}

// Scenario 2: once the ego has traveled the trigger distance, car C fixes its
// speed so that it reaches the conflict point when the ego reaches its own
// synchronization point (sync_point_s short of the conflict).
void apply_sync_if_due(StepContext& ctx, double t) {
  if (!ctx.sync_pending || ctx.sync_done) return;
  ActorRuntime& ego = ctx.actors[0];
  ActorRuntime& car = ctx.actors[1];
  if (t < car.start_time) return;
  if (ego.s - ctx.ego_start_s < ctx.trigger_distance) return;
  ctx.sync_done = true;

  const auto& cp = ctx.tmpl.ego_conflicts[1];
  const BehaviorParams& bp = ctx.tmpl.behavior;
  const double ego_sync_s = cp->s_a - ctx.sync_point_s;
  const double ego_remaining = ego_sync_s - ego.s;
  if (ego_remaining <= 0.0) return;  // ego already past its sync point; keep base speed
  const double lead_time = ego_remaining / std::max(ego.speed, bp.prediction_speed_floor);
  if (lead_time < 0.2) return;
  const double car_remaining = cp->s_b - car.s;
  if (car_remaining <= 0.0) return;
  const double wanted = car_remaining / lead_time;
  car.policy_speed = std::clamp(wanted, ctx.tmpl.car_c_min_speed,
                                ctx.tmpl.actors[1].max_speed);
}

bool any_disc_overlap(const ScenarioTemplate& tmpl, const std::vector<ActorRuntime>& actors) {
  for (std::size_t i = 0; i < tmpl.actors.size(); ++i) {
    const Vec2 pi = tmpl.actors[i].route.point_at(actors[i].s);
    for (std::size_t j = i + 1; j < tmpl.actors.size(); ++j) {
      const Vec2 pj = tmpl.actors[j].route.point_at(actors[j].s);
      if (distance(pi, pj) < tmpl.actors[i].radius + tmpl.actors[j].radius) return true;
    }
  }
  return false;
}

bool all_reached_goal(const ScenarioTemplate& tmpl, const std::vector<ActorRuntime>& actors) {
  for (std::size_t i = 0; i < tmpl.actors.size(); ++i) {
    if (actors[i].s < tmpl.actors[i].route.length() - 1e-9) return false;
  }
  return true;
}

}  // namespace

SimulationTrace simulate(const ConcreteScenario& scenario, const ScenarioTemplate& tmpl) {
  if (scenario.values.size() != 3) {
    throw std::invalid_argument("scenario must have 3 parameters for the built-in templates");
  }

  std::vector<ActorRuntime> actors(tmpl.actors.size());
  StepContext ctx{tmpl, actors};

  if (tmpl.id == TemplateId::Scenario1) {
    const double ego_offset = scenario.values[0];
    const double ped_wait = scenario.values[1];
    const double car_speed = scenario.values[2];
    actors[0].s = ego_offset;
    actors[0].speed = tmpl.ego_target_speed;
    ctx.ego_start_s = ego_offset;
    auto ped = tmpl.actor_index(ActorId::Pedestrian);
    auto car = tmpl.actor_index(ActorId::CarC);
    auto truck = tmpl.actor_index(ActorId::Truck);
    if (ped) {
      actors[*ped].policy_speed = tmpl.pedestrian_walk_speed;
      actors[*ped].start_time = ped_wait;
    }
    if (car) actors[*car].policy_speed = car_speed;
    if (truck) actors[*truck].policy_speed = tmpl.truck_speed;
  } else {
    const double sync_point_s = scenario.values[0];
    const double car_start = scenario.values[1];
    const double trigger = scenario.values[2];
    actors[0].speed = tmpl.ego_target_speed;
    actors[1].policy_speed = tmpl.car_c_base_speed;
    actors[1].start_time = car_start;
    ctx.sync_pending = true;
    ctx.sync_point_s = sync_point_s;
    ctx.trigger_distance = trigger;
  }

  SimulationTrace trace;
  trace.scenario_id = scenario.id;
  trace.dt = tmpl.dt;

  auto record = [&](double t) {
    Frame f;
    f.t = t;
    f.states.reserve(actors.size());
    for (std::size_t i = 0; i < actors.size(); ++i) {
      f.states.push_back(snapshot(tmpl, i, actors[i]));
    }
    trace.frames.push_back(std::move(f));
  };

  record(0.0);
  const long max_steps = static_cast<long>(std::llround(tmpl.timeout / tmpl.dt));

  // Actors spawned already overlapping count as an immediate crash; one step
  // is still taken so every trace has at least two frames.
  bool spawn_collision = tmpl.collision_terminates && any_disc_overlap(tmpl, actors);

  for (long step = 0; step < max_steps; ++step) {
    const double t = static_cast<double>(step) * tmpl.dt;

    if (tmpl.id == TemplateId::Scenario2) apply_sync_if_due(ctx, t);

    const auto percepts = build_percepts(ctx);
    const double accel = ego_behavior_step(EgoState{actors[0].speed, tmpl.ego_target_speed},
                                           percepts, tmpl.profile, tmpl.behavior);

    // Advance all actors from t to t+dt.
    for (std::size_t i = 0; i < actors.size(); ++i) {
      ActorRuntime& rt = actors[i];
      const double route_len = tmpl.actors[i].route.length();
      if (i == 0) {
        rt.speed = std::clamp(rt.speed + accel * tmpl.dt, 0.0, tmpl.actors[i].max_speed);
      } else {
        rt.speed = (t >= rt.start_time) ? rt.policy_speed : 0.0;
      }
      rt.s = std::min(rt.s + rt.speed * tmpl.dt, route_len);
      if (rt.s >= route_len) rt.speed = 0.0;
    }

    const double t_next = static_cast<double>(step + 1) * tmpl.dt;
    record(t_next);

    if (spawn_collision) {
      trace.termination = Termination::Collision;
      trace.collision_time = 0.0;
      return trace;
    }
    if (tmpl.collision_terminates && any_disc_overlap(tmpl, actors)) {
      trace.termination = Termination::Collision;
      trace.collision_time = t_next;
      return trace;
    }
    if (all_reached_goal(tmpl, actors)) {
      trace.termination = Termination::ReachedGoal;
      return trace;
    }
  }

  trace.termination = Termination::Timeout;
  return trace;
}

}  // namespace scenex
