#include "scenex/config.hpp"

#include <fstream>
#include <set>
#include <stdexcept>

namespace scenex {

std::string to_string(RunMode m) {
  switch (m) {
    case RunMode::Explore: return "explore";
    case RunMode::Grid: return "grid";
    case RunMode::AnalyzeOnly: return "analyze_only";
  }
  return "explore";
}

RunMode run_mode_from_string(const std::string& s) {
  if (s == "explore") return RunMode::Explore;
  if (s == "grid") return RunMode::Grid;
  if (s == "analyze_only") return RunMode::AnalyzeOnly;
  throw std::invalid_argument("unknown run mode: " + s);
}

std::string to_string(AnalysisBranch b) {
  return b == AnalysisBranch::Behavior ? "behavior" : "criticality";
}

AnalysisBranch branch_from_string(const std::string& s) {
  if (s == "behavior") return AnalysisBranch::Behavior;
  if (s == "criticality") return AnalysisBranch::Criticality;
  throw std::invalid_argument("unknown analysis branch: " + s);
}

std::string to_string(ClusterSpace s) {
  return s == ClusterSpace::Kernel ? "kernel" : "distance";
}

ClusterSpace cluster_space_from_string(const std::string& s) {
  if (s == "kernel") return ClusterSpace::Kernel;
  if (s == "distance") return ClusterSpace::Distance;
  throw std::invalid_argument("unknown cluster space: " + s);
}

ActorId RunConfig::resolved_actor_a(const ScenarioTemplate& tmpl) const {
  return actor_a.value_or(tmpl.objective_actor_a);
}

ActorId RunConfig::resolved_actor_b(const ScenarioTemplate& tmpl) const {
  return actor_b.value_or(tmpl.objective_actor_b);
}

Direction RunConfig::resolved_direction() const {
  return direction.value_or(direction_of(metric));
}

ScenarioSpace RunConfig::space(const ScenarioTemplate& tmpl) const {
  ScenarioSpace base = tmpl.default_space();
  if (parameters.empty()) return base;
  if (parameters.size() != base.parameters().size()) {
    throw std::invalid_argument("parameter override count must match the template");
  }
  for (std::size_t i = 0; i < parameters.size(); ++i) {
    if (parameters[i].name != base.parameters()[i].name) {
      throw std::invalid_argument("parameter override renames '" +
                                  base.parameters()[i].name + "'");
    }
  }
  return ScenarioSpace(template_id, parameters);
}

namespace {

class StrictReader {
 public:
  explicit StrictReader(const nlohmann::json& j, std::string context)
      : j_(j), context_(std::move(context)) {
    if (!j.is_object()) throw std::invalid_argument(context_ + ": expected a JSON object");
  }

  ~StrictReader() = default;

  void finish() {
    for (auto it = j_.begin(); it != j_.end(); ++it) {
      if (seen_.count(it.key()) == 0) {
        throw std::invalid_argument(context_ + ": unknown key '" + it.key() + "'");
      }
    }
  }

  bool has(const std::string& key) {
    seen_.insert(key);
    return j_.contains(key);
  }

  template <typename T>
  void read(const std::string& key, T& out) {
    if (!has(key)) return;
    try {
      out = j_.at(key).get<T>();
    } catch (const nlohmann::json::exception&) {
      throw std::invalid_argument(context_ + ": key '" + key + "' has the wrong type");
    }
  }

  const nlohmann::json& raw(const std::string& key) {
    seen_.insert(key);
    return j_.at(key);
  }

 private:
  const nlohmann::json& j_;
  std::string context_;
  std::set<std::string> seen_;
};

void require(bool cond, const std::string& message) {
  if (!cond) throw std::invalid_argument("config: " + message);
}

}  // namespace

RunConfig parse_config(const nlohmann::json& j) {
  RunConfig c;
  StrictReader r(j, "config");

  std::string text;
  if (r.has("template")) {
    r.read("template", text);
    c.template_id = template_id_from_string(text);
  }
  if (r.has("mode")) {
    r.read("mode", text);
    c.mode = run_mode_from_string(text);
  }
  if (r.has("metric")) {
    r.read("metric", text);
    c.metric = metric_from_string(text);
  }
  if (r.has("actor_a")) {
    r.read("actor_a", text);
    c.actor_a = actor_id_from_string(text);
  }
  if (r.has("actor_b")) {
    r.read("actor_b", text);
    c.actor_b = actor_id_from_string(text);
  }
  if (r.has("direction")) {
    r.read("direction", text);
    if (text == "minimize") {
      c.direction = Direction::Minimize;
    } else if (text == "maximize") {
      c.direction = Direction::Maximize;
    } else {
      throw std::invalid_argument("config: direction must be minimize or maximize");
    }
  }
  if (r.has("reduction_branch")) {
    r.read("reduction_branch", text);
    c.reduction_branch = branch_from_string(text);
  }
  if (r.has("cluster_space")) {
    r.read("cluster_space", text);
    c.cluster_space = cluster_space_from_string(text);
  }

  r.read("budget", c.budget);
  r.read("grid_steps", c.grid_steps);
  r.read("seed", c.seed);
  if (r.has("target_objective")) {
    double v = 0.0;
    r.read("target_objective", v);
    c.target_objective = v;
  }
  r.read("initial_design", c.initial_design);
  r.read("pool_size", c.pool_size);
  r.read("rff_features", c.rff_features);
  r.read("stride", c.stride);
  if (r.has("dtw_band")) {
    std::size_t band = 0;
    r.read("dtw_band", band);
    c.dtw_band = band;
  }
  r.read("gamma", c.gamma);
  r.read("median_target", c.median_target);
  r.read("embedding_k", c.embedding_k);
  r.read("eps", c.eps);
  r.read("min_pts", c.min_pts);
  r.read("archetypes_per_cluster", c.archetypes_per_cluster);
  r.read("prototypes_per_cluster", c.prototypes_per_cluster);
  r.read("output_dir", c.output_dir);

  if (r.has("parameters")) {
    const nlohmann::json& params = r.raw("parameters");
    require(params.is_array(), "parameters must be an array");
    for (const auto& p : params) {
      StrictReader pr(p, "config.parameters");
      ParameterRange range;
      pr.read("name", range.name);
      pr.read("lower", range.lower);
      pr.read("upper", range.upper);
      pr.read("unit", range.unit);
      pr.finish();
      require(!range.name.empty(), "parameter name must be non-empty");
      require(range.lower < range.upper, "parameter bounds must satisfy lower < upper");
      c.parameters.push_back(std::move(range));
    }
  }
  r.finish();

  require(c.budget >= 1, "budget must be >= 1");
  require(c.grid_steps >= 2, "grid_steps must be >= 2");
  require(c.initial_design >= 1, "initial_design must be >= 1");
  require(c.budget >= c.initial_design, "budget must cover the initial design");
  require(c.pool_size >= 1, "pool_size must be >= 1");
  require(c.rff_features >= 1, "rff_features must be >= 1");
  require(c.stride >= 1, "stride must be >= 1");
  require(c.gamma > 0.0, "gamma must be positive");
  require(c.median_target > 0.0, "median_target must be positive");
  require(c.embedding_k >= 1, "embedding_k must be >= 1");
  require(c.eps > 0.0, "eps must be positive");
  require(c.min_pts >= 1, "min_pts must be >= 1");
  require(c.archetypes_per_cluster >= 1, "archetypes_per_cluster must be >= 1");
  require(c.prototypes_per_cluster >= 1, "prototypes_per_cluster must be >= 1");
  require(!c.output_dir.empty(), "output_dir must be non-empty");

  // The actor pair must exist in the template, and metrics anchored at a
  // conflict point need one.
  const ScenarioTemplate tmpl = ScenarioTemplate::for_id(c.template_id);
  const ActorId a = c.resolved_actor_a(tmpl);
  const ActorId b = c.resolved_actor_b(tmpl);
  require(tmpl.actor_index(a).has_value(), "actor_a is not part of the template");
  require(tmpl.actor_index(b).has_value(), "actor_b is not part of the template");
  require(a != b, "objective actors must differ");
  if (c.metric == Metric::TrajectoryDistance || c.metric == Metric::PET) {
    require(tmpl.conflict_between(a, b).has_value(),
            "metric needs a conflict point between the objective actors");
  }
  c.space(tmpl);  // validates overrides
  return c;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config: " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error("config parse error in " + path.string() + ": " + e.what());
  }
  return parse_config(j);
}

nlohmann::json config_to_json(const RunConfig& c) {
  nlohmann::json j;
  j["template"] = to_string(c.template_id);
  j["mode"] = to_string(c.mode);
  j["metric"] = to_string(c.metric);
  const ScenarioTemplate tmpl = ScenarioTemplate::for_id(c.template_id);
  j["actor_a"] = to_string(c.resolved_actor_a(tmpl));
  j["actor_b"] = to_string(c.resolved_actor_b(tmpl));
  j["direction"] =
      c.resolved_direction() == Direction::Minimize ? "minimize" : "maximize";
  j["budget"] = c.budget;
  j["grid_steps"] = c.grid_steps;
  j["seed"] = c.seed;
  if (c.target_objective) j["target_objective"] = *c.target_objective;
  j["initial_design"] = c.initial_design;
  j["pool_size"] = c.pool_size;
  j["rff_features"] = c.rff_features;
  j["stride"] = c.stride;
  if (c.dtw_band) j["dtw_band"] = *c.dtw_band;
  j["gamma"] = c.gamma;
  j["median_target"] = c.median_target;
  j["embedding_k"] = c.embedding_k;
  j["eps"] = c.eps;
  j["min_pts"] = c.min_pts;
  j["cluster_space"] = to_string(c.cluster_space);
  j["archetypes_per_cluster"] = c.archetypes_per_cluster;
  j["prototypes_per_cluster"] = c.prototypes_per_cluster;
  j["reduction_branch"] = to_string(c.reduction_branch);
  j["output_dir"] = c.output_dir;
  nlohmann::json params = nlohmann::json::array();
  const ScenarioSpace space = c.space(tmpl);
  for (const auto& p : space.parameters()) {
    params.push_back({{"name", p.name}, {"lower", p.lower}, {"upper", p.upper},
                      {"unit", p.unit}});
  }
  j["parameters"] = params;
  return j;
}

}  // namespace scenex
