#include "scenex/scenario.hpp"

#include <cmath>
#include <set>
#include <stdexcept>

namespace scenex {

std::string to_string(TemplateId id) {
  return id == TemplateId::Scenario1 ? "scenario1" : "scenario2";
}

TemplateId template_id_from_string(const std::string& s) {
  if (s == "scenario1") return TemplateId::Scenario1;
  if (s == "scenario2") return TemplateId::Scenario2;
  throw std::invalid_argument("unknown scenario template: " + s);
}

std::string to_string(ScenarioSource s) {
  switch (s) {
    case ScenarioSource::Grid: return "grid";
    case ScenarioSource::Initial: return "initial";
    case ScenarioSource::Optimizer: return "optimizer";
  }
  return "grid";
}

ScenarioSpace::ScenarioSpace(TemplateId id, std::vector<ParameterRange> parameters)
    : template_id_(id), parameters_(std::move(parameters)) {
  if (parameters_.empty()) {
    throw std::invalid_argument("ScenarioSpace needs at least one parameter");
  }
  std::set<std::string> names;
  for (const auto& p : parameters_) {
    if (!(p.lower < p.upper)) {
      throw std::invalid_argument("parameter '" + p.name + "': lower must be < upper");
    }
    if (!names.insert(p.name).second) {
      throw std::invalid_argument("duplicate parameter name '" + p.name + "'");
    }
  }
}

ConcreteScenario make_scenario(const ScenarioSpace& space, std::vector<double> values,
                               ScenarioSource source, ScenarioIdAllocator& ids) {
  if (values.size() != space.dim()) {
    throw std::invalid_argument("scenario dimensionality mismatch");
  }
  for (std::size_t i = 0; i < values.size(); ++i) {
    const auto& p = space.parameters()[i];
    if (values[i] < p.lower || values[i] > p.upper) {
      throw std::invalid_argument("value for '" + p.name + "' outside its range");
    }
  }
  return ConcreteScenario{ids.next(), std::move(values), source};
}

std::vector<ConcreteScenario> sample_grid(const ScenarioSpace& space, int steps_per_dim,
                                          ScenarioIdAllocator& ids) {
  if (steps_per_dim < 2) {
    throw std::invalid_argument("sample_grid requires steps_per_dim >= 2");
  }
  const std::size_t d = space.dim();
  std::size_t total = 1;
  for (std::size_t i = 0; i < d; ++i) total *= static_cast<std::size_t>(steps_per_dim);

  std::vector<ConcreteScenario> out;
  out.reserve(total);
  std::vector<int> idx(d, 0);
  std::vector<double> values(d);
  for (std::size_t n = 0; n < total; ++n) {
    for (std::size_t i = 0; i < d; ++i) {
      const auto& p = space.parameters()[i];
      const double t = static_cast<double>(idx[i]) / (steps_per_dim - 1);
      values[i] = p.lower + t * (p.upper - p.lower);
    }
    out.push_back(make_scenario(space, values, ScenarioSource::Grid, ids));
    // advance, last dimension fastest
    for (std::size_t i = d; i-- > 0;) {
      if (++idx[i] < steps_per_dim) break;
      idx[i] = 0;
    }
  }
  return out;
}

std::vector<double> normalize(const ConcreteScenario& scenario, const ScenarioSpace& space) {
  if (scenario.values.size() != space.dim()) {
    throw std::invalid_argument("scenario does not belong to this space");
  }
  std::vector<double> u(space.dim());
  for (std::size_t i = 0; i < u.size(); ++i) {
    const auto& p = space.parameters()[i];
    u[i] = (scenario.values[i] - p.lower) / (p.upper - p.lower);
  }
  return u;
}

ConcreteScenario denormalize(const std::vector<double>& u, const ScenarioSpace& space,
                             ScenarioSource source, ScenarioIdAllocator& ids) {
  if (u.size() != space.dim()) {
    throw std::invalid_argument("unit vector dimensionality mismatch");
  }
  std::vector<double> values(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) {
    if (u[i] < 0.0 || u[i] > 1.0 || !std::isfinite(u[i])) {
      throw std::invalid_argument("unit vector component outside [0,1]");
    }
    const auto& p = space.parameters()[i];
    values[i] = p.lower + u[i] * (p.upper - p.lower);
  }
  return ConcreteScenario{ids.next(), std::move(values), source};
}

}  // namespace scenex
