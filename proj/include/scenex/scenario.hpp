#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace scenex {

struct ParameterRange {
  std::string name;
  double lower = 0.0;
  double upper = 0.0;
  std::string unit;
};

enum class TemplateId { Scenario1, Scenario2 };

std::string to_string(TemplateId id);
TemplateId template_id_from_string(const std::string& s);

/// The search domain of a logical scenario. Parameter order is fixed and
/// defines the vector layout everywhere downstream.
class ScenarioSpace {
 public:
  ScenarioSpace(TemplateId id, std::vector<ParameterRange> parameters);

  TemplateId template_id() const { return template_id_; }
  const std::vector<ParameterRange>& parameters() const { return parameters_; }
  std::size_t dim() const { return parameters_.size(); }

 private:
  TemplateId template_id_;
  std::vector<ParameterRange> parameters_;
};

enum class ScenarioSource { Grid, Initial, Optimizer };

std::string to_string(ScenarioSource s);

struct ConcreteScenario {
  std::uint64_t id = 0;
  std::vector<double> values;  // aligned with ScenarioSpace::parameters
  ScenarioSource source = ScenarioSource::Grid;
};

/// Hands out scenario ids; ids increase monotonically and are never reused.
class ScenarioIdAllocator {
 public:
  std::uint64_t next() { return next_id_++; }

 private:
  std::uint64_t next_id_ = 0;
};

ConcreteScenario make_scenario(const ScenarioSpace& space, std::vector<double> values,
                               ScenarioSource source, ScenarioIdAllocator& ids);

/// Cartesian product of per-dimension linearly spaced values including both
/// endpoints; steps^d scenarios, last dimension varying fastest.
std::vector<ConcreteScenario> sample_grid(const ScenarioSpace& space, int steps_per_dim,
                                          ScenarioIdAllocator& ids);

/// Map scenario values into [0,1]^d component-wise.
std::vector<double> normalize(const ConcreteScenario& scenario, const ScenarioSpace& space);

/// Inverse of normalize; each component of u must lie in [0,1].
ConcreteScenario denormalize(const std::vector<double>& u, const ScenarioSpace& space,
                             ScenarioSource source, ScenarioIdAllocator& ids);

}  // namespace scenex
