#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "scenex/gp.hpp"
#include "scenex/metrics.hpp"
#include "scenex/scenario.hpp"

namespace scenex {

using ObjectiveFn = std::function<double(const ConcreteScenario&)>;

struct ObjectiveSample {
  ConcreteScenario scenario;
  double objective = 0.0;
  std::size_t iteration = 0;
};

enum class ExplorationTermination { BudgetExhausted, TargetReached };

std::string to_string(ExplorationTermination t);

struct ExploreOptions {
  std::size_t budget = 400;
  std::uint64_t seed = 0;
  std::size_t initial_design = 10;   // quasi-random evaluations before the GP loop
  std::size_t pool_size = 4096;      // fixed low-discrepancy candidate pool
  std::size_t rff_features = 500;    // random Fourier features per posterior sample
  std::optional<double> target_objective;  // stop early once reached (raw units)
  GPHyperGrid hyper_grid;
};

struct ExplorationLog {
  std::vector<ObjectiveSample> entries;
  std::vector<double> best_so_far;  // raw objective units, one per entry
  ExplorationTermination termination = ExplorationTermination::BudgetExhausted;
  Direction direction = Direction::Minimize;

  /// Index of the first entry attaining the best objective.
  std::size_t best_index() const;

  /// iteration, scenario_id, parameters, objective, best_so_far.
  std::string to_csv(const ScenarioSpace& space) const;
};

/// Quasi-random initial design followed by fit -> Thompson-sample -> evaluate
/// until the budget is spent. Maximize objectives are negated internally, so
/// the surrogate always minimizes. Fully reproducible from the seed. Stops
/// early (BudgetExhausted) in the degenerate case of an exhausted candidate
/// pool.
ExplorationLog explore(const ScenarioSpace& space, const ObjectiveFn& objective,
                       Direction direction, const ExploreOptions& options,
                       ScenarioIdAllocator& ids);

/// Exhaustive baseline over a uniform grid with `steps` values per dimension.
ExplorationLog grid_explore(const ScenarioSpace& space, const ObjectiveFn& objective,
                            Direction direction, std::size_t steps, ScenarioIdAllocator& ids);

/// Objective that simulates the scenario and summarizes the given metric.
ObjectiveFn simulation_objective(const ScenarioTemplate& tmpl, Metric metric, ActorId a,
                                 ActorId b);

}  // namespace scenex
