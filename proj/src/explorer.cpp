#include "scenex/explorer.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "scenex/io.hpp"
#include "scenex/quasirandom.hpp"

namespace scenex {

std::string to_string(ExplorationTermination t) {
  return t == ExplorationTermination::BudgetExhausted ? "budget_exhausted" : "target_reached";
}

std::size_t ExplorationLog::best_index() const {
  if (entries.empty()) throw std::logic_error("empty exploration log");
  std::size_t best = 0;
  for (std::size_t i = 1; i < entries.size(); ++i) {
    const bool better = direction == Direction::Minimize
                            ? entries[i].objective < entries[best].objective
                            : entries[i].objective > entries[best].objective;
    if (better) best = i;
  }
  return best;
}

std::string ExplorationLog::to_csv(const ScenarioSpace& space) const {
  std::string out = "iteration,scenario_id";
  for (const auto& p : space.parameters()) out += "," + p.name;
  out += ",objective,best_so_far\n";
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const auto& e = entries[i];
    out += std::to_string(e.iteration);
    out += ',' + std::to_string(e.scenario.id);
    for (double v : e.scenario.values) out += ',' + format_double(v);
    out += ',' + format_double(e.objective);
    out += ',' + format_double(best_so_far[i]);
    out += '\n';
  }
  return out;
}

namespace {

double unit_double(std::uint64_t bits) {
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

bool target_met(Direction dir, double value, const std::optional<double>& target) {
  if (!target) return false;
  return dir == Direction::Minimize ? value <= *target : value >= *target;
}

struct BestTracker {
  Direction dir;
  double best = 0.0;
  bool any = false;
  double update(double value) {
    if (!any) {
      best = value;
      any = true;
    } else if (dir == Direction::Minimize ? value < best : value > best) {
      best = value;
    }
    return best;
  }
};

}  // namespace

ExplorationLog explore(const ScenarioSpace& space, const ObjectiveFn& objective,
                       Direction direction, const ExploreOptions& options,
                       ScenarioIdAllocator& ids) {
  const std::size_t d = space.parameters().size();
  if (options.initial_design < 1) throw std::invalid_argument("initial design must be >= 1");
  if (options.budget < options.initial_design) {
    throw std::invalid_argument("budget must cover the initial design");
  }
  if (options.pool_size < 1) throw std::invalid_argument("candidate pool must be non-empty");

  ExplorationLog log;
  log.direction = direction;
  BestTracker tracker{direction};

  std::vector<Eigen::VectorXd> evaluated;  // normalized coordinates
  evaluated.reserve(options.budget);

  auto evaluate = [&](const std::vector<double>& unit, ScenarioSource source) {
    ConcreteScenario scn = denormalize(unit, space, source, ids);
    const double y = objective(scn);
    if (!std::isfinite(y)) throw std::runtime_error("objective returned a non-finite value");
    Eigen::VectorXd x(static_cast<Eigen::Index>(d));
    for (std::size_t i = 0; i < d; ++i) x(static_cast<Eigen::Index>(i)) = unit[i];
    evaluated.push_back(std::move(x));
    log.entries.push_back({std::move(scn), y, log.entries.size()});
    log.best_so_far.push_back(tracker.update(y));
    return y;
  };

  // Seed-shifted quasi-random initial design.
  std::vector<double> shift(d);
  for (std::size_t i = 0; i < d; ++i) {
    shift[i] = unit_double(mix_seed(options.seed, 100 + i));
  }
  for (auto& point : SobolSequence::generate(d, options.initial_design)) {
    for (std::size_t i = 0; i < d; ++i) {
      point[i] = std::fmod(point[i] + shift[i], 1.0);
    }
    const double y = evaluate(point, ScenarioSource::Initial);
    if (target_met(direction, y, options.target_objective)) {
      log.termination = ExplorationTermination::TargetReached;
      return log;
    }
  }

  // Fixed unshifted candidate pool; evaluated candidates drop out.
  const auto pool = SobolSequence::generate(d, options.pool_size);
  std::vector<bool> available(pool.size(), true);
  for (const auto& x : evaluated) {
    for (std::size_t c = 0; c < pool.size(); ++c) {
      if (!available[c]) continue;
      bool same = true;
      for (std::size_t i = 0; i < d; ++i) {
        if (pool[c][i] != x(static_cast<Eigen::Index>(i))) {
          same = false;
          break;
        }
      }
      if (same) available[c] = false;
    }
  }

  while (log.entries.size() < options.budget) {
    Eigen::MatrixXd X(static_cast<Eigen::Index>(evaluated.size()),
                      static_cast<Eigen::Index>(d));
    Eigen::VectorXd z(static_cast<Eigen::Index>(evaluated.size()));
    for (std::size_t i = 0; i < evaluated.size(); ++i) {
      X.row(static_cast<Eigen::Index>(i)) = evaluated[i].transpose();
      const double y = log.entries[i].objective;
      z(static_cast<Eigen::Index>(i)) = direction == Direction::Maximize ? -y : y;
    }
    GPModel model = fit_gp(X, z, options.hyper_grid);

    std::vector<Eigen::VectorXd> candidates;
    std::vector<std::size_t> candidate_pool_index;
    for (std::size_t c = 0; c < pool.size(); ++c) {
      if (!available[c]) continue;
      Eigen::VectorXd v(static_cast<Eigen::Index>(d));
      for (std::size_t i = 0; i < d; ++i) v(static_cast<Eigen::Index>(i)) = pool[c][i];
      candidates.push_back(std::move(v));
      candidate_pool_index.push_back(c);
    }
    if (candidates.empty()) break;

    const std::uint64_t tseed = mix_seed(options.seed, 1000 + log.entries.size());
    const std::size_t sel =
        thompson_sample_argmin(model, candidates, tseed, options.rff_features);
    available[candidate_pool_index[sel]] = false;

    const double y = evaluate(pool[candidate_pool_index[sel]], ScenarioSource::Optimizer);
    if (target_met(direction, y, options.target_objective)) {
      log.termination = ExplorationTermination::TargetReached;
      return log;
    }
  }

  log.termination = ExplorationTermination::BudgetExhausted;
  return log;
}

ExplorationLog grid_explore(const ScenarioSpace& space, const ObjectiveFn& objective,
                            Direction direction, std::size_t steps, ScenarioIdAllocator& ids) {
  ExplorationLog log;
  log.direction = direction;
  BestTracker tracker{direction};
  for (auto& scn : sample_grid(space, static_cast<int>(steps), ids)) {
    const double y = objective(scn);
    if (!std::isfinite(y)) throw std::runtime_error("objective returned a non-finite value");
    log.entries.push_back({std::move(scn), y, log.entries.size()});
    log.best_so_far.push_back(tracker.update(y));
  }
  log.termination = ExplorationTermination::BudgetExhausted;
  return log;
}

ObjectiveFn simulation_objective(const ScenarioTemplate& tmpl, Metric metric, ActorId a,
                                 ActorId b) {
  return [tmpl, metric, a, b](const ConcreteScenario& scn) {
    const SimulationTrace trace = simulate(scn, tmpl);
    return compute_series(trace, metric, a, b, tmpl).summary;
  };
}

}  // namespace scenex
