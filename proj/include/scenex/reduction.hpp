#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "scenex/dbscan.hpp"
#include "scenex/dtw.hpp"
#include "scenex/embedding.hpp"

namespace scenex {

/// Euclidean projection onto the probability simplex (sum 1, non-negative).
Eigen::VectorXd project_to_simplex(const Eigen::VectorXd& v);

/// Archetypal analysis result: X ~ A * Z with Z = B * X, rows of A and B on
/// the simplex, so archetypes are convex combinations of data points and data
/// points are convex combinations of archetypes.
struct ArchetypeModel {
  int cluster_id = -1;
  std::size_t m = 0;
  Eigen::MatrixXd Z;  // m x k archetype coordinates
  Eigen::MatrixXd A;  // n x m point-to-archetype weights
  Eigen::MatrixXd B;  // m x n archetype-to-point weights
  double rss = 0.0;
  std::vector<double> rss_history;  // RSS after each alternating iteration
  bool converged = false;
  std::size_t iterations = 0;
};

/// Alternating simplex-constrained least squares with projected-gradient row
/// updates; RSS never increases between iterations. Initialization is a
/// furthest-point sweep whose start index derives from the seed, so runs are
/// deterministic. Stops at relative RSS improvement < 1e-6 or 500 iterations
/// (then `converged` is false and the best iterate is returned).
ArchetypeModel archetypal_analysis(const Eigen::MatrixXd& X, std::size_t m,
                                   std::uint64_t seed);

/// Member (row index into D) minimizing the summed distance to the other
/// members; ties pick the lowest index. With rows ordered by scenario id this
/// is the lowest-id tie break.
std::size_t medoid(const std::vector<std::size_t>& members, const Eigen::MatrixXd& D);

enum class ReducedRole { Archetype, Prototype };
std::string to_string(ReducedRole role);
ReducedRole reduced_role_from_string(const std::string& s);

struct ReducedEntry {
  std::uint64_t scenario_id = 0;
  ReducedRole role = ReducedRole::Prototype;
  int cluster_id = -1;
};

struct ReducedScenarioSet {
  std::vector<ReducedEntry> entries;
  std::vector<int> fallback_clusters;  // clusters handled by the non-convex fallback
  std::vector<std::string> warnings;
};

struct ReduceOptions {
  std::size_t archetypes_per_cluster = 15;
  std::size_t prototypes_per_cluster = 1;
  std::uint64_t seed = 0;
  /// Archetype fit worse than this fraction of the cluster's total variance
  /// triggers the max-min spread fallback for non-convex clusters.
  double fallback_rss_fraction = 0.5;
};

/// Per non-noise cluster: medoid prototypes first, then archetypes snapped to
/// the nearest real member in embedding coordinates; duplicates are dropped
/// (prototypes win), noise is excluded.
ReducedScenarioSet reduce(const ClusterAssignment& clusters, const Embedding& embedding,
                          const DistanceMatrix& D, const ReduceOptions& options);

}  // namespace scenex
