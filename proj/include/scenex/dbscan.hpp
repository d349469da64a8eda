#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

namespace scenex {

/// Density-based clustering result. Labels are 0..n_clusters-1, noise is -1.
/// Clusters are numbered by their lowest-index core point, and border points
/// join the lowest-indexed reachable cluster, so the labeling is fully
/// deterministic and independent of input thread/visit order.
struct ClusterAssignment {
  std::vector<int> labels;
  std::vector<bool> core;
  double eps = 0.0;
  std::size_t min_pts = 0;
  int n_clusters = 0;

  std::string to_csv(const std::vector<std::uint64_t>& ids) const;
};

/// DBSCAN on points (rows of `points`) under the Euclidean distance.
ClusterAssignment dbscan_points(const Eigen::MatrixXd& points, double eps,
                                std::size_t min_pts);

/// DBSCAN on a precomputed symmetric distance matrix.
ClusterAssignment dbscan_distances(const Eigen::MatrixXd& D, double eps, std::size_t min_pts);

/// Each point's distance to its k-th nearest neighbor (self excluded), sorted
/// ascending; the usual aid for picking eps.
std::vector<double> k_distance_profile(const Eigen::MatrixXd& points, std::size_t k);
std::vector<double> k_distance_profile_from_distances(const Eigen::MatrixXd& D, std::size_t k);

}  // namespace scenex
