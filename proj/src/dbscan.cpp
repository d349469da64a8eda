#include "scenex/dbscan.hpp"

#include <algorithm>
#include <queue>
#include <stdexcept>

namespace scenex {

std::string ClusterAssignment::to_csv(const std::vector<std::uint64_t>& ids) const {
  if (ids.size() != labels.size()) throw std::invalid_argument("id/label count mismatch");
  std::string out = "id,label,core\n";
  for (std::size_t i = 0; i < labels.size(); ++i) {
    out += std::to_string(ids[i]);
    out += ',' + std::to_string(labels[i]);
    out += ',' + std::string(core[i] ? "1" : "0");
    out += '\n';
  }
  return out;
}

namespace {

Eigen::MatrixXd pairwise_euclidean(const Eigen::MatrixXd& points) {
  const Eigen::Index n = points.rows();
  Eigen::VectorXd sq = points.rowwise().squaredNorm();
  Eigen::MatrixXd D2 = sq.replicate(1, n) + sq.transpose().replicate(n, 1) -
                       2.0 * (points * points.transpose());
  return D2.cwiseMax(0.0).cwiseSqrt();
}

ClusterAssignment dbscan_impl(const Eigen::MatrixXd& D, double eps, std::size_t min_pts) {
  if (eps <= 0.0) throw std::invalid_argument("eps must be positive");
  if (min_pts < 1) throw std::invalid_argument("min_pts must be >= 1");
  const std::size_t n = static_cast<std::size_t>(D.rows());

  std::vector<std::vector<std::size_t>> neighbors(n);  // self-inclusive
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (D(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) <= eps) {
        neighbors[i].push_back(j);
      }
    }
  }

  ClusterAssignment out;
  out.eps = eps;
  out.min_pts = min_pts;
  out.labels.assign(n, -1);
  out.core.assign(n, false);
  for (std::size_t i = 0; i < n; ++i) out.core[i] = neighbors[i].size() >= min_pts;

  // Connected components of the core-to-core eps graph, numbered by lowest
  // core index.
  int next_label = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (!out.core[i] || out.labels[i] != -1) continue;
    const int label = next_label++;
    std::queue<std::size_t> frontier;
    out.labels[i] = label;
    frontier.push(i);
    while (!frontier.empty()) {
      const std::size_t p = frontier.front();
      frontier.pop();
      for (std::size_t q : neighbors[p]) {
        if (!out.core[q] || out.labels[q] != -1) continue;
        out.labels[q] = label;
        frontier.push(q);
      }
    }
  }
  out.n_clusters = next_label;

  // Border points: non-core within eps of at least one core point.
  for (std::size_t i = 0; i < n; ++i) {
    if (out.core[i]) continue;
    int best = -1;
    for (std::size_t q : neighbors[i]) {
      if (!out.core[q]) continue;
      if (best == -1 || out.labels[q] < best) best = out.labels[q];
    }
    out.labels[i] = best;
  }
  return out;
}

std::vector<double> k_distance_impl(const Eigen::MatrixXd& D, std::size_t k) {
  const std::size_t n = static_cast<std::size_t>(D.rows());
  if (k < 1 || k >= n) throw std::invalid_argument("k must be in [1, n-1]");
  std::vector<double> profile;
  profile.reserve(n);
  std::vector<double> row;
  for (std::size_t i = 0; i < n; ++i) {
    row.clear();
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      row.push_back(D(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)));
    }
    std::nth_element(row.begin(), row.begin() + static_cast<std::ptrdiff_t>(k - 1), row.end());
    profile.push_back(row[k - 1]);
  }
  std::sort(profile.begin(), profile.end());
  return profile;
}

}  // namespace

ClusterAssignment dbscan_points(const Eigen::MatrixXd& points, double eps,
                                std::size_t min_pts) {
  return dbscan_impl(pairwise_euclidean(points), eps, min_pts);
}

ClusterAssignment dbscan_distances(const Eigen::MatrixXd& D, double eps, std::size_t min_pts) {
  if (D.rows() != D.cols()) throw std::invalid_argument("distance matrix must be square");
  return dbscan_impl(D, eps, min_pts);
}

std::vector<double> k_distance_profile(const Eigen::MatrixXd& points, std::size_t k) {
  return k_distance_impl(pairwise_euclidean(points), k);
}

std::vector<double> k_distance_profile_from_distances(const Eigen::MatrixXd& D, std::size_t k) {
  if (D.rows() != D.cols()) throw std::invalid_argument("distance matrix must be square");
  return k_distance_impl(D, k);
}

}  // namespace scenex
