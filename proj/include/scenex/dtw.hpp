#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "scenex/geometry.hpp"
#include "scenex/simulator.hpp"

namespace scenex {

/// Fixed-dimensionality point sequence; 2-D for trajectories, 1-D for
/// criticality courses. Stored flat, point-major.
struct Sequence {
  std::uint64_t scenario_id = 0;
  std::size_t dim = 1;
  std::vector<double> data;

  std::size_t length() const { return dim == 0 ? 0 : data.size() / dim; }

  static Sequence from_scalars(std::uint64_t id, const std::vector<double>& values);
  static Sequence from_points(std::uint64_t id, const std::vector<Vec2>& points);
};

/// Classic dynamic time warping: accumulated Euclidean cost over the best
/// monotone alignment with steps (1,0), (0,1), (1,1), anchored at both ends.
/// Not length-normalized. The optional Sakoe-Chiba band limits |i-j|; it is
/// widened automatically to the sequences' length difference so an alignment
/// always exists.
double dtw(const Sequence& a, const Sequence& b,
           std::optional<std::size_t> band = std::nullopt);

/// (x, y) samples of one actor every `stride` frames, final frame always
/// included.
Sequence extract_trajectory(const SimulationTrace& trace, ActorId actor, std::size_t stride);

/// Same stride rule applied to a scalar per-frame series.
Sequence downsample_scalars(std::uint64_t scenario_id, const std::vector<double>& values,
                            std::size_t stride);

inline constexpr const char* kKindEgoTrajectoryDtw = "ego_trajectory_dtw";
std::string metric_dtw_kind(const std::string& metric_name);

struct DistanceMatrix {
  std::vector<std::uint64_t> ids;
  Eigen::MatrixXd D;
  std::string kind;

  std::string to_csv() const;
  static DistanceMatrix from_csv(const std::string& text);
};

/// Pairwise DTW, one evaluation per unordered pair, zero diagonal. Pairs are
/// distributed over threads; the result does not depend on scheduling.
/// `eval_count` reports the number of DTW evaluations when provided.
DistanceMatrix build_distance_matrix(const std::vector<Sequence>& sequences, std::string kind,
                                     std::optional<std::size_t> band = std::nullopt,
                                     std::size_t* eval_count = nullptr);

}  // namespace scenex
