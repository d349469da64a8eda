#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "scenex/dtw.hpp"

namespace scenex {

struct KernelMatrix {
  Eigen::MatrixXd K;
  double gamma = 0.0;
};

struct Embedding {
  std::vector<std::uint64_t> ids;
  Eigen::MatrixXd coordinates;   // n x k, columns ordered by eigenvalue
  Eigen::VectorXd eigenvalues;   // descending, negatives clipped to 0
  double gamma = 0.0;
  double negative_eigen_mass = 0.0;  // |negative spectrum| / |spectrum|

  std::string to_csv() const;
  static Embedding from_csv(const std::string& text);
};

/// Rescale distances so their median off-diagonal entry equals
/// `target_median`; keeps one fixed kernel width usable across metrics of
/// different physical scale. Identity (factor 1) when all distances are 0.
struct RescaledDistances {
  DistanceMatrix matrix;
  double factor = 1.0;
};
RescaledDistances rescale_to_median(const DistanceMatrix& D, double target_median = 0.1);

/// K[i][j] = exp(-gamma * D[i][j]^2).
KernelMatrix rbf_kernel(const DistanceMatrix& D, double gamma);

/// Double-center K, eigendecompose, clip negative eigenvalues to 0 (DTW is
/// not a metric, so K may be indefinite), return the top-k eigenvector
/// coordinates scaled by sqrt(eigenvalue).
Embedding kernel_pca(const KernelMatrix& K, std::size_t k,
                     const std::vector<std::uint64_t>& ids);

}  // namespace scenex
