#include "scenex/embedding.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "scenex/io.hpp"

namespace scenex {

std::string Embedding::to_csv() const {
  const Eigen::Index n = coordinates.rows();
  const Eigen::Index k = coordinates.cols();
  std::string out = "# gamma=" + format_double(gamma) + "\n";
  out += "# negative_eigen_mass=" + format_double(negative_eigen_mass) + "\n";
  out += "# eigenvalues=";
  for (Eigen::Index j = 0; j < eigenvalues.size(); ++j) {
    if (j > 0) out += ';';
    out += format_double(eigenvalues(j));
  }
  out += "\nid";
  for (Eigen::Index j = 0; j < k; ++j) out += ",c" + std::to_string(j + 1);
  out += '\n';
  for (Eigen::Index i = 0; i < n; ++i) {
    out += std::to_string(ids[static_cast<std::size_t>(i)]);
    for (Eigen::Index j = 0; j < k; ++j) out += ',' + format_double(coordinates(i, j));
    out += '\n';
  }
  return out;
}

Embedding Embedding::from_csv(const std::string& text) {
  Embedding e;
  std::istringstream in(text);
  std::string line;
  bool header_seen = false;
  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line.rfind("# gamma=", 0) == 0) {
      e.gamma = parse_double(line.substr(8));
      continue;
    }
    if (line.rfind("# negative_eigen_mass=", 0) == 0) {
      e.negative_eigen_mass = parse_double(line.substr(22));
      continue;
    }
    if (line.rfind("# eigenvalues=", 0) == 0) {
      std::vector<double> vals;
      std::string rest = line.substr(14);
      std::size_t start = 0;
      while (start <= rest.size()) {
        std::size_t semi = rest.find(';', start);
        const std::string item =
            semi == std::string::npos ? rest.substr(start) : rest.substr(start, semi - start);
        if (!item.empty()) vals.push_back(parse_double(item));
        if (semi == std::string::npos) break;
        start = semi + 1;
      }
      e.eigenvalues = Eigen::Map<Eigen::VectorXd>(vals.data(),
                                                  static_cast<Eigen::Index>(vals.size()));
      continue;
    }
    auto fields = split_csv_line(line);
    if (!header_seen) {
      if (fields.empty() || fields[0] != "id") {
        throw std::runtime_error("bad embedding header: " + line);
      }
      header_seen = true;
      continue;
    }
    e.ids.push_back(parse_uint(fields[0]));
    std::vector<double> row;
    for (std::size_t j = 1; j < fields.size(); ++j) row.push_back(parse_double(fields[j]));
    rows.push_back(std::move(row));
  }
  if (!header_seen) throw std::runtime_error("embedding CSV has no header");
  const auto n = static_cast<Eigen::Index>(rows.size());
  const auto k = n > 0 ? static_cast<Eigen::Index>(rows[0].size()) : 0;
  e.coordinates.resize(n, k);
  for (Eigen::Index i = 0; i < n; ++i) {
    if (static_cast<Eigen::Index>(rows[static_cast<std::size_t>(i)].size()) != k) {
      throw std::runtime_error("ragged embedding CSV");
    }
    for (Eigen::Index j = 0; j < k; ++j) {
      e.coordinates(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    }
  }
  return e;
}

RescaledDistances rescale_to_median(const DistanceMatrix& D, double target_median) {
  if (target_median <= 0.0) throw std::invalid_argument("target median must be positive");
  const Eigen::Index n = D.D.rows();
  std::vector<double> offdiag;
  offdiag.reserve(static_cast<std::size_t>(n) * (n - 1) / 2);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) offdiag.push_back(D.D(i, j));
  }
  RescaledDistances out{D, 1.0};
  if (offdiag.empty()) return out;
  std::sort(offdiag.begin(), offdiag.end());
  const double median = offdiag[(offdiag.size() - 1) / 2];  // lower median
  if (median <= 0.0) return out;
  out.factor = target_median / median;
  out.matrix.D *= out.factor;
  return out;
}

KernelMatrix rbf_kernel(const DistanceMatrix& D, double gamma) {
  if (gamma <= 0.0) throw std::invalid_argument("kernel width gamma must be positive");
  KernelMatrix km;
  km.gamma = gamma;
  km.K = (-gamma * D.D.array().square()).exp().matrix();
  return km;
}

Embedding kernel_pca(const KernelMatrix& K, std::size_t k,
                     const std::vector<std::uint64_t>& ids) {
  const Eigen::Index n = K.K.rows();
  if (n < 1 || K.K.cols() != n) throw std::invalid_argument("kernel matrix must be square");
  if (k < 1 || static_cast<Eigen::Index>(k) > n) {
    throw std::invalid_argument("retained components must be in [1, n]");
  }
  if (ids.size() != static_cast<std::size_t>(n)) {
    throw std::invalid_argument("id count does not match kernel size");
  }

  const Eigen::VectorXd row_mean = K.K.rowwise().mean();
  const double total_mean = K.K.mean();
  Eigen::MatrixXd Kc = K.K;
  Kc.colwise() -= row_mean;
  Kc.rowwise() -= row_mean.transpose();
  Kc.array() += total_mean;

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(Kc);
  if (solver.info() != Eigen::Success) throw std::runtime_error("eigendecomposition failed");
  // Eigen returns ascending order; flip to descending.
  Eigen::VectorXd evals = solver.eigenvalues().reverse();
  Eigen::MatrixXd evecs = solver.eigenvectors().rowwise().reverse();

  double pos_mass = 0.0, neg_mass = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (evals(i) >= 0.0) {
      pos_mass += evals(i);
    } else {
      neg_mass += -evals(i);
    }
  }

  Embedding e;
  e.ids = ids;
  e.gamma = K.gamma;
  e.negative_eigen_mass = (pos_mass + neg_mass) > 0.0 ? neg_mass / (pos_mass + neg_mass) : 0.0;
  const auto kk = static_cast<Eigen::Index>(k);
  e.eigenvalues = evals.head(kk).cwiseMax(0.0);
  e.coordinates.resize(n, kk);
  for (Eigen::Index j = 0; j < kk; ++j) {
    e.coordinates.col(j) = evecs.col(j) * std::sqrt(e.eigenvalues(j));
  }
  return e;
}

}  // namespace scenex
