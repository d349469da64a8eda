#include "scenex/gp.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

namespace scenex {

namespace {

Eigen::MatrixXd squared_distances(const Eigen::MatrixXd& X) {
  const Eigen::Index n = X.rows();
  Eigen::VectorXd sq = X.rowwise().squaredNorm();
  Eigen::MatrixXd D = sq.replicate(1, n) + sq.transpose().replicate(n, 1) -
                      2.0 * (X * X.transpose());
  return D.cwiseMax(0.0);
}

Eigen::MatrixXd kernel_matrix(const Eigen::MatrixXd& sqdist, const GPHyperParams& hp) {
  const double sf2 = hp.signal_std * hp.signal_std;
  const double inv = 1.0 / (2.0 * hp.length_scale * hp.length_scale);
  return sf2 * (-inv * sqdist.array()).exp().matrix();
}

}  // namespace

GPModel::GPModel(Eigen::MatrixXd X, Eigen::VectorXd y, const GPHyperParams& hp)
    : X_(std::move(X)), hp_(hp) {
  const Eigen::Index n = X_.rows();
  if (n < 1 || y.size() != n) throw std::invalid_argument("GP needs n >= 1 matching targets");
  if (!y.allFinite()) throw std::invalid_argument("GP targets must be finite");
  if (hp.length_scale <= 0.0 || hp.signal_std <= 0.0) {
    throw std::invalid_argument("GP hyperparameters must be positive");
  }

  y_mean_ = y.mean();
  y_scale_ = std::sqrt((y.array() - y_mean_).square().mean());
  if (y_scale_ < 1e-12) y_scale_ = 1.0;  // constant targets
  y_std_ = (y.array() - y_mean_) / y_scale_;

  noise_var_ = std::max(hp.noise_std * hp.noise_std, kGPJitterFloor);
  const Eigen::MatrixXd sqdist = squared_distances(X_);
  for (int attempt = 0;; ++attempt) {
    Eigen::MatrixXd K = kernel_matrix(sqdist, hp_);
    K.diagonal().array() += noise_var_;
    llt_.compute(K);
    if (llt_.info() == Eigen::Success) break;
    if (attempt >= 5) throw std::runtime_error("GP kernel matrix not positive definite");
    noise_var_ *= 100.0;
  }
  alpha_ = llt_.solve(y_std_);

  const double quad = y_std_.dot(alpha_);
  const double logdet =
      2.0 * Eigen::MatrixXd(llt_.matrixL()).diagonal().array().log().sum();
  log_marginal_ = -0.5 * quad - 0.5 * logdet -
                  0.5 * static_cast<double>(n) * std::log(2.0 * M_PI);
}

GPModel::Prediction GPModel::predict_standardized(const Eigen::VectorXd& x) const {
  const double sf2 = hp_.signal_std * hp_.signal_std;
  const double inv = 1.0 / (2.0 * hp_.length_scale * hp_.length_scale);
  Eigen::VectorXd k_star =
      sf2 * (-inv * (X_.rowwise() - x.transpose()).rowwise().squaredNorm().array())
                .exp()
                .matrix();
  Prediction p;
  p.mean = k_star.dot(alpha_);
  Eigen::VectorXd v = llt_.matrixL().solve(k_star);
  p.variance = std::max(sf2 - v.squaredNorm(), 0.0);
  return p;
}

GPModel::Prediction GPModel::predict(const Eigen::VectorXd& x) const {
  Prediction p = predict_standardized(x);
  p.mean = y_mean_ + y_scale_ * p.mean;
  p.variance = y_scale_ * y_scale_ * p.variance;
  return p;
}

GPModel fit_gp(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, const GPHyperGrid& grid) {
  if (grid.length_scales.empty() || grid.signal_stds.empty() || grid.noise_stds.empty()) {
    throw std::invalid_argument("empty hyperparameter grid");
  }
  GPModel best;
  double best_lml = -std::numeric_limits<double>::infinity();
  bool have_best = false;
  for (double ls : grid.length_scales) {
    for (double sf : grid.signal_stds) {
      for (double sn : grid.noise_stds) {
        GPModel model(X, y, GPHyperParams{ls, sf, sn});
        if (!have_best || model.log_marginal_likelihood() > best_lml) {
          best_lml = model.log_marginal_likelihood();
          best = std::move(model);
          have_best = true;
        }
      }
    }
  }
  return best;
}

std::size_t thompson_sample_argmin(const GPModel& model,
                                   const std::vector<Eigen::VectorXd>& pool,
                                   std::uint64_t seed, std::size_t feature_count) {
  if (pool.empty()) throw std::invalid_argument("Thompson sampling needs a non-empty pool");
  const Eigen::Index m = static_cast<Eigen::Index>(feature_count);
  const Eigen::Index d = model.inputs().cols();
  const GPHyperParams& hp = model.hyper_params();

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> uniform(0.0, 2.0 * M_PI);

  Eigen::MatrixXd W(m, d);
  for (Eigen::Index j = 0; j < m; ++j) {
    for (Eigen::Index i = 0; i < d; ++i) W(j, i) = gauss(rng) / hp.length_scale;
  }
  Eigen::VectorXd b(m);
  for (Eigen::Index j = 0; j < m; ++j) b(j) = uniform(rng);
  Eigen::VectorXd z(m);
  for (Eigen::Index j = 0; j < m; ++j) z(j) = gauss(rng);

  const double scale = hp.signal_std * std::sqrt(2.0 / static_cast<double>(m));

  // Feature matrix of the training inputs, then the Bayesian linear model
  // posterior over feature weights.
  Eigen::MatrixXd phi =
      (((model.inputs() * W.transpose()).rowwise() + b.transpose()).array().cos() * scale)
          .matrix();
  Eigen::MatrixXd A = phi.transpose() * phi;
  A.diagonal().array() += model.noise_variance();
  Eigen::LLT<Eigen::MatrixXd> llt(A);
  if (llt.info() != Eigen::Success) {
    throw std::runtime_error("feature-space normal equations not positive definite");
  }
  Eigen::VectorXd w_mean = llt.solve(phi.transpose() * model.standardized_targets());
  Eigen::VectorXd w =
      w_mean + std::sqrt(model.noise_variance()) * llt.matrixU().solve(z);

  std::size_t best_idx = 0;
  double best_val = std::numeric_limits<double>::infinity();
  for (std::size_t c = 0; c < pool.size(); ++c) {
    if (pool[c].size() != d) throw std::invalid_argument("pool candidate dimension mismatch");
    Eigen::VectorXd feat = (((W * pool[c]) + b).array().cos() * scale).matrix();
    const double val = feat.dot(w);
    if (val < best_val) {
      best_val = val;
      best_idx = c;
    }
  }
  return best_idx;
}

}  // namespace scenex
