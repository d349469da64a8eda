#pragma once

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <cstdint>
#include <vector>

namespace scenex {

/// Hyperparameter grid searched by log marginal likelihood. One shared length
/// scale across dimensions; signal and noise given as standard deviations.
struct GPHyperGrid {
  std::vector<double> length_scales{0.05, 0.1, 0.2, 0.4, 0.8};
  std::vector<double> signal_stds{0.5, 1.0, 2.0};
  std::vector<double> noise_stds{1e-4, 1e-2};
};

struct GPHyperParams {
  double length_scale = 0.2;
  double signal_std = 1.0;
  double noise_std = 1e-2;
};

inline constexpr double kGPJitterFloor = 1e-8;  // lower bound on noise variance

/// Squared-exponential GP regressor on normalized inputs. Targets are
/// standardized internally; predictions are reported in original units.
class GPModel {
 public:
  struct Prediction {
    double mean = 0.0;
    double variance = 0.0;
  };

  GPModel() = default;
  GPModel(Eigen::MatrixXd X, Eigen::VectorXd y, const GPHyperParams& hp);

  /// Posterior in original target units.
  Prediction predict(const Eigen::VectorXd& x) const;

  /// Posterior of the standardized latent function (used by sampling and by
  /// the variance invariants).
  Prediction predict_standardized(const Eigen::VectorXd& x) const;

  const Eigen::MatrixXd& inputs() const { return X_; }
  const Eigen::VectorXd& standardized_targets() const { return y_std_; }
  const GPHyperParams& hyper_params() const { return hp_; }
  double noise_variance() const { return noise_var_; }
  double target_mean() const { return y_mean_; }
  double target_scale() const { return y_scale_; }
  double log_marginal_likelihood() const { return log_marginal_; }
  std::size_t size() const { return static_cast<std::size_t>(X_.rows()); }

 private:
  Eigen::MatrixXd X_;
  Eigen::VectorXd y_std_;
  double y_mean_ = 0.0;
  double y_scale_ = 1.0;
  GPHyperParams hp_;
  double noise_var_ = kGPJitterFloor;
  Eigen::LLT<Eigen::MatrixXd> llt_;
  Eigen::VectorXd alpha_;
  double log_marginal_ = 0.0;
};

/// Grid search over hyperparameters by log marginal likelihood; ties keep the
/// earliest grid combination, so the result is deterministic.
GPModel fit_gp(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
               const GPHyperGrid& grid = {});

/// One approximate posterior sample via random Fourier features, evaluated on
/// the candidate pool; returns the index of the minimizing candidate (lowest
/// index on ties). Deterministic for a fixed seed.
std::size_t thompson_sample_argmin(const GPModel& model,
                                   const std::vector<Eigen::VectorXd>& pool,
                                   std::uint64_t seed, std::size_t feature_count = 500);

}  // namespace scenex
