#pragma once

#include <span>
#include <vector>

#include "qrc/signals.hpp"
#include "qrc/types.hpp"

namespace qrc {

/// Washout / train / test cycle counts. Training uses cycles
/// washout+1 .. washout+train, testing the next `test` cycles.
struct SplitSpec {
  int washout = 500;
  int train = 2000;
  int test = 2000;

  int total() const noexcept { return washout + train + test; }
  int train_start() const noexcept { return washout + 1; }
  int test_start() const noexcept { return washout + train + 1; }
  void validate() const;
};

/// Rows `start .. start+count-1` (1-based cycles) of `features`, with a trailing
/// constant column.
Eigen::MatrixXd build_design_matrix(const Eigen::MatrixXd& features, int start, int count);

struct ReadoutModel {
  Eigen::VectorXd weights;  // last entry multiplies the constant column

  Eigen::VectorXd predict(const Eigen::MatrixXd& design) const { return design * weights; }
};

/// Linear least squares on a fixed design matrix, factored once (thin SVD) so
/// many targets can be fit cheaply.
///
/// With ridge == 0 this is the Moore-Penrose solution: singular values below
/// 1e-12 * sigma_max are dropped. With ridge > 0 it solves
/// (X^T X + ridge I) w = X^T y through the SVD filter factors s / (s^2 + ridge).
class LinearReadout {
 public:
  static constexpr double kRelativeCutoff = 1e-12;

  explicit LinearReadout(const Eigen::MatrixXd& design, double ridge = 0.0);

  ReadoutModel fit(const Eigen::VectorXd& targets) const;
  Eigen::Index rows() const noexcept { return solver_.cols(); }
  Eigen::Index cols() const noexcept { return solver_.rows(); }

 private:
  Eigen::MatrixXd solver_;  // cols x rows map from targets to weights
};

ReadoutModel fit_pinv(const Eigen::MatrixXd& design, const Eigen::VectorXd& targets);
ReadoutModel fit_ridge(const Eigen::MatrixXd& design, const Eigen::VectorXd& targets, double ridge);

/// Squared correlation cov^2 / (var var). Zero when either variance is below 1e-15.
double r_squared(std::span<const double> target, std::span<const double> output);
double r_squared(const Eigen::VectorXd& target, const Eigen::VectorXd& output);

/// ||target - output||^2 / ||target||^2.
double nmse(std::span<const double> target, std::span<const double> output);
double nmse(const Eigen::VectorXd& target, const Eigen::VectorXd& output);

inline constexpr int kDefaultMaxDelay = 25;

/// Sum of R^2 over the delays.
double memory_capacity(std::span<const double> r2_by_delay);

enum class TargetKind { Delay, Horizon };

/// Delay d: y_k = s_{k-d}. Horizon tau: y_k = s_{k+tau}.
struct TaskTargets {
  TargetKind kind = TargetKind::Delay;
  int shift = 0;
  Eigen::VectorXd train;
  Eigen::VectorXd test;
};

TaskTargets make_targets(std::span<const double> series, TargetKind kind, int shift, const SplitSpec& split);
inline TaskTargets make_targets(const SignalSeries& series, TargetKind kind, int shift, const SplitSpec& split) {
  return make_targets(series.view(), kind, shift, split);
}

struct ReadoutScores {
  double r2 = 0.0;
  double nmse = 0.0;
};

/// Train/test design matrices cut from one feature run, with the training
/// factorization shared across targets.
class ReadoutPipeline {
 public:
  ReadoutPipeline(const Eigen::MatrixXd& features, const SplitSpec& split, double ridge = 0.0);

  ReadoutScores evaluate(const TaskTargets& targets) const;
  const Eigen::MatrixXd& train_design() const noexcept { return train_; }
  const Eigen::MatrixXd& test_design() const noexcept { return test_; }

 private:
  Eigen::MatrixXd train_;
  Eigen::MatrixXd test_;
  LinearReadout readout_;
};

}  // namespace qrc
