#include "qrc/readout.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace qrc {
namespace {

constexpr double kVarianceFloor = 1e-15;

std::span<const double> as_span(const Eigen::VectorXd& v) {
  return {v.data(), static_cast<std::size_t>(v.size())};
}

}  // namespace

void SplitSpec::validate() const {
  if (washout < 0 || train <= 0 || test <= 0) {
    throw std::invalid_argument("SplitSpec: train and test must be positive, washout non-negative");
  }
}

Eigen::MatrixXd build_design_matrix(const Eigen::MatrixXd& features, int start, int count) {
  if (start < 1 || count < 0 || start - 1 + count > features.rows()) {
    throw std::out_of_range("build_design_matrix: cycles " + std::to_string(start) + ".." +
                            std::to_string(start + count - 1) + " exceed the " +
                            std::to_string(features.rows()) + " available");
  }
  Eigen::MatrixXd design(count, features.cols() + 1);
  design.leftCols(features.cols()) = features.middleRows(start - 1, count);
  design.col(features.cols()).setOnes();
  return design;
}

LinearReadout::LinearReadout(const Eigen::MatrixXd& design, double ridge) {
  if (design.rows() == 0 || design.cols() == 0) throw std::invalid_argument("LinearReadout: empty design matrix");
  if (!(ridge >= 0.0)) throw std::invalid_argument("LinearReadout: ridge must be non-negative");
  Eigen::BDCSVD<Eigen::MatrixXd> svd(design, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::VectorXd& sigma = svd.singularValues();
  const double cutoff = kRelativeCutoff * (sigma.size() > 0 ? sigma(0) : 0.0);
  Eigen::VectorXd filter(sigma.size());
  for (Eigen::Index i = 0; i < sigma.size(); ++i) {
    const double s = sigma(i);
    if (ridge > 0.0) {
      filter(i) = s / (s * s + ridge);
    } else {
      filter(i) = (s > cutoff && s > 0.0) ? 1.0 / s : 0.0;
    }
  }
  solver_ = svd.matrixV() * filter.asDiagonal() * svd.matrixU().transpose();
}

ReadoutModel LinearReadout::fit(const Eigen::VectorXd& targets) const {
  if (targets.size() != solver_.cols()) {
    throw std::invalid_argument("LinearReadout::fit: expected " + std::to_string(solver_.cols()) +
                                " targets, got " + std::to_string(targets.size()));
  }
  return ReadoutModel{solver_ * targets};
}

ReadoutModel fit_pinv(const Eigen::MatrixXd& design, const Eigen::VectorXd& targets) {
  return LinearReadout(design).fit(targets);
}

ReadoutModel fit_ridge(const Eigen::MatrixXd& design, const Eigen::VectorXd& targets, double ridge) {
  return LinearReadout(design, ridge).fit(targets);
}

double r_squared(std::span<const double> target, std::span<const double> output) {
  if (target.size() != output.size()) throw std::invalid_argument("r_squared: length mismatch");
  if (target.size() < 2) throw std::invalid_argument("r_squared: need at least two samples");
  const double n = static_cast<double>(target.size());
  const double mean_t = std::accumulate(target.begin(), target.end(), 0.0) / n;
  const double mean_o = std::accumulate(output.begin(), output.end(), 0.0) / n;
  double cov = 0.0, var_t = 0.0, var_o = 0.0;
  for (std::size_t i = 0; i < target.size(); ++i) {
    const double dt = target[i] - mean_t;
    const double d_o = output[i] - mean_o;
    cov += dt * d_o;
    var_t += dt * dt;
    var_o += d_o * d_o;
  }
  cov /= n;
  var_t /= n;
  var_o /= n;
  if (var_t < kVarianceFloor || var_o < kVarianceFloor) return 0.0;
  return std::min(1.0, cov * cov / (var_t * var_o));
}

double r_squared(const Eigen::VectorXd& target, const Eigen::VectorXd& output) {
  return r_squared(as_span(target), as_span(output));
}

double nmse(std::span<const double> target, std::span<const double> output) {
  if (target.size() != output.size()) throw std::invalid_argument("nmse: length mismatch");
  double err = 0.0, norm = 0.0;
  for (std::size_t i = 0; i < target.size(); ++i) {
    const double e = target[i] - output[i];
    err += e * e;
    norm += target[i] * target[i];
  }
  if (norm == 0.0) throw std::invalid_argument("nmse: target has zero norm");
  return err / norm;
}

double nmse(const Eigen::VectorXd& target, const Eigen::VectorXd& output) {
  return nmse(as_span(target), as_span(output));
}

double memory_capacity(std::span<const double> r2_by_delay) {
  return std::accumulate(r2_by_delay.begin(), r2_by_delay.end(), 0.0);
}

TaskTargets make_targets(std::span<const double> series, TargetKind kind, int shift, const SplitSpec& split) {
  split.validate();
  if (shift < 0) throw std::invalid_argument("make_targets: shift must be non-negative");
  const int offset = kind == TargetKind::Delay ? -shift : shift;
  // Earliest and latest series index (1-based) the targets touch.
  const int first = split.train_start() + offset;
  const int last = split.total() + offset;
  if (first < 1 || last > static_cast<int>(series.size())) {
    throw std::invalid_argument("make_targets: series of length " + std::to_string(series.size()) +
                                " is too short for shift " + std::to_string(shift));
  }
  TaskTargets out{kind, shift, Eigen::VectorXd(split.train), Eigen::VectorXd(split.test)};
  for (int t = 0; t < split.train; ++t) out.train(t) = series[split.train_start() + t + offset - 1];
  for (int t = 0; t < split.test; ++t) out.test(t) = series[split.test_start() + t + offset - 1];
  return out;
}

ReadoutPipeline::ReadoutPipeline(const Eigen::MatrixXd& features, const SplitSpec& split, double ridge)
    : train_(build_design_matrix(features, split.train_start(), split.train)),
      test_(build_design_matrix(features, split.test_start(), split.test)),
      readout_(train_, ridge) {}

ReadoutScores ReadoutPipeline::evaluate(const TaskTargets& targets) const {
  const ReadoutModel model = readout_.fit(targets.train);
  const Eigen::VectorXd output = model.predict(test_);
  return {r_squared(targets.test, output), nmse(targets.test, output)};
}

}  // namespace qrc
