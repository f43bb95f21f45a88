#include "qrc/engine.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <stdexcept>
#include <string>

namespace qrc {
namespace {

void require_finite(std::span<const double> values, const char* what) {
  for (double v : values) {
    if (!std::isfinite(v)) throw std::invalid_argument(std::string(what) + " contains a non-finite value");
  }
}

std::span<const double> as_span(const Eigen::VectorXd& v) {
  return {v.data(), static_cast<std::size_t>(v.size())};
}

}  // namespace

FeedbackLayout FeedbackLayout::canonical(int n_qubits) {
  if (n_qubits < kMinReservoirQubits || n_qubits > kMaxReservoirQubits) {
    throw std::invalid_argument("canonical_layout: N must be in [" + std::to_string(kMinReservoirQubits) +
                                ", " + std::to_string(kMaxReservoirQubits) + "], got " +
                                std::to_string(n_qubits));
  }
  std::vector<FeedbackEntry> entries;
  entries.reserve(n_qubits);
  for (int source = 1; source <= n_qubits; ++source) {
    const int q = 3 + (source - 1) % (n_qubits - 3);
    entries.push_back({source, q, q + 1});
  }
  return FeedbackLayout(std::move(entries));
}

void FeedbackLayout::validate(int n_qubits) const {
  if (entries_.size() != static_cast<std::size_t>(n_qubits)) {
    throw std::invalid_argument("FeedbackLayout: expected " + std::to_string(n_qubits) + " entries, got " +
                                std::to_string(entries_.size()));
  }
  for (const FeedbackEntry& e : entries_) {
    if (e.source < 1 || e.source > n_qubits) {
      throw std::invalid_argument("FeedbackLayout: source index " + std::to_string(e.source) + " out of range");
    }
    if (e.first < 3 || e.second > n_qubits || e.second != e.first + 1) {
      throw std::invalid_argument("FeedbackLayout: pair (" + std::to_string(e.first) + "," +
                                  std::to_string(e.second) + ") is not an adjacent pair within [3, N]");
    }
  }
}

void ReservoirConfig::validate() const {
  if (n_qubits < kMinReservoirQubits || n_qubits > kMaxReservoirQubits) {
    throw std::invalid_argument("ReservoirConfig: n_qubits must be in [6, 10], got " + std::to_string(n_qubits));
  }
  if (!(a_in >= 0.0) || !(a_fb >= 0.0) || !std::isfinite(a_in) || !std::isfinite(a_fb)) {
    throw std::invalid_argument("ReservoirConfig: a_in and a_fb must be finite and non-negative");
  }
  if (!u_res) throw std::invalid_argument("ReservoirConfig: u_res is not set");
  if (u_res->n_qubits() != n_qubits) {
    throw std::invalid_argument("ReservoirConfig: u_res acts on " + std::to_string(u_res->n_qubits()) +
                                " qubits, expected " + std::to_string(n_qubits));
  }
  layout.validate(n_qubits);
  if (delayed) {
    if (delayed->delay < 1) throw std::invalid_argument("ReservoirConfig: feedback delay must be positive");
    delayed->layout.validate(n_qubits);
  }
  if (noise && noise->n_meas == 0) throw std::invalid_argument("ReservoirConfig: n_meas must be positive");
}

Eigen::VectorXd apply_shot_noise(std::span<const double> z, std::uint64_t n_meas, Rng& rng) {
  if (n_meas == 0) throw std::invalid_argument("apply_shot_noise: n_meas must be positive");
  std::normal_distribution<double> normal(0.0, 1.0);
  const double inv_shots = 1.0 / static_cast<double>(n_meas);
  Eigen::VectorXd out(static_cast<Eigen::Index>(z.size()));
  for (std::size_t i = 0; i < z.size(); ++i) {
    const double sigma = std::sqrt(std::max(0.0, 1.0 - z[i] * z[i]) * inv_shots);
    out(static_cast<Eigen::Index>(i)) = std::clamp(z[i] + sigma * normal(rng), -1.0, 1.0);
  }
  return out;
}

Eigen::VectorXd init_feedback_vector(int n_qubits, Rng& rng) {
  if (n_qubits < 1) throw std::invalid_argument("init_feedback_vector: n_qubits must be positive");
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  Eigen::VectorXd z(n_qubits);
  for (int i = 0; i < n_qubits; ++i) z(i) = uniform(rng);
  return z;
}

QuantumReservoir::QuantumReservoir(ReservoirConfig config)
    : config_(std::move(config)), state_((config_.validate(), config_.n_qubits)) {}

Eigen::VectorXd QuantumReservoir::cycle(double input, std::span<const double> feedback,
                                        std::span<const double> delayed, Rng& rng) {
  const auto n = static_cast<std::size_t>(config_.n_qubits);
  if (feedback.size() != n) throw std::invalid_argument("cycle: feedback vector has the wrong length");
  if (config_.delayed.has_value() != !delayed.empty()) {
    throw std::invalid_argument("cycle: delayed feedback must be given iff a second layer is configured");
  }
  if (!delayed.empty() && delayed.size() != n) {
    throw std::invalid_argument("cycle: delayed feedback vector has the wrong length");
  }
  if (!std::isfinite(input)) throw std::invalid_argument("cycle: input is not finite");
  require_finite(feedback, "cycle: feedback");
  require_finite(delayed, "cycle: delayed feedback");

  state_.reset();
  state_.apply_embedding(1, 2, config_.a_in * input);
  for (const FeedbackEntry& e : config_.layout.entries()) {
    state_.apply_embedding(e.first, e.second, config_.a_fb * feedback[e.source - 1]);
  }
  if (config_.delayed) {
    for (const FeedbackEntry& e : config_.delayed->layout.entries()) {
      state_.apply_embedding(e.first, e.second, config_.a_fb * delayed[e.source - 1]);
    }
  }
  state_.apply(*config_.u_res, scratch_);

  Eigen::VectorXd z = state_.z_profile();
  if (config_.noise) z = apply_shot_noise(as_span(z), config_.noise->n_meas, rng);
  return z;
}

Trajectory QuantumReservoir::run(std::span<const double> inputs, Rng& rng) {
  const int n = config_.n_qubits;
  Eigen::VectorXd previous = init_feedback_vector(n, rng);

  // history.front() is z_{k - delay} when processing cycle k.
  std::deque<Eigen::VectorXd> history;
  if (config_.delayed) {
    const int delay = config_.delayed->delay;
    for (int i = 0; i < delay - 1; ++i) history.push_back(init_feedback_vector(n, rng));
    history.push_back(previous);
  }

  Eigen::MatrixXd rows(static_cast<Eigen::Index>(inputs.size()), n);
  for (std::size_t k = 0; k < inputs.size(); ++k) {
    std::span<const double> delayed;
    if (config_.delayed) delayed = as_span(history.front());
    Eigen::VectorXd z = cycle(inputs[k], as_span(previous), delayed, rng);
    rows.row(static_cast<Eigen::Index>(k)) = z.transpose();
    if (config_.delayed) {
      history.pop_front();
      history.push_back(z);
    }
    previous = std::move(z);
  }
  return Trajectory(std::move(rows));
}

Eigen::VectorXd run_cycle(const ReservoirConfig& config, double input, std::span<const double> feedback,
                          std::optional<std::span<const double>> delayed, Rng& rng) {
  QuantumReservoir reservoir(config);
  return reservoir.cycle(input, feedback, delayed.value_or(std::span<const double>{}), rng);
}

Trajectory run_sequence(const ReservoirConfig& config, std::span<const double> inputs, Rng& rng) {
  QuantumReservoir reservoir(config);
  return reservoir.run(inputs, rng);
}

}  // namespace qrc
