#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "qrc/statevector.hpp"
#include "qrc/types.hpp"
#include "qrc/unitary.hpp"

namespace qrc {

inline constexpr int kMinReservoirQubits = 6;
inline constexpr int kMaxReservoirQubits = 10;

/// Feedback component `source` (1-based index into z) drives R_{first,second}.
struct FeedbackEntry {
  int source = 1;
  int first = 3;
  int second = 4;

  friend bool operator==(const FeedbackEntry&, const FeedbackEntry&) = default;
};

/// Which pair of qubits each measured component is written back into.
/// A valid layout for N qubits has N entries over adjacent pairs in [3, N].
class FeedbackLayout {
 public:
  FeedbackLayout() = default;
  explicit FeedbackLayout(std::vector<FeedbackEntry> entries) : entries_(std::move(entries)) {}

  /// Round-robin over the adjacent pairs (3,4), (4,5), ..., (N-1,N):
  /// component a goes to (q, q+1) with q = 3 + ((a - 1) mod (N - 3)).
  static FeedbackLayout canonical(int n_qubits);

  std::span<const FeedbackEntry> entries() const noexcept { return entries_; }
  std::size_t size() const noexcept { return entries_.size(); }

  /// Throws std::invalid_argument if the layout breaks an invariant for N.
  void validate(int n_qubits) const;

 private:
  std::vector<FeedbackEntry> entries_;
};

inline FeedbackLayout canonical_layout(int n_qubits) { return FeedbackLayout::canonical(n_qubits); }

/// Second feedback layer carrying z_{k - delay}.
struct DelayedFeedback {
  int delay = 15;
  FeedbackLayout layout;
};

/// Gaussian surrogate for estimating <Z> from n_meas shots.
struct ShotNoise {
  std::uint64_t n_meas = 0;
};

struct ReservoirConfig {
  int n_qubits = 8;
  double a_in = 0.001;
  double a_fb = 2.0;
  std::shared_ptr<const DenseUnitary> u_res;
  FeedbackLayout layout;
  std::optional<DelayedFeedback> delayed;
  std::optional<ShotNoise> noise;

  void validate() const;
};

/// Per-cycle measurement vectors: row k-1 holds z_k.
class Trajectory {
 public:
  Trajectory() = default;
  explicit Trajectory(Eigen::MatrixXd rows) : rows_(std::move(rows)) {}

  Eigen::Index cycle_count() const noexcept { return rows_.rows(); }
  Eigen::Index n_qubits() const noexcept { return rows_.cols(); }
  const Eigen::MatrixXd& rows() const noexcept { return rows_; }
  /// z_k for k in [1, cycle_count()].
  Eigen::VectorXd cycle(Eigen::Index k) const { return rows_.row(k - 1).transpose(); }

  friend bool operator==(const Trajectory& a, const Trajectory& b) { return a.rows_ == b.rows_; }

 private:
  Eigen::MatrixXd rows_;
};

/// sigma = sqrt((1 - z^2) / n_meas) Gaussian perturbation per entry, clamped to [-1, 1].
/// One normal draw per entry regardless of sigma.
Eigen::VectorXd apply_shot_noise(std::span<const double> z, std::uint64_t n_meas, Rng& rng);

/// z_0: N independent uniform [0, 1] draws.
Eigen::VectorXd init_feedback_vector(int n_qubits, Rng& rng);

/// One reservoir with its scratch buffers. Cheap to construct; not thread-safe.
class QuantumReservoir {
 public:
  explicit QuantumReservoir(ReservoirConfig config);

  const ReservoirConfig& config() const noexcept { return config_; }

  /// Steps (i)-(iv) of one cycle from |0...0>. `delayed` must be non-empty
  /// exactly when the config has a second feedback layer. `rng` is only drawn
  /// from when shot noise is configured.
  Eigen::VectorXd cycle(double input, std::span<const double> feedback,
                        std::span<const double> delayed, Rng& rng);

  /// Runs the full feedback loop over `inputs`, drawing z_0 (and the delayed
  /// history) from `rng` first.
  Trajectory run(std::span<const double> inputs, Rng& rng);

 private:
  ReservoirConfig config_;
  Statevector state_;
  ComplexVector scratch_;
};

Eigen::VectorXd run_cycle(const ReservoirConfig& config, double input, std::span<const double> feedback,
                          std::optional<std::span<const double>> delayed, Rng& rng);

Trajectory run_sequence(const ReservoirConfig& config, std::span<const double> inputs, Rng& rng);

}  // namespace qrc
