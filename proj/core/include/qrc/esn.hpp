#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "qrc/readout.hpp"
#include "qrc/signals.hpp"
#include "qrc/types.hpp"

namespace qrc {

struct EsnParams {
  int n_node = 100;
  double spectral_radius = 0.95;
  double leak_rate = 1.0;
  double ridge = 1e-5;

  void validate() const;
};

/// Leaky-tanh reservoir: x <- (1 - lr) x + lr tanh(w_in s + w x).
struct EsnState {
  Eigen::VectorXd w_in;  // entries in {-1, +1}
  Eigen::MatrixXd w;
  Eigen::VectorXd x;
};

/// Largest eigenvalue magnitude of a real square matrix.
double spectral_radius(const Eigen::MatrixXd& m);

/// Rademacher input weights, Gaussian recurrent weights rescaled to the target
/// spectral radius (redrawn if the radius comes out zero), x = 0.
EsnState esn_init(const EsnParams& p, Rng& rng);

void esn_step(EsnState& state, double input, double leak_rate);

/// Drives a copy of `state` over `inputs`; row k-1 holds the state after s_k.
Eigen::MatrixXd esn_run(EsnState state, std::span<const double> inputs, double leak_rate);

/// Test NMSE of a freshly drawn network on one target.
double esn_evaluate(const EsnParams& p, const SignalSeries& series, const TaskTargets& targets,
                    const SplitSpec& split, Rng& rng);

/// Same network, many targets (one ridge factorization).
std::vector<double> esn_evaluate_many(const EsnParams& p, const SignalSeries& series,
                                      std::span<const TaskTargets> targets, const SplitSpec& split, Rng& rng);

enum class GridAveraging {
  MeanThenMin,  // average each grid cell over realizations, then take the best cell
  MinThenMean,  // best cell per realization, then average
};

struct EsnGrid {
  std::vector<double> spectral_radii{0.5, 0.75, 0.95, 1.25, 1.5};
  std::vector<double> leak_rates{0.4, 0.6, 0.8, 1.0};
};

struct EsnGridCell {
  double spectral_radius = 0.0;
  double leak_rate = 0.0;
  std::vector<double> mean_nmse;  // per target
  std::vector<double> stderr_nmse;
};

struct EsnGridResult {
  int n_node = 0;
  std::vector<EsnGridCell> cells;
  std::vector<double> best_nmse;    // per target
  std::vector<double> best_stderr;  // per target, of the winning statistic
  std::vector<int> best_cell;       // per target, index into cells (-1 under MinThenMean)
};

struct EsnGridOptions {
  int ensemble = 128;
  std::uint64_t master_seed = 0;
  double ridge = 1e-5;
  GridAveraging averaging = GridAveraging::MeanThenMin;
  int threads = 0;  // 0 = hardware concurrency
};

/// Grid search over spectral radius x leak rate for one node count. Realization r
/// of every cell uses the seed seed_fanout(master_seed, r), so cells differ only
/// in their hyperparameters.
EsnGridResult esn_grid_search(int n_node, const EsnGrid& grid, const SignalSeries& series,
                              std::span<const TaskTargets> targets, const SplitSpec& split,
                              const EsnGridOptions& options);

}  // namespace qrc
