#include "qrc/esn.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "qrc/harness/parallel.hpp"
#include "qrc/harness/seed.hpp"
#include "qrc/harness/stats.hpp"

namespace qrc {

void EsnParams::validate() const {
  if (n_node < 1) throw std::invalid_argument("EsnParams: n_node must be positive");
  if (!(spectral_radius > 0.0)) throw std::invalid_argument("EsnParams: spectral radius must be positive");
  if (!(leak_rate > 0.0 && leak_rate <= 1.0)) throw std::invalid_argument("EsnParams: leak rate must be in (0, 1]");
  if (!(ridge >= 0.0)) throw std::invalid_argument("EsnParams: ridge must be non-negative");
}

double spectral_radius(const Eigen::MatrixXd& m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("spectral_radius: matrix must be square");
  if (m.rows() == 0) return 0.0;
  Eigen::EigenSolver<Eigen::MatrixXd> solver(m, /*computeEigenvectors=*/false);
  if (solver.info() != Eigen::Success) throw std::runtime_error("spectral_radius: eigenvalue solver failed");
  return solver.eigenvalues().cwiseAbs().maxCoeff();
}

EsnState esn_init(const EsnParams& p, Rng& rng) {
  p.validate();
  std::bernoulli_distribution coin(0.5);
  std::normal_distribution<double> normal(0.0, 1.0);
  EsnState state;
  state.w_in.resize(p.n_node);
  for (int i = 0; i < p.n_node; ++i) state.w_in(i) = coin(rng) ? 1.0 : -1.0;

  state.w.resize(p.n_node, p.n_node);
  double radius = 0.0;
  while (radius == 0.0) {
    for (int r = 0; r < p.n_node; ++r) {
      for (int c = 0; c < p.n_node; ++c) state.w(r, c) = normal(rng);
    }
    radius = spectral_radius(state.w);
  }
  state.w *= p.spectral_radius / radius;
  state.x = Eigen::VectorXd::Zero(p.n_node);
  return state;
}

void esn_step(EsnState& state, double input, double leak_rate) {
  const Eigen::VectorXd drive = (state.w_in * input + state.w * state.x).array().tanh().matrix();
  state.x = (1.0 - leak_rate) * state.x + leak_rate * drive;
}

Eigen::MatrixXd esn_run(EsnState state, std::span<const double> inputs, double leak_rate) {
  Eigen::MatrixXd states(static_cast<Eigen::Index>(inputs.size()), state.x.size());
  for (std::size_t k = 0; k < inputs.size(); ++k) {
    esn_step(state, inputs[k], leak_rate);
    states.row(static_cast<Eigen::Index>(k)) = state.x.transpose();
  }
  return states;
}

std::vector<double> esn_evaluate_many(const EsnParams& p, const SignalSeries& series,
                                      std::span<const TaskTargets> targets, const SplitSpec& split, Rng& rng) {
  split.validate();
  if (series.size() < static_cast<std::size_t>(split.total())) {
    throw std::invalid_argument("esn_evaluate: series shorter than the washout/train/test split");
  }
  const EsnState initial = esn_init(p, rng);
  const Eigen::MatrixXd states =
      esn_run(initial, series.view().first(static_cast<std::size_t>(split.total())), p.leak_rate);
  const ReadoutPipeline pipeline(states, split, p.ridge);
  std::vector<double> out;
  out.reserve(targets.size());
  for (const TaskTargets& t : targets) out.push_back(pipeline.evaluate(t).nmse);
  return out;
}

double esn_evaluate(const EsnParams& p, const SignalSeries& series, const TaskTargets& targets,
                    const SplitSpec& split, Rng& rng) {
  return esn_evaluate_many(p, series, std::span<const TaskTargets>(&targets, 1), split, rng).front();
}

EsnGridResult esn_grid_search(int n_node, const EsnGrid& grid, const SignalSeries& series,
                              std::span<const TaskTargets> targets, const SplitSpec& split,
                              const EsnGridOptions& options) {
  if (grid.spectral_radii.empty() || grid.leak_rates.empty()) {
    throw std::invalid_argument("esn_grid_search: empty hyperparameter grid");
  }
  if (options.ensemble < 1) throw std::invalid_argument("esn_grid_search: ensemble must be positive");

  struct Point {
    double radius;
    double leak;
  };
  std::vector<Point> points;
  for (double radius : grid.spectral_radii) {
    for (double leak : grid.leak_rates) points.push_back({radius, leak});
  }
  const std::size_t n_targets = targets.size();
  const std::size_t n_cells = points.size();
  const auto n_real = static_cast<std::size_t>(options.ensemble);

  // nmse[cell * n_real + r][target]
  const auto samples = harness::parallel_map(
      n_cells * n_real,
      [&](std::size_t job) {
        const Point& pt = points[job / n_real];
        const std::size_t r = job % n_real;
        Rng rng(harness::seed_fanout(options.master_seed, r));
        const EsnParams params{n_node, pt.radius, pt.leak, options.ridge};
        return esn_evaluate_many(params, series, targets, split, rng);
      },
      options.threads);

  EsnGridResult result;
  result.n_node = n_node;
  for (std::size_t c = 0; c < n_cells; ++c) {
    EsnGridCell cell{points[c].radius, points[c].leak, {}, {}};
    for (std::size_t t = 0; t < n_targets; ++t) {
      std::vector<double> column(n_real);
      for (std::size_t r = 0; r < n_real; ++r) column[r] = samples[c * n_real + r][t];
      const harness::Summary s = harness::summarize(column);
      cell.mean_nmse.push_back(s.mean);
      cell.stderr_nmse.push_back(s.sem);
    }
    result.cells.push_back(std::move(cell));
  }

  result.best_nmse.assign(n_targets, std::numeric_limits<double>::infinity());
  result.best_stderr.assign(n_targets, 0.0);
  result.best_cell.assign(n_targets, -1);
  for (std::size_t t = 0; t < n_targets; ++t) {
    if (options.averaging == GridAveraging::MeanThenMin) {
      for (std::size_t c = 0; c < n_cells; ++c) {
        if (result.cells[c].mean_nmse[t] < result.best_nmse[t]) {
          result.best_nmse[t] = result.cells[c].mean_nmse[t];
          result.best_stderr[t] = result.cells[c].stderr_nmse[t];
          result.best_cell[t] = static_cast<int>(c);
        }
      }
    } else {
      std::vector<double> per_realization(n_real, std::numeric_limits<double>::infinity());
      for (std::size_t r = 0; r < n_real; ++r) {
        for (std::size_t c = 0; c < n_cells; ++c) {
          per_realization[r] = std::min(per_realization[r], samples[c * n_real + r][t]);
        }
      }
      const harness::Summary s = harness::summarize(per_realization);
      result.best_nmse[t] = s.mean;
      result.best_stderr[t] = s.sem;
    }
  }
  return result;
}

}  // namespace qrc
