#include "qrc/harness/experiments.hpp"

#include <algorithm>
#include <stdexcept>

#include "qrc/esn.hpp"
#include "qrc/harness/parallel.hpp"
#include "qrc/harness/seed.hpp"
#include "qrc/readout.hpp"

#ifndef QRC_VERSION
#define QRC_VERSION "unknown"
#endif

namespace qrc::harness {
namespace {

// Index reserved for the series shared by all realizations.
constexpr std::uint64_t kSharedSeriesIndex = ~std::uint64_t{0};
constexpr std::uint64_t kEsnSeedSalt = 0x45534e5f62617365ULL;

ResultMetadata make_metadata(const std::string& name, const ExperimentSpec& spec) {
  ResultMetadata meta;
  meta.experiment = name;
  meta.spec_text = to_config_text(spec);
  meta.spec_hash = fnv1a_hex(meta.spec_text);
  meta.master_seed = spec.master_seed;
  meta.code_version = QRC_VERSION;
  return meta;
}

std::string meas_label(std::uint64_t n_meas) {
  return n_meas == kIdealMeasurements ? std::string("inf") : std::to_string(n_meas);
}

void require_single(const std::vector<double>& a_fb, const char* experiment) {
  if (a_fb.size() != 1) {
    throw std::invalid_argument(std::string(experiment) + ": expects exactly one a_fb value");
  }
}

void require_task(const ExperimentSpec& spec, Task task, const char* experiment) {
  if (spec.task != task) {
    throw std::invalid_argument(std::string(experiment) + ": task must be " + std::string(to_string(task)));
  }
}

/// R^2_d for d = 0..max_delay of one trajectory against its own inputs.
std::vector<double> delay_scores(const Trajectory& traj, std::span<const double> inputs, const ExperimentSpec& spec) {
  const ReadoutPipeline pipeline(traj.rows(), spec.split);
  std::vector<double> r2;
  r2.reserve(static_cast<std::size_t>(spec.max_delay) + 1);
  for (int d = 0; d <= spec.max_delay; ++d) {
    r2.push_back(pipeline.evaluate(make_targets(inputs, TargetKind::Delay, d, spec.split)).r2);
  }
  return r2;
}

/// NMSE for tau_f = 0..max_horizon.
std::vector<double> horizon_scores(const Trajectory& traj, const SignalSeries& series, const ExperimentSpec& spec) {
  const ReadoutPipeline pipeline(traj.rows(), spec.split);
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(spec.max_horizon) + 1);
  for (int tau = 0; tau <= spec.max_horizon; ++tau) {
    out.push_back(pipeline.evaluate(make_targets(series, TargetKind::Horizon, tau, spec.split)).nmse);
  }
  return out;
}

Trajectory drive(const ReservoirConfig& config, std::span<const double> inputs, std::uint64_t seed) {
  Rng rng(stream_seed(seed, Stream::Feedback));
  return run_sequence(config, inputs, rng);
}

int prediction_length(const ExperimentSpec& spec) { return spec.split.total() + spec.max_horizon; }

}  // namespace

std::string r2_metric(int delay) { return "R2[d=" + std::to_string(delay) + "]"; }
std::string nmse_qrc_metric(int n_qubits) { return "nmse_qrc[N=" + std::to_string(n_qubits) + "]"; }
std::string nmse_esn_metric(int n_node) { return "nmse_esn[n=" + std::to_string(n_node) + "]"; }
std::string capacity_metric(std::uint64_t n_meas) { return "C_sigma[n_meas=" + meas_label(n_meas) + "]"; }

std::uint64_t realization_seed(const ExperimentSpec& spec, std::size_t index) {
  return seed_fanout(spec.master_seed, index);
}

std::shared_ptr<const DenseUnitary> make_reservoir_unitary(const AnsatzChoice& ansatz, int n_qubits,
                                                           std::uint64_t seed) {
  Rng rng(stream_seed(seed, Stream::Unitary));
  if (ansatz.haar) return std::make_shared<const DenseUnitary>(haar_random_unitary(n_qubits, rng));
  return std::make_shared<const DenseUnitary>(
      hardware_efficient_unitary(random_ansatz(n_qubits, ansatz.layers, rng)));
}

SignalSeries make_signal(const ExperimentSpec& spec, int length, std::uint64_t seed) {
  switch (spec.signal) {
    case SignalKind::Random: {
      const std::uint64_t s = spec.shared_input ? seed_fanout(spec.master_seed, kSharedSeriesIndex) : seed;
      Rng rng(stream_seed(s, Stream::Input));
      return gen_uniform_random(length, rng);
    }
    case SignalKind::Cosine: return gen_cosine(length, spec.omega);
    case SignalKind::MackeyGlass: return gen_mackey_glass(length, spec.mackey_glass);
    case SignalKind::Ising: return gen_ising_dynamics(length, spec.ising);
  }
  throw std::logic_error("make_signal: unknown signal kind");
}

ReservoirConfig make_reservoir_config(const ExperimentSpec& spec, int n_qubits, double a_fb,
                                      std::shared_ptr<const DenseUnitary> u_res, std::uint64_t n_meas) {
  ReservoirConfig config;
  config.n_qubits = n_qubits;
  config.a_in = spec.a_in;
  config.a_fb = a_fb;
  config.u_res = std::move(u_res);
  config.layout = canonical_layout(n_qubits);
  if (spec.feedback_delay > 0) config.delayed = DelayedFeedback{spec.feedback_delay, canonical_layout(n_qubits)};
  if (n_meas != kIdealMeasurements) config.noise = ShotNoise{n_meas};
  config.validate();
  return config;
}

ResultTable execute(const ExperimentPlan& plan) {
  plan.spec.validate();
  const auto samples =
      parallel_map(static_cast<std::size_t>(plan.spec.ensemble), plan.realization, plan.spec.threads);
  return ResultTable::from_samples(plan.keys, samples, make_metadata(plan.name, plan.spec));
}

// -- short-term memory --------------------------------------------------------

ExperimentPlan plan_stm(const ExperimentSpec& spec) {
  require_task(spec, Task::Stm, "stm");
  spec.validate();
  ExperimentPlan plan{"stm", spec, {}, {}};
  for (double a_fb : spec.a_fb) {
    for (int d = 0; d <= spec.max_delay; ++d) plan.keys.push_back({"a_fb", a_fb, r2_metric(d)});
    plan.keys.push_back({"a_fb", a_fb, "C_sigma"});
  }
  plan.realization = [spec](std::size_t index) {
    const std::uint64_t seed = realization_seed(spec, index);
    const int n = spec.n_qubits.front();
    const auto u_res = make_reservoir_unitary(spec.ansatz, n, seed);
    const SignalSeries inputs = make_signal(spec, spec.split.total(), seed);
    std::vector<double> out;
    for (double a_fb : spec.a_fb) {
      const auto config = make_reservoir_config(spec, n, a_fb, u_res, spec.n_meas.front());
      const auto r2 = delay_scores(drive(config, inputs.view(), seed), inputs.view(), spec);
      out.insert(out.end(), r2.begin(), r2.end());
      out.push_back(memory_capacity(r2));
    }
    return out;
  };
  return plan;
}

ExperimentPlan plan_phase_sweep(const ExperimentSpec& spec) {
  ExperimentPlan stm = plan_stm(spec);
  ExperimentPlan plan{"phase", spec, {}, {}};
  for (double a_fb : spec.a_fb) plan.keys.push_back({"a_fb", a_fb, "C_sigma"});
  const std::size_t stride = static_cast<std::size_t>(spec.max_delay) + 2;
  plan.realization = [inner = std::move(stm.realization), stride](std::size_t index) {
    const std::vector<double> full = inner(index);
    std::vector<double> out;
    for (std::size_t i = stride - 1; i < full.size(); i += stride) out.push_back(full[i]);
    return out;
  };
  return plan;
}

std::vector<std::string> label_phases(std::span<const double> capacity) {
  std::vector<std::string> labels(capacity.size());
  if (capacity.empty()) return labels;
  const auto peak = static_cast<std::size_t>(std::max_element(capacity.begin(), capacity.end()) - capacity.begin());
  // Start of the trailing run of near-zero capacity.
  std::size_t tail = capacity.size();
  while (tail > peak + 1 && capacity[tail - 1] < 0.5) --tail;
  for (std::size_t i = 0; i < capacity.size(); ++i) {
    labels[i] = i <= peak ? "stable" : (i >= tail ? "over-rotation" : "unstable");
  }
  return labels;
}

ResultTable run_stm_experiment(const ExperimentSpec& spec) { return execute(plan_stm(spec)); }

ResultTable run_phase_sweep(const ExperimentSpec& spec) {
  ResultTable table = execute(plan_phase_sweep(spec));
  std::vector<double> curve;
  for (const ResultRow& row : table.rows()) curve.push_back(row.mean);
  table.metadata().annotations["phase_labels"] = label_phases(curve);
  return table;
}

// -- prediction ---------------------------------------------------------------

ExperimentPlan plan_prediction(const ExperimentSpec& spec) {
  require_task(spec, Task::Predict, "predict");
  require_single(spec.a_fb, "predict");
  spec.validate();
  ExperimentPlan plan{"predict", spec, {}, {}};
  for (int tau = 0; tau <= spec.max_horizon; ++tau) plan.keys.push_back({"tau_f", double(tau), "nmse_qrc"});
  std::shared_ptr<const SignalSeries> shared;
  if (spec.signal != SignalKind::Random || spec.shared_input) {
    shared = std::make_shared<const SignalSeries>(make_signal(spec, prediction_length(spec), 0));
  }
  plan.realization = [spec, shared](std::size_t index) {
    const std::uint64_t seed = realization_seed(spec, index);
    const int n = spec.n_qubits.front();
    const SignalSeries series = shared ? *shared : make_signal(spec, prediction_length(spec), seed);
    const auto config =
        make_reservoir_config(spec, n, spec.a_fb.front(), make_reservoir_unitary(spec.ansatz, n, seed),
                              spec.n_meas.front());
    const auto inputs = series.view().first(static_cast<std::size_t>(spec.split.total()));
    return horizon_scores(drive(config, inputs, seed), series, spec);
  };
  return plan;
}

std::vector<ResultRow> esn_prediction_rows(const ExperimentSpec& spec, const SignalSeries& series) {
  std::vector<TaskTargets> targets;
  for (int tau = 0; tau <= spec.max_horizon; ++tau) {
    targets.push_back(make_targets(series, TargetKind::Horizon, tau, spec.split));
  }
  EsnGridOptions options;
  options.ensemble = spec.esn_ensemble > 0 ? spec.esn_ensemble : spec.ensemble;
  options.master_seed = mix64(spec.master_seed ^ kEsnSeedSalt);
  options.ridge = spec.esn_ridge;
  options.averaging = spec.esn_averaging;
  options.threads = spec.threads;
  std::vector<ResultRow> rows;
  for (int nodes : spec.esn_nodes) {
    const EsnGridResult grid = esn_grid_search(nodes, spec.esn_grid, series, targets, spec.split, options);
    for (int tau = 0; tau <= spec.max_horizon; ++tau) {
      rows.push_back({"tau_f", double(tau), nmse_esn_metric(nodes), grid.best_nmse[tau], grid.best_stderr[tau],
                      options.ensemble});
    }
  }
  return rows;
}

ResultTable run_prediction_experiment(const ExperimentSpec& spec) {
  ResultTable table = execute(plan_prediction(spec));
  if (!spec.esn) return table;
  const SignalSeries series = make_signal(spec, prediction_length(spec), seed_fanout(spec.master_seed, 0));
  std::vector<ResultRow> rows = table.rows();
  for (ResultRow& row : esn_prediction_rows(spec, series)) rows.push_back(std::move(row));
  return ResultTable(std::move(rows), table.metadata());
}

ExperimentPlan plan_size_scaling(const ExperimentSpec& spec) {
  require_task(spec, Task::Predict, "scaling");
  spec.validate();
  if (spec.a_fb.size() != 1 && spec.a_fb.size() != spec.n_qubits.size()) {
    throw std::invalid_argument("scaling: a_fb must have one entry or one per n_qubits entry");
  }
  ExperimentPlan plan{"scaling", spec, {}, {}};
  for (int n : spec.n_qubits) {
    for (int tau = 0; tau <= spec.max_horizon; ++tau) plan.keys.push_back({"tau_f", double(tau), nmse_qrc_metric(n)});
  }
  std::shared_ptr<const SignalSeries> shared;
  if (spec.signal != SignalKind::Random || spec.shared_input) {
    shared = std::make_shared<const SignalSeries>(make_signal(spec, prediction_length(spec), 0));
  }
  plan.realization = [spec, shared](std::size_t index) {
    const std::uint64_t seed = realization_seed(spec, index);
    const SignalSeries series = shared ? *shared : make_signal(spec, prediction_length(spec), seed);
    const auto inputs = series.view().first(static_cast<std::size_t>(spec.split.total()));
    std::vector<double> out;
    for (std::size_t i = 0; i < spec.n_qubits.size(); ++i) {
      const int n = spec.n_qubits[i];
      const double a_fb = spec.a_fb.size() == 1 ? spec.a_fb.front() : spec.a_fb[i];
      const auto config =
          make_reservoir_config(spec, n, a_fb, make_reservoir_unitary(spec.ansatz, n, seed), spec.n_meas.front());
      const auto scores = horizon_scores(drive(config, inputs, seed), series, spec);
      out.insert(out.end(), scores.begin(), scores.end());
    }
    return out;
  };
  return plan;
}

ResultTable run_size_scaling(const ExperimentSpec& spec) {
  ResultTable table = execute(plan_size_scaling(spec));
  if (!spec.esn) return table;
  const SignalSeries series = make_signal(spec, prediction_length(spec), seed_fanout(spec.master_seed, 0));
  std::vector<ResultRow> rows = table.rows();
  for (ResultRow& row : esn_prediction_rows(spec, series)) rows.push_back(std::move(row));
  return ResultTable(std::move(rows), table.metadata());
}

// -- measurement noise ------------------------------------------------------

ExperimentPlan plan_noise_sweep(const ExperimentSpec& spec) {
  require_task(spec, Task::Stm, "noise");
  spec.validate();
  ExperimentPlan plan{"noise", spec, {}, {}};
  for (double a_fb : spec.a_fb) {
    for (std::uint64_t m : spec.n_meas) plan.keys.push_back({"a_fb", a_fb, capacity_metric(m)});
  }
  plan.realization = [spec](std::size_t index) {
    const std::uint64_t seed = realization_seed(spec, index);
    const int n = spec.n_qubits.front();
    const auto u_res = make_reservoir_unitary(spec.ansatz, n, seed);
    const SignalSeries inputs = make_signal(spec, spec.split.total(), seed);
    std::vector<double> out;
    for (double a_fb : spec.a_fb) {
      for (std::uint64_t m : spec.n_meas) {
        const auto config = make_reservoir_config(spec, n, a_fb, u_res, m);
        out.push_back(memory_capacity(delay_scores(drive(config, inputs.view(), seed), inputs.view(), spec)));
      }
    }
    return out;
  };
  return plan;
}

ResultTable run_noise_sweep(const ExperimentSpec& spec) { return execute(plan_noise_sweep(spec)); }

// -- working memory -----------------------------------------------------------

ExperimentPlan plan_working_memory(const ExperimentSpec& spec) {
  require_task(spec, Task::Stm, "working-memory");
  require_single(spec.a_fb, "working-memory");
  if (spec.feedback_delay < 1) throw std::invalid_argument("working-memory: feedback_delay must be positive");
  spec.validate();
  ExperimentPlan plan{"working-memory", spec, {}, {}};
  for (int d = 0; d <= spec.max_delay; ++d) plan.keys.push_back({"d", double(d), "R2"});
  if (spec.ablation) {
    for (int d = 0; d <= spec.max_delay; ++d) plan.keys.push_back({"d", double(d), "R2[single_layer]"});
  }
  plan.realization = [spec](std::size_t index) {
    const std::uint64_t seed = realization_seed(spec, index);
    const int n = spec.n_qubits.front();
    const auto u_res = make_reservoir_unitary(spec.ansatz, n, seed);
    const SignalSeries inputs = make_signal(spec, spec.split.total(), seed);
    const auto config = make_reservoir_config(spec, n, spec.a_fb.front(), u_res, spec.n_meas.front());
    std::vector<double> out = delay_scores(drive(config, inputs.view(), seed), inputs.view(), spec);
    if (spec.ablation) {
      ReservoirConfig single = config;
      single.delayed.reset();
      const auto r2 = delay_scores(drive(single, inputs.view(), seed), inputs.view(), spec);
      out.insert(out.end(), r2.begin(), r2.end());
    }
    return out;
  };
  return plan;
}

ResultTable run_working_memory(const ExperimentSpec& spec) { return execute(plan_working_memory(spec)); }

// -- trajectories ---------------------------------------------------------------

Trajectory simulate_trajectory(const ExperimentSpec& spec, std::size_t realization, double a_fb) {
  spec.validate();
  const std::uint64_t seed = realization_seed(spec, realization);
  const int n = spec.n_qubits.front();
  const int length = spec.task == Task::Predict ? prediction_length(spec) : spec.split.total();
  const SignalSeries series = make_signal(spec, length, seed);
  const auto config =
      make_reservoir_config(spec, n, a_fb, make_reservoir_unitary(spec.ansatz, n, seed), spec.n_meas.front());
  return drive(config, series.view().first(static_cast<std::size_t>(spec.split.total())), seed);
}

}  // namespace qrc::harness
