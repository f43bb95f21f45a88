#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "qrc/engine.hpp"
#include "qrc/harness/config.hpp"
#include "qrc/harness/results.hpp"

namespace qrc::harness {

/// Rows of a table plus the function producing one realization's values for
/// them. Realization i depends only on (spec, i), never on the ensemble size
/// or on which thread ran it.
struct ExperimentPlan {
  std::string name;
  ExperimentSpec spec;
  std::vector<RowKey> keys;
  std::function<std::vector<double>(std::size_t)> realization;
};

/// Runs spec.ensemble realizations (in parallel when spec.threads != 1) and
/// summarizes them in key order.
ResultTable execute(const ExperimentPlan& plan);

// Building blocks, exposed for the CLI and tests.
std::shared_ptr<const DenseUnitary> make_reservoir_unitary(const AnsatzChoice& ansatz, int n_qubits,
                                                           std::uint64_t realization_seed);
/// The driving series of one realization. Only the random signal depends on the
/// seed (or on the master seed when shared_input is set).
SignalSeries make_signal(const ExperimentSpec& spec, int length, std::uint64_t realization_seed);
ReservoirConfig make_reservoir_config(const ExperimentSpec& spec, int n_qubits, double a_fb,
                                      std::shared_ptr<const DenseUnitary> u_res, std::uint64_t n_meas);
std::uint64_t realization_seed(const ExperimentSpec& spec, std::size_t index);

/// R^2_d (d = 0..max_delay) followed by C_sigma, per a_fb.
ExperimentPlan plan_stm(const ExperimentSpec& spec);
/// C_sigma per a_fb.
ExperimentPlan plan_phase_sweep(const ExperimentSpec& spec);
/// QRC NMSE per horizon tau_f = 0..max_horizon (single a_fb and N).
ExperimentPlan plan_prediction(const ExperimentSpec& spec);
/// QRC NMSE per horizon for each (N, a_fb) pair.
ExperimentPlan plan_size_scaling(const ExperimentSpec& spec);
/// C_sigma per (a_fb, n_meas); n_meas = inf is the noise-free run.
ExperimentPlan plan_noise_sweep(const ExperimentSpec& spec);
/// R^2_d with the delayed feedback layer, plus the single-layer ablation.
ExperimentPlan plan_working_memory(const ExperimentSpec& spec);

ResultTable run_stm_experiment(const ExperimentSpec& spec);
ResultTable run_phase_sweep(const ExperimentSpec& spec);
/// Adds ESN rows (`nmse_esn[n=...]`, best grid cell per horizon) when spec.esn is set.
ResultTable run_prediction_experiment(const ExperimentSpec& spec);
ResultTable run_size_scaling(const ExperimentSpec& spec);
ResultTable run_noise_sweep(const ExperimentSpec& spec);
ResultTable run_working_memory(const ExperimentSpec& spec);

/// ESN grid-search rows for the prediction targets of `spec`, one metric per node count.
std::vector<ResultRow> esn_prediction_rows(const ExperimentSpec& spec, const SignalSeries& series);

/// Labels each sweep point of a capacity curve: points up to the maximum are
/// "stable", points after it "unstable", and a trailing run below 0.5 is
/// "over-rotation".
std::vector<std::string> label_phases(std::span<const double> capacity);

/// Trajectory of one realization at one a_fb, for plotting.
Trajectory simulate_trajectory(const ExperimentSpec& spec, std::size_t realization, double a_fb);

/// Metric names used in the tables.
std::string r2_metric(int delay);
std::string nmse_qrc_metric(int n_qubits);
std::string nmse_esn_metric(int n_node);
std::string capacity_metric(std::uint64_t n_meas);

}  // namespace qrc::harness
