#pragma once

#include <cstdint>
#include <numbers>
#include <string>
#include <string_view>
#include <vector>

#include "qrc/esn.hpp"
#include "qrc/readout.hpp"
#include "qrc/signals.hpp"

namespace qrc::harness {

enum class Task { Stm, Predict };
enum class SignalKind { Random, Cosine, MackeyGlass, Ising };

/// U_res family: Haar, or the hardware-efficient ansatz with `layers` layers.
struct AnsatzChoice {
  bool haar = true;
  int layers = 0;

  static AnsatzChoice parse(std::string_view text);  // "haar" | "he:<l>"
  std::string to_string() const;
};

/// Sentinel in ExperimentSpec::n_meas for ideal (noise-free) expectation values.
inline constexpr std::uint64_t kIdealMeasurements = 0;

/// Declarative description of one experiment. Lists are sweeps.
struct ExperimentSpec {
  Task task = Task::Stm;
  SignalKind signal = SignalKind::Random;
  double omega = std::numbers::pi / 25.0;
  MackeyGlassParams mackey_glass;
  IsingParams ising;

  std::vector<int> n_qubits{8};
  double a_in = 0.001;
  std::vector<double> a_fb{2.0};
  AnsatzChoice ansatz;
  int feedback_delay = 0;  // 0: single feedback layer
  std::vector<std::uint64_t> n_meas{kIdealMeasurements};

  int ensemble = 128;
  SplitSpec split;
  int max_delay = kDefaultMaxDelay;
  int max_horizon = 20;
  bool shared_input = false;
  bool ablation = true;  // working memory: also run without the delayed layer

  bool esn = false;
  std::vector<int> esn_nodes{8, 50, 100};
  EsnGrid esn_grid;
  double esn_ridge = 1e-5;
  GridAveraging esn_averaging = GridAveraging::MeanThenMin;
  int esn_ensemble = 0;  // 0: same as ensemble

  std::uint64_t master_seed = 1;
  int threads = 0;

  void validate() const;
};

/// Applies `key = value` lines (with `#` comments) on top of `base`. Unknown or
/// repeated keys and malformed values throw std::invalid_argument.
ExperimentSpec parse_config(std::string_view text, ExperimentSpec base = {});
ExperimentSpec load_config(const std::string& path, ExperimentSpec base = {});

/// Canonical text form: every key in a fixed order, except `threads`, which
/// never changes results.
std::string to_config_text(const ExperimentSpec& spec);

std::string_view to_string(Task task);
std::string_view to_string(SignalKind signal);

}  // namespace qrc::harness
