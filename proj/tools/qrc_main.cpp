// qrc: command-line driver for the feedback-driven reservoir experiments.
//
//   qrc stm|phase|predict|scaling|noise|working-memory [options]
//   qrc trajectory [options]
//
// Each subcommand starts from its own experiment defaults; a --config file is
// applied on top, then --set overrides, then the dedicated flags.

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qrc/harness/config.hpp"
#include "qrc/harness/experiments.hpp"
#include "qrc/harness/results.hpp"
#include "qrc/harness/trajectory_io.hpp"

namespace {

using qrc::harness::ExperimentSpec;
using qrc::harness::SignalKind;
using qrc::harness::Task;

struct CommonOptions {
  std::string config;
  std::vector<std::string> overrides;
  std::optional<int> ensemble;
  std::optional<std::uint64_t> seed;
  std::string out = "results";
  bool esn = false;
  std::optional<std::string> ansatz;
  std::optional<std::string> signal;
  std::optional<double> a_in;
  std::optional<int> threads;
  bool quiet = false;
};

std::vector<double> range(double first, double last, double step) {
  std::vector<double> out;
  for (int i = 0; first + i * step <= last + 1e-9; ++i) out.push_back(first + i * step);
  return out;
}

ExperimentSpec defaults_for(const std::string& command) {
  ExperimentSpec spec;
  if (command == "stm") {
    spec.a_fb = {2.0};
  } else if (command == "phase") {
    spec.a_fb = range(0.5, 12.0, 0.5);
  } else if (command == "predict") {
    spec.task = Task::Predict;
    spec.signal = SignalKind::Cosine;
    spec.a_fb = {2.5};
  } else if (command == "scaling") {
    spec.task = Task::Predict;
    spec.signal = SignalKind::Ising;
    spec.n_qubits = {6, 7, 8, 9, 10};
    spec.a_fb = {1.5, 2.0, 2.5, 3.5, 5.5};
  } else if (command == "noise") {
    spec.a_fb = range(1.0, 6.0, 1.0);
    spec.n_meas = {100, 1000, 10000, 100000, 1000000, 10000000, 100000000, qrc::harness::kIdealMeasurements};
  } else if (command == "working-memory") {
    spec.a_fb = {2.0};
    spec.feedback_delay = 15;
    spec.max_delay = 65;
  } else if (command == "trajectory") {
    spec.signal = SignalKind::Cosine;
    spec.a_fb = {2.5};
  }
  return spec;
}

SignalKind parse_signal(const std::string& text) {
  ExperimentSpec probe = qrc::harness::parse_config("signal = " + text);
  return probe.signal;
}

ExperimentSpec resolve_spec(const std::string& command, const CommonOptions& opt) {
  ExperimentSpec spec = defaults_for(command);
  if (!opt.config.empty()) spec = qrc::harness::load_config(opt.config, spec);
  if (!opt.overrides.empty()) {
    std::string text;
    for (const auto& line : opt.overrides) text += line + '\n';
    spec = qrc::harness::parse_config(text, spec);
  }
  if (opt.ensemble) spec.ensemble = *opt.ensemble;
  if (opt.seed) spec.master_seed = *opt.seed;
  if (opt.esn) spec.esn = true;
  if (opt.ansatz) spec.ansatz = qrc::harness::AnsatzChoice::parse(*opt.ansatz);
  if (opt.signal) spec.signal = parse_signal(*opt.signal);
  if (opt.a_in) spec.a_in = *opt.a_in;
  if (opt.threads) spec.threads = *opt.threads;
  spec.validate();
  return spec;
}

void add_common(CLI::App* cmd, CommonOptions& opt) {
  cmd->add_option("--config", opt.config, "Key-value experiment file")->check(CLI::ExistingFile);
  cmd->add_option("--set", opt.overrides, "Extra `key=value` setting, applied after --config");
  cmd->add_option("--ensemble", opt.ensemble, "Number of realizations")->check(CLI::PositiveNumber);
  cmd->add_option("--seed", opt.seed, "Master seed");
  cmd->add_option("--out", opt.out, "Output directory")->capture_default_str();
  cmd->add_flag("--esn", opt.esn, "Also run the echo-state-network baseline");
  cmd->add_option("--ansatz", opt.ansatz, "Reservoir unitary: haar | he:<layers>");
  cmd->add_option("--signal", opt.signal, "Input signal: random | cosine | mackey_glass | ising");
  cmd->add_option("--a-in", opt.a_in, "Input weight");
  cmd->add_option("--threads", opt.threads, "Worker threads (0: hardware concurrency)");
  cmd->add_flag("-q,--quiet", opt.quiet, "Do not print the table");
}

void print_table(const qrc::harness::ResultTable& table) {
  std::cout << "sweep_param,sweep_value,metric,mean,stderr,n\n";
  for (const auto& row : table.rows()) {
    std::cout << row.sweep_param << ',' << qrc::harness::format_shortest(row.sweep_value) << ',' << row.metric << ','
              << row.mean << ',' << row.sem << ',' << row.n << '\n';
  }
}

int run_experiment(const std::string& command, const CommonOptions& opt) {
  const ExperimentSpec spec = resolve_spec(command, opt);
  const auto start = std::chrono::steady_clock::now();
  qrc::harness::ResultTable table;
  if (command == "stm") {
    table = qrc::harness::run_stm_experiment(spec);
  } else if (command == "phase") {
    table = qrc::harness::run_phase_sweep(spec);
  } else if (command == "predict") {
    table = qrc::harness::run_prediction_experiment(spec);
  } else if (command == "scaling") {
    table = qrc::harness::run_size_scaling(spec);
  } else if (command == "noise") {
    table = qrc::harness::run_noise_sweep(spec);
  } else {
    table = qrc::harness::run_working_memory(spec);
  }
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  std::string stem = command;
  if (command == "predict" || command == "scaling") stem += "_" + std::string(qrc::harness::to_string(spec.signal));
  table.save(opt.out, stem);
  if (!opt.quiet) print_table(table);
  std::cerr << "wrote " << (std::filesystem::path(opt.out) / (stem + ".csv")).string() << " (" << spec.ensemble
            << " realizations, " << seconds << " s)\n";
  return 0;
}

std::vector<qrc::harness::QubitPair> parse_pairs(const std::string& text) {
  std::vector<qrc::harness::QubitPair> pairs;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    const auto colon = item.find(':');
    if (colon == std::string::npos) throw CLI::ValidationError("--pairs", "expected i:j[,i:j...]");
    pairs.emplace_back(std::stoi(item.substr(0, colon)), std::stoi(item.substr(colon + 1)));
  }
  if (pairs.empty()) throw CLI::ValidationError("--pairs", "no pairs given");
  return pairs;
}

struct TrajectoryOptions {
  double a_fb = 2.5;
  std::size_t realization = 0;
  std::string pairs = "1:2,3:4";
  std::string file;
};

int run_trajectory(const CommonOptions& opt, const TrajectoryOptions& topt) {
  const ExperimentSpec spec = resolve_spec("trajectory", opt);
  const auto traj = qrc::harness::simulate_trajectory(spec, topt.realization, topt.a_fb);
  const auto pairs = parse_pairs(topt.pairs);
  std::filesystem::path file = topt.file;
  if (file.empty()) {
    std::ostringstream name;
    name << "trajectory_" << qrc::harness::to_string(spec.signal) << "_afb" << qrc::harness::format_shortest(topt.a_fb)
         << "_r" << topt.realization << ".csv";
    file = std::filesystem::path(opt.out) / name.str();
  }
  if (file.has_parent_path()) std::filesystem::create_directories(file.parent_path());
  qrc::harness::export_trajectory(traj, pairs, file);
  std::cerr << "wrote " << file.string() << " (" << traj.cycle_count() << " cycles)\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Feedback-driven quantum reservoir computing experiments"};
  app.set_version_flag("--version", std::string(QRC_VERSION));
  app.require_subcommand(1);

  CommonOptions opt;
  std::vector<std::pair<std::string, CLI::App*>> experiments;
  const std::pair<const char*, const char*> commands[] = {
      {"stm", "Short-term memory curve R2_d and capacity"},
      {"phase", "Capacity as a function of the feedback weight"},
      {"predict", "Multi-step forecasting NMSE per horizon"},
      {"scaling", "Forecasting NMSE for several reservoir sizes"},
      {"noise", "Capacity under finite measurement statistics"},
      {"working-memory", "Delay curve with a second, delayed feedback layer"},
  };
  for (const auto& [name, help] : commands) {
    CLI::App* cmd = app.add_subcommand(name, help);
    add_common(cmd, opt);
    experiments.emplace_back(name, cmd);
  }

  TrajectoryOptions topt;
  CLI::App* traj = app.add_subcommand("trajectory", "Export one measurement trajectory as CSV");
  add_common(traj, opt);
  traj->add_option("--a-fb", topt.a_fb, "Feedback weight")->capture_default_str();
  traj->add_option("--realization", topt.realization, "Realization index")->capture_default_str();
  traj->add_option("--pairs", topt.pairs, "Qubit pairs i:j,...")->capture_default_str();
  traj->add_option("--file", topt.file, "Output file (default: under --out)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (traj->parsed()) return run_trajectory(opt, topt);
    for (const auto& [name, cmd] : experiments) {
      if (cmd->parsed()) return run_experiment(name, opt);
    }
  } catch (const std::exception& e) {
    std::cerr << "qrc: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
