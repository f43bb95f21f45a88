#include <cmath>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <unordered_set>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "qrc/harness/config.hpp"
#include "qrc/harness/experiments.hpp"
#include "qrc/harness/parallel.hpp"
#include "qrc/harness/results.hpp"
#include "qrc/harness/seed.hpp"
#include "qrc/harness/stats.hpp"
#include "qrc/harness/trajectory_io.hpp"

namespace {

using namespace qrc::harness;

// Small split so experiment-level tests run in well under a second per realization.
ExperimentSpec small_spec() {
  ExperimentSpec spec;
  spec.split = {100, 400, 300};
  spec.ensemble = 3;
  spec.max_delay = 10;
  spec.max_horizon = 5;
  spec.n_qubits = {6};
  spec.threads = 1;
  spec.master_seed = 2024;
  return spec;
}

std::vector<std::string> split_lines(const std::string& text) {
  std::vector<std::string> lines;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) lines.push_back(line);
  return lines;
}

// -- seeds --------------------------------------------------------------------

TEST(Seed, InjectiveOverAMillionIndices) {
  std::unordered_set<std::uint64_t> seen;
  seen.reserve(1'000'001);
  for (std::uint64_t i = 0; i <= 1'000'000; ++i) ASSERT_TRUE(seen.insert(seed_fanout(1, i)).second) << i;
}

TEST(Seed, DeterministicAndMasterSensitive) {
  EXPECT_EQ(seed_fanout(5, 7), seed_fanout(5, 7));
  EXPECT_NE(seed_fanout(5, 7), seed_fanout(6, 7));
  EXPECT_NE(stream_seed(9, Stream::Unitary), stream_seed(9, Stream::Input));
  // SplitMix64 reference value for a fixed input.
  EXPECT_EQ(mix64(0x9e3779b97f4a7c15ULL), 0xe220a8397b1dcdafULL);
}

// -- parallel / stats -----------------------------------------------------------

TEST(Parallel, IndexOrderedResults) {
  const auto out = parallel_map(100, [](std::size_t i) { return i * i; }, 4);
  for (std::size_t i = 0; i < 100; ++i) EXPECT_EQ(out[i], i * i);
  EXPECT_TRUE(parallel_map(0, [](std::size_t i) { return i; }, 4).empty());
}

TEST(Parallel, PropagatesExceptions) {
  EXPECT_THROW(parallel_map(
                   50,
                   [](std::size_t i) {
                     if (i == 17) throw std::runtime_error("boom");
                     return i;
                   },
                   3),
               std::runtime_error);
}

TEST(Stats, StandardErrorIsSampleSdOverRootN) {
  const std::vector<double> v{1.0, 2.0, 4.0, 7.0};
  const Summary s = summarize(v);
  const double mean = 3.5;
  const double ss = 6.25 + 2.25 + 0.25 + 12.25;
  EXPECT_DOUBLE_EQ(s.mean, mean);
  EXPECT_NEAR(s.sem, std::sqrt(ss / 3.0) / 2.0, 1e-15);
  EXPECT_EQ(s.n, 4);
  EXPECT_EQ(summarize(std::vector<double>{3.0}).sem, 0.0);
}

// -- config ---------------------------------------------------------------------

TEST(Config, ParsesKeysListsAndComments) {
  const auto spec = parse_config(
      "# phase sweep\n"
      "task = stm\n"
      "signal = random   # inline comment\n"
      "n_qubits = 8\n"
      "a_fb = 0.5, 1.0,1.5\n"
      "n_meas = 100, 1e4, inf\n"
      "ansatz = he:10\n"
      "ensemble = 32\n"
      "master_seed = 18446744073709551615\n");
  EXPECT_EQ(spec.a_fb, (std::vector<double>{0.5, 1.0, 1.5}));
  EXPECT_EQ(spec.n_meas, (std::vector<std::uint64_t>{100, 10000, kIdealMeasurements}));
  EXPECT_FALSE(spec.ansatz.haar);
  EXPECT_EQ(spec.ansatz.layers, 10);
  EXPECT_EQ(spec.ensemble, 32);
  EXPECT_EQ(spec.master_seed, 18446744073709551615ULL);
}

TEST(Config, AppliesOnTopOfBase) {
  ExperimentSpec base;
  base.ensemble = 7;
  const auto spec = parse_config("a_in = 1.0\n", base);
  EXPECT_EQ(spec.ensemble, 7);
  EXPECT_EQ(spec.a_in, 1.0);
}

TEST(Config, Errors) {
  EXPECT_THROW(parse_config("bogus = 1\n"), std::invalid_argument);
  EXPECT_THROW(parse_config("ensemble = 3\nensemble = 4\n"), std::invalid_argument);
  EXPECT_THROW(parse_config("ensemble 3\n"), std::invalid_argument);
  EXPECT_THROW(parse_config("ensemble = three\n"), std::invalid_argument);
  EXPECT_THROW(parse_config("a_fb = 1.0,,2.0\n"), std::invalid_argument);
  EXPECT_THROW(parse_config("signal = sawtooth\n"), std::invalid_argument);
  EXPECT_THROW(parse_config("ansatz = he:x\n"), std::invalid_argument);
  EXPECT_THROW(parse_config("n_meas = 0\n"), std::invalid_argument);
  EXPECT_THROW(load_config("/nonexistent/spec.cfg"), std::invalid_argument);
}

TEST(Config, ValidateRejects) {
  ExperimentSpec spec;
  spec.n_qubits = {5};
  EXPECT_THROW(spec.validate(), std::invalid_argument);
  spec = {};
  spec.ensemble = 0;
  EXPECT_THROW(spec.validate(), std::invalid_argument);
  spec = {};
  spec.max_delay = 600;
  EXPECT_THROW(spec.validate(), std::invalid_argument);
  spec = {};
  spec.a_fb = {};
  EXPECT_THROW(spec.validate(), std::invalid_argument);
}

TEST(ConfigProperty, CanonicalTextRoundTrips) {
  qrc::Rng rng(3);
  std::uniform_real_distribution<double> u(0.0, 10.0);
  for (int trial = 0; trial < 20; ++trial) {
    ExperimentSpec spec;
    spec.task = trial % 2 ? Task::Predict : Task::Stm;
    spec.signal = static_cast<SignalKind>(trial % 4);
    spec.a_in = u(rng);
    spec.a_fb = {u(rng), u(rng)};
    spec.n_qubits = {6 + trial % 5};
    spec.n_meas = {static_cast<std::uint64_t>(1 + trial * 1000), kIdealMeasurements};
    spec.ansatz = trial % 3 ? AnsatzChoice{false, trial} : AnsatzChoice{};
    spec.mackey_glass.delay = u(rng) + 1;
    spec.ising.h_z = -u(rng);
    spec.master_seed = rng();
    spec.esn_averaging = trial % 2 ? qrc::GridAveraging::MinThenMean : qrc::GridAveraging::MeanThenMin;
    const std::string text = to_config_text(spec);
    EXPECT_EQ(to_config_text(parse_config(text)), text);
  }
}

TEST(Config, ThreadsDoNotAffectCanonicalText) {
  ExperimentSpec a, b;
  a.threads = 1;
  b.threads = 8;
  EXPECT_EQ(to_config_text(a), to_config_text(b));
}

TEST(Ansatz, ParseAndFormat) {
  EXPECT_TRUE(AnsatzChoice::parse("haar").haar);
  EXPECT_EQ(AnsatzChoice::parse("he:3").layers, 3);
  EXPECT_EQ(AnsatzChoice::parse("he:0").to_string(), "he:0");
  EXPECT_THROW(AnsatzChoice::parse("he:-1"), std::invalid_argument);
  EXPECT_THROW(AnsatzChoice::parse("random"), std::invalid_argument);
}

// -- results --------------------------------------------------------------------

TEST(Results, CsvSchemaAndFormatting) {
  const std::vector<RowKey> keys{{"a_fb", 0.5, "C_sigma"}, {"a_fb", 12, "C_sigma"}};
  const std::vector<std::vector<double>> samples{{1.0, 0.1}, {2.0, 0.2}, {4.0, 1.0 / 3.0}};
  const auto table = ResultTable::from_samples(keys, samples, {});
  const auto lines = split_lines(table.to_csv());
  ASSERT_EQ(lines.size(), 3u);
  EXPECT_EQ(lines[0], "sweep_param,sweep_value,metric,mean,stderr,n");
  EXPECT_TRUE(lines[1].starts_with("a_fb,0.5,C_sigma,2.3333333333333335,"));
  EXPECT_TRUE(lines[1].ends_with(",3"));
  EXPECT_TRUE(lines[2].starts_with("a_fb,12,C_sigma,"));
  EXPECT_EQ(format_17g(0.1), "0.10000000000000001");
  EXPECT_EQ(format_shortest(0.1), "0.1");
}

TEST(Results, LookupAndMetricSlices) {
  const std::vector<RowKey> keys{{"d", 0, "R2"}, {"d", 1, "R2"}, {"d", 0, "R2[single_layer]"}};
  const auto table = ResultTable::from_samples(keys, {{1, 2, 3}}, {});
  EXPECT_EQ(table.at("d", 1, "R2").mean, 2.0);
  EXPECT_EQ(table.metric("R2").size(), 2u);
  EXPECT_THROW(table.at("d", 2, "R2"), std::out_of_range);
  EXPECT_THROW(ResultTable::from_samples(keys, {{1, 2}}, {}), std::invalid_argument);
}

TEST(Results, SaveWritesCsvAndJsonSidecar) {
  ResultMetadata meta;
  meta.experiment = "stm";
  meta.spec_text = "ensemble = 2\n";
  meta.spec_hash = fnv1a_hex(meta.spec_text);
  meta.master_seed = 99;
  meta.code_version = "test";
  meta.annotations["phase_labels"] = {"stable"};
  const auto table = ResultTable::from_samples(std::vector<RowKey>{{"a_fb", 2, "C_sigma"}}, {{5.0}, {6.0}}, meta);
  const auto dir = std::filesystem::temp_directory_path() / "qrc_results_test";
  std::filesystem::remove_all(dir);
  table.save(dir, "stm");
  std::ifstream csv(dir / "stm.csv");
  std::string header;
  std::getline(csv, header);
  EXPECT_EQ(header, "sweep_param,sweep_value,metric,mean,stderr,n");
  const auto json = nlohmann::json::parse(std::ifstream(dir / "stm.json"));
  EXPECT_EQ(json["experiment"], "stm");
  EXPECT_EQ(json["master_seed"], 99);
  EXPECT_EQ(json["spec_hash"], meta.spec_hash);
  EXPECT_EQ(json["spec"], "ensemble = 2\n");
  EXPECT_EQ(json["code_version"], "test");
  EXPECT_EQ(json["annotations"]["phase_labels"][0], "stable");
  std::filesystem::remove_all(dir);
}

TEST(Results, FnvKnownVector) {
  EXPECT_EQ(fnv1a_hex(""), "cbf29ce484222325");
  EXPECT_EQ(fnv1a_hex("a"), "af63dc4c8601ec8c");
}

// -- trajectory export ----------------------------------------------------------

TEST(TrajectoryIo, HeaderRowsAndPrecision) {
  Eigen::MatrixXd rows(3, 4);
  rows << 0.1, 0.2, 0.3, 0.4, -0.5, 0.6, 1.0 / 3.0, 0.8, 0.9, -1.0, 0.0, 1.0;
  const qrc::Trajectory traj(rows);
  const std::vector<QubitPair> pairs{{1, 2}, {3, 4}};
  std::ostringstream out;
  export_trajectory(traj, pairs, out);
  const auto lines = split_lines(out.str());
  ASSERT_EQ(lines.size(), 4u);
  EXPECT_EQ(lines[0], "cycle,z1,z2,z3,z4");
  EXPECT_EQ(lines[2], "2,-0.5,0.59999999999999998,0.33333333333333331,0.80000000000000004");
  EXPECT_TRUE(lines[3].starts_with("3,"));
}

TEST(TrajectoryIo, RejectsBadQubits) {
  const qrc::Trajectory traj(Eigen::MatrixXd::Zero(2, 3));
  std::ostringstream out;
  EXPECT_THROW(export_trajectory(traj, std::vector<QubitPair>{{1, 4}}, out), std::out_of_range);
  EXPECT_THROW(export_trajectory(traj, std::vector<QubitPair>{{0, 1}}, out), std::out_of_range);
}

TEST(TrajectoryIo, SeriesExport) {
  std::ostringstream out;
  export_series(std::vector<double>{0.25, 1.0}, out);
  EXPECT_EQ(out.str(), "cycle,value\n1,0.25\n2,1\n");
}

TEST(TrajectoryIo, CosineDrivenTrajectoryIsFiftyCyclePeriodic) {
  ExperimentSpec spec;
  spec.signal = SignalKind::Cosine;
  spec.task = Task::Predict;
  spec.max_horizon = 0;
  const auto traj = simulate_trajectory(spec, 0, 2.5);
  double sup = 0.0;
  for (int k = spec.split.test_start(); k + 50 <= spec.split.total(); ++k) {
    sup = std::max(sup, (traj.cycle(k) - traj.cycle(k + 50)).cwiseAbs().maxCoeff());
  }
  EXPECT_LT(sup, 0.05);
}

// -- experiments ----------------------------------------------------------------

TEST(Experiments, StmTableLayout) {
  auto spec = small_spec();
  spec.a_fb = {1.0, 2.0};
  const auto table = run_stm_experiment(spec);
  ASSERT_EQ(table.rows().size(), 2u * (11 + 1));
  EXPECT_EQ(table.rows()[0].metric, "R2[d=0]");
  EXPECT_EQ(table.rows()[11].metric, "C_sigma");
  for (const auto& row : table.rows()) EXPECT_EQ(row.n, 3);
  double sum = 0.0;
  for (int d = 0; d <= 10; ++d) sum += table.at("a_fb", 2.0, r2_metric(d)).mean;
  EXPECT_NEAR(table.at("a_fb", 2.0, "C_sigma").mean, sum, 1e-12);
}

TEST(Experiments, SerialAndParallelTablesAreIdentical) {
  auto spec = small_spec();
  spec.a_fb = {2.0, 4.0};
  spec.ensemble = 5;
  const auto serial = run_stm_experiment(spec);
  spec.threads = 4;
  const auto parallel = run_stm_experiment(spec);
  EXPECT_EQ(serial.to_csv(), parallel.to_csv());
  EXPECT_EQ(serial.metadata_json(), parallel.metadata_json());
}

TEST(Experiments, RealizationSevenInIsolation) {
  auto spec = small_spec();
  spec.ensemble = 10;
  const auto plan = plan_stm(spec);
  const auto all = parallel_map(10, plan.realization, 2);
  const auto alone = plan_stm(spec).realization(7);
  EXPECT_EQ(all[7], alone);

  auto bigger = spec;
  bigger.ensemble = 50;
  EXPECT_EQ(plan_stm(bigger).realization(7), alone);
}

TEST(Experiments, RerunIsByteIdenticalAndSeedSensitive) {
  const auto spec = small_spec();
  const auto a = run_stm_experiment(spec);
  const auto b = run_stm_experiment(spec);
  EXPECT_EQ(a.to_csv(), b.to_csv());
  EXPECT_EQ(a.metadata_json(), b.metadata_json());
  auto other = spec;
  other.master_seed = 2025;
  EXPECT_NE(run_stm_experiment(other).to_csv(), a.to_csv());
}

TEST(Experiments, StandardErrorMatchesSamples) {
  auto spec = small_spec();
  spec.ensemble = 4;
  const auto plan = plan_stm(spec);
  const auto table = execute(plan);
  std::vector<std::vector<double>> samples;
  for (std::size_t r = 0; r < 4; ++r) samples.push_back(plan.realization(r));
  for (std::size_t i = 0; i < plan.keys.size(); ++i) {
    std::vector<double> col;
    for (const auto& s : samples) col.push_back(s[i]);
    const double mean = std::accumulate(col.begin(), col.end(), 0.0) / 4.0;
    double ss = 0.0;
    for (double v : col) ss += (v - mean) * (v - mean);
    EXPECT_NEAR(table.rows()[i].sem, std::sqrt(ss / 3.0) / 2.0, 1e-12);
  }
}

TEST(Experiments, NoFeedbackMeansNoMemory) {
  auto spec = small_spec();
  spec.a_fb = {0.0};
  spec.a_in = 1.0;
  const auto table = run_stm_experiment(spec);
  EXPECT_GT(table.at("a_fb", 0.0, r2_metric(0)).mean, 0.9);
  for (int d = 1; d <= 10; ++d) EXPECT_LT(table.at("a_fb", 0.0, r2_metric(d)).mean, 0.02) << d;
}

TEST(Experiments, OverRotationCollapsesCapacity) {
  auto spec = small_spec();
  spec.n_qubits = {8};
  spec.split = {500, 1000, 1000};
  spec.max_delay = 25;
  spec.a_fb = {12.0};
  EXPECT_LT(run_phase_sweep(spec).at("a_fb", 12.0, "C_sigma").mean, 0.5);
}

TEST(Experiments, PhaseSweepMatchesStmCapacityAndLabels) {
  auto spec = small_spec();
  spec.a_fb = {1.0, 3.0};
  const auto phase = run_phase_sweep(spec);
  const auto stm = run_stm_experiment(spec);
  ASSERT_EQ(phase.rows().size(), 2u);
  for (double a : spec.a_fb) EXPECT_EQ(phase.at("a_fb", a, "C_sigma").mean, stm.at("a_fb", a, "C_sigma").mean);
  EXPECT_EQ(phase.metadata().annotations.at("phase_labels").size(), 2u);
}

TEST(Experiments, LabelPhases) {
  const std::vector<double> curve{4.8, 5.5, 6.3, 5.0, 2.0, 0.3, 0.01};
  EXPECT_EQ(label_phases(curve), (std::vector<std::string>{"stable", "stable", "stable", "unstable", "unstable",
                                                           "over-rotation", "over-rotation"}));
  EXPECT_TRUE(label_phases(std::vector<double>{}).empty());
  EXPECT_EQ(label_phases(std::vector<double>{0.1, 0.2}), (std::vector<std::string>{"stable", "stable"}));
}

TEST(Experiments, IdealNoiseColumnEqualsNoiseFreeRun) {
  auto spec = small_spec();
  spec.a_fb = {2.0};
  spec.n_meas = {1000, kIdealMeasurements};
  const auto noise = run_noise_sweep(spec);
  auto clean = spec;
  clean.n_meas = {kIdealMeasurements};
  const auto stm = run_stm_experiment(clean);
  EXPECT_EQ(noise.at("a_fb", 2.0, capacity_metric(kIdealMeasurements)).mean, stm.at("a_fb", 2.0, "C_sigma").mean);
  EXPECT_NE(noise.at("a_fb", 2.0, "C_sigma[n_meas=1000]").mean, stm.at("a_fb", 2.0, "C_sigma").mean);
}

TEST(Experiments, PredictionLayoutAndEsnRows) {
  auto spec = small_spec();
  spec.task = Task::Predict;
  spec.signal = SignalKind::Cosine;
  spec.a_fb = {2.5};
  spec.esn = true;
  spec.esn_nodes = {8};
  spec.esn_grid = {{0.95}, {1.0}};
  const auto table = run_prediction_experiment(spec);
  EXPECT_EQ(table.metric("nmse_qrc").size(), 6u);
  EXPECT_EQ(table.metric(nmse_esn_metric(8)).size(), 6u);
  EXPECT_LT(table.at("tau_f", 0, "nmse_qrc").mean, 1e-3);
}

TEST(Experiments, ScalingPairsSizesWithWeights) {
  auto spec = small_spec();
  spec.task = Task::Predict;
  spec.signal = SignalKind::Ising;
  spec.n_qubits = {6, 7};
  spec.a_fb = {1.5, 2.0};
  spec.ensemble = 2;
  const auto table = run_size_scaling(spec);
  EXPECT_EQ(table.metric(nmse_qrc_metric(6)).size(), 6u);
  EXPECT_EQ(table.metric(nmse_qrc_metric(7)).size(), 6u);
  spec.a_fb = {1.5, 2.0, 2.5};
  EXPECT_THROW(plan_size_scaling(spec), std::invalid_argument);
}

TEST(Experiments, WorkingMemoryRowsWithAblation) {
  auto spec = small_spec();
  spec.feedback_delay = 4;
  spec.ensemble = 2;
  const auto table = run_working_memory(spec);
  EXPECT_EQ(table.metric("R2").size(), 11u);
  EXPECT_EQ(table.metric("R2[single_layer]").size(), 11u);
  spec.feedback_delay = 0;
  EXPECT_THROW(plan_working_memory(spec), std::invalid_argument);
}

TEST(Experiments, TaskMismatchIsRejected) {
  auto spec = small_spec();
  EXPECT_THROW(plan_prediction(spec), std::invalid_argument);
  spec.task = Task::Predict;
  EXPECT_THROW(plan_stm(spec), std::invalid_argument);
  spec.a_fb = {1.0, 2.0};
  EXPECT_THROW(plan_prediction(spec), std::invalid_argument);
}

TEST(Experiments, SharedInputUsesOneSeries) {
  auto spec = small_spec();
  spec.shared_input = true;
  EXPECT_EQ(make_signal(spec, 50, realization_seed(spec, 0)).values,
            make_signal(spec, 50, realization_seed(spec, 1)).values);
  spec.shared_input = false;
  EXPECT_NE(make_signal(spec, 50, realization_seed(spec, 0)).values,
            make_signal(spec, 50, realization_seed(spec, 1)).values);
}

}  // namespace
