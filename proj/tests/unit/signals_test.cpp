#include "qrc/signals.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include <gtest/gtest.h>

namespace {

TEST(Normalize, AffineMap) {
  const std::vector<double> raw{2.0, 4.0, 3.0};
  const auto s = qrc::normalize_to_unit_interval(raw);
  EXPECT_EQ(s.values, (std::vector<double>{0.0, 1.0, 0.5}));
  EXPECT_EQ(s.raw_min, 2.0);
  EXPECT_EQ(s.raw_max, 4.0);
}

TEST(Normalize, UnitSeriesUnchanged) {
  const std::vector<double> raw{0.0, 0.25, 1.0, 0.75};
  EXPECT_EQ(qrc::normalize_to_unit_interval(raw).values, raw);
}

TEST(Normalize, ConstantMapsToHalf) {
  const std::vector<double> raw{7.0, 7.0, 7.0};
  EXPECT_EQ(qrc::normalize_to_unit_interval(raw).values, (std::vector<double>{0.5, 0.5, 0.5}));
}

TEST(Normalize, Errors) {
  EXPECT_THROW(qrc::normalize_to_unit_interval(std::vector<double>{}), std::invalid_argument);
  EXPECT_THROW(qrc::normalize_to_unit_interval(std::vector<double>{1.0, std::numeric_limits<double>::quiet_NaN()}),
               std::invalid_argument);
}

TEST(NormalizeProperty, OrderPreservingIntoUnitInterval) {
  qrc::Rng rng(1);
  std::normal_distribution<double> g(3.0, 10.0);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> raw(50);
    for (double& v : raw) v = g(rng);
    const auto s = qrc::normalize_to_unit_interval(raw);
    EXPECT_EQ(*std::min_element(s.values.begin(), s.values.end()), 0.0);
    EXPECT_EQ(*std::max_element(s.values.begin(), s.values.end()), 1.0);
    for (std::size_t i = 0; i < raw.size(); ++i) {
      for (std::size_t j = 0; j < raw.size(); ++j) {
        if (raw[i] < raw[j]) EXPECT_LE(s.values[i], s.values[j]);
      }
    }
  }
}

TEST(UniformRandom, RangeAndDeterminism) {
  qrc::Rng a(5), b(5);
  const auto sa = qrc::gen_uniform_random(1000, a);
  EXPECT_EQ(sa.values, qrc::gen_uniform_random(1000, b).values);
  for (double v : sa.values) {
    EXPECT_GE(v, 0.0);
    EXPECT_LE(v, 1.0);
  }
  EXPECT_THROW(qrc::gen_uniform_random(0, a), std::invalid_argument);
}

TEST(UniformRandom, NoLagOneCorrelation) {
  qrc::Rng rng(6);
  const int n = 100000;
  const auto s = qrc::gen_uniform_random(n, rng);
  double mean = 0.0;
  for (double v : s.values) mean += v;
  mean /= n;
  double num = 0.0, den = 0.0;
  for (int i = 0; i < n; ++i) {
    den += (s.values[i] - mean) * (s.values[i] - mean);
    if (i + 1 < n) num += (s.values[i] - mean) * (s.values[i + 1] - mean);
  }
  EXPECT_NEAR(num / den, 0.0, 3.0 / std::sqrt(static_cast<double>(n)));
}

TEST(Cosine, PeriodAndValues) {
  const double omega = std::numbers::pi / 25;
  const auto s = qrc::gen_cosine(200, omega);
  for (int k = 1; k + 50 <= 200; ++k) EXPECT_NEAR(s.values[k + 49], s.values[k - 1], 1e-12);
  EXPECT_NEAR(s.values[24], 0.0, 1e-15);  // k = 25
  EXPECT_NEAR(s.values[49], 1.0, 1e-15);  // k = 50
  for (double v : s.values) {
    EXPECT_GE(v, 0.0);
    EXPECT_LE(v, 1.0);
  }
}

TEST(MackeyGlass, FixedPointAtOne) {
  qrc::MackeyGlassParams p;
  p.initial_history = 1.0;
  const auto x = qrc::integrate_mackey_glass(p, 200.0);
  for (double v : x) EXPECT_NEAR(v, 1.0, 1e-12);
}

TEST(MackeyGlass, StepHalvingAgreement) {
  qrc::MackeyGlassParams coarse;
  qrc::MackeyGlassParams fine = coarse;
  fine.dt = 0.05;
  const auto xc = qrc::integrate_mackey_glass(coarse, 100.0);
  const auto xf = qrc::integrate_mackey_glass(fine, 100.0);
  ASSERT_EQ(xc.size(), 1001u);
  ASSERT_EQ(xf.size(), 2001u);
  double sup = 0.0;
  for (std::size_t i = 0; i < xc.size(); ++i) sup = std::max(sup, std::abs(xc[i] - xf[2 * i]));
  EXPECT_LT(sup, 1e-3);
}

// Independent reference: Heun's method at a much finer step, delayed term read
// straight off the grid (the delay is a whole number of steps).
TEST(MackeyGlass, AgreesWithFineStepHeun) {
  const qrc::MackeyGlassParams p;
  const double h = 1e-3;
  const auto lag = static_cast<std::size_t>(std::llround(p.delay / h));
  const auto steps = static_cast<std::size_t>(std::llround(60.0 / h));
  std::vector<double> x{p.initial_history};
  const auto past = [&](std::size_t n) { return n < lag ? p.initial_history : x[n - lag]; };
  const auto f = [&](double cur, double del) { return p.alpha * del / (1 + std::pow(del, p.beta)) - p.gamma * cur; };
  for (std::size_t n = 0; n < steps; ++n) {
    const double k1 = f(x[n], past(n));
    const double k2 = f(x[n] + h * k1, past(n + 1));
    x.push_back(x[n] + 0.5 * h * (k1 + k2));
  }
  const auto rk4 = qrc::integrate_mackey_glass(p, 60.0);
  for (int t = 0; t <= 60; ++t) EXPECT_NEAR(rk4[static_cast<std::size_t>(t) * 10], x[static_cast<std::size_t>(t) * 1000], 1e-3) << t;
}

TEST(MackeyGlass, ChaoticSeriesHasNoShortPeriod) {
  const auto s = qrc::gen_mackey_glass(2000, {});
  EXPECT_EQ(s.size(), 2000u);
  EXPECT_LT(s.raw_min, s.raw_max);
  for (std::size_t lag = 1; lag <= 500; ++lag) {
    double sup = 0.0;
    for (std::size_t i = 0; i + lag < s.size(); ++i) sup = std::max(sup, std::abs(s.values[i] - s.values[i + lag]));
    EXPECT_GT(sup, 1e-6) << lag;
  }
}

TEST(MackeyGlass, SamplesIntegerTimesAfterBurnIn) {
  qrc::MackeyGlassParams p;
  p.burn_in = 50;
  const auto s = qrc::gen_mackey_glass(30, p);
  const auto x = qrc::integrate_mackey_glass(p, 80.0);
  for (int k = 1; k <= 30; ++k) {
    const double raw = x[static_cast<std::size_t>(50 + k) * 10];
    EXPECT_NEAR(s.values[k - 1], (raw - s.raw_min) / (s.raw_max - s.raw_min), 1e-15);
  }
}

TEST(MackeyGlass, ValidateRejects) {
  qrc::MackeyGlassParams p;
  p.dt = 0.3;
  EXPECT_THROW(p.validate(), std::invalid_argument);
  p.dt = 0.1;
  p.delay = 0.0;
  EXPECT_THROW(p.validate(), std::invalid_argument);
  p.delay = 17;
  p.burn_in = -1;
  EXPECT_THROW(p.validate(), std::invalid_argument);
}

TEST(Ising, HamiltonianIsSymmetricWithExpectedDiagonal) {
  qrc::IsingParams p;
  const auto h = qrc::ising_hamiltonian(p);
  ASSERT_EQ(h.rows(), 32);
  EXPECT_LT((h - h.transpose()).cwiseAbs().maxCoeff(), 1e-15);
  // all up: -J (n-1) + h_z n
  EXPECT_DOUBLE_EQ(h(0, 0), -4.0 + 5 * p.h_z);
  // all down: same bonds, field flipped
  EXPECT_DOUBLE_EQ(h(31, 31), -4.0 - 5 * p.h_z);
  EXPECT_DOUBLE_EQ(h(1, 0), p.h_x);
}

TEST(Ising, NoTransverseFieldIsConstant) {
  qrc::IsingParams p;
  p.h_x = 0.0;
  for (double v : qrc::ising_magnetization_series(200, p)) EXPECT_NEAR(v, 1.0, 1e-12);
  p.h_z = 0.7;
  for (double v : qrc::ising_magnetization_series(50, p)) EXPECT_NEAR(v, 1.0, 1e-12);
}

TEST(Ising, FreeSpinPrecession) {
  qrc::IsingParams p;
  p.coupling = 0.0;
  p.h_z = 0.0;
  p.h_x = 1.0;
  const auto raw = qrc::ising_magnetization_series(400, p);
  for (int k = 1; k <= 400; ++k) EXPECT_NEAR(raw[k - 1], std::cos(2 * k * p.dt), 1e-10);
}

TEST(Ising, NormAndEnergyConserved) {
  const qrc::IsingEvolution evo(qrc::IsingParams{});
  const double e0 = evo.energy(evo.state_at(0.0));
  EXPECT_NEAR(e0, -4.0 + 5 * (-0.5), 1e-10);
  for (int k = 1; k <= 5000; k += 37) {
    const auto psi = evo.state_at(k * 0.05);
    EXPECT_NEAR(psi.norm(), 1.0, 1e-10);
    EXPECT_NEAR(evo.energy(psi), e0, 1e-10);
  }
}

TEST(Ising, IntegrableCaseIsNotStationary) {
  qrc::IsingParams p;
  p.h_x = 1.0;
  p.h_z = 0.0;
  const auto s = qrc::gen_ising_dynamics(500, p);
  EXPECT_LT(s.raw_min, s.raw_max - 0.1);
}

TEST(Ising, ValidateRejects) {
  qrc::IsingParams p;
  p.observable_site = 6;
  EXPECT_THROW(p.validate(), std::invalid_argument);
  p.observable_site = 3;
  p.n_spins = 1;
  EXPECT_THROW(p.validate(), std::invalid_argument);
}

TEST(Signals, Deterministic) {
  EXPECT_EQ(qrc::gen_mackey_glass(100, {}).values, qrc::gen_mackey_glass(100, {}).values);
  EXPECT_EQ(qrc::gen_ising_dynamics(100, {}).values, qrc::gen_ising_dynamics(100, {}).values);
}

}  // namespace
