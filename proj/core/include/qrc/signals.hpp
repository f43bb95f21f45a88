#pragma once

#include <span>
#include <vector>

#include "qrc/types.hpp"

namespace qrc {

/// A driving sequence in [0, 1] together with the affine map that produced it
/// (value = (raw - raw_min) / (raw_max - raw_min)).
struct SignalSeries {
  std::vector<double> values;
  double raw_min = 0.0;
  double raw_max = 1.0;

  std::size_t size() const noexcept { return values.size(); }
  std::span<const double> view() const noexcept { return values; }
};

/// Min-max map onto [0, 1]; a constant input maps to 0.5 everywhere.
SignalSeries normalize_to_unit_interval(std::span<const double> raw);

SignalSeries gen_uniform_random(int length, Rng& rng);

/// s_k = (cos(omega k) + 1) / 2 for k = 1..length.
SignalSeries gen_cosine(int length, double omega);

struct MackeyGlassParams {
  double alpha = 0.2;
  double beta = 10.0;
  double gamma = 0.1;
  double delay = 17.0;
  double dt = 0.1;
  double burn_in = 1000.0;
  double initial_history = 1.2;

  void validate() const;
};

/// Raw x(t) of dx/dt = alpha x(t-delay) / (1 + x(t-delay)^beta) - gamma x(t),
/// integrated with fixed-step RK4 from the constant history x(t <= 0) =
/// p.initial_history. Returns x at t = 0, dt, 2 dt, ..., t_end (no burn-in).
/// The delayed argument at half steps is linearly interpolated.
std::vector<double> integrate_mackey_glass(const MackeyGlassParams& p, double t_end);

/// Samples x at integer times after the burn-in and normalizes.
SignalSeries gen_mackey_glass(int length, const MackeyGlassParams& p);

struct IsingParams {
  int n_spins = 5;
  double coupling = 1.0;  // J
  double h_x = 1.05;
  double h_z = -0.5;
  double dt = 0.05;
  int observable_site = 3;

  void validate() const;
};

/// H = -J sum_{i<n} sz_i sz_{i+1} + h_x sum sx_i + h_z sum sz_i with open
/// boundaries. Site i is bit (i - 1) of the basis index, |0> = spin up.
Eigen::MatrixXd ising_hamiltonian(const IsingParams& p);

/// Exact evolution of |up...up> under the chain Hamiltonian, via one dense
/// eigendecomposition.
class IsingEvolution {
 public:
  explicit IsingEvolution(const IsingParams& p);

  const IsingParams& params() const noexcept { return params_; }
  ComplexVector state_at(double t) const;
  double magnetization_z(const ComplexVector& state, int site) const;
  double energy(const ComplexVector& state) const;

 private:
  IsingParams params_;
  Eigen::MatrixXd hamiltonian_;
  Eigen::VectorXd energies_;
  Eigen::MatrixXd eigenvectors_;
  Eigen::VectorXd initial_overlaps_;
};

/// Raw <sz_site(k dt)> for k = 1..length.
std::vector<double> ising_magnetization_series(int length, const IsingParams& p);

SignalSeries gen_ising_dynamics(int length, const IsingParams& p);

}  // namespace qrc
