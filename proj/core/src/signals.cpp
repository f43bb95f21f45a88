#include "qrc/signals.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace qrc {

SignalSeries normalize_to_unit_interval(std::span<const double> raw) {
  if (raw.empty()) throw std::invalid_argument("normalize_to_unit_interval: empty series");
  for (double v : raw) {
    if (!std::isfinite(v)) throw std::invalid_argument("normalize_to_unit_interval: non-finite entry");
  }
  const auto [lo, hi] = std::minmax_element(raw.begin(), raw.end());
  SignalSeries out;
  out.raw_min = *lo;
  out.raw_max = *hi;
  out.values.resize(raw.size());
  const double span = out.raw_max - out.raw_min;
  if (span == 0.0) {
    std::fill(out.values.begin(), out.values.end(), 0.5);
    return out;
  }
  for (std::size_t i = 0; i < raw.size(); ++i) {
    out.values[i] = std::clamp((raw[i] - out.raw_min) / span, 0.0, 1.0);
  }
  return out;
}

SignalSeries gen_uniform_random(int length, Rng& rng) {
  if (length <= 0) throw std::invalid_argument("gen_uniform_random: length must be positive");
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  SignalSeries out;
  out.values.resize(static_cast<std::size_t>(length));
  for (double& v : out.values) v = uniform(rng);
  return out;
}

SignalSeries gen_cosine(int length, double omega) {
  if (length <= 0) throw std::invalid_argument("gen_cosine: length must be positive");
  SignalSeries out;
  out.raw_min = -1.0;
  out.raw_max = 1.0;
  out.values.resize(static_cast<std::size_t>(length));
  for (int k = 1; k <= length; ++k) out.values[k - 1] = 0.5 * (std::cos(omega * k) + 1.0);
  return out;
}

// -- Mackey-Glass -------------------------------------------------------------

void MackeyGlassParams::validate() const {
  if (!(delay > 0.0)) throw std::invalid_argument("MackeyGlassParams: delay must be positive");
  if (!(dt > 0.0) || dt > 1.0) throw std::invalid_argument("MackeyGlassParams: dt must be in (0, 1]");
  const double steps_per_unit = 1.0 / dt;
  if (std::abs(steps_per_unit - std::round(steps_per_unit)) > 1e-9) {
    throw std::invalid_argument("MackeyGlassParams: dt must divide 1 exactly");
  }
  if (!(burn_in >= 0.0)) throw std::invalid_argument("MackeyGlassParams: burn_in must be non-negative");
}

std::vector<double> integrate_mackey_glass(const MackeyGlassParams& p, double t_end) {
  p.validate();
  const auto steps = static_cast<std::size_t>(std::llround(t_end / p.dt));
  const double delay_steps = p.delay / p.dt;

  // x[i] = x(i dt); negative times return the constant history.
  std::vector<double> x;
  x.reserve(steps + 1);
  x.push_back(p.initial_history);

  // x at (fractional) step index s, with linear interpolation between grid points.
  const auto lagged = [&](double s) {
    if (s <= 0.0) return s < 0.0 ? p.initial_history : x.front();
    const auto i = static_cast<std::size_t>(std::floor(s));
    const double frac = s - static_cast<double>(i);
    if (frac == 0.0 || i + 1 >= x.size()) return x[std::min(i, x.size() - 1)];
    return (1.0 - frac) * x[i] + frac * x[i + 1];
  };
  const auto rhs = [&](double current, double delayed) {
    return p.alpha * delayed / (1.0 + std::pow(delayed, p.beta)) - p.gamma * current;
  };

  for (std::size_t n = 0; n < steps; ++n) {
    const double s = static_cast<double>(n) - delay_steps;
    const double d0 = lagged(s);
    const double dh = lagged(s + 0.5);
    const double d1 = lagged(s + 1.0);
    const double xn = x[n];
    const double k1 = rhs(xn, d0);
    const double k2 = rhs(xn + 0.5 * p.dt * k1, dh);
    const double k3 = rhs(xn + 0.5 * p.dt * k2, dh);
    const double k4 = rhs(xn + p.dt * k3, d1);
    const double next = xn + p.dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    if (!std::isfinite(next)) throw std::domain_error("integrate_mackey_glass: state became non-finite");
    x.push_back(next);
  }
  return x;
}

SignalSeries gen_mackey_glass(int length, const MackeyGlassParams& p) {
  if (length <= 0) throw std::invalid_argument("gen_mackey_glass: length must be positive");
  const auto per_unit = static_cast<std::size_t>(std::llround(1.0 / p.dt));
  const auto burn = static_cast<std::size_t>(std::llround(p.burn_in));
  const std::vector<double> x = integrate_mackey_glass(p, p.burn_in + static_cast<double>(length));
  std::vector<double> raw(static_cast<std::size_t>(length));
  for (std::size_t k = 1; k <= raw.size(); ++k) raw[k - 1] = x[(burn + k) * per_unit];
  return normalize_to_unit_interval(raw);
}

// -- Ising chain --------------------------------------------------------------

void IsingParams::validate() const {
  if (n_spins < 2 || n_spins > 12) throw std::invalid_argument("IsingParams: n_spins must be in [2, 12]");
  if (observable_site < 1 || observable_site > n_spins) {
    throw std::invalid_argument("IsingParams: observable_site out of range");
  }
  if (!(dt > 0.0)) throw std::invalid_argument("IsingParams: dt must be positive");
}

Eigen::MatrixXd ising_hamiltonian(const IsingParams& p) {
  p.validate();
  const Eigen::Index dim = Eigen::Index{1} << p.n_spins;
  const auto sz = [](Eigen::Index basis, int site) { return ((basis >> (site - 1)) & 1) ? -1.0 : 1.0; };
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(dim, dim);
  for (Eigen::Index b = 0; b < dim; ++b) {
    double diag = 0.0;
    for (int i = 1; i < p.n_spins; ++i) diag -= p.coupling * sz(b, i) * sz(b, i + 1);
    for (int i = 1; i <= p.n_spins; ++i) diag += p.h_z * sz(b, i);
    h(b, b) = diag;
    for (int i = 1; i <= p.n_spins; ++i) h(b ^ (Eigen::Index{1} << (i - 1)), b) += p.h_x;
  }
  return h;
}

IsingEvolution::IsingEvolution(const IsingParams& p) : params_(p), hamiltonian_(ising_hamiltonian(p)) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(hamiltonian_);
  if (solver.info() != Eigen::Success) throw std::runtime_error("IsingEvolution: eigendecomposition failed");
  energies_ = solver.eigenvalues();
  eigenvectors_ = solver.eigenvectors();
  // |up...up> is basis index 0.
  initial_overlaps_ = eigenvectors_.row(0).transpose();
}

ComplexVector IsingEvolution::state_at(double t) const {
  ComplexVector coeffs(energies_.size());
  for (Eigen::Index m = 0; m < energies_.size(); ++m) {
    coeffs(m) = initial_overlaps_(m) * std::polar(1.0, -energies_(m) * t);
  }
  return eigenvectors_.cast<Complex>() * coeffs;
}

double IsingEvolution::magnetization_z(const ComplexVector& state, int site) const {
  const Eigen::Index mask = Eigen::Index{1} << (site - 1);
  double value = 0.0;
  for (Eigen::Index b = 0; b < state.size(); ++b) {
    const double prob = std::norm(state(b));
    value += (b & mask) ? -prob : prob;
  }
  return value;
}

double IsingEvolution::energy(const ComplexVector& state) const {
  return (state.adjoint() * (hamiltonian_.cast<Complex>() * state))(0).real();
}

std::vector<double> ising_magnetization_series(int length, const IsingParams& p) {
  if (length <= 0) throw std::invalid_argument("ising_magnetization_series: length must be positive");
  const IsingEvolution evolution(p);
  std::vector<double> raw(static_cast<std::size_t>(length));
  for (int k = 1; k <= length; ++k) {
    raw[k - 1] = evolution.magnetization_z(evolution.state_at(k * p.dt), p.observable_site);
  }
  return raw;
}

SignalSeries gen_ising_dynamics(int length, const IsingParams& p) {
  return normalize_to_unit_interval(ising_magnetization_series(length, p));
}

}  // namespace qrc
