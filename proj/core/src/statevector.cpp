#include "qrc/statevector.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "qrc/unitary.hpp"

namespace qrc {
namespace {

constexpr double kNormTolerance = 1e-10;

void check_width(int n_qubits) {
  if (n_qubits < 1 || n_qubits > Statevector::kMaxQubits) {
    throw std::invalid_argument("Statevector: n_qubits must be in [1, " +
                                std::to_string(Statevector::kMaxQubits) + "], got " +
                                std::to_string(n_qubits));
  }
}

// Applies the 2x2 matrix [[m00, m01], [m10, m11]] on bit `bit`.
void apply_single(ComplexVector& amp, int bit, Complex m00, Complex m01, Complex m10, Complex m11) {
  const Eigen::Index stride = Eigen::Index{1} << bit;
  const Eigen::Index dim = amp.size();
  for (Eigen::Index block = 0; block < dim; block += 2 * stride) {
    for (Eigen::Index i = block; i < block + stride; ++i) {
      const Complex a0 = amp(i);
      const Complex a1 = amp(i + stride);
      amp(i) = m00 * a0 + m01 * a1;
      amp(i + stride) = m10 * a0 + m11 * a1;
    }
  }
}

void apply_diagonal(ComplexVector& amp, int bit, Complex d0, Complex d1) {
  const Eigen::Index mask = Eigen::Index{1} << bit;
  for (Eigen::Index i = 0; i < amp.size(); ++i) {
    amp(i) *= (i & mask) ? d1 : d0;
  }
}

}  // namespace

Statevector::Statevector(int n_qubits) : n_qubits_(n_qubits) {
  check_width(n_qubits);
  amplitudes_ = ComplexVector::Zero(Eigen::Index{1} << n_qubits);
  amplitudes_(0) = 1.0;
}

Statevector::Statevector(int n_qubits, ComplexVector amplitudes)
    : n_qubits_(n_qubits), amplitudes_(std::move(amplitudes)) {
  check_width(n_qubits);
  if (amplitudes_.size() != (Eigen::Index{1} << n_qubits)) {
    throw std::invalid_argument("Statevector: amplitude vector has length " +
                                std::to_string(amplitudes_.size()) + ", expected 2^" +
                                std::to_string(n_qubits));
  }
  if (std::abs(amplitudes_.norm() - 1.0) > kNormTolerance) {
    throw std::invalid_argument("Statevector: amplitudes are not normalized");
  }
}

void Statevector::reset() {
  amplitudes_.setZero();
  amplitudes_(0) = 1.0;
}

void Statevector::check_qubit(int qubit) const {
  if (qubit < 1 || qubit > n_qubits_) {
    throw std::out_of_range("qubit index " + std::to_string(qubit) + " outside [1, " +
                            std::to_string(n_qubits_) + "]");
  }
}

void Statevector::apply(const Rotation& gate) {
  check_qubit(gate.target);
  const int bit = gate.target - 1;
  const double c = std::cos(0.5 * gate.angle);
  const double s = std::sin(0.5 * gate.angle);
  switch (gate.axis) {
    case PauliAxis::X:
      apply_single(amplitudes_, bit, c, Complex(0.0, -s), Complex(0.0, -s), c);
      break;
    case PauliAxis::Y:
      apply_single(amplitudes_, bit, c, -s, s, c);
      break;
    case PauliAxis::Z:
      apply_diagonal(amplitudes_, bit, Complex(c, -s), Complex(c, s));
      break;
  }
}

void Statevector::apply(const Cnot& gate) {
  check_qubit(gate.control);
  check_qubit(gate.target);
  if (gate.control == gate.target) {
    throw std::invalid_argument("CNOT: control and target must differ (both " +
                                std::to_string(gate.control) + ")");
  }
  const Eigen::Index cmask = Eigen::Index{1} << (gate.control - 1);
  const Eigen::Index tmask = Eigen::Index{1} << (gate.target - 1);
  for (Eigen::Index i = 0; i < amplitudes_.size(); ++i) {
    if ((i & cmask) && !(i & tmask)) {
      std::swap(amplitudes_(i), amplitudes_(i | tmask));
    }
  }
}

void Statevector::apply(const Gate& gate) {
  std::visit([this](const auto& g) { apply(g); }, gate);
}

void Statevector::apply_embedding(int i, int j, double theta) {
  if (i == j) {
    throw std::invalid_argument("R gate: qubits must differ (both " + std::to_string(i) + ")");
  }
  check_qubit(i);
  check_qubit(j);
  apply(Rotation{PauliAxis::X, theta, i});
  apply(Rotation{PauliAxis::X, theta, j});
  apply(Cnot{i, j});
  apply(Rotation{PauliAxis::Z, theta, j});
  apply(Cnot{i, j});
}

void Statevector::apply(const DenseUnitary& u, ComplexVector& scratch) {
  if (u.n_qubits() != n_qubits_) {
    throw std::invalid_argument("dense unitary acts on " + std::to_string(u.n_qubits()) +
                                " qubits, state has " + std::to_string(n_qubits_));
  }
  scratch.resize(amplitudes_.size());
  scratch.noalias() = u.matrix() * amplitudes_;
  amplitudes_.swap(scratch);
}

void Statevector::apply(const DenseUnitary& u) {
  ComplexVector scratch;
  apply(u, scratch);
}

double Statevector::expectation_z(int qubit) const {
  check_qubit(qubit);
  const Eigen::Index mask = Eigen::Index{1} << (qubit - 1);
  double value = 0.0;
  for (Eigen::Index i = 0; i < amplitudes_.size(); ++i) {
    const double p = std::norm(amplitudes_(i));
    value += (i & mask) ? -p : p;
  }
  return value;
}

Eigen::VectorXd Statevector::z_profile() const {
  Eigen::VectorXd z = Eigen::VectorXd::Zero(n_qubits_);
  double total = 0.0;
  for (Eigen::Index i = 0; i < amplitudes_.size(); ++i) {
    const double p = std::norm(amplitudes_(i));
    total += p;
    // Accumulate the weight of |1> per qubit; <Z> = total - 2 p(1).
    for (int q = 0; q < n_qubits_; ++q) {
      if ((i >> q) & 1) z(q) += p;
    }
  }
  for (int q = 0; q < n_qubits_; ++q) z(q) = total - 2.0 * z(q);
  return z;
}

void apply_rotation(Statevector& state, const Rotation& gate) { state.apply(gate); }
void apply_cnot(Statevector& state, int control, int target) { state.apply(Cnot{control, target}); }
void apply_r_gate(Statevector& state, int i, int j, double theta) { state.apply_embedding(i, j, theta); }
void apply_dense_unitary(Statevector& state, const DenseUnitary& u) { state.apply(u); }
double expectation_z(const Statevector& state, int qubit) { return state.expectation_z(qubit); }

// -- Circuit ----------------------------------------------------------------

Circuit::Circuit(int n_qubits) : n_qubits_(n_qubits) { check_width(n_qubits); }

void Circuit::check_qubit(int qubit) const {
  if (qubit < 1 || qubit > n_qubits_) {
    throw std::out_of_range("qubit index " + std::to_string(qubit) + " outside [1, " +
                            std::to_string(n_qubits_) + "]");
  }
}

Circuit& Circuit::rotation(PauliAxis axis, double angle, int target) {
  check_qubit(target);
  gates_.emplace_back(Rotation{axis, angle, target});
  return *this;
}

Circuit& Circuit::cnot(int control, int target) {
  check_qubit(control);
  check_qubit(target);
  if (control == target) throw std::invalid_argument("CNOT: control and target must differ");
  gates_.emplace_back(Cnot{control, target});
  return *this;
}

Circuit& Circuit::embedding(int i, int j, double theta) {
  if (i == j) throw std::invalid_argument("R gate: qubits must differ");
  rotation(PauliAxis::X, theta, i);
  rotation(PauliAxis::X, theta, j);
  cnot(i, j);
  rotation(PauliAxis::Z, theta, j);
  cnot(i, j);
  return *this;
}

void Circuit::apply(Statevector& state) const {
  if (state.n_qubits() != n_qubits_) {
    throw std::invalid_argument("circuit width does not match the state");
  }
  for (const Gate& g : gates_) state.apply(g);
}

DenseUnitary Circuit::compose() const {
  const Eigen::Index dim = Eigen::Index{1} << n_qubits_;
  ComplexMatrix m(dim, dim);
  for (Eigen::Index col = 0; col < dim; ++col) {
    ComplexVector basis = ComplexVector::Zero(dim);
    basis(col) = 1.0;
    Statevector column(n_qubits_, std::move(basis));
    apply(column);
    m.col(col) = column.amplitudes();
  }
  return DenseUnitary(n_qubits_, std::move(m));
}

}  // namespace qrc
