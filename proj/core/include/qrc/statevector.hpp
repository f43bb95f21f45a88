#pragma once

#include <cstddef>
#include <span>
#include <variant>
#include <vector>

#include "qrc/types.hpp"

namespace qrc {

class DenseUnitary;

// Qubits are numbered 1..n. Qubit i lives on bit (i - 1) of the basis index,
// so |q_n ... q_2 q_1> has index sum_i q_i 2^(i-1).

enum class PauliAxis { X, Y, Z };

/// exp(-i angle/2 P) on a single qubit.
struct Rotation {
  PauliAxis axis = PauliAxis::Z;
  double angle = 0.0;
  int target = 1;
};

struct Cnot {
  int control = 1;
  int target = 2;
};

using Gate = std::variant<Rotation, Cnot>;

/// Pure state of n qubits as a dense amplitude vector of length 2^n.
class Statevector {
 public:
  static constexpr int kMaxQubits = 16;

  /// |0...0>.
  explicit Statevector(int n_qubits);

  /// Takes ownership of `amplitudes`; throws unless the length is 2^n and the
  /// norm is 1 within 1e-10.
  Statevector(int n_qubits, ComplexVector amplitudes);

  int n_qubits() const noexcept { return n_qubits_; }
  std::size_t dimension() const noexcept { return static_cast<std::size_t>(amplitudes_.size()); }
  const ComplexVector& amplitudes() const noexcept { return amplitudes_; }
  Complex amplitude(std::size_t index) const { return amplitudes_(static_cast<Eigen::Index>(index)); }
  double norm() const { return amplitudes_.norm(); }

  /// Back to |0...0> without reallocating.
  void reset();

  void apply(const Rotation& gate);
  void apply(const Cnot& gate);
  void apply(const Gate& gate);

  /// R_{i,j}(theta): RX_i, RX_j, CX_ij, RZ_j, CX_ij in temporal order.
  void apply_embedding(int i, int j, double theta);

  /// amplitudes <- U amplitudes. `scratch` is resized as needed and reused
  /// between calls to avoid reallocating in tight loops.
  void apply(const DenseUnitary& u, ComplexVector& scratch);
  void apply(const DenseUnitary& u);

  /// Exact <Z_qubit>.
  double expectation_z(int qubit) const;

  /// [<Z_1>, ..., <Z_n>] in a single pass over the amplitudes.
  Eigen::VectorXd z_profile() const;

 private:
  void check_qubit(int qubit) const;

  int n_qubits_;
  ComplexVector amplitudes_;
};

// Free-function spellings of the member operations.
void apply_rotation(Statevector& state, const Rotation& gate);
void apply_cnot(Statevector& state, int control, int target);
void apply_r_gate(Statevector& state, int i, int j, double theta);
void apply_dense_unitary(Statevector& state, const DenseUnitary& u);
double expectation_z(const Statevector& state, int qubit);

/// An ordered gate list on a fixed register width.
class Circuit {
 public:
  explicit Circuit(int n_qubits);

  int n_qubits() const noexcept { return n_qubits_; }
  std::span<const Gate> gates() const noexcept { return gates_; }
  std::size_t size() const noexcept { return gates_.size(); }

  Circuit& rotation(PauliAxis axis, double angle, int target);
  Circuit& cnot(int control, int target);
  /// Appends the five gates of R_{i,j}(theta).
  Circuit& embedding(int i, int j, double theta);

  void apply(Statevector& state) const;

  /// Dense matrix of the whole circuit, built column by column.
  DenseUnitary compose() const;

 private:
  void check_qubit(int qubit) const;

  int n_qubits_;
  std::vector<Gate> gates_;
};

}  // namespace qrc
