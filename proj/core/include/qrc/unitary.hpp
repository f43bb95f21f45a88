#pragma once

#include <cstddef>
#include <vector>

#include "qrc/statevector.hpp"
#include "qrc/types.hpp"

namespace qrc {

/// A 2^n x 2^n unitary. Immutable once built; share it via const reference
/// or shared_ptr<const DenseUnitary> across threads.
class DenseUnitary {
 public:
  static DenseUnitary identity(int n_qubits);

  /// Validates the shape and that ||U^dagger U - I||_F <= tolerance.
  static DenseUnitary from_matrix(int n_qubits, ComplexMatrix matrix, double tolerance = 1e-10);

  int n_qubits() const noexcept { return n_qubits_; }
  std::size_t dimension() const noexcept { return static_cast<std::size_t>(matrix_.rows()); }
  const ComplexMatrix& matrix() const noexcept { return matrix_; }

  /// ||U^dagger U - I||_F.
  double unitarity_error() const;

 private:
  friend DenseUnitary haar_random_unitary(int, Rng&);
  friend class Circuit;

  DenseUnitary(int n_qubits, ComplexMatrix matrix) : n_qubits_(n_qubits), matrix_(std::move(matrix)) {}

  int n_qubits_;
  ComplexMatrix matrix_;
};

/// Haar-distributed unitary on n qubits: QR of a complex Ginibre matrix with
/// the columns of Q rephased by r_jj / |r_jj|. Deterministic for a given rng state.
DenseUnitary haar_random_unitary(int n_qubits, Rng& rng);

/// Layered hardware-efficient circuit: a wall of RY(pi/4), then per layer one
/// Pauli rotation per qubit followed by a CNOT ladder.
struct AnsatzSpec {
  int n_qubits = 0;
  // axes[layer][qubit - 1], angles[layer][qubit - 1] with angles in [0, 2pi).
  std::vector<std::vector<PauliAxis>> axes;
  std::vector<std::vector<double>> angles;

  int layers() const noexcept { return static_cast<int>(axes.size()); }
  void validate() const;
};

/// Axes uniform over {X, Y, Z}, angles uniform in [0, 2pi).
AnsatzSpec random_ansatz(int n_qubits, int layers, Rng& rng);

/// The ansatz as a gate list. The CNOT ladder of each layer runs over the
/// pairs (1,2),(3,4),... then (2,3),(4,5),..., control on the lower qubit.
Circuit ansatz_circuit(const AnsatzSpec& spec);

DenseUnitary hardware_efficient_unitary(const AnsatzSpec& spec);

}  // namespace qrc
