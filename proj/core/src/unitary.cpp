#include "qrc/unitary.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace qrc {

DenseUnitary DenseUnitary::identity(int n_qubits) {
  if (n_qubits < 1 || n_qubits > Statevector::kMaxQubits) {
    throw std::invalid_argument("DenseUnitary: n_qubits out of range");
  }
  const Eigen::Index dim = Eigen::Index{1} << n_qubits;
  return DenseUnitary(n_qubits, ComplexMatrix::Identity(dim, dim));
}

DenseUnitary DenseUnitary::from_matrix(int n_qubits, ComplexMatrix matrix, double tolerance) {
  if (n_qubits < 1 || n_qubits > Statevector::kMaxQubits) {
    throw std::invalid_argument("DenseUnitary: n_qubits out of range");
  }
  const Eigen::Index dim = Eigen::Index{1} << n_qubits;
  if (matrix.rows() != dim || matrix.cols() != dim) {
    throw std::invalid_argument("DenseUnitary: expected a " + std::to_string(dim) + "x" +
                                std::to_string(dim) + " matrix");
  }
  DenseUnitary u(n_qubits, std::move(matrix));
  if (u.unitarity_error() > tolerance) {
    throw std::invalid_argument("DenseUnitary: matrix is not unitary within tolerance");
  }
  return u;
}

double DenseUnitary::unitarity_error() const {
  const Eigen::Index dim = matrix_.rows();
  return (matrix_.adjoint() * matrix_ - ComplexMatrix::Identity(dim, dim)).norm();
}

DenseUnitary haar_random_unitary(int n_qubits, Rng& rng) {
  if (n_qubits < 1 || n_qubits > Statevector::kMaxQubits) {
    throw std::invalid_argument("haar_random_unitary: n_qubits out of range");
  }
  const Eigen::Index dim = Eigen::Index{1} << n_qubits;
  std::normal_distribution<double> normal(0.0, std::sqrt(0.5));

  // Fill in a fixed (row-major, real-then-imaginary) order so a seed always
  // yields the same matrix.
  ComplexMatrix ginibre(dim, dim);
  for (Eigen::Index r = 0; r < dim; ++r) {
    for (Eigen::Index c = 0; c < dim; ++c) {
      const double re = normal(rng);
      const double im = normal(rng);
      ginibre(r, c) = Complex(re, im);
    }
  }

  Eigen::HouseholderQR<ComplexMatrix> qr(ginibre);
  ComplexMatrix q = qr.householderQ();
  const auto& packed = qr.matrixQR();
  for (Eigen::Index j = 0; j < dim; ++j) {
    const Complex r = packed(j, j);
    const double mag = std::abs(r);
    if (mag > 0.0) q.col(j) *= r / mag;
  }
  return DenseUnitary(n_qubits, std::move(q));
}

void AnsatzSpec::validate() const {
  if (n_qubits < 1 || n_qubits > Statevector::kMaxQubits) {
    throw std::invalid_argument("AnsatzSpec: n_qubits out of range");
  }
  if (angles.size() != axes.size()) {
    throw std::invalid_argument("AnsatzSpec: axes and angles disagree on the layer count");
  }
  for (std::size_t layer = 0; layer < axes.size(); ++layer) {
    if (axes[layer].size() != static_cast<std::size_t>(n_qubits) ||
        angles[layer].size() != static_cast<std::size_t>(n_qubits)) {
      throw std::invalid_argument("AnsatzSpec: layer " + std::to_string(layer) +
                                  " does not have one rotation per qubit");
    }
    for (double a : angles[layer]) {
      if (!(a >= 0.0 && a < 2.0 * std::numbers::pi)) {
        throw std::invalid_argument("AnsatzSpec: angles must lie in [0, 2pi)");
      }
    }
  }
}

AnsatzSpec random_ansatz(int n_qubits, int layers, Rng& rng) {
  if (layers < 0) throw std::invalid_argument("random_ansatz: negative layer count");
  AnsatzSpec spec;
  spec.n_qubits = n_qubits;
  std::uniform_int_distribution<int> pick_axis(0, 2);
  std::uniform_real_distribution<double> pick_angle(0.0, 2.0 * std::numbers::pi);
  for (int layer = 0; layer < layers; ++layer) {
    std::vector<PauliAxis> axes(n_qubits);
    std::vector<double> angles(n_qubits);
    for (int q = 0; q < n_qubits; ++q) {
      axes[q] = static_cast<PauliAxis>(pick_axis(rng));
      angles[q] = pick_angle(rng);
    }
    spec.axes.push_back(std::move(axes));
    spec.angles.push_back(std::move(angles));
  }
  spec.validate();
  return spec;
}

Circuit ansatz_circuit(const AnsatzSpec& spec) {
  spec.validate();
  const int n = spec.n_qubits;
  Circuit circuit(n);
  for (int q = 1; q <= n; ++q) circuit.rotation(PauliAxis::Y, std::numbers::pi / 4.0, q);
  for (int layer = 0; layer < spec.layers(); ++layer) {
    for (int q = 1; q <= n; ++q) {
      circuit.rotation(spec.axes[layer][q - 1], spec.angles[layer][q - 1], q);
    }
    for (int q = 1; q + 1 <= n; q += 2) circuit.cnot(q, q + 1);
    for (int q = 2; q + 1 <= n; q += 2) circuit.cnot(q, q + 1);
  }
  return circuit;
}

DenseUnitary hardware_efficient_unitary(const AnsatzSpec& spec) { return ansatz_circuit(spec).compose(); }

}  // namespace qrc
