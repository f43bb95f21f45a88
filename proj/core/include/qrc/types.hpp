#pragma once

#include <complex>
#include <random>

#include <Eigen/Dense>

namespace qrc {

using Complex = std::complex<double>;
using ComplexVector = Eigen::VectorXcd;
using ComplexMatrix = Eigen::MatrixXcd;

// Every stochastic routine in the library takes one of these by reference.
using Rng = std::mt19937_64;

}  // namespace qrc
