#ifndef SPQF_TYPES_HPP
#define SPQF_TYPES_HPP

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace spqf {

using Complex = std::complex<double>;

/// Dense complex square matrix on the atom space, the ancilla space, or
/// their tensor product. All operators are dimensionless (hbar = 1).
using Operator = Eigen::MatrixXcd;

/// Density matrices share the storage type; validity (Hermitian, unit
/// trace, positive semidefinite) is a checkable predicate, not an
/// assumption baked into the type.
using DensityMatrix = Eigen::MatrixXcd;

using RealVector = Eigen::VectorXd;
using RealMatrix = Eigen::MatrixXd;

/// Invalid configuration or model input. Maps to exit code 2 in the CLI.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// Numerical divergence during propagation (trace collapse, non-finite
/// values, complex innovation drift). Maps to exit code 3 in the CLI.
class DivergenceError : public std::runtime_error {
 public:
  explicit DivergenceError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace spqf

#endif
