#include "spqf/cascade.hpp"

#include <sstream>

#include "spqf/linop.hpp"

namespace spqf {

void validate_plant(const PlantModel& plant) {
  if (plant.dim < 1) throw ConfigError("plant dimension must be positive");
  if (plant.hamiltonians.empty()) {
    throw ConfigError("plant needs at least one mode Hamiltonian");
  }
  for (std::size_t j = 0; j < plant.hamiltonians.size(); ++j) {
    const Operator& h = plant.hamiltonians[j];
    if (h.rows() != plant.dim || h.cols() != plant.dim) {
      std::ostringstream msg;
      msg << "mode " << j << " Hamiltonian is " << h.rows() << "x" << h.cols()
          << ", expected " << plant.dim << "x" << plant.dim;
      throw ConfigError(msg.str());
    }
    if (!is_hermitian(h, 1e-10)) {
      std::ostringstream msg;
      msg << "mode " << j << " Hamiltonian is not Hermitian (defect "
          << hermiticity_defect(h) << ")";
      throw ConfigError(msg.str());
    }
  }
  if (plant.coupling.rows() != plant.dim || plant.coupling.cols() != plant.dim) {
    throw ConfigError("coupling operator dimension does not match plant");
  }
  if (plant.initial_state.rows() != plant.dim) {
    throw ConfigError("initial state dimension does not match plant");
  }
  validate_density(plant.initial_state);
}

CascadeOps assemble(const PlantModel& plant, const Wavepacket& w, double t,
                    int mode) {
  if (mode < 0 || mode >= plant.num_modes()) {
    std::ostringstream msg;
    msg << "mode index " << mode << " outside [0, " << plant.num_modes() << ")";
    throw ConfigError(msg.str());
  }
  const int n = plant.dim;
  const Complex lam = w.lambda(t);
  const Operator eye_atom = identity(n);

  CascadeOps ops;
  ops.l_total = lam * tensor(sigma_minus(), eye_atom) +
                tensor(identity(2), plant.coupling);

  const Complex two_i{0.0, 2.0};
  const Operator interference =
      (lam * tensor(sigma_minus(), plant.coupling.adjoint()) -
       std::conj(lam) * tensor(sigma_plus(), plant.coupling)) /
      two_i;
  ops.h_total = tensor(identity(2), plant.hamiltonians[mode]) + interference;

  if (!is_hermitian(ops.h_total, 1e-10)) {
    throw DivergenceError("assembled cascade Hamiltonian lost Hermiticity");
  }
  return ops;
}

}  // namespace spqf
