#ifndef SPQF_CASCADE_HPP
#define SPQF_CASCADE_HPP

#include <vector>

#include "spqf/types.hpp"
#include "spqf/wavepacket.hpp"

namespace spqf {

/// Atom-side model: one Hamiltonian per fault mode, a single coupling
/// operator to the probe line, and the initial atomic state.
struct PlantModel {
  int dim = 0;                         // n
  std::vector<Operator> hamiltonians;  // H(mode j), each Hermitian n x n
  Operator coupling;                   // L, n x n
  DensityMatrix initial_state;         // pi0

  int num_modes() const { return static_cast<int>(hamiltonians.size()); }
};

/// Checks dimensions, Hermiticity of every mode Hamiltonian (within
/// 1e-10) and validity of the initial state.
void validate_plant(const PlantModel& plant);

/// Operators of the ancilla+atom series connection on C^2 (x) H_S.
/// The two-level ancilla that synthesizes the single-photon input sits in
/// the leading tensor slot.
struct CascadeOps {
  Operator h_total;  // 2n x 2n, Hermitian
  Operator l_total;  // 2n x 2n
};

/// Assembles the mode- and time-dependent cascaded operators:
///   L_total = lambda(t) (sigma_- (x) I) + (I (x) L)
///   H_total = I (x) H(mode)
///           + (lambda(t) (sigma_- (x) L^dag) - conj(lambda(t)) (sigma_+ (x) L)) / 2i
/// The second term is the series-product interference Hamiltonian
/// Im{L^dag L_ancilla} lifted to the product space; the ancilla has no
/// Hamiltonian of its own.
CascadeOps assemble(const PlantModel& plant, const Wavepacket& w, double t,
                    int mode);

}  // namespace spqf

#endif
