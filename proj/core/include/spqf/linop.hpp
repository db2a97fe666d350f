#ifndef SPQF_LINOP_HPP
#define SPQF_LINOP_HPP

#include "spqf/types.hpp"

namespace spqf {

/// Default absolute tolerance for Hermiticity / positivity checks.
/// Euler-Maruyama drift accumulates O(dt) Hermiticity error between
/// re-symmetrizations, so this is looser than machine epsilon.
inline constexpr double kHermitianTol = 1e-8;

// Ancilla basis convention, fixed once for the whole project:
// basis index 0 = excited |up>, index 1 = ground |down>,
// sigma_minus |up> = |down>, sigma_plus sigma_minus |up> = |up>.
// Tensor products place the ancilla slot first.

Operator identity(int dim);
Operator sigma_x();
Operator sigma_y();
Operator sigma_z();
Operator sigma_minus();
Operator sigma_plus();
/// |up><up| (ancilla excitation projector).
Operator excited_projector();
/// |down><down|.
Operator ground_projector();

/// Kronecker product, first operand in the leading (ancilla) slot:
/// (A (x) B)[i*m+k, j*m+l] = A[i,j] * B[k,l] with m = dim(B).
Operator tensor(const Operator& a, const Operator& b);

inline Operator dagger(const Operator& a) { return a.adjoint(); }

inline Operator commutator(const Operator& a, const Operator& b) {
  return a * b - b * a;
}

/// max |A - A^dag| entry.
double hermiticity_defect(const Operator& a);

bool is_hermitian(const Operator& a, double tol = kHermitianTol);

/// (A + A^dag)/2, the exact Hermitian part.
Operator hermitize(const Operator& a);

/// Heisenberg-picture Lindblad generator
///   L_{L,H}(X) = -i[X,H] + L^dag X L - (L^dag L X + X L^dag L)/2.
/// H must be Hermitian within tol; all operands square with equal dims.
Operator lindblad_heisenberg(const Operator& H, const Operator& L,
                             const Operator& X, double tol = kHermitianTol);

/// Trace-dual of lindblad_heisenberg, propagating density matrices:
///   L*_{L,H}(rho) = -i[H,rho] + L rho L^dag - (L^dag L rho + rho L^dag L)/2,
/// the unique map with Tr(rho L(X)) = Tr(L*(rho) X) for all X.
Operator lindblad_schrodinger(const Operator& H, const Operator& L,
                              const Operator& rho, double tol = kHermitianTol);

/// Tr(rho X). Real within 1e-12 when both arguments are Hermitian.
Complex expect(const DensityMatrix& rho, const Operator& X);

/// Throws ConfigError unless rho is Hermitian, unit trace and positive
/// semidefinite (eigenvalues >= -1e-10) within tolerance.
void validate_density(const DensityMatrix& rho, double tol = kHermitianTol);

}  // namespace spqf

#endif
