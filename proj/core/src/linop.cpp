#include "spqf/linop.hpp"

#include <Eigen/Eigenvalues>
#include <sstream>

namespace spqf {

namespace {
const Complex kI{0.0, 1.0};

void require_square_same(const Operator& a, const Operator& b, const char* who) {
  if (a.rows() != a.cols() || b.rows() != b.cols() || a.rows() != b.rows()) {
    std::ostringstream msg;
    msg << who << ": dimension mismatch (" << a.rows() << "x" << a.cols()
        << " vs " << b.rows() << "x" << b.cols() << ")";
    throw ConfigError(msg.str());
  }
}
}  // namespace

Operator identity(int dim) { return Operator::Identity(dim, dim); }

Operator sigma_x() {
  Operator m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}

Operator sigma_y() {
  Operator m(2, 2);
  m << 0, -kI, kI, 0;
  return m;
}

Operator sigma_z() {
  Operator m(2, 2);
  m << 1, 0, 0, -1;
  return m;
}

Operator sigma_minus() {
  Operator m = Operator::Zero(2, 2);
  m(1, 0) = 1;
  return m;
}

Operator sigma_plus() {
  Operator m = Operator::Zero(2, 2);
  m(0, 1) = 1;
  return m;
}

Operator excited_projector() {
  Operator m = Operator::Zero(2, 2);
  m(0, 0) = 1;
  return m;
}

Operator ground_projector() {
  Operator m = Operator::Zero(2, 2);
  m(1, 1) = 1;
  return m;
}

Operator tensor(const Operator& a, const Operator& b) {
  const Eigen::Index na = a.rows(), ma = a.cols();
  const Eigen::Index nb = b.rows(), mb = b.cols();
  Operator out(na * nb, ma * mb);
  for (Eigen::Index i = 0; i < na; ++i)
    for (Eigen::Index j = 0; j < ma; ++j)
      out.block(i * nb, j * mb, nb, mb) = a(i, j) * b;
  return out;
}

double hermiticity_defect(const Operator& a) {
  return (a - a.adjoint().eval()).cwiseAbs().maxCoeff();
}

bool is_hermitian(const Operator& a, double tol) {
  return a.rows() == a.cols() && hermiticity_defect(a) <= tol;
}

Operator hermitize(const Operator& a) { return 0.5 * (a + a.adjoint().eval()); }

Operator lindblad_heisenberg(const Operator& H, const Operator& L,
                             const Operator& X, double tol) {
  require_square_same(H, L, "lindblad_heisenberg");
  require_square_same(L, X, "lindblad_heisenberg");
  if (!is_hermitian(H, tol)) {
    std::ostringstream msg;
    msg << "lindblad_heisenberg: H is not Hermitian (defect "
        << hermiticity_defect(H) << ", tol " << tol << ")";
    throw ConfigError(msg.str());
  }
  const Operator Ld = L.adjoint();
  const Operator LdL = Ld * L;
  return -kI * (X * H - H * X) + Ld * X * L - 0.5 * (LdL * X + X * LdL);
}

Operator lindblad_schrodinger(const Operator& H, const Operator& L,
                              const Operator& rho, double tol) {
  require_square_same(H, L, "lindblad_schrodinger");
  require_square_same(L, rho, "lindblad_schrodinger");
  if (!is_hermitian(H, tol)) {
    std::ostringstream msg;
    msg << "lindblad_schrodinger: H is not Hermitian (defect "
        << hermiticity_defect(H) << ", tol " << tol << ")";
    throw ConfigError(msg.str());
  }
  const Operator Ld = L.adjoint();
  const Operator LdL = Ld * L;
  return -kI * (H * rho - rho * H) + L * rho * Ld - 0.5 * (LdL * rho + rho * LdL);
}

Complex expect(const DensityMatrix& rho, const Operator& X) {
  if (rho.rows() != X.rows() || rho.cols() != X.cols()) {
    throw ConfigError("expect: dimension mismatch");
  }
  return (rho * X).trace();
}

void validate_density(const DensityMatrix& rho, double tol) {
  if (rho.rows() != rho.cols()) {
    throw ConfigError("density matrix must be square");
  }
  if (!is_hermitian(rho, tol)) {
    throw ConfigError("density matrix is not Hermitian within tolerance");
  }
  if (std::abs(rho.trace() - Complex{1.0, 0.0}) > tol) {
    std::ostringstream msg;
    msg << "density matrix trace " << rho.trace() << " is not 1";
    throw ConfigError(msg.str());
  }
  Eigen::SelfAdjointEigenSolver<Operator> eig(hermitize(rho));
  if (eig.eigenvalues().minCoeff() < -1e-10) {
    std::ostringstream msg;
    msg << "density matrix has negative eigenvalue "
        << eig.eigenvalues().minCoeff();
    throw ConfigError(msg.str());
  }
}

}  // namespace spqf
