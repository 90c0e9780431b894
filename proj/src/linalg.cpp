#include "tiqs/linalg.hpp"

#include <cmath>

namespace tiqs {

Eigen::Matrix2cd pauli_matrix(char letter) {
  Eigen::Matrix2cd m = Eigen::Matrix2cd::Zero();
  const cplx I(0, 1);
  switch (letter) {
    case 'I': m(0, 0) = 1; m(1, 1) = 1; break;
    case 'X': m(0, 1) = 1; m(1, 0) = 1; break;
    case 'Y': m(0, 1) = -I; m(1, 0) = I; break;
    case 'Z': m(0, 0) = 1; m(1, 1) = -1; break;
    default: throw DomainError("unknown Pauli letter");
  }
  return m;
}

Eigen::MatrixXcd kron(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  Eigen::MatrixXcd out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

Eigen::MatrixXcd pauli_string_dense(const std::string& letters) {
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Identity(1, 1);
  for (char c : letters) m = kron(m, pauli_matrix(c));
  return m;
}

Eigen::MatrixXcd operator_dense(const PauliTermSum& op) {
  const Eigen::Index d = Eigen::Index{1} << op.qubit_count();
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(d, d);
  for (const auto& t : op.terms()) m += t.coeff * pauli_string_dense(t.letters);
  return m;
}

Eigen::MatrixXcd operator_dense(const PauliTermSum& op, const HilbertLayout& layout) {
  if (op.qubit_count() != layout.qubit_count)
    throw LayoutError("operator qubit count does not match the layout");
  Eigen::MatrixXcd q = operator_dense(op);
  const Eigen::Index bd = static_cast<Eigen::Index>(layout.boson_dim());
  if (bd == 1) return q;
  return kron(q, Eigen::MatrixXcd::Identity(bd, bd));
}

double hermiticity_defect(const Eigen::MatrixXcd& m) {
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

double unitarity_defect(const Eigen::MatrixXcd& u) {
  Eigen::MatrixXcd d = u.adjoint() * u - Eigen::MatrixXcd::Identity(u.rows(), u.cols());
  return d.norm();  // Frobenius, an upper bound on the operator norm
}

Eigen::MatrixXcd exact_unitary(const Eigen::MatrixXcd& generator, double t) {
  Propagator p(generator);
  Eigen::MatrixXcd u = p.at(t);
  if (unitarity_defect(u) > 1e-10)
    throw SymmetryError("propagator failed the unitarity check");
  return u;
}

Propagator::Propagator(const Eigen::MatrixXcd& generator) {
  if (generator.rows() != generator.cols())
    throw LayoutError("generator must be square");
  const double scale = std::max(1.0, generator.cwiseAbs().maxCoeff());
  if (hermiticity_defect(generator) > 1e-12 * scale)
    throw SymmetryError("generator is not Hermitian within tolerance");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(generator);
  if (solver.info() != Eigen::Success)
    throw Error("eigendecomposition failed");
  evals_ = solver.eigenvalues();
  evecs_ = solver.eigenvectors();
}

Eigen::MatrixXcd Propagator::at(double t) const {
  Eigen::VectorXcd phases(evals_.size());
  for (Eigen::Index k = 0; k < evals_.size(); ++k)
    phases[k] = std::exp(cplx(0, -evals_[k] * t));
  return evecs_ * phases.asDiagonal() * evecs_.adjoint();
}

Eigen::VectorXcd Propagator::apply(double t, const Eigen::VectorXcd& v) const {
  if (v.size() != evecs_.rows()) throw LayoutError("vector dimension mismatch");
  Eigen::VectorXcd w = evecs_.adjoint() * v;
  for (Eigen::Index k = 0; k < w.size(); ++k)
    w[k] *= std::exp(cplx(0, -evals_[k] * t));
  return evecs_ * w;
}

}  // namespace tiqs
