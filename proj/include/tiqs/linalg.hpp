#pragma once

#include <Eigen/Dense>
#include <string>

#include "tiqs/hilbert.hpp"

namespace tiqs {

// Exact linear-algebra route used as the reference ("oracle") side of the
// dual-route checks: dense operators built by explicit Kronecker products
// and propagators from a full eigendecomposition. The gate layer never
// calls into these kernels for its own evolution.

Eigen::Matrix2cd pauli_matrix(char letter);

// Kronecker product, row-major convention (a is the most significant factor).
Eigen::MatrixXcd kron(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b);

// Dense matrix of one Pauli string on the qubit space.
Eigen::MatrixXcd pauli_string_dense(const std::string& letters);

// Dense matrix of a PauliTermSum on the qubit space.
Eigen::MatrixXcd operator_dense(const PauliTermSum& op);

// Same, embedded in a hybrid layout (identity on the bosonic modes).
Eigen::MatrixXcd operator_dense(const PauliTermSum& op, const HilbertLayout& layout);

double hermiticity_defect(const Eigen::MatrixXcd& m);
double unitarity_defect(const Eigen::MatrixXcd& u);

// e^{-iGt} by eigendecomposition. Throws SymmetryError if G is not
// Hermitian within 1e-12 (relative to its largest entry) and checks the
// unitarity defect of the result against 1e-10.
Eigen::MatrixXcd exact_unitary(const Eigen::MatrixXcd& generator, double t);

// Eigendecomposition done once, e^{-iGt} evaluated for many t.
class Propagator {
 public:
  explicit Propagator(const Eigen::MatrixXcd& hermitian_generator);

  Eigen::MatrixXcd at(double t) const;
  Eigen::VectorXcd apply(double t, const Eigen::VectorXcd& v) const;

  const Eigen::VectorXd& eigenvalues() const { return evals_; }
  const Eigen::MatrixXcd& eigenvectors() const { return evecs_; }

 private:
  Eigen::VectorXd evals_;
  Eigen::MatrixXcd evecs_;
};

}  // namespace tiqs
