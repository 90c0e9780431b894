#pragma once

#include <Eigen/Dense>
#include <map>
#include <string>
#include <vector>

#include "tiqs/hilbert.hpp"

namespace tiqs {

// Molecular integrals for one nuclear geometry, in the energy unit of the
// source file. Spin orbitals are interleaved (orbital-major, spin ↑ then ↓)
// and 1-based in the file format, 0-based internally.
//
// The two-body tensor is stored to match the operator order of the
// Hamiltonian  H = Σ h_pq c†p cq + ½ Σ h_pqrs c†p c†q cr cs  with
// h_pqrs = ∫∫ φ*p(r1) φ*q(r2) V(|r1-r2|) φr(r2) φs(r1), i.e. chemists'
// (ps|qr). For real orbitals this gives the 8-element symmetry orbit
// generated by (pqrs)→(qpsr), (pqrs)→(sqrp) and (pqrs)→(prqs); the loader
// completes the tensor from the stored unique elements and rejects
// inconsistent duplicates.
struct MolecularIntegrals {
  int n_spin_orbitals = 0;  // M
  int n_electrons = 0;      // N
  Eigen::MatrixXd h1;       // M x M, symmetric
  std::vector<double> h2;   // M^4 row-major
  double constant = 0.0;    // nuclear repulsion V_N at this geometry
  std::string geometry;     // free-form label

  double h2_at(int p, int q, int r, int s) const;
  double& h2_at(int p, int q, int r, int s);
};

// File format: '#' comments; optional "# geometry: <label>"; first data
// line "M N"; then "p q r s value" with 1-based indices where
// p=q=r=s=0 marks the constant and r=s=0 marks a one-body entry.
MolecularIntegrals load_integrals(const std::string& path);
void save_integrals(const MolecularIntegrals& ints, const std::string& path);

struct FermionFactor {
  int mode = 0;  // 0-based spin orbital
  bool dagger = false;
};

struct FermionTerm {
  cplx coeff;
  std::vector<FermionFactor> factors;
};

// Sum of products of creation/annihilation operators. Terms are brought to
// normal order on insertion (daggers first ascending, then annihilators
// descending) with the anticommutation contractions this generates.
class FermionOpSum {
 public:
  void add(cplx coeff, std::vector<FermionFactor> factors);
  const std::vector<FermionTerm>& terms() const { return terms_; }
  FermionOpSum adjoint() const;
  bool empty() const { return terms_.empty(); }

 private:
  std::vector<FermionTerm> terms_;
};

// Pauli accumulator with complex coefficients, for operator algebra on the
// way to a Hermitian PauliTermSum.
class ComplexPauliSum {
 public:
  explicit ComplexPauliSum(int qubit_count) : qubit_count_(qubit_count) {}

  int qubit_count() const { return qubit_count_; }
  const std::map<std::string, cplx>& terms() const { return terms_; }

  void add(const std::string& letters, cplx coeff);
  void add(const ComplexPauliSum& other, cplx scale = 1.0);

  // Hermitian realization; throws SymmetryError if any imaginary residual
  // exceeds 1e-12 relative to the largest coefficient.
  PauliTermSum to_real() const;

 private:
  int qubit_count_;
  std::map<std::string, cplx> terms_;
};

ComplexPauliSum multiply(const ComplexPauliSum& a, const ComplexPauliSum& b);

// Jordan-Wigner images  c†p = (Π_{m<p} Z_m)(X_p - iY_p)/2  and
// cp = (Π_{m<p} Z_m)(X_p + iY_p)/2  in the global bit convention
// (occupied = |1>).
ComplexPauliSum jordan_wigner_complex(const FermionOpSum& op, int n_modes);

// Hermitian-total transform; throws SymmetryError when the input is not
// Hermitian as promised.
PauliTermSum jordan_wigner(const FermionOpSum& op, int n_modes);

// Assembles Eq-style  Σ h_pq c†p cq + ½ Σ h_pqrs c†p c†q cr cs  and maps it
// through the JWT. include_constant folds the nuclear repulsion into the
// identity term. raw_term_count, when given, receives the number of
// accumulated string contributions before merging.
PauliTermSum build_electronic_hamiltonian(const MolecularIntegrals& ints,
                                          bool include_constant = false,
                                          long* raw_term_count = nullptr);

// |Φ> = |1...1 0...0>: the N lowest-indexed spin orbitals occupied.
HybridState hartree_fock_state(const HilbertLayout& layout, int n_electrons,
                               int n_spin_orbitals);

struct TermCensus {
  int identity_terms = 0;
  int local_terms = 0;     // weight 1
  int nonlocal_terms = 0;  // weight >= 2
  int merged_total = 0;
  long raw_total = 0;
  int max_weight = 0;
};

TermCensus census(const PauliTermSum& op, long raw_total = 0);

}  // namespace tiqs
