#include "tiqs/fermion.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

namespace tiqs {

namespace {

std::size_t h2_index(int m, int p, int q, int r, int s) {
  return ((static_cast<std::size_t>(p) * m + q) * m + r) * m + s;
}

// Symmetry orbit of a two-body index quadruple for real orbitals.
std::set<std::array<int, 4>> symmetry_orbit(std::array<int, 4> pqrs) {
  std::set<std::array<int, 4>> orbit{pqrs};
  bool grew = true;
  while (grew) {
    grew = false;
    std::set<std::array<int, 4>> next = orbit;
    for (const auto& e : orbit) {
      const auto [p, q, r, s] = std::array<int, 4>{e[0], e[1], e[2], e[3]};
      next.insert({q, p, s, r});
      next.insert({s, q, r, p});
      next.insert({p, r, q, s});
    }
    if (next.size() != orbit.size()) {
      orbit = std::move(next);
      grew = true;
    }
  }
  return orbit;
}

// Letter product with phase: returns (phase, letter) of a*b.
std::pair<cplx, char> pauli_mul(char a, char b) {
  if (a == 'I') return {1.0, b};
  if (b == 'I') return {1.0, a};
  if (a == b) return {1.0, 'I'};
  const cplx i(0, 1);
  if (a == 'X' && b == 'Y') return {i, 'Z'};
  if (a == 'Y' && b == 'X') return {-i, 'Z'};
  if (a == 'Y' && b == 'Z') return {i, 'X'};
  if (a == 'Z' && b == 'Y') return {-i, 'X'};
  if (a == 'Z' && b == 'X') return {i, 'Y'};
  return {-i, 'Y'};  // X*Z
}

std::string factor_key(const std::vector<FermionFactor>& fs) {
  std::string k;
  for (const auto& f : fs) {
    k += f.dagger ? '+' : '-';
    k += std::to_string(f.mode);
    k += ',';
  }
  return k;
}

}  // namespace

double MolecularIntegrals::h2_at(int p, int q, int r, int s) const {
  return h2[h2_index(n_spin_orbitals, p, q, r, s)];
}

double& MolecularIntegrals::h2_at(int p, int q, int r, int s) {
  return h2[h2_index(n_spin_orbitals, p, q, r, s)];
}

MolecularIntegrals load_integrals(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open integral file: " + path);

  MolecularIntegrals ints;
  std::vector<char> h2_set;
  std::vector<char> h1_set;
  bool have_header = false;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto fail = [&](const std::string& what) {
      throw ParseError(path + ":" + std::to_string(lineno) + ": " + what);
    };
    std::string stripped = line;
    if (auto pos = stripped.find('#'); pos != std::string::npos) {
      if (stripped.compare(pos, 11, "# geometry:") == 0 ||
          stripped.compare(pos, 10, "#geometry:") == 0) {
        std::string label = stripped.substr(stripped.find(':', pos) + 1);
        label.erase(0, label.find_first_not_of(" \t"));
        label.erase(label.find_last_not_of(" \t\r") + 1);
        ints.geometry = label;
      }
      stripped.erase(pos);
    }
    std::istringstream ss(stripped);
    if (!have_header) {
      int m, n;
      if (!(ss >> m)) continue;  // blank / comment-only line
      if (!(ss >> n)) fail("header must be 'M N'");
      if (m < 1 || n < 0) fail("invalid M or N");
      if (n > m) throw DataError(path + ": electron count exceeds spin-orbital count");
      ints.n_spin_orbitals = m;
      ints.n_electrons = n;
      ints.h1 = Eigen::MatrixXd::Zero(m, m);
      ints.h2.assign(static_cast<std::size_t>(m) * m * m * m, 0.0);
      h2_set.assign(ints.h2.size(), 0);
      h1_set.assign(static_cast<std::size_t>(m) * m, 0);
      have_header = true;
      continue;
    }
    int p, q, r, s;
    double v;
    if (!(ss >> p)) continue;
    if (!(ss >> q >> r >> s >> v)) fail("expected 'p q r s value'");
    std::string extra;
    if (ss >> extra) fail("trailing tokens after value");
    const int m = ints.n_spin_orbitals;
    if (p == 0 && q == 0 && r == 0 && s == 0) {
      ints.constant = v;
      continue;
    }
    if (r == 0 && s == 0) {
      if (p < 1 || p > m || q < 1 || q > m) fail("one-body index out of range");
      for (auto [a, b] : {std::pair{p - 1, q - 1}, std::pair{q - 1, p - 1}}) {
        const std::size_t k = static_cast<std::size_t>(a) * m + b;
        if (h1_set[k] && std::abs(ints.h1(a, b) - v) > 1e-10)
          throw DataError(path + ":" + std::to_string(lineno) +
                          ": one-body symmetry violation beyond 1e-10");
        ints.h1(a, b) = v;
        h1_set[k] = 1;
      }
      continue;
    }
    if (p < 1 || p > m || q < 1 || q > m || r < 1 || r > m || s < 1 || s > m)
      fail("two-body index out of range");
    for (const auto& img : symmetry_orbit({p - 1, q - 1, r - 1, s - 1})) {
      const std::size_t k = h2_index(m, img[0], img[1], img[2], img[3]);
      if (h2_set[k] && std::abs(ints.h2[k] - v) > 1e-10)
        throw DataError(path + ":" + std::to_string(lineno) +
                        ": two-body symmetry violation beyond 1e-10");
      ints.h2[k] = v;
      h2_set[k] = 1;
    }
  }
  if (!have_header) throw ParseError(path + ": empty or headerless integral file");
  if (ints.geometry.empty()) ints.geometry = path;
  return ints;
}

void save_integrals(const MolecularIntegrals& ints, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot open output file: " + path);
  char buf[128];
  out << "# geometry: " << ints.geometry << "\n";
  out << ints.n_spin_orbitals << " " << ints.n_electrons << "\n";
  std::snprintf(buf, sizeof(buf), "0 0 0 0 %.15g\n", ints.constant);
  out << buf;
  const int m = ints.n_spin_orbitals;
  for (int p = 0; p < m; ++p)
    for (int q = p; q < m; ++q)
      if (ints.h1(p, q) != 0.0) {
        std::snprintf(buf, sizeof(buf), "%d %d 0 0 %.15g\n", p + 1, q + 1, ints.h1(p, q));
        out << buf;
      }
  std::set<std::array<int, 4>> done;
  for (int p = 0; p < m; ++p)
    for (int q = 0; q < m; ++q)
      for (int r = 0; r < m; ++r)
        for (int s = 0; s < m; ++s) {
          if (ints.h2_at(p, q, r, s) == 0.0) continue;
          if (done.count({p, q, r, s})) continue;
          for (const auto& img : symmetry_orbit({p, q, r, s})) done.insert(img);
          std::snprintf(buf, sizeof(buf), "%d %d %d %d %.15g\n", p + 1, q + 1, r + 1,
                        s + 1, ints.h2_at(p, q, r, s));
          out << buf;
        }
}

void FermionOpSum::add(cplx coeff, std::vector<FermionFactor> factors) {
  if (std::abs(coeff) < 1e-15) return;
  // Normal-order with a work list; swaps produce sign flips and, for
  // mixed pairs, the delta contraction term.
  std::vector<FermionTerm> work{{coeff, std::move(factors)}};
  std::vector<FermionTerm> done;
  while (!work.empty()) {
    FermionTerm term = std::move(work.back());
    work.pop_back();
    bool changed = true;
    bool dead = false;
    while (changed && !dead) {
      changed = false;
      auto& fs = term.factors;
      for (std::size_t k = 0; k + 1 < fs.size(); ++k) {
        FermionFactor a = fs[k], b = fs[k + 1];
        const bool swap_mixed = !a.dagger && b.dagger;
        const bool swap_same =
            (a.dagger == b.dagger) &&
            (a.dagger ? a.mode > b.mode : a.mode < b.mode);
        if (a.dagger == b.dagger && a.mode == b.mode) {
          dead = true;  // c c or c† c† on the same mode vanishes
          break;
        }
        if (swap_mixed) {
          if (a.mode == b.mode) {
            // c a† = 1 - a† c
            FermionTerm contracted;
            contracted.coeff = term.coeff;
            contracted.factors = fs;
            contracted.factors.erase(contracted.factors.begin() + k,
                                     contracted.factors.begin() + k + 2);
            work.push_back(std::move(contracted));
          }
          std::swap(fs[k], fs[k + 1]);
          term.coeff = -term.coeff;
          changed = true;
          break;
        }
        if (swap_same) {
          std::swap(fs[k], fs[k + 1]);
          term.coeff = -term.coeff;
          changed = true;
          break;
        }
      }
    }
    if (!dead) done.push_back(std::move(term));
  }
  // merge into the stored terms
  for (auto& t : done) {
    const std::string key = factor_key(t.factors);
    bool merged = false;
    for (auto& existing : terms_)
      if (factor_key(existing.factors) == key) {
        existing.coeff += t.coeff;
        merged = true;
        break;
      }
    if (!merged) terms_.push_back(std::move(t));
  }
  terms_.erase(std::remove_if(terms_.begin(), terms_.end(),
                              [](const FermionTerm& t) { return std::abs(t.coeff) < 1e-15; }),
               terms_.end());
}

FermionOpSum FermionOpSum::adjoint() const {
  FermionOpSum out;
  for (const auto& t : terms_) {
    std::vector<FermionFactor> rev(t.factors.rbegin(), t.factors.rend());
    for (auto& f : rev) f.dagger = !f.dagger;
    out.add(std::conj(t.coeff), std::move(rev));
  }
  return out;
}

void ComplexPauliSum::add(const std::string& letters, cplx coeff) {
  if (static_cast<int>(letters.size()) != qubit_count_)
    throw LayoutError("Pauli string length does not match the qubit count");
  auto [it, inserted] = terms_.try_emplace(letters, coeff);
  if (!inserted) it->second += coeff;
  if (std::abs(it->second) < 1e-15) terms_.erase(it);
}

void ComplexPauliSum::add(const ComplexPauliSum& other, cplx scale) {
  for (const auto& [s, c] : other.terms_) add(s, scale * c);
}

PauliTermSum ComplexPauliSum::to_real() const {
  double scale = 1.0;
  for (const auto& [s, c] : terms_) scale = std::max(scale, std::abs(c));
  std::vector<PauliTerm> out;
  for (const auto& [s, c] : terms_) {
    if (std::abs(c.imag()) > 1e-12 * scale)
      throw SymmetryError("Pauli sum has complex coefficients; operator is not Hermitian");
    out.push_back({c.real(), s});
  }
  return PauliTermSum(qubit_count_, std::move(out));
}

ComplexPauliSum multiply(const ComplexPauliSum& a, const ComplexPauliSum& b) {
  if (a.qubit_count() != b.qubit_count())
    throw LayoutError("qubit count mismatch in Pauli product");
  const int nq = a.qubit_count();
  ComplexPauliSum out(nq);
  std::string prod(static_cast<std::size_t>(nq), 'I');
  for (const auto& [sa, ca] : a.terms()) {
    for (const auto& [sb, cb] : b.terms()) {
      cplx phase = 1.0;
      for (int k = 0; k < nq; ++k) {
        auto [ph, letter] = pauli_mul(sa[static_cast<std::size_t>(k)],
                                      sb[static_cast<std::size_t>(k)]);
        phase *= ph;
        prod[static_cast<std::size_t>(k)] = letter;
      }
      out.add(prod, ca * cb * phase);
    }
  }
  return out;
}

ComplexPauliSum jordan_wigner_complex(const FermionOpSum& op, int n_modes) {
  ComplexPauliSum acc(n_modes);
  for (const auto& term : op.terms()) {
    ComplexPauliSum cur(n_modes);
    cur.add(PauliTermSum::identity_string(n_modes), term.coeff);
    for (const auto& f : term.factors) {
      if (f.mode < 0 || f.mode >= n_modes)
        throw LayoutError("fermionic mode index out of range");
      ComplexPauliSum factor(n_modes);
      std::string sx(static_cast<std::size_t>(n_modes), 'I');
      std::string sy = sx;
      for (int m = 0; m < f.mode; ++m) {
        sx[static_cast<std::size_t>(m)] = 'Z';
        sy[static_cast<std::size_t>(m)] = 'Z';
      }
      sx[static_cast<std::size_t>(f.mode)] = 'X';
      sy[static_cast<std::size_t>(f.mode)] = 'Y';
      factor.add(sx, 0.5);
      factor.add(sy, f.dagger ? cplx(0, -0.5) : cplx(0, 0.5));
      cur = multiply(cur, factor);
    }
    acc.add(cur);
  }
  return acc;
}

PauliTermSum jordan_wigner(const FermionOpSum& op, int n_modes) {
  return jordan_wigner_complex(op, n_modes).to_real();
}

PauliTermSum build_electronic_hamiltonian(const MolecularIntegrals& ints,
                                          bool include_constant, long* raw_term_count) {
  const int m = ints.n_spin_orbitals;
  FermionOpSum op;
  for (int p = 0; p < m; ++p)
    for (int q = 0; q < m; ++q)
      if (ints.h1(p, q) != 0.0)
        op.add(ints.h1(p, q), {{p, true}, {q, false}});
  for (int p = 0; p < m; ++p)
    for (int q = 0; q < m; ++q)
      for (int r = 0; r < m; ++r)
        for (int s = 0; s < m; ++s) {
          const double v = ints.h2_at(p, q, r, s);
          if (v != 0.0)
            op.add(0.5 * v, {{p, true}, {q, true}, {r, false}, {s, false}});
        }
  ComplexPauliSum acc = jordan_wigner_complex(op, m);
  if (raw_term_count) {
    // contributions before merging: re-run the per-term transform and count
    long raw = 0;
    for (const auto& term : op.terms()) {
      FermionOpSum single;
      single.add(term.coeff, term.factors);
      raw += static_cast<long>(jordan_wigner_complex(single, m).terms().size());
    }
    *raw_term_count = raw;
  }
  if (include_constant) acc.add(PauliTermSum::identity_string(m), ints.constant);
  return acc.to_real();
}

HybridState hartree_fock_state(const HilbertLayout& layout, int n_electrons,
                               int n_spin_orbitals) {
  if (layout.qubit_count != n_spin_orbitals)
    throw LayoutError("layout qubit count must equal the spin-orbital count");
  if (n_electrons < 0 || n_electrons > n_spin_orbitals)
    throw DomainError("electron count must satisfy 0 <= N <= M");
  std::string bits(static_cast<std::size_t>(n_spin_orbitals), '0');
  for (int k = 0; k < n_electrons; ++k) bits[static_cast<std::size_t>(k)] = '1';
  return basis_state(layout, bits);
}

TermCensus census(const PauliTermSum& op, long raw_total) {
  TermCensus c;
  c.merged_total = static_cast<int>(op.terms().size());
  c.raw_total = raw_total ? raw_total : c.merged_total;
  for (const auto& t : op.terms()) {
    const int w = pauli_weight(t.letters);
    c.max_weight = std::max(c.max_weight, w);
    if (w == 0) ++c.identity_terms;
    else if (w == 1) ++c.local_terms;
    else ++c.nonlocal_terms;
  }
  return c;
}

}  // namespace tiqs
