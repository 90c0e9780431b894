#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "tiqs/hilbert.hpp"
#include "tiqs/linalg.hpp"

using namespace tiqs;

TEST_CASE("basis_state places the amplitude at the documented index") {
  SUBCASE("single qubit, no modes") {
    HilbertLayout layout{1, {}};
    HybridState s = basis_state(layout, "0");
    CHECK(s.amp[0] == cplx(1.0));
    CHECK(s.amp[1] == cplx(0.0));
  }
  SUBCASE("two qubits with one mode d=3") {
    HilbertLayout layout{2, {3}};
    HybridState s = basis_state(layout, "01", {2});
    // index = bits(01) * 3 + fock(2) = 5
    CHECK(s.amp[5] == cplx(1.0));
    CHECK(s.amp.cwiseAbs().sum() == doctest::Approx(1.0));
  }
  SUBCASE("the |↑↑↓↓> initial state") {
    HilbertLayout layout{4, {}};
    HybridState s = basis_state(layout, "1100");
    CHECK(s.amp[0b1100] == cplx(1.0));
  }
  SUBCASE("errors") {
    HilbertLayout layout{2, {3}};
    CHECK_THROWS_AS(basis_state(layout, "01", {3}), TruncationError);
    CHECK_THROWS_AS(basis_state(layout, "011", {0}), LayoutError);
    CHECK_THROWS_AS(basis_state(layout, "01", {0, 0}), LayoutError);
  }
}

TEST_CASE("index encode/decode is a bijection on 2^3 x 3^2") {
  HilbertLayout layout{3, {3, 3}};
  const std::size_t dim = layout.dim();
  CHECK(dim == 8 * 9);
  for (std::size_t idx = 0; idx < dim; ++idx) {
    std::uint64_t bits;
    std::vector<int> focks;
    layout.decode(idx, bits, focks);
    CHECK(layout.index_of(bits, focks) == idx);
  }
}

TEST_CASE("expectation matches trivial values and the Kronecker oracle") {
  SUBCASE("<0|Z|0> = +1") {
    HilbertLayout layout{1, {}};
    HybridState s = basis_state(layout, "0");
    CHECK(expectation(s, PauliTermSum(1, {{1.0, "Z"}})) == doctest::Approx(1.0));
  }
  SUBCASE("<+|X|+> = +1") {
    HilbertLayout layout{1, {}};
    HybridState s = basis_state(layout, "0");
    s.amp[0] = s.amp[1] = 1.0 / std::sqrt(2.0);
    CHECK(expectation(s, PauliTermSum(1, {{1.0, "X"}})) == doctest::Approx(1.0));
  }
  SUBCASE("every string on up to 5 qubits agrees with the trace-form oracle") {
    std::mt19937_64 rng(7);
    const char alphabet[] = {'I', 'X', 'Y', 'Z'};
    for (int nq = 1; nq <= 5; ++nq) {
      HilbertLayout layout{nq, {}};
      HybridState s = oracles::random_state(layout, rng);
      const long total = 1L << (2 * nq);
      double worst = 0.0;
      for (long code = 0; code < total; ++code) {
        std::string letters(static_cast<std::size_t>(nq), 'I');
        long c = code;
        for (int q = 0; q < nq; ++q) {
          letters[static_cast<std::size_t>(q)] = alphabet[c % 4];
          c /= 4;
        }
        const Eigen::MatrixXcd m = oracles::pauli_string(letters);
        const double direct = (s.amp.adjoint() * m * s.amp)(0).real();
        worst = std::max(
            worst,
            std::abs(expectation(s, PauliTermSum(nq, {{1.0, letters}})) - direct));
      }
      CHECK(worst < 1e-12);
    }
  }
  SUBCASE("non-normalized input is rejected") {
    HilbertLayout layout{1, {}};
    HybridState s = basis_state(layout, "0");
    s.amp *= 2.0;
    CHECK_THROWS_AS(expectation(s, PauliTermSum(1, {{1.0, "Z"}})), NormalizationError);
  }
}

TEST_CASE("Pauli strings act with modes as spectators") {
  std::mt19937_64 rng(11);
  HilbertLayout layout{2, {3}};
  HybridState s = oracles::random_state(layout, rng);
  HybridState t = s;
  apply_pauli_string(t, "XY");
  const Eigen::MatrixXcd m =
      oracles::kron(oracles::pauli_string("XY"), Eigen::MatrixXcd::Identity(3, 3));
  CHECK((t.amp - m * s.amp).norm() < 1e-13);
}

TEST_CASE("exact_unitary") {
  SUBCASE("zero generator gives the identity") {
    Eigen::MatrixXcd g = Eigen::MatrixXcd::Zero(4, 4);
    CHECK((exact_unitary(g, 1.7) - Eigen::MatrixXcd::Identity(4, 4)).norm() < 1e-13);
  }
  SUBCASE("sigma_z at t = pi/2") {
    Eigen::MatrixXcd u = exact_unitary(pauli_matrix('Z'), M_PI / 2);
    CHECK(std::abs(u(0, 0) - std::exp(cplx(0, -M_PI / 2))) < 1e-12);
    CHECK(std::abs(u(1, 1) - std::exp(cplx(0, M_PI / 2))) < 1e-12);
    CHECK(std::abs(u(0, 1)) < 1e-14);
  }
  SUBCASE("random 16x16 Hermitian against a second-order Taylor step") {
    std::mt19937_64 rng(3);
    std::normal_distribution<double> gauss;
    Eigen::MatrixXcd a(16, 16);
    for (Eigen::Index i = 0; i < 16; ++i)
      for (Eigen::Index j = 0; j < 16; ++j) a(i, j) = cplx(gauss(rng), gauss(rng));
    const Eigen::MatrixXcd g = (a + a.adjoint()) / 2;
    const double t = 1e-4;
    const Eigen::MatrixXcd taylor = Eigen::MatrixXcd::Identity(16, 16) -
                                    cplx(0, t) * g - 0.5 * t * t * g * g;
    CHECK((exact_unitary(g, t) - taylor).cwiseAbs().maxCoeff() < 1e-10);
  }
  SUBCASE("non-Hermitian input is rejected") {
    Eigen::MatrixXcd g = Eigen::MatrixXcd::Zero(2, 2);
    g(0, 1) = 1.0;
    CHECK_THROWS_AS(exact_unitary(g, 1.0), SymmetryError);
  }
}

TEST_CASE("fidelity") {
  HilbertLayout layout{1, {}};
  HybridState zero = basis_state(layout, "0");
  HybridState one = basis_state(layout, "1");
  HybridState plus = zero;
  plus.amp[0] = plus.amp[1] = 1.0 / std::sqrt(2.0);
  CHECK(fidelity(zero, zero) == doctest::Approx(1.0));
  CHECK(fidelity(zero, one) == doctest::Approx(0.0));
  CHECK(fidelity(zero, plus) == doctest::Approx(0.5));
  HilbertLayout other{1, {2}};
  HybridState hybrid = basis_state(other, "0", {0});
  CHECK_THROWS_AS(fidelity(zero, hybrid), LayoutError);
}

TEST_CASE("PauliTermSum merges duplicate strings and validates letters") {
  PauliTermSum sum(2, {{0.5, "XZ"}, {0.25, "XZ"}, {1.0, "II"}, {-1.0, "II"}});
  CHECK(sum.terms().size() == 1);
  CHECK(sum.terms()[0].coeff == doctest::Approx(0.75));
  CHECK(sum.identity_coefficient() == 0.0);
  CHECK_THROWS_AS(PauliTermSum(2, {{1.0, "AB"}}), DomainError);
  CHECK_THROWS_AS(PauliTermSum(2, {{1.0, "X"}}), LayoutError);
}

TEST_CASE("renormalize is explicit, not silent") {
  HilbertLayout layout{1, {}};
  HybridState s = basis_state(layout, "0");
  s.amp *= 0.5;
  CHECK_THROWS_AS(s.check_normalized(), NormalizationError);
  s.renormalize();
  CHECK(s.norm() == doctest::Approx(1.0));
}
