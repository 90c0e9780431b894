#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "tiqs/fermion.hpp"
#include "tiqs/linalg.hpp"
#include "tiqs/measure.hpp"

using namespace tiqs;

namespace {
const std::string kFixture = std::string(TIQS_DATA_DIR) + "/h2_sto3g_0.75.ints";
}

TEST_CASE("measure_nonlocal equals the direct expectation") {
  SUBCASE("|0> against Z1") {
    HilbertLayout layout{1, {}};
    CHECK(measure_nonlocal(basis_state(layout, "0"), "Z") == doctest::Approx(1.0));
  }
  SUBCASE("Bell state against XX") {
    HilbertLayout layout{2, {}};
    HybridState bell = basis_state(layout, "00");
    bell.amp[0b00] = bell.amp[0b11] = 1 / std::sqrt(2.0);
    CHECK(measure_nonlocal(bell, "XX") == doctest::Approx(1.0).epsilon(1e-10));
  }
  SUBCASE("random 3-qubit state against YXX") {
    std::mt19937_64 rng(8);
    HilbertLayout layout{3, {}};
    const HybridState psi = oracles::random_state(layout, rng);
    const double direct =
        (psi.amp.adjoint() * oracles::pauli_string("YXX") * psi.amp)(0).real();
    CHECK(measure_nonlocal(psi, "YXX") == doctest::Approx(direct).epsilon(1e-10));
  }
  SUBCASE("200 random (state, string) pairs on up to 4 qubits") {
    std::mt19937_64 rng(12);
    double max_err = 0.0;
    for (int rep = 0; rep < 200; ++rep) {
      const int nq = 1 + static_cast<int>(rng() % 4);
      HilbertLayout layout{nq, {}};
      const HybridState psi = oracles::random_state(layout, rng);
      const std::string letters = oracles::random_pauli_string(nq, rng);
      const double direct =
          (psi.amp.adjoint() * oracles::pauli_string(letters) * psi.amp)(0).real();
      max_err = std::max(max_err, std::abs(measure_nonlocal(psi, letters) - direct));
    }
    CHECK(max_err < 1e-10);
  }
  SUBCASE("identity string is rejected") {
    HilbertLayout layout{2, {}};
    CHECK_THROWS_AS(measure_nonlocal(basis_state(layout, "00"), "II"), DomainError);
  }
}

TEST_CASE("measure_pauli_boson reads <P (a+a†)> through the derivative") {
  SUBCASE("vacuum gives zero for any string") {
    HilbertLayout layout{1, {6}};
    const HybridState psi = basis_state(layout, "0", {0});
    CHECK(measure_pauli_boson(psi, "Z", 1) == doctest::Approx(0.0).epsilon(1e-8));
  }
  SUBCASE("|↑> ⊗ (|0>+|1>)/√2 against Z(a+a†) gives -1") {
    // Z|1> = -|1> and <0+1|a+a†|0+1>/norm = 1
    HilbertLayout layout{1, {6}};
    HybridState psi = basis_state(layout, "1", {0});
    psi.amp.setZero();
    psi.amp[6 + 0] = 1 / std::sqrt(2.0);  // |1>|0>
    psi.amp[6 + 1] = 1 / std::sqrt(2.0);  // |1>|1>
    const Eigen::MatrixXcd a = oracles::mode_lowering(6);
    const Eigen::MatrixXcd op = oracles::kron(oracles::pauli('Z'), a + a.adjoint());
    const double direct = (psi.amp.adjoint() * op * psi.amp)(0).real();
    CHECK(direct == doctest::Approx(-1.0));
    CHECK(measure_pauli_boson(psi, "Z", 1) == doctest::Approx(direct).epsilon(1e-6));
  }
  SUBCASE("50 random states against XX(a+a†) and mixed strings") {
    std::mt19937_64 rng(19);
    HilbertLayout layout{2, {5}};
    double max_err = 0.0;
    for (int rep = 0; rep < 50; ++rep) {
      HybridState psi = oracles::random_state(layout, rng);
      // support the low Fock levels only, for the leakage guard
      const int words = 1 << layout.qubit_count;
      for (int w = 0; w < words; ++w)
        for (int n = 3; n < 5; ++n) psi.amp[w * 5 + n] = 0.0;
      psi.renormalize();
      const std::string letters = rep % 2 ? "XX" : oracles::random_pauli_string(2, rng);
      const Eigen::MatrixXcd a = oracles::mode_lowering(5);
      const Eigen::MatrixXcd op =
          oracles::kron(oracles::pauli_string(letters), a + a.adjoint());
      const double direct = (psi.amp.adjoint() * op * psi.amp)(0).real();
      max_err =
          std::max(max_err, std::abs(measure_pauli_boson(psi, letters, 1) - direct));
    }
    CHECK(max_err < 1e-6);
  }
}

TEST_CASE("phase_estimation_scan") {
  const MolecularIntegrals ints = load_integrals(kFixture);
  const PauliTermSum h = build_electronic_hamiltonian(ints);
  const HilbertLayout layout{4, {}};

  SUBCASE("eigenstate input keeps |g| = 1/2") {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(oracles::pauli_sum(h));
    HybridState eigen;
    eigen.layout = layout;
    eigen.amp = solver.eigenvectors().col(0);
    const AncillaSeries series =
        phase_estimation_scan(eigen, h, {0.0, 0.5, 1.0, 1.5});
    for (const cplx& g : series.g) CHECK(std::abs(g) == doctest::Approx(0.5));
  }
  SUBCASE("two-level superposition follows the closed form") {
    const PauliTermSum hz(1, {{0.7, "Z"}});
    HilbertLayout one{1, {}};
    HybridState plus = basis_state(one, "0");
    plus.amp[0] = plus.amp[1] = 1 / std::sqrt(2.0);
    const AncillaSeries series = phase_estimation_scan(plus, hz, {0.0, 0.3, 0.6});
    for (std::size_t k = 0; k < series.t.size(); ++k) {
      const double t = series.t[k];
      const cplx expected =
          (std::exp(cplx(0, -0.7 * t)) + std::exp(cplx(0, 0.7 * t))) / 4.0;
      CHECK(std::abs(series.g[k] - expected) < 1e-12);
    }
  }
  SUBCASE("H2 series matches the dense eigendecomposition sum") {
    const HybridState phi = hartree_fock_state(layout, 2, 4);
    std::vector<double> grid;
    for (int k = 0; k < 64; ++k) grid.push_back(0.25 * k);
    const AncillaSeries series = phase_estimation_scan(phi, h, grid);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(oracles::pauli_sum(h));
    for (std::size_t k = 0; k < grid.size(); ++k) {
      cplx expected = 0.0;
      for (Eigen::Index j = 0; j < 16; ++j) {
        const double w = std::norm(solver.eigenvectors().col(j).dot(phi.amp));
        expected += 0.5 * w * std::exp(cplx(0, -solver.eigenvalues()[j] * grid[k]));
      }
      CHECK(std::abs(series.g[k] - expected) < 1e-10);
    }
  }
  SUBCASE("trotter mode composes with the gate layer and converges") {
    const HybridState phi = hartree_fock_state(layout, 2, 4);
    std::vector<double> grid;
    for (int k = 0; k < 64; ++k) grid.push_back(0.25 * k);
    const AncillaSeries dense = phase_estimation_scan(phi, h, grid);
    const auto max_gap = [&](int steps) {
      const AncillaSeries trotter =
          phase_estimation_scan(phi, h, grid, PeaMode::trotter, steps);
      double gap = 0.0;
      for (std::size_t k = 0; k < grid.size(); ++k)
        gap = std::max(gap, std::abs(dense.g[k] - trotter.g[k]));
      return gap;
    };
    const double gap8 = max_gap(8);
    const double gap32 = max_gap(32);
    CHECK(gap8 > 1e-9);        // digitization is visible
    CHECK(gap32 < gap8 / 8);   // and shrinks like 1/n over the fixed grid
  }
}

TEST_CASE("extract_spectrum") {
  SUBCASE("single line") {
    AncillaSeries series;
    const double omega0 = -1.85;
    for (int m = 0; m < 256; ++m) {
      series.t.push_back(0.25 * m);
      series.g.push_back(0.5 * std::exp(cplx(0, -omega0 * 0.25 * m)));
    }
    const auto lines = extract_spectrum(series, 8.0);
    REQUIRE(lines.size() == 1);
    const double bin = 2 * M_PI / (0.25 * 256);
    CHECK(std::abs(lines[0].omega - omega0) < bin);
    CHECK(lines[0].weight == doctest::Approx(1.0).epsilon(0.02));
  }
  SUBCASE("two equal lines") {
    AncillaSeries series;
    for (int m = 0; m < 256; ++m) {
      const double t = 0.25 * m;
      series.t.push_back(t);
      series.g.push_back(0.25 * std::exp(cplx(0, -0.8 * t)) +
                         0.25 * std::exp(cplx(0, 1.7 * t)));
    }
    const auto lines = extract_spectrum(series, 8.0);
    REQUIRE(lines.size() == 2);
    CHECK(lines[0].omega == doctest::Approx(-1.7).epsilon(0.02));
    CHECK(lines[1].omega == doctest::Approx(0.8).epsilon(0.02));
    CHECK(lines[0].weight == doctest::Approx(0.5).epsilon(0.04));
    CHECK(lines[1].weight == doctest::Approx(0.5).epsilon(0.04));
  }
  SUBCASE("H2 phase estimation recovers the dense eigenvalues") {
    const MolecularIntegrals ints = load_integrals(kFixture);
    const PauliTermSum h = build_electronic_hamiltonian(ints);
    const HilbertLayout layout{4, {}};
    const HybridState phi = hartree_fock_state(layout, 2, 4);
    std::vector<double> grid;
    for (int k = 0; k < 256; ++k) grid.push_back(0.25 * k);
    const auto lines = extract_spectrum(phase_estimation_scan(phi, h, grid), 8.0);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(oracles::pauli_sum(h));
    const double bin = 2 * M_PI / (0.25 * 256);
    double weight_sum = 0.0;
    for (const auto& line : lines) {
      weight_sum += line.weight;
      double best = 1e9;
      for (Eigen::Index j = 0; j < 16; ++j)
        best = std::min(best, std::abs(line.omega - solver.eigenvalues()[j]));
      CHECK(best < bin);
    }
    // Parseval: the HF state is fully supported on resolved lines
    CHECK(weight_sum > 0.98);
    CHECK(weight_sum < 1.005);
  }
  SUBCASE("errors") {
    AncillaSeries tiny;
    for (int m = 0; m < 32; ++m) {
      tiny.t.push_back(0.5 * m);
      tiny.g.push_back(0.5);
    }
    CHECK_THROWS_AS(extract_spectrum(tiny, 1.0), SamplingError);

    AncillaSeries aliased;
    for (int m = 0; m < 128; ++m) {
      aliased.t.push_back(1.0 * m);
      aliased.g.push_back(0.5 * std::exp(cplx(0, -3.0 * m)));  // near the edge
    }
    CHECK_THROWS_AS(extract_spectrum(aliased, 10.0), SamplingError);
  }
}

TEST_CASE("weak_transition_element") {
  SUBCASE("one-qubit toy converges to <1|X|0> = 1") {
    const Eigen::VectorXcd g = (Eigen::VectorXcd(2) << 1, 0).finished();
    const Eigen::VectorXcd e = (Eigen::VectorXcd(2) << 0, 1).finished();
    const PauliTermSum a(1, {{1.0, "X"}});
    const PauliTermSum q(1, {{1.0, "Y"}});
    double prev_err = 1e9;
    for (double lambda : {0.1, 0.05, 0.025}) {
      const cplx est = weak_transition_element(g, e, a, lambda, q);
      const double err = std::abs(est - cplx(1.0));
      CHECK(err < 5 * lambda);
      CHECK(err <= prev_err + 1e-12);
      prev_err = err;
    }
  }
  SUBCASE("bias scales linearly over the λ ladder") {
    std::mt19937_64 rng(29);
    HilbertLayout layout{2, {}};
    const HybridState gs = oracles::random_state(layout, rng);
    const HybridState es_raw = oracles::random_state(layout, rng);
    // orthogonalize e against g
    Eigen::VectorXcd e = es_raw.amp - gs.amp * gs.amp.dot(es_raw.amp);
    e /= e.norm();
    const PauliTermSum a(2, {{0.8, "XI"}, {0.3, "ZY"}});
    const PauliTermSum q(2, {{1.0, "YX"}, {0.5, "XI"}});
    const Eigen::MatrixXcd adense = oracles::pauli_sum(a);
    const cplx qc = e.dot(oracles::pauli_sum(q) * gs.amp);
    const Eigen::VectorXcd e_fixed = e * std::exp(cplx(0, std::arg(qc) - M_PI / 2));
    const cplx direct = e_fixed.dot(adense * gs.amp);
    std::vector<double> errs;
    for (double lambda : {0.1, 0.05, 0.025})
      errs.push_back(std::abs(weak_transition_element(gs.amp, e, a, lambda, q) - direct));
    // halving λ should roughly halve the bias (within a factor 1.5)
    CHECK(errs[0] / std::max(errs[1], 1e-15) > 2.0 / 1.5);
    CHECK(errs[1] / std::max(errs[2], 1e-15) > 2.0 / 1.5);
  }
  SUBCASE("H2 dipole-like one-body element on fixture eigenstates") {
    const MolecularIntegrals ints = load_integrals(kFixture);
    const PauliTermSum h = build_electronic_hamiltonian(ints);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(oracles::pauli_sum(h));
    const Eigen::VectorXcd g = solver.eigenvectors().col(0);
    const Eigen::VectorXcd e = solver.eigenvectors().col(1);
    // dipole-like one-body operator u12 (c1†c3 + c3†c1) + u34 (c2†c4 + c4†c2)
    FermionOpSum dip;
    dip.add(0.6, {{0, true}, {2, false}});
    dip.add(0.6, {{2, true}, {0, false}});
    dip.add(0.6, {{1, true}, {3, false}});
    dip.add(0.6, {{3, true}, {1, false}});
    const PauliTermSum a = jordan_wigner(dip, 4);
    // Q must connect the two states; reuse the dipole itself when it does
    const cplx qc = e.dot(oracles::pauli_sum(a) * g);
    if (std::abs(qc) > 1e-9) {
      const double lambda = 0.05;
      const Eigen::VectorXcd e_fixed = e * std::exp(cplx(0, std::arg(qc) - M_PI / 2));
      const cplx direct = e_fixed.dot(oracles::pauli_sum(a) * g);
      const cplx est = weak_transition_element(g, e, a, lambda, a);
      CHECK(std::abs(est - direct) < 5 * lambda * std::max(1.0, std::abs(direct)));
    }
  }
  SUBCASE("orthogonal Q is rejected") {
    const Eigen::VectorXcd g = (Eigen::VectorXcd(2) << 1, 0).finished();
    const Eigen::VectorXcd e = (Eigen::VectorXcd(2) << 0, 1).finished();
    const PauliTermSum a(1, {{1.0, "X"}});
    const PauliTermSum qz(1, {{1.0, "Z"}});  // <1|Z|0> = 0
    CHECK_THROWS_AS(weak_transition_element(g, e, a, 0.05, qz), ProtocolError);
    CHECK_THROWS_AS(weak_transition_element(g, e, a, 0.5, qz), DomainError);
  }
}
