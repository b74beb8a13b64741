#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "freeferm/optimize.hpp"
#include "test_helpers.hpp"

using namespace freeferm;
using freeferm::testing::random_circuit;

TEST_CASE("pauli_to_dense: single-qubit operators") {
  CMatrix z = pauli_to_dense({PauliTerm{1.0, "Z"}}, 1);
  CHECK(std::abs(z(0, 0) - Complex(1, 0)) < 1e-15);
  CHECK(std::abs(z(1, 1) - Complex(-1, 0)) < 1e-15);
  CHECK(std::abs(z(0, 1)) < 1e-15);

  CMatrix y = pauli_to_dense({PauliTerm{1.0, "Y"}}, 1);
  CHECK(std::abs(y(0, 1) - Complex(0, -1)) < 1e-15);
  CHECK(std::abs(y(1, 0) - Complex(0, 1)) < 1e-15);
}

TEST_CASE("pauli_to_dense: sums and qubit-0-as-MSB convention") {
  const double a = 0.7, b = -0.4;
  CMatrix h = pauli_to_dense({PauliTerm{a, "ZI"}, PauliTerm{b, "IZ"}}, 2);
  // Basis order 00, 01, 10, 11 with the first bit belonging to qubit 0.
  CHECK(h(0, 0).real() == doctest::Approx(a + b));
  CHECK(h(1, 1).real() == doctest::Approx(a - b));
  CHECK(h(2, 2).real() == doctest::Approx(-a + b));
  CHECK(h(3, 3).real() == doctest::Approx(-a - b));

  CMatrix xi = pauli_to_dense({PauliTerm{1.0, "XI"}}, 2);
  CHECK(std::abs(xi(2, 0) - Complex(1, 0)) < 1e-15);  // flips the high bit
  CHECK(std::abs(xi(0, 2) - Complex(1, 0)) < 1e-15);
}

TEST_CASE("gate Hamiltonians are Hermitian") {
  std::mt19937 rng(3);
  for (int trial = 0; trial < 5; ++trial) {
    Circuit c = random_circuit(3, 1, rng);
    CMatrix h = pauli_to_dense(pauli_decompose(c.gates[0], 3), 3);
    CHECK((h - h.adjoint()).cwiseAbs().maxCoeff() < 1e-14);
  }
}

TEST_CASE("dense Majorana operators satisfy the Clifford relations") {
  const int n = 3;
  const CMatrix id = CMatrix::Identity(8, 8);
  for (int k = 0; k < 2 * n; ++k) {
    const CMatrix ck = majorana_dense(k, n);
    CHECK((ck - ck.adjoint()).cwiseAbs().maxCoeff() < 1e-14);
    for (int l = 0; l <= k; ++l) {
      const CMatrix cl = majorana_dense(l, n);
      const CMatrix anti = ck * cl + cl * ck;
      const CMatrix expected = (k == l) ? CMatrix(2.0 * id) : CMatrix(CMatrix::Zero(8, 8));
      CHECK((anti - expected).cwiseAbs().maxCoeff() < 1e-13);
    }
  }
}

TEST_CASE("circuit_unitary_dense is unitary and composes left-to-right") {
  std::mt19937 rng(7);
  Circuit circuit = random_circuit(3, 3, rng);
  const CMatrix u = circuit_unitary_dense(circuit);
  CHECK((u.adjoint() * u - CMatrix::Identity(8, 8)).cwiseAbs().maxCoeff() < 1e-10);

  Circuit first, rest;
  first.n_modes = rest.n_modes = 3;
  first.gates = {circuit.gates[0]};
  rest.gates = {circuit.gates[1], circuit.gates[2]};
  const CMatrix composed =
      circuit_unitary_dense(rest) * circuit_unitary_dense(first);
  CHECK((u - composed).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("evolve_statevector matches the dense unitary") {
  std::mt19937 rng(11);
  for (int n : {2, 4, 5}) {
    Circuit circuit = random_circuit(n, 4, rng);
    const std::vector<int> x = freeferm::testing::random_bits(n, rng);
    const CVector fast = evolve_statevector(circuit, x);
    CVector ref = CVector::Zero(Eigen::Index{1} << n);
    ref[static_cast<Eigen::Index>(basis_index(x))] = 1.0;
    ref = circuit_unitary_dense(circuit) * ref;
    CHECK((fast - ref).cwiseAbs().maxCoeff() < 1e-10);
    CHECK(fast.norm() == doctest::Approx(1.0).epsilon(1e-10));
  }
}

TEST_CASE("evolve_statevector: non-adjacent pair gate with interior string") {
  Circuit circuit;
  circuit.n_modes = 4;
  circuit.gates.push_back(
      GateSpec::general(0, 3, {0.3, 0.8, 1.2, 0.5, 0.9, 0.2}, 0.9));
  circuit.gates.push_back(GateSpec::preserving(1, 2, {0.4, 0.1, 0.6, 0.2}, 1.1));
  for (const std::vector<int>& x :
       {std::vector<int>{1, 0, 1, 0}, std::vector<int>{0, 1, 1, 1}}) {
    const CVector fast = evolve_statevector(circuit, x);
    CVector ref = CVector::Zero(16);
    ref[static_cast<Eigen::Index>(basis_index(x))] = 1.0;
    ref = circuit_unitary_dense(circuit) * ref;
    CHECK((fast - ref).cwiseAbs().maxCoeff() < 1e-10);
  }
}

TEST_CASE("exact_probability: identity and a two-mode rotation") {
  Circuit id_circuit;
  id_circuit.n_modes = 3;
  MeasurementQuery q;
  q.x = {1, 0, 1};
  q.mask = {1, 1, 1};
  q.y = {1, 0, 1};
  CHECK(exact_probability(id_circuit, q) == doctest::Approx(1.0));
  q.mask = {0, 0, 0};
  q.y = {};
  CHECK(exact_probability(id_circuit, q) == doctest::Approx(1.0));

  // Hopping gate with angle theta: p(01 | 10) = sin^2(theta * t).
  const double theta = 0.62, t = 1.0;
  Circuit hop;
  hop.n_modes = 2;
  hop.gates.push_back(GateSpec::preserving(0, 1, {0, 0, theta, 0}, t));
  MeasurementQuery hq;
  hq.x = {1, 0};
  hq.mask = {1, 1};
  hq.y = {0, 1};
  CHECK(exact_probability(hop, hq) ==
        doctest::Approx(std::sin(theta * t) * std::sin(theta * t)).epsilon(1e-10));
  hq.y = {1, 0};
  CHECK(exact_probability(hop, hq) ==
        doctest::Approx(std::cos(theta * t) * std::cos(theta * t)).epsilon(1e-10));
  hq.y = {1, 1};
  CHECK(exact_probability(hop, hq) == doctest::Approx(0.0));
}

TEST_CASE("basis_index uses bit 0 as the most significant bit") {
  CHECK(basis_index({1, 0, 1}) == 5);
  CHECK(basis_index({0, 0, 0, 1}) == 1);
  CHECK(basis_index({}) == 0);
}

TEST_CASE("oracle size ceiling is enforced") {
  Circuit big;
  big.n_modes = kOracleMaxQubits + 1;
  CHECK_THROWS_AS(evolve_statevector(big, std::vector<int>(big.n_modes, 0)),
                  std::invalid_argument);
}

TEST_CASE("graph validation and cut values") {
  WeightedGraph g;
  g.n_nodes = 3;
  g.edges = {{0, 1, 1.0}, {1, 2, 2.0}};
  CHECK_NOTHROW(g.validate());
  CHECK(g.cut_value({0, 1, 0}) == doctest::Approx(3.0));
  CHECK(g.cut_value({0, 0, 0}) == doctest::Approx(0.0));

  g.edges.push_back({1, 0, 0.5});
  CHECK_THROWS_AS(g.validate(), std::invalid_argument);  // duplicate edge
  g.edges = {{0, 0, 1.0}};
  CHECK_THROWS_AS(g.validate(), std::invalid_argument);  // self-loop
  g.edges = {{0, 3, 1.0}};
  CHECK_THROWS_AS(g.validate(), std::invalid_argument);  // out of range
}

TEST_CASE("maxcut_exhaustive: small closed forms and tie-breaking") {
  WeightedGraph edge;
  edge.n_nodes = 2;
  edge.edges = {{0, 1, 1.7}};
  MaxcutSolution s = maxcut_exhaustive(edge);
  CHECK(s.value == doctest::Approx(1.7));
  CHECK(s.bits == std::vector<int>{0, 1});  // lowest binary among the tie

  WeightedGraph triangle;
  triangle.n_nodes = 3;
  triangle.edges = {{0, 1, 1.0}, {0, 2, 1.0}, {1, 2, 1.0}};
  s = maxcut_exhaustive(triangle);
  CHECK(s.value == doctest::Approx(2.0));
  CHECK(s.bits == std::vector<int>{0, 0, 1});
}

TEST_CASE("maxcut_exhaustive agrees with an independent enumeration") {
  std::mt19937 rng(13);
  std::uniform_real_distribution<double> unif(0.1, 2.0);
  WeightedGraph g;
  g.n_nodes = 12;
  for (int i = 0; i < 12; ++i)
    for (int j = i + 1; j < 12; ++j)
      if (rng() % 3 != 0) g.edges.emplace_back(i, j, unif(rng));

  const MaxcutSolution fast = maxcut_exhaustive(g);

  // Independent scan in descending order, keeping ties at the lowest value.
  double best = -1.0;
  size_t best_assign = 0;
  for (size_t assign = (size_t{1} << 12); assign-- > 0;) {
    double v = 0.0;
    for (const auto& [i, j, w] : g.edges) {
      const int bi = static_cast<int>((assign >> (11 - i)) & 1u);
      const int bj = static_cast<int>((assign >> (11 - j)) & 1u);
      if (bi != bj) v += w;
    }
    if (v > best || (v == best && assign < best_assign)) {
      best = v;
      best_assign = assign;
    }
  }
  CHECK(fast.value == doctest::Approx(best).epsilon(1e-12));
  CHECK(basis_index(fast.bits) == best_assign);
}
