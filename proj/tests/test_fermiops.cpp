#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>

#include "freeferm/oracle.hpp"
#include "test_helpers.hpp"

using namespace freeferm;
using freeferm::testing::random_circuit;
using freeferm::testing::random_params4;
using freeferm::testing::random_params6;

TEST_CASE("validate_gate rejects bad indices and parameter counts") {
  CHECK_THROWS_AS(validate_gate(GateSpec::preserving(1, 1, {}, 1.0), 4),
                  std::invalid_argument);
  CHECK_THROWS_AS(validate_gate(GateSpec::preserving(2, 1, {}, 1.0), 4),
                  std::invalid_argument);
  CHECK_THROWS_AS(validate_gate(GateSpec::general(0, 4, {}, 1.0), 4),
                  std::invalid_argument);
  GateSpec bad = GateSpec::preserving(0, 1, {1, 2, 3, 4}, 1.0);
  bad.params.pop_back();
  CHECK_THROWS_AS(validate_gate(bad, 4), std::invalid_argument);
  CHECK_NOTHROW(validate_gate(GateSpec::preserving(0, 3, {1, 2, 3, 4}, 1.0), 4));
}

TEST_CASE("assemble_alpha places the general block explicitly") {
  const std::array<double, 6> p = {0.1, 0.2, 0.3, 0.4, 0.5, 0.6};
  // params order: a b c d e f
  SkewMatrix alpha = assemble_alpha(GateSpec::general(0, 1, p), 2);
  Matrix expected(4, 4);
  const double a = p[0], b = p[1], c = p[2], d = p[3], e = p[4], f = p[5];
  expected << 0, e, a, b,
             -e, 0, c, d,
             -a, -c, 0, f,
             -b, -d, -f, 0;
  CHECK((alpha.entries() - expected).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("assemble_alpha embeds non-adjacent pairs at the right rows") {
  const std::array<double, 6> p = {0.1, 0.2, 0.3, 0.4, 0.5, 0.6};
  SkewMatrix alpha = assemble_alpha(GateSpec::general(1, 3, p), 4);
  Matrix m = alpha.entries();
  // Block rows/cols are (2, 3, 6, 7); everything else stays zero.
  CHECK(m(2, 3) == doctest::Approx(p[4]));
  CHECK(m(2, 6) == doctest::Approx(p[0]));
  CHECK(m(2, 7) == doctest::Approx(p[1]));
  CHECK(m(3, 6) == doctest::Approx(p[2]));
  CHECK(m(3, 7) == doctest::Approx(p[3]));
  CHECK(m(6, 7) == doctest::Approx(p[5]));
  for (int r : {0, 1, 4, 5}) CHECK(m.row(r).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("preserving gate equals its general-gate embedding") {
  std::mt19937 rng(5);
  for (int trial = 0; trial < 10; ++trial) {
    const auto p = random_params4(rng);
    // (a,b,c,d) preserving == (d, c, -c, d, a, b) general.
    const std::array<double, 6> q = {p[3], p[2], -p[2], p[3], p[0], p[1]};
    SkewMatrix ap = assemble_alpha(GateSpec::preserving(0, 2, p), 3);
    SkewMatrix ag = assemble_alpha(GateSpec::general(0, 2, q), 3);
    CHECK((ap.entries() - ag.entries()).cwiseAbs().maxCoeff() < 1e-14);
  }
}

TEST_CASE("dense layer alpha is the sum of its blocks") {
  std::mt19937 rng(9);
  const auto p1 = random_params6(rng);
  const auto p2 = random_params6(rng);
  GateSpec layer = GateSpec::dense_layer(
      {PairBlock{0, 1, p1}, PairBlock{1, 2, p2}}, 0.8);
  SkewMatrix sum = assemble_alpha(layer, 3);
  SkewMatrix a1 = assemble_alpha(GateSpec::general(0, 1, p1), 3);
  SkewMatrix a2 = assemble_alpha(GateSpec::general(1, 2, p2), 3);
  CHECK((sum.entries() - a1.entries() - a2.entries()).cwiseAbs().maxCoeff() <
        1e-14);
}

TEST_CASE("assemble_alpha is antisymmetric for random gates") {
  std::mt19937 rng(15);
  for (int trial = 0; trial < 10; ++trial) {
    Circuit c = random_circuit(5, 1, rng);
    SkewMatrix alpha = assemble_alpha(c.gates[0], 5);
    CHECK((alpha.entries() + alpha.entries().transpose()).cwiseAbs().maxCoeff() ==
          0.0);
  }
}

TEST_CASE("gate_r_matrix: identity for zero parameters or zero time") {
  CHECK((gate_r_matrix(GateSpec::preserving(0, 1, {0, 0, 0, 0}, 1.0), 2) -
         Matrix::Identity(4, 4))
            .cwiseAbs()
            .maxCoeff() < 1e-12);
  CHECK((gate_r_matrix(GateSpec::general(0, 1, {1, 2, 3, 4, 5, 6}, 0.0), 2) -
         Matrix::Identity(4, 4))
            .cwiseAbs()
            .maxCoeff() < 1e-12);
}

TEST_CASE("gate_r_matrix: single-coefficient closed form") {
  // Only the e-coefficient on mode 0: alpha has one 2x2 rotation generator,
  // so R rotates Majoranas 0 and 1 by angle -e*t in the (0,1) plane.
  const double e = 0.35, t = 1.4;
  Matrix r = gate_r_matrix(GateSpec::general(0, 1, {0, 0, 0, 0, e, 0}, t), 2);
  CHECK(r(0, 0) == doctest::Approx(std::cos(e * t)));
  CHECK(r(0, 1) == doctest::Approx(-std::sin(e * t)));
  CHECK(r(1, 0) == doctest::Approx(std::sin(e * t)));
  CHECK(r(1, 1) == doctest::Approx(std::cos(e * t)));
  CHECK((r.bottomRightCorner(2, 2) - Matrix::Identity(2, 2)).cwiseAbs().maxCoeff() <
        1e-12);
}

TEST_CASE("gate_r_matrix: time additivity and orthogonality") {
  std::mt19937 rng(21);
  const auto p = random_params6(rng);
  Matrix r1 = gate_r_matrix(GateSpec::general(0, 1, p, 0.3), 2);
  Matrix r2 = gate_r_matrix(GateSpec::general(0, 1, p, 0.5), 2);
  Matrix r12 = gate_r_matrix(GateSpec::general(0, 1, p, 0.8), 2);
  CHECK((r1 * r2 - r12).cwiseAbs().maxCoeff() < 1e-10);
  CHECK((r1.transpose() * r1 - Matrix::Identity(4, 4)).cwiseAbs().maxCoeff() <
        1e-10);
}

TEST_CASE("circuit_r_matrix: empty circuit and composition order") {
  Circuit empty;
  empty.n_modes = 3;
  CHECK((circuit_r_matrix(empty) - Matrix::Identity(6, 6)).cwiseAbs().maxCoeff() ==
        0.0);

  std::mt19937 rng(27);
  const auto p = random_params4(rng);
  Circuit two;
  two.n_modes = 2;
  two.gates.push_back(GateSpec::preserving(0, 1, p, 0.4));
  two.gates.push_back(GateSpec::preserving(0, 1, p, 0.7));
  Circuit one;
  one.n_modes = 2;
  one.gates.push_back(GateSpec::preserving(0, 1, p, 1.1));
  CHECK((circuit_r_matrix(two) - circuit_r_matrix(one)).cwiseAbs().maxCoeff() <
        1e-10);
}

TEST_CASE("circuit_r_matrix: sparse pair updates match dense products") {
  std::mt19937 rng(33);
  for (int trial = 0; trial < 6; ++trial) {
    Circuit circuit = random_circuit(4, 5, rng);
    Matrix fast = circuit_r_matrix(circuit);
    Matrix dense = Matrix::Identity(8, 8);
    for (const auto& gate : circuit.gates)
      dense = dense * gate_r_matrix(gate, circuit.n_modes);
    CHECK((fast - dense).cwiseAbs().maxCoeff() < 1e-10);
    CHECK((fast.transpose() * fast - Matrix::Identity(8, 8)).cwiseAbs().maxCoeff() <
          1e-10);
  }
}

TEST_CASE("R conjugates Majorana operators in Fock space") {
  std::mt19937 rng(39);
  Circuit circuit = random_circuit(4, 3, rng);
  const Matrix r = circuit_r_matrix(circuit);
  const CMatrix u = circuit_unitary_dense(circuit);
  for (int k = 0; k < 8; ++k) {
    const CMatrix lhs = u * majorana_dense(k, 4) * u.adjoint();
    CMatrix rhs = CMatrix::Zero(16, 16);
    for (int l = 0; l < 8; ++l) rhs += r(k, l) * majorana_dense(l, 4);
    CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-9);
  }
}

TEST_CASE("pauli_decompose: preserving hopping parameter gives XX + YY") {
  auto terms = pauli_decompose(GateSpec::preserving(0, 1, {0.0, 0.0, 0.7, 0.0}), 2);
  REQUIRE(terms.size() == 2);
  std::sort(terms.begin(), terms.end(),
            [](const PauliTerm& a, const PauliTerm& b) { return a.ops < b.ops; });
  CHECK(terms[0].ops == "XX");
  CHECK(terms[0].coefficient == doctest::Approx(0.35));
  CHECK(terms[1].ops == "YY");
  CHECK(terms[1].coefficient == doctest::Approx(0.35));
}

TEST_CASE("pauli_decompose: general b-term on a non-adjacent pair") {
  auto terms =
      pauli_decompose(GateSpec::general(1, 3, {0, 0.9, 0, 0, 0, 0}), 4);
  REQUIRE(terms.size() == 1);
  CHECK(terms[0].ops == "IYZY");
  CHECK(terms[0].coefficient == doctest::Approx(0.45));
}

TEST_CASE("pauli_decompose: full general gate term multiset") {
  const std::array<double, 6> p = {0.1, 0.2, 0.3, 0.4, 0.5, 0.6};
  auto terms = pauli_decompose(GateSpec::general(0, 2, p), 3);
  REQUIRE(terms.size() == 6);
  std::vector<std::pair<std::string, double>> got;
  for (const auto& t : terms) got.emplace_back(t.ops, t.coefficient);
  std::sort(got.begin(), got.end());
  std::vector<std::pair<std::string, double>> expected = {
      {"IIZ", -p[5] / 2}, {"XZX", -p[2] / 2}, {"XZY", -p[3] / 2},
      {"YZX", p[0] / 2},  {"YZY", p[1] / 2},  {"ZII", -p[4] / 2}};
  std::sort(expected.begin(), expected.end());
  for (size_t i = 0; i < 6; ++i) {
    CHECK(got[i].first == expected[i].first);
    CHECK(got[i].second == doctest::Approx(expected[i].second));
  }
}

TEST_CASE("pauli_decompose matches the assembled quadratic Hamiltonian") {
  // H = (i/4) c^T A c built from dense Majoranas must equal the dense form of
  // the Pauli decomposition, up to an identity offset.
  std::mt19937 rng(45);
  for (int trial = 0; trial < 4; ++trial) {
    Circuit c = random_circuit(3, 1, rng);
    const auto& gate = c.gates[0];
    const SkewMatrix alpha = assemble_alpha(gate, 3);
    CMatrix h_quad = CMatrix::Zero(8, 8);
    for (int a = 0; a < 6; ++a)
      for (int b = 0; b < 6; ++b)
        if (alpha.entries()(a, b) != 0.0)
          h_quad += Complex(0, 0.25) * alpha.entries()(a, b) *
                    (majorana_dense(a, 3) * majorana_dense(b, 3));
    const CMatrix h_pauli = pauli_to_dense(pauli_decompose(gate, 3), 3);
    CMatrix diff = h_quad - h_pauli;
    const Complex offset = diff(0, 0);
    diff -= offset * CMatrix::Identity(8, 8);
    CHECK(diff.cwiseAbs().maxCoeff() < 1e-12);
  }
}
