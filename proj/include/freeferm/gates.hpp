#pragma once

#include <array>
#include <string>
#include <vector>

#include "freeferm/skew.hpp"

namespace freeferm {

enum class GateKind { Preserving, General, DenseLayer };

/// One (i, j) interaction block of a dense layer: 6 coefficients of the
/// general quadratic form.
struct PairBlock {
  int i = 0;
  int j = 0;
  std::array<double, 6> params{};
};

/// A two-mode gate (4 parameters if fermion-preserving, 6 in general) or a
/// dense layer summing several pair blocks into one Hamiltonian, evolved for
/// time t.
struct GateSpec {
  GateKind kind = GateKind::Preserving;
  int i = 0;
  int j = 0;
  std::vector<double> params;     // 4 (Preserving) or 6 (General)
  std::vector<PairBlock> blocks;  // DenseLayer only
  double time = 1.0;

  int param_count() const;
  static GateSpec preserving(int i, int j, std::array<double, 4> p, double t = 1.0);
  static GateSpec general(int i, int j, std::array<double, 6> p, double t = 1.0);
  static GateSpec dense_layer(std::vector<PairBlock> blocks, double t = 1.0);
};

struct Circuit {
  int n_modes = 0;
  std::vector<GateSpec> gates;  // gates[0] is applied first to the state

  int param_count() const;
};

struct PauliTerm {
  double coefficient = 0.0;
  std::string ops;  // length N over {I,X,Y,Z}
};

void validate_gate(const GateSpec& gate, int n_modes);

/// The 2N x 2N skew matrix A with H = (i/4) c^T A c (additive constants
/// dropped).
SkewMatrix assemble_alpha(const GateSpec& gate, int n_modes);

/// R = exp(-A t) for the gate's alpha matrix.
Matrix gate_r_matrix(const GateSpec& gate, int n_modes);

/// R_total = R(1) R(2) ... R(m), gate 1 applied first to the state.
/// Pair gates contribute through a 4-column sparse update; dense layers go
/// through the full skew exponential.
Matrix circuit_r_matrix(const Circuit& circuit);

/// Pauli-string form of the gate Hamiltonian under the Jordan-Wigner mapping,
/// Z strings on interior qubits. Constant identity offsets are dropped.
std::vector<PauliTerm> pauli_decompose(const GateSpec& gate, int n_modes);

}  // namespace freeferm
