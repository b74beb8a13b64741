#pragma once

#include "freeferm/measure.hpp"

namespace freeferm {

constexpr int kOracleMaxQubits = 14;

struct WeightedGraph {
  int n_nodes = 0;
  std::vector<std::tuple<int, int, double>> edges;

  void validate() const;
  double cut_value(const std::vector<int>& bits) const;
};

struct MaxcutSolution {
  std::vector<int> bits;
  double value = 0.0;
};

/// Dense 2^N x 2^N operator from Pauli terms. Qubit 0 is the leftmost Kron
/// factor (most significant bit of the basis index).
CMatrix pauli_to_dense(const std::vector<PauliTerm>& terms, int n);

/// Dense Majorana operator c_k under the Jordan-Wigner mapping (test helper).
CMatrix majorana_dense(int k, int n);

/// Dense circuit unitary U = exp(-i t_m H_m) ... exp(-i t_1 H_1), gate 1
/// rightmost. Small N only.
CMatrix circuit_unitary_dense(const Circuit& circuit);

/// Statevector after evolving |x> through the circuit.
CVector evolve_statevector(const Circuit& circuit, const std::vector<int>& x);

/// Exact-diagonalization measurement probability, N <= 14.
double exact_probability(const Circuit& circuit, const MeasurementQuery& q);

/// Exhaustive weighted MaxCut, n_nodes <= 20, lowest binary value wins ties.
MaxcutSolution maxcut_exhaustive(const WeightedGraph& g);

/// Basis index of a bitstring with bit 0 as the most significant bit.
size_t basis_index(const std::vector<int>& bits);

}  // namespace freeferm
