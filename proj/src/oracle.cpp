#include "freeferm/oracle.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <set>

namespace freeferm {

namespace {

void check_oracle_size(int n) {
  if (n > kOracleMaxQubits)
    throw std::invalid_argument("oracle limited to N <= " +
                                std::to_string(kOracleMaxQubits));
}

// Action of a single Pauli on bit b: returns (new bit, phase).
std::pair<int, Complex> pauli_on_bit(char op, int b) {
  switch (op) {
    case 'I': return {b, 1.0};
    case 'X': return {1 - b, 1.0};
    case 'Y': return {1 - b, b == 0 ? Complex(0, 1) : Complex(0, -1)};
    case 'Z': return {b, b == 0 ? 1.0 : -1.0};
    default: throw std::invalid_argument("unknown Pauli op");
  }
}

// Image of basis state |col> under a Pauli string: single basis state with a
// phase.
std::pair<size_t, Complex> pauli_on_basis(const std::string& ops, size_t col) {
  const int n = static_cast<int>(ops.size());
  size_t row = col;
  Complex phase = 1.0;
  for (int q = 0; q < n; ++q) {
    const int shift = n - 1 - q;  // qubit 0 = most significant bit
    const int b = static_cast<int>((col >> shift) & 1u);
    auto [nb, ph] = pauli_on_bit(ops[q], b);
    phase *= ph;
    if (nb != b) row ^= (size_t{1} << shift);
  }
  return {row, phase};
}

CMatrix hermitian_exp(const CMatrix& h, double t) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(h);
  CVector phases(es.eigenvalues().size());
  for (Eigen::Index i = 0; i < phases.size(); ++i)
    phases[i] = std::exp(Complex(0, -t * es.eigenvalues()[i]));
  return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

// Two-qubit Hamiltonian of a pair gate restricted to qubits (i, j), with the
// interior Z string replaced by its parity eigenvalue.
CMatrix pair_hamiltonian_4x4(const std::vector<PauliTerm>& terms, int i, int j,
                             int parity_sign) {
  std::vector<PauliTerm> local;
  for (const auto& term : terms) {
    PauliTerm t;
    t.ops = std::string{term.ops[i], term.ops[j]};
    const bool has_string = (term.ops[i] != 'Z' || term.ops[j] != 'Z') &&
                            t.ops[0] != 'I' && t.ops[1] != 'I';
    t.coefficient = term.coefficient * (has_string ? parity_sign : 1);
    local.push_back(std::move(t));
  }
  return pauli_to_dense(local, 2);
}

void apply_pair_gate(CVector& psi, const GateSpec& gate, int n) {
  const auto terms = pauli_decompose(gate, n);
  const CMatrix u_even = hermitian_exp(
      pair_hamiltonian_4x4(terms, gate.i, gate.j, +1), gate.time);
  const CMatrix u_odd = hermitian_exp(
      pair_hamiltonian_4x4(terms, gate.i, gate.j, -1), gate.time);

  const size_t bit_i = size_t{1} << (n - 1 - gate.i);
  const size_t bit_j = size_t{1} << (n - 1 - gate.j);
  size_t interior = 0;
  for (int q = gate.i + 1; q < gate.j; ++q) interior |= size_t{1} << (n - 1 - q);

  const size_t dim = size_t{1} << n;
  for (size_t idx = 0; idx < dim; ++idx) {
    if (idx & (bit_i | bit_j)) continue;
    const bool odd = std::popcount(idx & interior) % 2 == 1;
    const CMatrix& u = odd ? u_odd : u_even;
    const std::array<size_t, 4> at = {idx, idx | bit_j, idx | bit_i,
                                      idx | bit_i | bit_j};
    Eigen::Vector4cd v;
    for (int q = 0; q < 4; ++q) v[q] = psi[at[q]];
    v = u * v;
    for (int q = 0; q < 4; ++q) psi[at[q]] = v[q];
  }
}

// psi <- H psi for a Pauli-term Hamiltonian, without forming H.
CVector apply_pauli_terms(const std::vector<PauliTerm>& terms, const CVector& psi) {
  CVector out = CVector::Zero(psi.size());
  for (const auto& term : terms)
    for (Eigen::Index col = 0; col < psi.size(); ++col) {
      if (psi[col] == Complex(0, 0)) continue;
      auto [row, phase] = pauli_on_basis(term.ops, static_cast<size_t>(col));
      out[static_cast<Eigen::Index>(row)] += term.coefficient * phase * psi[col];
    }
  return out;
}

// psi <- exp(-i t H) psi via scaling and squaring of a Taylor series on the
// vector; exact to machine precision for Hermitian H with moderate norm.
void apply_exp_pauli(CVector& psi, const std::vector<PauliTerm>& terms, double t) {
  double norm1 = 0.0;
  for (const auto& term : terms) norm1 += std::abs(term.coefficient);
  const int steps = std::max(1, static_cast<int>(std::ceil(std::abs(t) * norm1)));
  const Complex factor = Complex(0, -t / steps);
  for (int s = 0; s < steps; ++s) {
    CVector acc = psi;
    CVector term_vec = psi;
    for (int k = 1; k <= 40; ++k) {
      term_vec = (factor / static_cast<double>(k)) * apply_pauli_terms(terms, term_vec);
      acc += term_vec;
      if (term_vec.norm() < 1e-16 * acc.norm()) break;
    }
    psi = std::move(acc);
  }
}

}  // namespace

CMatrix pauli_to_dense(const std::vector<PauliTerm>& terms, int n) {
  check_oracle_size(n);
  const size_t dim = size_t{1} << n;
  CMatrix h = CMatrix::Zero(dim, dim);
  for (const auto& term : terms) {
    if (static_cast<int>(term.ops.size()) != n)
      throw std::invalid_argument("Pauli string length mismatch");
    for (size_t col = 0; col < dim; ++col) {
      auto [row, phase] = pauli_on_basis(term.ops, col);
      h(row, col) += term.coefficient * phase;
    }
  }
  return h;
}

CMatrix majorana_dense(int k, int n) {
  const int mode = k / 2;
  PauliTerm t{1.0, std::string(n, 'I')};
  for (int q = 0; q < mode; ++q) t.ops[q] = 'Z';
  t.ops[mode] = (k % 2 == 0) ? 'X' : 'Y';
  return pauli_to_dense({t}, n);
}

CMatrix circuit_unitary_dense(const Circuit& circuit) {
  check_oracle_size(circuit.n_modes);
  const size_t dim = size_t{1} << circuit.n_modes;
  CMatrix u = CMatrix::Identity(dim, dim);
  for (const auto& gate : circuit.gates) {
    const CMatrix h = pauli_to_dense(pauli_decompose(gate, circuit.n_modes),
                                     circuit.n_modes);
    u = hermitian_exp(h, gate.time) * u;  // gate 1 rightmost
  }
  return u;
}

size_t basis_index(const std::vector<int>& bits) {
  size_t idx = 0;
  for (int b : bits) idx = (idx << 1) | static_cast<size_t>(b);
  return idx;
}

CVector evolve_statevector(const Circuit& circuit, const std::vector<int>& x) {
  check_oracle_size(circuit.n_modes);
  if (static_cast<int>(x.size()) != circuit.n_modes)
    throw std::invalid_argument("x length must equal n_modes");
  const size_t dim = size_t{1} << circuit.n_modes;
  CVector psi = CVector::Zero(dim);
  psi[basis_index(x)] = 1.0;
  for (const auto& gate : circuit.gates) {
    validate_gate(gate, circuit.n_modes);
    if (gate.kind == GateKind::DenseLayer) {
      apply_exp_pauli(psi, pauli_decompose(gate, circuit.n_modes), gate.time);
    } else {
      apply_pair_gate(psi, gate, circuit.n_modes);
    }
  }
  return psi;
}

double exact_probability(const Circuit& circuit, const MeasurementQuery& q) {
  q.validate(circuit.n_modes);
  const CVector psi = evolve_statevector(circuit, q.x);
  const int n = circuit.n_modes;
  double p = 0.0;
  const size_t dim = size_t{1} << n;
  for (size_t idx = 0; idx < dim; ++idx) {
    bool consistent = true;
    int yi = 0;
    for (int qb = 0; qb < n && consistent; ++qb) {
      if (!q.mask[qb]) continue;
      const int b = static_cast<int>((idx >> (n - 1 - qb)) & 1u);
      if (b != q.y[yi]) consistent = false;
      ++yi;
    }
    if (consistent) p += std::norm(psi[idx]);
  }
  return p;
}

void WeightedGraph::validate() const {
  std::set<std::pair<int, int>> seen;
  for (const auto& [i, j, w] : edges) {
    if (i == j) throw std::invalid_argument("graph edge with i == j");
    if (i < 0 || j < 0 || i >= n_nodes || j >= n_nodes)
      throw std::invalid_argument("graph edge node out of range");
    if (!std::isfinite(w)) throw std::invalid_argument("edge weight not finite");
    auto key = std::minmax(i, j);
    if (!seen.insert(key).second)
      throw std::invalid_argument("duplicate undirected edge");
  }
}

double WeightedGraph::cut_value(const std::vector<int>& bits) const {
  double v = 0.0;
  for (const auto& [i, j, w] : edges)
    if (bits[i] != bits[j]) v += w;
  return v;
}

MaxcutSolution maxcut_exhaustive(const WeightedGraph& g) {
  g.validate();
  if (g.n_nodes > 20)
    throw std::invalid_argument("maxcut_exhaustive limited to 20 nodes");
  MaxcutSolution best;
  best.value = -std::numeric_limits<double>::infinity();
  const size_t total = size_t{1} << g.n_nodes;
  std::vector<int> bits(g.n_nodes);
  for (size_t assign = 0; assign < total; ++assign) {
    for (int i = 0; i < g.n_nodes; ++i)
      bits[i] = static_cast<int>((assign >> (g.n_nodes - 1 - i)) & 1u);
    const double v = g.cut_value(bits);
    if (v > best.value) {  // ascending scan: lowest binary value wins ties
      best.value = v;
      best.bits = bits;
    }
  }
  return best;
}

}  // namespace freeferm
