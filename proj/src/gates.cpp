#include "freeferm/gates.hpp"

#include <cmath>
#include <set>

namespace freeferm {

namespace {

// General-block coefficients (a,b,c,d,e,f) equivalent to Preserving(a,b,c,d).
std::array<double, 6> preserving_as_general(const std::vector<double>& p) {
  return {p[3], p[2], -p[2], p[3], p[0], p[1]};
}

// Adds the quadratic block for modes (i, j) into A: rows/cols
// (2i, 2i+1, 2j, 2j+1) carry [[0,e,a,b],[-e,0,c,d],[-a,-c,0,f],[-b,-d,-f,0]].
void add_general_block(Matrix& a_mat, int i, int j, const std::array<double, 6>& p) {
  const auto [a, b, c, d, e, f] = p;
  const int r0 = 2 * i, r1 = 2 * i + 1, r2 = 2 * j, r3 = 2 * j + 1;
  auto set = [&](int r, int c, double v) {
    a_mat(r, c) += v;
    a_mat(c, r) -= v;
  };
  set(r0, r1, e);
  set(r0, r2, a);
  set(r0, r3, b);
  set(r1, r2, c);
  set(r1, r3, d);
  set(r2, r3, f);
}

std::array<double, 6> general_params(const GateSpec& gate) {
  if (gate.kind == GateKind::Preserving) return preserving_as_general(gate.params);
  return {gate.params[0], gate.params[1], gate.params[2],
          gate.params[3], gate.params[4], gate.params[5]};
}

void check_pair(int i, int j, int n_modes) {
  if (i < 0 || j >= n_modes || i >= j)
    throw std::invalid_argument("gate mode pair out of range: (" + std::to_string(i) +
                            ", " + std::to_string(j) + ") for N=" + std::to_string(n_modes));
}

}  // namespace

int GateSpec::param_count() const {
  if (kind == GateKind::DenseLayer) return 6 * static_cast<int>(blocks.size());
  return kind == GateKind::Preserving ? 4 : 6;
}

GateSpec GateSpec::preserving(int i, int j, std::array<double, 4> p, double t) {
  GateSpec g;
  g.kind = GateKind::Preserving;
  g.i = i;
  g.j = j;
  g.params.assign(p.begin(), p.end());
  g.time = t;
  return g;
}

GateSpec GateSpec::general(int i, int j, std::array<double, 6> p, double t) {
  GateSpec g;
  g.kind = GateKind::General;
  g.i = i;
  g.j = j;
  g.params.assign(p.begin(), p.end());
  g.time = t;
  return g;
}

GateSpec GateSpec::dense_layer(std::vector<PairBlock> blocks, double t) {
  GateSpec g;
  g.kind = GateKind::DenseLayer;
  g.blocks = std::move(blocks);
  g.time = t;
  return g;
}

int Circuit::param_count() const {
  int total = 0;
  for (const auto& g : gates) total += g.param_count();
  return total;
}

void validate_gate(const GateSpec& gate, int n_modes) {
  auto check_finite = [](const double* p, size_t n) {
    for (size_t k = 0; k < n; ++k)
      if (!std::isfinite(p[k])) throw std::invalid_argument("gate parameter not finite");
  };
  if (!std::isfinite(gate.time)) throw std::invalid_argument("gate time not finite");
  if (gate.kind == GateKind::DenseLayer) {
    std::set<std::pair<int, int>> seen;
    for (const auto& blk : gate.blocks) {
      check_pair(blk.i, blk.j, n_modes);
      check_finite(blk.params.data(), 6);
      if (!seen.insert({blk.i, blk.j}).second)
        throw std::invalid_argument("duplicate pair in dense layer");
    }
  } else {
    check_pair(gate.i, gate.j, n_modes);
    const size_t expect = gate.kind == GateKind::Preserving ? 4 : 6;
    if (gate.params.size() != expect)
      throw std::invalid_argument("gate parameter count mismatch");
    check_finite(gate.params.data(), expect);
  }
}

SkewMatrix assemble_alpha(const GateSpec& gate, int n_modes) {
  validate_gate(gate, n_modes);
  Matrix a = Matrix::Zero(2 * n_modes, 2 * n_modes);
  if (gate.kind == GateKind::DenseLayer) {
    for (const auto& blk : gate.blocks) add_general_block(a, blk.i, blk.j, blk.params);
  } else {
    add_general_block(a, gate.i, gate.j, general_params(gate));
  }
  return SkewMatrix(a);
}

Matrix gate_r_matrix(const GateSpec& gate, int n_modes) {
  return skew_exp(assemble_alpha(gate, n_modes), gate.time);
}

namespace {

// 4x4 R block of a pair gate in the local Majorana order (2i,2i+1,2j,2j+1),
// obtained from the equivalent two-mode problem.
Matrix pair_gate_block(const GateSpec& gate) {
  Matrix local = Matrix::Zero(4, 4);
  add_general_block(local, 0, 1, general_params(gate));
  return skew_exp(SkewMatrix(local), gate.time);
}

}  // namespace

Matrix circuit_r_matrix(const Circuit& circuit) {
  const int dim = 2 * circuit.n_modes;
  Matrix r = Matrix::Identity(dim, dim);
  for (const auto& gate : circuit.gates) {
    validate_gate(gate, circuit.n_modes);
    if (gate.kind == GateKind::DenseLayer) {
      r = r * gate_r_matrix(gate, circuit.n_modes);
    } else {
      // Right-multiplying by a gate that is identity outside the 4x4 block
      // touches only four columns of the accumulated product.
      const Matrix blk = pair_gate_block(gate);
      const std::array<int, 4> idx = {2 * gate.i, 2 * gate.i + 1,
                                      2 * gate.j, 2 * gate.j + 1};
      Matrix cols(dim, 4);
      for (int q = 0; q < 4; ++q) cols.col(q) = r.col(idx[q]);
      Matrix updated = cols * blk;
      for (int q = 0; q < 4; ++q) r.col(idx[q]) = updated.col(q);
    }
  }
  return r;
}

namespace {

std::vector<PauliTerm> block_terms(int i, int j, const std::array<double, 6>& p,
                                   int n_modes) {
  const auto [a, b, c, d, e, f] = p;
  std::vector<PauliTerm> terms;
  auto add_single = [&](double coef, int q) {
    if (coef == 0.0) return;
    PauliTerm t{coef, std::string(n_modes, 'I')};
    t.ops[q] = 'Z';
    terms.push_back(std::move(t));
  };
  auto add_string = [&](double coef, char left, char right) {
    if (coef == 0.0) return;
    PauliTerm t{coef, std::string(n_modes, 'I')};
    t.ops[i] = left;
    t.ops[j] = right;
    for (int k = i + 1; k < j; ++k) t.ops[k] = 'Z';
    terms.push_back(std::move(t));
  };
  add_single(-e / 2, i);
  add_single(-f / 2, j);
  add_string(-c / 2, 'X', 'X');
  add_string(b / 2, 'Y', 'Y');
  add_string(-d / 2, 'X', 'Y');
  add_string(a / 2, 'Y', 'X');
  return terms;
}

}  // namespace

std::vector<PauliTerm> pauli_decompose(const GateSpec& gate, int n_modes) {
  validate_gate(gate, n_modes);
  if (gate.kind == GateKind::DenseLayer) {
    std::vector<PauliTerm> all;
    for (const auto& blk : gate.blocks) {
      auto terms = block_terms(blk.i, blk.j, blk.params, n_modes);
      all.insert(all.end(), terms.begin(), terms.end());
    }
    return all;
  }
  return block_terms(gate.i, gate.j, general_params(gate), n_modes);
}

}  // namespace freeferm
