#include "freeferm/measure.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <thread>

namespace freeferm {

namespace {
constexpr double kImagTol = 1e-8;
}

void MeasurementQuery::validate(int n_modes) const {
  if (static_cast<int>(x.size()) != n_modes ||
      static_cast<int>(mask.size()) != n_modes)
    throw std::invalid_argument("query x/mask length must equal n_modes");
  size_t k = 0;
  for (int m : mask) {
    if (m != 0 && m != 1) throw std::invalid_argument("mask bits must be 0/1");
    k += static_cast<size_t>(m);
  }
  for (int b : x)
    if (b != 0 && b != 1) throw std::invalid_argument("x bits must be 0/1");
  for (int b : y)
    if (b != 0 && b != 1) throw std::invalid_argument("y bits must be 0/1");
  if (y.size() != k)
    throw std::invalid_argument("y length must equal popcount(mask)");
}

TMatrix build_t(const Matrix& r) {
  const int n = static_cast<int>(r.rows()) / 2;
  TMatrix t;
  t.entries = CMatrix(n, 2 * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < 2 * n; ++j)
      t.entries(i, j) = 0.5 * Complex(r(j, 2 * i), r(j, 2 * i + 1));
  return t;
}

WickSystem build_wick_system(const TMatrix& t, const MeasurementQuery& q) {
  const int n = static_cast<int>(t.entries.rows());
  q.validate(n);
  WickSystem sys;
  sys.n_modes = n;
  for (int p = 0; p < n; ++p)
    if (q.x[p] == 1) sys.ket_basis.push_back(2 * p);
  sys.bra_basis.assign(sys.ket_basis.rbegin(), sys.ket_basis.rend());

  int k = 0;
  for (int m : q.mask) k += m;
  sys.middle = CMatrix(2 * k, 2 * n);
  int row = 0, yi = 0;
  for (int j = 0; j < n; ++j) {
    if (!q.mask[j]) continue;
    // Projector a_j^dag a_j (outcome 1) or a_j a_j^dag (outcome 0),
    // conjugated: rows of conj(T) and T in the matching order.
    if (q.y[yi] == 1) {
      sys.middle.row(row++) = t.entries.row(j).conjugate();
      sys.middle.row(row++) = t.entries.row(j);
    } else {
      sys.middle.row(row++) = t.entries.row(j);
      sys.middle.row(row++) = t.entries.row(j).conjugate();
    }
    ++yi;
  }
  return sys;
}

CMatrix WickSystem::dense_vectors() const {
  const int total = size();
  CMatrix v = CMatrix::Zero(total, 2 * n_modes);
  int r = 0;
  for (int q : bra_basis) v(r++, q) = 1.0;
  v.middleRows(r, middle.rows()) = middle;
  r += static_cast<int>(middle.rows());
  for (int q : ket_basis) v(r++, q) = 1.0;
  return v;
}

// M_{ab} = v_a^T G v_b for a < b, with G = I + i*Omega. Basis vectors make
// most blocks index lookups; only the projector rows need a real product.
ComplexSkewMatrix wick_contraction_matrix(const WickSystem& sys) {
  const int l = static_cast<int>(sys.bra_basis.size());
  const int k2 = static_cast<int>(sys.middle.rows());
  const int total = 2 * l + k2;

  // V*G with (V*Omega)[:,2i] = -V[:,2i+1], (V*Omega)[:,2i+1] = V[:,2i].
  CMatrix vg = sys.middle;
  for (int i = 0; i < sys.n_modes; ++i) {
    vg.col(2 * i) += Complex(0, -1) * sys.middle.col(2 * i + 1);
    vg.col(2 * i + 1) += Complex(0, 1) * sys.middle.col(2 * i);
  }

  CMatrix m = CMatrix::Zero(total, total);

  // bra x bra and ket x ket: even-index Majoranas contract to delta (zero
  // off-diagonal); bra x ket: delta on matching positions.
  for (int a = 0; a < l; ++a)
    for (int b = 0; b < l; ++b)
      if (sys.bra_basis[a] == sys.ket_basis[b]) m(a, l + k2 + b) = 1.0;

  // bra x middle: e_{2p}^T G v = v_{2p} + i v_{2p+1}.
  for (int a = 0; a < l; ++a) {
    const int q = sys.bra_basis[a];
    for (int b = 0; b < k2; ++b)
      m(a, l + b) = sys.middle(b, q) + Complex(0, 1) * sys.middle(b, q + 1);
  }

  // middle x ket: v^T G e_{2p} = (V G)_{., 2p}.
  for (int a = 0; a < k2; ++a)
    for (int b = 0; b < l; ++b)
      m(l + a, l + k2 + b) = vg(a, sys.ket_basis[b]);

  // middle x middle.
  if (k2 > 0)
    m.block(l, l, k2, k2).noalias() = vg * sys.middle.transpose();

  CMatrix skew = CMatrix::Zero(total, total);
  for (int a = 0; a < total; ++a)
    for (int b = a + 1; b < total; ++b) {
      skew(a, b) = m(a, b);
      skew(b, a) = -m(a, b);
    }
  return ComplexSkewMatrix(skew);
}

double probability_with_t(const TMatrix& t, const MeasurementQuery& q, int n_modes) {
  (void)n_modes;
  WickSystem sys = build_wick_system(t, q);
  ComplexSkewMatrix m = wick_contraction_matrix(sys);
  Complex pf = pfaffian(m);
  if (std::abs(pf.imag()) >= kImagTol) throw ImaginaryResidual(pf.imag());
  return std::clamp(pf.real(), 0.0, 1.0);
}

double probability(const Circuit& circuit, const MeasurementQuery& q) {
  TMatrix t = build_t(circuit_r_matrix(circuit));
  return probability_with_t(t, q, circuit.n_modes);
}

std::vector<double> probability_batch(const Circuit& circuit,
                                      const std::vector<MeasurementQuery>& queries,
                                      bool parallel) {
  TMatrix t = build_t(circuit_r_matrix(circuit));
  std::vector<double> out(queries.size());
  std::exception_ptr error;
  std::mutex error_mutex;
  auto eval_range = [&](size_t begin, size_t end) {
    try {
      for (size_t i = begin; i < end; ++i)
        out[i] = probability_with_t(t, queries[i], circuit.n_modes);
    } catch (...) {
      std::lock_guard<std::mutex> lock(error_mutex);
      if (!error) error = std::current_exception();
    }
  };
  const unsigned hw = std::thread::hardware_concurrency();
  const size_t n_threads =
      parallel ? std::min<size_t>(queries.size(), hw ? hw : 1) : 1;
  if (n_threads <= 1) {
    eval_range(0, queries.size());
    return out;
  }
  std::vector<std::thread> workers;
  const size_t chunk = (queries.size() + n_threads - 1) / n_threads;
  for (size_t w = 0; w < n_threads; ++w) {
    const size_t begin = w * chunk;
    const size_t end = std::min(queries.size(), begin + chunk);
    if (begin >= end) break;
    workers.emplace_back(eval_range, begin, end);
  }
  for (auto& th : workers) th.join();
  if (error) std::rethrow_exception(error);
  return out;
}

}  // namespace freeferm
