#include "freeferm/skew.hpp"

#include <cmath>

namespace freeferm {

namespace {
constexpr double kPivotTol = 1e-14;
}

SkewMatrix::SkewMatrix(const Matrix& entries) {
  if (entries.rows() != entries.cols())
    throw std::invalid_argument("SkewMatrix: input must be square");
  if (entries.rows() % 2 != 0 || entries.rows() == 0)
    throw std::invalid_argument("SkewMatrix: dimension must be positive and even");
  entries_ = 0.5 * (entries - entries.transpose());
  entries_.diagonal().setZero();
}

SkewMatrix SkewMatrix::Zero(int n_modes) {
  return SkewMatrix(Matrix::Zero(2 * n_modes, 2 * n_modes));
}

Matrix CanonicalForm::reconstruct() const {
  const int n = static_cast<int>(lambdas.size());
  Matrix blocks = Matrix::Zero(2 * n, 2 * n);
  for (int j = 0; j < n; ++j) {
    blocks(2 * j, 2 * j + 1) = lambdas[j];
    blocks(2 * j + 1, 2 * j) = -lambdas[j];
  }
  return w.transpose() * blocks * w;
}

ComplexSkewMatrix::ComplexSkewMatrix(const CMatrix& entries) {
  if (entries.rows() != entries.cols())
    throw std::invalid_argument("ComplexSkewMatrix: input must be square");
  if (entries.rows() % 2 != 0)
    throw std::invalid_argument("ComplexSkewMatrix: dimension must be even");
  entries_ = 0.5 * (entries - entries.transpose());
  entries_.diagonal().setZero();
}

ComplexSkewMatrix ComplexSkewMatrix::Zero(int dim) {
  return ComplexSkewMatrix(CMatrix::Zero(dim, dim));
}

// The rows of W come from the eigenvectors of the Hermitian matrix i*A.
// For an eigenpair (-lambda, z) with lambda >= 0 and z = u + iv, the real
// vectors sqrt(2)*u, sqrt(2)*v form one canonical block row pair:
//   A u = -lambda v,  A v = lambda u  =>  (W A W^T) block = [[0,l],[-l,0]].
// A modified Gram-Schmidt pass repairs the kernel rows (where u and v need
// not be orthogonal) and completes the basis if a row degenerates.
CanonicalForm canonical_decompose(const SkewMatrix& a) {
  const int dim = a.dim();
  const int n = a.n_modes();
  CMatrix ia = Complex(0.0, 1.0) * a.entries().cast<Complex>();
  Eigen::SelfAdjointEigenSolver<CMatrix> es(ia);
  // Eigenvalues ascending: the first n are -lambda with lambda descending.
  CanonicalForm cf;
  cf.lambdas = Vector(n);
  cf.w = Matrix(dim, dim);
  const double sqrt2 = std::sqrt(2.0);
  for (int j = 0; j < n; ++j) {
    cf.lambdas[j] = std::max(0.0, -es.eigenvalues()[j]);
    CVector z = es.eigenvectors().col(j);
    cf.w.row(2 * j) = sqrt2 * z.real().transpose();
    cf.w.row(2 * j + 1) = sqrt2 * z.imag().transpose();
  }

  for (int r = 0; r < dim; ++r) {
    Vector row = cf.w.row(r).transpose();
    for (int pass = 0; pass < 2; ++pass)
      for (int s = 0; s < r; ++s)
        row -= cf.w.row(s).transpose().dot(row) * cf.w.row(s).transpose();
    double nrm = row.norm();
    if (nrm < 1e-6) {
      // Degenerate kernel row: complete from the canonical basis.
      double best_nrm = -1.0;
      Vector cand;
      for (int k = 0; k < dim; ++k) {
        Vector e = Vector::Unit(dim, k);
        for (int s = 0; s < r; ++s)
          e -= cf.w.row(s).transpose().dot(e) * cf.w.row(s).transpose();
        if (e.norm() > best_nrm) {
          best_nrm = e.norm();
          cand = e;
        }
      }
      for (int s = 0; s < r; ++s)
        cand -= cf.w.row(s).transpose().dot(cand) * cf.w.row(s).transpose();
      row = cand;
      nrm = row.norm();
    }
    cf.w.row(r) = row.transpose() / nrm;
  }
  return cf;
}

Matrix skew_exp(const SkewMatrix& a, double t) {
  CanonicalForm cf = canonical_decompose(a);
  const int n = a.n_modes();
  Matrix rot = Matrix::Zero(2 * n, 2 * n);
  for (int j = 0; j < n; ++j) {
    const double th = cf.lambdas[j] * t;
    rot(2 * j, 2 * j) = std::cos(th);
    rot(2 * j, 2 * j + 1) = -std::sin(th);
    rot(2 * j + 1, 2 * j) = std::sin(th);
    rot(2 * j + 1, 2 * j + 1) = std::cos(th);
  }
  return cf.w.transpose() * rot * cf.w;
}

Complex pfaffian_inplace(CMatrix& m) {
  const Eigen::Index n = m.rows();
  if (n == 0) return Complex(1.0, 0.0);
  Complex pf(1.0, 0.0);
  for (Eigen::Index k = 0; k + 1 < n; k += 2) {
    // Pivot: largest-magnitude entry in column k below the diagonal.
    Eigen::Index kp = k + 1;
    double best = std::abs(m(k + 1, k));
    for (Eigen::Index i = k + 2; i < n; ++i) {
      if (std::abs(m(i, k)) > best) {
        best = std::abs(m(i, k));
        kp = i;
      }
    }
    if (best < kPivotTol) return Complex(0.0, 0.0);
    if (kp != k + 1) {
      m.row(k + 1).swap(m.row(kp));
      m.col(k + 1).swap(m.col(kp));
      pf = -pf;
    }
    pf *= m(k, k + 1);
    if (k + 2 < n) {
      const Eigen::Index r = n - k - 2;
      CVector tau = m.block(k + 2, k, r, 1) / m(k + 1, k);
      CVector col = m.block(k + 2, k + 1, r, 1);
      m.block(k + 2, k + 2, r, r).noalias() += tau * col.transpose();
      m.block(k + 2, k + 2, r, r).noalias() -= col * tau.transpose();
    }
  }
  return pf;
}

Complex pfaffian(const ComplexSkewMatrix& m) {
  CMatrix work = m.entries();
  return pfaffian_inplace(work);
}

namespace {

Complex matching_sum(const CMatrix& m, std::vector<int>& idx) {
  if (idx.empty()) return Complex(1.0, 0.0);
  const int i0 = idx.front();
  Complex total(0.0, 0.0);
  double sign = 1.0;
  for (size_t r = 1; r < idx.size(); ++r) {
    const int j = idx[r];
    std::vector<int> rest;
    rest.reserve(idx.size() - 2);
    for (size_t s = 1; s < idx.size(); ++s)
      if (s != r) rest.push_back(idx[s]);
    total += sign * m(i0, j) * matching_sum(m, rest);
    sign = -sign;
  }
  return total;
}

}  // namespace

Complex pfaffian_matching_oracle(const ComplexSkewMatrix& m) {
  if (m.dim() > 12)
    throw std::invalid_argument("pfaffian_matching_oracle: dim > 12");
  std::vector<int> idx(m.dim());
  for (int i = 0; i < m.dim(); ++i) idx[i] = i;
  return matching_sum(m.entries(), idx);
}

}  // namespace freeferm
