#pragma once

#include <complex>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

namespace freeferm {

using Matrix = Eigen::MatrixXd;
using CMatrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXd;
using CVector = Eigen::VectorXcd;
using Complex = std::complex<double>;

/// Real skew-symmetric 2N x 2N coefficient matrix of a quadratic Majorana
/// Hamiltonian H = (i/4) c^T A c. Antisymmetrized at construction.
class SkewMatrix {
 public:
  explicit SkewMatrix(const Matrix& entries);
  static SkewMatrix Zero(int n_modes);

  int n_modes() const { return static_cast<int>(entries_.rows()) / 2; }
  int dim() const { return static_cast<int>(entries_.rows()); }
  const Matrix& entries() const { return entries_; }

 private:
  Matrix entries_;
};

/// A = W^T BlockDiag([[0, lambda_j], [-lambda_j, 0]]) W with W orthogonal and
/// lambda_j >= 0, sorted descending.
struct CanonicalForm {
  Matrix w;
  Vector lambdas;

  Matrix reconstruct() const;
};

/// Complex skew-symmetric matrix of even dimension (Wick contraction matrix).
class ComplexSkewMatrix {
 public:
  explicit ComplexSkewMatrix(const CMatrix& entries);
  static ComplexSkewMatrix Zero(int dim);

  int dim() const { return static_cast<int>(entries_.rows()); }
  const CMatrix& entries() const { return entries_; }
  CMatrix& mutable_entries() { return entries_; }

 private:
  CMatrix entries_;
};

CanonicalForm canonical_decompose(const SkewMatrix& a);

/// exp(-A t), computed through the canonical form. Orthogonal with det +1.
Matrix skew_exp(const SkewMatrix& a, double t);

/// Pfaffian by skew-symmetric elimination to tridiagonal form with partial
/// pivoting. Pf of the 0x0 matrix is 1.
Complex pfaffian(const ComplexSkewMatrix& m);

/// In-place variant; destroys the work buffer.
Complex pfaffian_inplace(CMatrix& work);

/// Exact Pfaffian as the signed sum over perfect matchings. Test oracle,
/// dim <= 12.
Complex pfaffian_matching_oracle(const ComplexSkewMatrix& m);

}  // namespace freeferm
