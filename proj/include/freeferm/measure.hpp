#pragma once

#include <vector>

#include "freeferm/gates.hpp"

namespace freeferm {

/// Raised when the Pfaffian of the contraction matrix has an imaginary part
/// above tolerance, which signals an assembly bug rather than rounding.
class ImaginaryResidual : public std::runtime_error {
 public:
  explicit ImaginaryResidual(double imag)
      : std::runtime_error("probability has imaginary residual " +
                           std::to_string(imag)) {}
};

/// T_{ij} = (R_{j,2i} + i R_{j,2i+1}) / 2, so that U^dag a_i U = sum_j T_{ij} c_j.
struct TMatrix {
  CMatrix entries;  // N x 2N

  CMatrix conjugate() const { return entries.conjugate(); }
};

struct MeasurementQuery {
  std::vector<int> x;     // N input bits
  std::vector<int> mask;  // N bits, 1 = measured
  std::vector<int> y;     // popcount(mask) outcome bits, ascending qubit order

  void validate(int n_modes) const;
};

/// The ordered Majorana coefficient vectors whose pairwise vacuum
/// contractions form the Pfaffian matrix M, plus dimensions. Basis vectors
/// (input-string Majoranas) are stored as indices, measurement operators as
/// dense rows of T / conj(T).
struct WickSystem {
  int n_modes = 0;
  std::vector<int> bra_basis;  // Majorana indices 2p, descending p
  CMatrix middle;              // 2k x 2N, projector operator rows in order
  std::vector<int> ket_basis;  // Majorana indices 2p, ascending p

  int size() const {
    return static_cast<int>(bra_basis.size() + middle.rows() + ket_basis.size());
  }
  /// Dense stack of all coefficient vectors in contraction order (test hook).
  CMatrix dense_vectors() const;
};

TMatrix build_t(const Matrix& r);

WickSystem build_wick_system(const TMatrix& t, const MeasurementQuery& q);

/// The contraction matrix M_{ab} = v_a^T G v_b (a < b) with vacuum covariance
/// G = I + i*Omega.
ComplexSkewMatrix wick_contraction_matrix(const WickSystem& sys);

double probability(const Circuit& circuit, const MeasurementQuery& q);

/// probability() for a shared circuit whose R has been computed once.
double probability_with_t(const TMatrix& t, const MeasurementQuery& q, int n_modes);

std::vector<double> probability_batch(const Circuit& circuit,
                                      const std::vector<MeasurementQuery>& queries,
                                      bool parallel = true);

}  // namespace freeferm
