#pragma once

// Positive density matrices, Hermitian tangent vectors and the spectral
// data every curvature computation is expressed in.

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace monocurv {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;

/// Absolute for matrices of unit size, scaled by the largest entry otherwise.
inline constexpr double kHermitianTolerance = 1e-12;
inline constexpr double kTraceTolerance = 1e-12;

/// Positive definite Hermitian n x n matrix, n >= 2. Not necessarily of
/// trace one; `is_normalized()` tells.
class DensityMatrix {
 public:
  /// Throws NotHermitian, NotPositiveDefinite or DimensionTooSmall.
  explicit DensityMatrix(CMatrix entries);

  static DensityMatrix diagonal(std::span<const double> spectrum);

  const CMatrix& matrix() const noexcept { return entries_; }
  Eigen::Index dim() const noexcept { return entries_.rows(); }
  double trace() const { return entries_.trace().real(); }
  bool is_normalized(double tolerance = kTraceTolerance) const;

 private:
  CMatrix entries_;
};

/// Hermitian matrix; a tangent vector of the positive cone.
class TangentVector {
 public:
  /// Throws NotHermitian.
  explicit TangentVector(CMatrix entries);
  /// The radial field N at rho, N_rho = rho.
  static TangentVector radial(const DensityMatrix& rho) { return TangentVector(rho.matrix()); }

  const CMatrix& matrix() const noexcept { return entries_; }
  Eigen::Index dim() const noexcept { return entries_.rows(); }
  /// Tangent to the trace-one submanifold.
  bool is_traceless(double tolerance = kTraceTolerance) const;

  TangentVector operator+(const TangentVector& o) const { return TangentVector(entries_ + o.entries_); }
  TangentVector operator-(const TangentVector& o) const { return TangentVector(entries_ - o.entries_); }
  TangentVector operator*(double s) const { return TangentVector(entries_ * s); }
  TangentVector operator-() const { return TangentVector(-entries_); }

 private:
  CMatrix entries_;
};

inline TangentVector operator*(double s, const TangentVector& v) { return v * s; }

/// rho = U diag(lambda) U^*, eigenvalues ascending, each eigenvector
/// phased so that its largest-magnitude component is real positive.
struct SpectralDecomposition {
  Eigen::VectorXd eigenvalues;
  CMatrix eigenvectors;

  CMatrix reconstruct() const;
};

/// Throws NotPositiveDefinite when lambda_min <= 1e-12 lambda_max.
SpectralDecomposition decompose(const DensityMatrix& rho);

/// b_ii = 2 e_ii, then b_ij = e_ij + e_ji and b~_ij = i(e_ij - e_ji) for
/// i < j, in that order: n^2 trace-orthogonal Hermitian matrices.
std::vector<TangentVector> basis_vectors(Eigen::Index n);

/// Index helpers into basis_vectors(n).
std::size_t basis_index_diag(Eigen::Index n, Eigen::Index i);
std::size_t basis_index_real(Eigen::Index n, Eigen::Index i, Eigen::Index j);
std::size_t basis_index_imag(Eigen::Index n, Eigen::Index i, Eigen::Index j);

/// Haar-random unitary conjugate of a spectrum drawn log-uniformly from
/// [1, spread], so lambda_max/lambda_min <= spread. Deterministic in seed.
DensityMatrix random_state(Eigen::Index n, std::uint64_t seed, double spread, bool normalized = false);

/// Haar-random n x n unitary (QR of a complex Ginibre matrix).
CMatrix random_unitary(Eigen::Index n, std::uint64_t seed);

/// Random Hermitian matrix with Gaussian entries; traceless if asked.
TangentVector random_tangent(Eigen::Index n, std::uint64_t seed, bool traceless = false);

}  // namespace monocurv
