#pragma once

// Metric, flat derivatives, Levi-Civita connection and curvature of a
// monotone metric at a point of the positive cone, evaluated in the
// eigenbasis of the base point through divided differences of c.

#include <cstddef>
#include <vector>

#include "monocurv/mcfun.hpp"
#include "monocurv/states.hpp"

namespace monocurv {

class MetricContext {
 public:
  /// Metric-only contexts skip the derivative tables; they suffice for
  /// metric() and metric_gram() and are what the chart oracle builds at
  /// every stencil point.
  enum class Depth { MetricOnly, Full };

  MetricContext(MorozovaChentsovFunction c, DensityMatrix rho, Depth depth = Depth::Full);

  const MorozovaChentsovFunction& function() const noexcept { return c_; }
  const DensityMatrix& state() const noexcept { return rho_; }
  const SpectralDecomposition& spectrum() const noexcept { return spec_; }
  Eigen::Index dim() const noexcept { return rho_.dim(); }
  bool has_derivative_tables() const noexcept { return !first_.empty(); }

  /// U^* X U.
  CMatrix to_eigenbasis(const TangentVector& x) const;
  /// U A U^*.
  CMatrix from_eigenbasis(const CMatrix& a) const;

  /// c(lambda_a, lambda_b).
  double c_at(Eigen::Index a, Eigen::Index b) const { return cvals_[idx(a, b)]; }
  /// c[lambda_a, lambda_b ; lambda_d].
  double first_dd(Eigen::Index a, Eigen::Index b, Eigen::Index d) const { return first_[idx(a, b, d)]; }
  /// c[lambda_a, lambda_b, lambda_e ; lambda_d].
  double second_dd(Eigen::Index a, Eigen::Index b, Eigen::Index e, Eigen::Index d) const {
    return second_[idx(a, b, e, d)];
  }
  /// c[lambda_a, lambda_b ; lambda_e, lambda_d].
  double mixed_dd(Eigen::Index a, Eigen::Index b, Eigen::Index e, Eigen::Index d) const {
    return mixed_[idx(a, b, e, d)];
  }

 private:
  std::size_t idx(Eigen::Index a, Eigen::Index b) const { return static_cast<std::size_t>(a * n_ + b); }
  std::size_t idx(Eigen::Index a, Eigen::Index b, Eigen::Index d) const {
    return static_cast<std::size_t>((a * n_ + b) * n_ + d);
  }
  std::size_t idx(Eigen::Index a, Eigen::Index b, Eigen::Index e, Eigen::Index d) const {
    return static_cast<std::size_t>(((a * n_ + b) * n_ + e) * n_ + d);
  }

  MorozovaChentsovFunction c_;
  DensityMatrix rho_;
  SpectralDecomposition spec_;
  Eigen::Index n_;
  std::vector<double> cvals_, first_, second_, mixed_;
};

struct CurvatureValue {
  double value = 0.0;
  bool normalized = false;
};

/// g_rho(X, Y) = sum_ij conj(X^_ij) c(lambda_i, lambda_j) Y^_ij.
double metric(const MetricContext& ctx, const TangentVector& x, const TangentVector& y);

/// Matrix of g over a list of tangent vectors.
Eigen::MatrixXd metric_gram(const MetricContext& ctx, const std::vector<TangentVector>& vectors);

/// D_Z g(X, Y).
double metric_derivative(const MetricContext& ctx, const TangentVector& z, const TangentVector& x,
                         const TangentVector& y);

/// D_Z D_W g(X, Y); symmetric in (Z, W) and in (X, Y).
double metric_second_derivative(const MetricContext& ctx, const TangentVector& z, const TangentVector& w,
                                const TangentVector& x, const TangentVector& y);

/// Christoffel tensor with nabla_X Y = D_X Y + Gamma(X, Y).
TangentVector christoffel(const MetricContext& ctx, const TangentVector& x, const TangentVector& y);

/// Riemann tensor of the full cone. R(X,Y,X,Y) > 0 on round spheres.
double riemann(const MetricContext& ctx, const TangentVector& x, const TangentVector& y, const TangentVector& z,
               const TangentVector& w);

/// Riemann tensor of the trace-one submanifold (Gauss equation with the
/// unit normal rho). Throws NotNormalized / NotTangent.
double riemann_normalized(const MetricContext& ctx, const TangentVector& x, const TangentVector& y,
                          const TangentVector& z, const TangentVector& w);

/// Relative orthogonality tolerance used by sectional().
inline constexpr double kOrthogonalityTolerance = 1e-8;

/// K(X,Y) = R(X,Y,X,Y) / (g(X,X) g(Y,Y)) for g-orthogonal X, Y; with
/// normalized set the trace-one curvature R^1 is used. Throws NotOrthogonal.
CurvatureValue sectional(const MetricContext& ctx, const TangentVector& x, const TangentVector& y,
                         bool normalized);

/// g-orthogonal basis of the tangent space at rho: U b U^* for the
/// off-diagonal b_ij, b~_ij and either the b_ii (full cone) or a
/// Gram-Schmidt completion of e_kk - e_nn (traceless case).
std::vector<TangentVector> orthogonal_basis(const MetricContext& ctx, bool traceless);

/// Scalar curvature as the sum of sectional curvatures over ordered pairs
/// of orthogonal_basis(ctx, normalized).
double scalar_from_basis(const MetricContext& ctx, bool normalized);

}  // namespace monocurv
