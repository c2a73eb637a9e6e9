#pragma once

// Brute-force scalar curvature in coordinates: metric coefficients sampled
// on a finite-difference stencil, Christoffel symbols and the curvature
// tensor assembled from their derivatives. Shares no code with the
// divided-difference path in geometry.

#include <functional>

#include <Eigen/Dense>

#include "monocurv/geometry.hpp"

namespace monocurv {

/// Metric coefficient matrix at chart coordinates p (the base point is p = 0).
using ChartMetric = std::function<Eigen::MatrixXd(const Eigen::VectorXd&)>;

struct ChartSteps {
  double first = 1e-3;   ///< central-difference step for first derivatives
  double second = 5e-3;  ///< step for second derivatives
};

/// Condition number above which the chart metric is rejected.
inline constexpr double kMaxChartCondition = 1e12;

/// Scalar curvature g^{il} g^{km} R_iklm at p = 0 of a dim-dimensional chart,
/// with R_iklm = 1/2 (g_im,kl + g_kl,im - g_il,km - g_km,il)
///             + g_np (Gamma^n_kl Gamma^p_im - Gamma^n_km Gamma^p_il).
/// Central differences with one Richardson level. Positive on spheres.
/// Throws IllConditioned.
double chart_scalar_curvature(const ChartMetric& metric, Eigen::Index dim, ChartSteps steps);

/// Scalar curvature of the monotone metric at ctx.state() computed in the
/// affine chart of Hermitian matrices (traceless Hermitian matrices when
/// normalized) with steps 1e-3 |rho| and 5e-3 |rho|, capped at a tenth of
/// the smallest eigenvalue.
double oracle_scalar(const MetricContext& ctx, bool normalized);

}  // namespace monocurv
