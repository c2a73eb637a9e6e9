#pragma once

// Scalar curvature as a sum over eigenvalue triples, its normalization to
// trace-one states and the closed forms available for the three built-in
// metrics.

#include <optional>
#include <span>
#include <vector>

#include "monocurv/mcfun.hpp"
#include "monocurv/states.hpp"

namespace monocurv {

enum class HTerm { H1, H2, H3, H4, H };

/// The triple kernels h1..h4, h = h1 - h2/2 + 2 h3 - h4, and the
/// sectional-curvature functions A, B, C of the coordinate planes.
/// All evaluators accept coincident arguments.
class HKernel {
 public:
  explicit HKernel(MorozovaChentsovFunction c) : c_(std::move(c)) {}

  const MorozovaChentsovFunction& function() const noexcept { return c_; }

  /// (c(x,y) - z c(x,z) c(y,z)) / ((x-z)(y-z) c(x,z) c(y,z))
  double h1(double x, double y, double z) const;
  /// c[x,y ; z]^2 / (c(x,y) c(x,z) c(y,z))
  double h2(double x, double y, double z) const;
  /// z ((ln c)'(z,x) - (ln c)'(z,y)) / (x - y)
  double h3(double x, double y, double z) const;
  /// z (ln c)'(z,x) (ln c)'(z,y)
  double h4(double x, double y, double z) const;
  double h(double x, double y, double z) const;
  /// (h(x,y,z) + h(y,z,x) + h(z,x,y)) / 3
  double h_sym(double x, double y, double z) const;
  /// h(x,x,x) = 15/(8x) - 3 x^2 c20(x,x).
  double h_diag(double x) const;

  /// K(b_11, b_12) at diag(x,y), through A(x,y) = 2 C(x,y,x).
  double A(double x, double y) const { return 2.0 * C(x, y, x); }
  /// K(b_12, b~_12) at diag(x,y).
  double B(double x, double y) const;
  /// K(b_13, b_23) at diag(x,y,z).
  double C(double x, double y, double z) const;
  /// The printed closed form for C(x,x,y).
  double C_xxy(double x, double y) const;

 private:
  MorozovaChentsovFunction c_;
};

double h_eval(const HKernel& k, HTerm which, double x, double y, double z);
inline double h_diag(const HKernel& k, double x) { return k.h_diag(x); }

/// S = sum over all n^3 ordered triples of h minus sum_x h(x,x,x); with
/// `symmetrized` the kernel h_sym is summed instead (same value).
double scalar_theorem1(const HKernel& k, std::span<const double> spectrum, bool symmetrized = false);

/// S^1 = S + (n^2-1)(n^2-2)/4.
double normalize_scalar(double unnormalized, Eigen::Index n);
double denormalize_scalar(double normalized, Eigen::Index n);

/// S^1 at the trace state 1/n: (n^2-1)(17 n^3 - 4n - 24 c20(1/n,1/n)) / (8n).
double trace_state_scalar(const HKernel& k, Eigen::Index n);
/// Built-in closed forms (n^2-1)(5n^2-4)/8, (1-n^2)(7n^2+4)/8, (n^2-1)(n^2-4)/8.
/// Throws InvalidArgument for Custom.
double trace_state_closed_form(MetricKind kind, Eigen::Index n);

/// Per-term breakdown of the triple sum.
struct CurvatureReport {
  Eigen::Index n = 0;
  double scalar = 0.0;             ///< S on the full cone
  double normalized_scalar = 0.0;  ///< S^1, meaningful for trace-one spectra
  double sum_h1 = 0.0, sum_h2 = 0.0, sum_h3 = 0.0, sum_h4 = 0.0;
  double diagonal = 0.0;  ///< sum_x h(x,x,x)
};

CurvatureReport curvature_report(const HKernel& k, std::span<const double> spectrum);

/// Relative residuals of the dimension recurrences for S, computed with h_sym:
///   (n-3) S(all) = sum_i S(all but i) - sum_{i<j} S(i,j)            (n >= 3)
///   S(all) = sum_{i<j<k} S(i,j,k) - (n-3) sum_{i<j} S(i,j)           (n > 3)
struct RecurrenceResidual {
  double drop_one = 0.0;
  std::optional<double> triples;
};

/// Throws DimensionTooSmall for n < 3.
RecurrenceResidual recurrence_check(const HKernel& k, std::span<const double> spectrum);

/// Closed-form A, B, C against sectional curvatures of coordinate planes at
/// diagonal states, plus the two identities relating them. Residuals are
/// relative to max(|lhs|, |rhs|, 1/max(x,y,z)).
struct AbcReport {
  double A = 0.0, B = 0.0, C = 0.0, C_xxy = 0.0;
  double A_sectional = 0.0, B_sectional = 0.0, C_sectional = 0.0;
  double b_vs_sectional = 0.0;     ///< B(x,y) vs K(b_12, b~_12) at diag(x,y)
  double c_vs_sectional = 0.0;     ///< C(x,y,z) vs K(b_13, b_23) at diag(x,y,z)
  double a_identity = 0.0;         ///< K(b_11, b_12) vs 2 C(x,y,x)
  double b_identity = 0.0;         ///< B(x,y) vs 2 C(x,x,y) + 2 C(y,y,x)
  double c_xxy_vs_limit = 0.0;     ///< printed C(x,x,y) vs the general C at (x,x,y)
};

AbcReport abc_crosscheck(const HKernel& k, double x, double y, double z);

/// (3/2) sum z/((x+z)(y+z)) - (3/8) sum 1/x.
double bures_scalar(std::span<const double> spectrum);

/// -(5/2) sum_z z (sum_x 1/(x+z))^2 + n sum_{x,z} 1/(x+z) + (9/8 - n^2) sum 1/x.
double largest_scalar(std::span<const double> spectrum);

/// Elementary symmetric polynomials e_0 = 1, e_1, ..., e_n.
std::vector<double> elementary_symmetric(std::span<const double> spectrum);
/// The same invariants of a matrix via the Faddeev-LeVerrier recursion.
std::vector<double> characteristic_invariants(const CMatrix& m);

/// Companion matrix E with superdiagonal ones and last row
/// (-1)^(n-j) e_(n+1-j), j = 1..n; its characteristic polynomial is that of rho.
Eigen::MatrixXd companion_matrix(std::span<const double> invariants);

/// Largest-metric scalar curvature through the companion matrix:
///   -(5/2) Tr E chi'(-E)^2 chi(-E)^-2 - n Tr chi'(-E) chi(-E)^-1 + (9/8 - n^2) Tr E^-1
/// with chi(t) = det(rho - t). Throws SingularCompanion.
double largest_scalar_companion(std::span<const double> spectrum);
double largest_scalar_companion_from_invariants(std::span<const double> invariants);

namespace kubo_mori {

/// psi(r) = (1 - r + ln r) / ((r - 1) ln r), so z (ln c)'(z,x) = psi(x/z).
double psi(double r);
double dpsi(double r);
double d2psi(double r);

/// d(x,y,z) = z (3/2 ((ln c)'(z,x) - (ln c)'(z,y))/(x-y) - (ln c)'(z,x) (ln c)'(z,y)),
/// evaluated from psi. Symmetric in x, y; same symmetrization as h.
double d(double x, double y, double z);
/// Partial derivatives of d in its first and third arguments.
double d_dx(double x, double y, double z);
double d_dz(double x, double y, double z);

}  // namespace kubo_mori

/// Sum of d over triples minus sum of d(x,x,x), plus (n^2-1)(n^2-2)/4 when normalized.
double kubo_mori_scalar(std::span<const double> spectrum, bool normalized);

}  // namespace monocurv
