#pragma once

// Numerical evidence for monotonicity of the Kubo-Mori scalar curvature
// under mixing: the symmetrized kernel h_s, majorization and T-transforms,
// the derivative inequalities that concavity of h_s implies, and seeded
// randomized scans.

#include <array>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "monocurv/scalar.hpp"

namespace monocurv {

/// h_s(x,y,z) and its partial derivative h_s'(x,y,z) in the first argument.
class SymmetrizedKernel {
 public:
  /// h_s = (d(x,y,z) + d(y,z,x) + d(z,x,y)) / 3 with an analytic h_s'.
  static SymmetrizedKernel kubo_mori();
  /// h_s = (h(x,y,z) + h(y,z,x) + h(z,x,y)) / 3; h_s' by finite differences.
  static SymmetrizedKernel generic(HKernel kernel);

  bool is_kubo_mori() const noexcept { return !kernel_.has_value(); }
  /// The underlying kernel of a generic instance, nullptr for Kubo-Mori.
  const HKernel* kernel() const noexcept { return kernel_ ? &*kernel_ : nullptr; }

  double value(double x, double y, double z) const;
  /// Analytic when available, otherwise dx_numeric.
  double dx(double x, double y, double z) const;
  /// Central difference with step eps^(1/3) max(x,1), one Richardson level.
  double dx_numeric(double x, double y, double z) const;
  /// (h_s'(x,y,z), h_s'(y,x,z), h_s'(z,x,y)).
  Eigen::Vector3d gradient(double x, double y, double z) const;

 private:
  SymmetrizedKernel() = default;
  std::optional<HKernel> kernel_;
};

/// The rational-logarithmic closed form of the Kubo-Mori h_s. Requires
/// pairwise distinct arguments (it is a removable-singularity expression).
double kubo_mori_hs_closed_form(double x, double y, double z);

/// True iff `more_mixed` is majorized by `less_mixed`: with both sorted
/// decreasingly, every partial sum of the former is <= that of the latter.
/// Throws LengthMismatch, SumMismatch (1e-10 relative) or InvalidArgument.
bool majorizes(std::span<const double> more_mixed, std::span<const double> less_mixed);

/// (x_i, x_j) -> ((1-t) x_i + t x_j, t x_i + (1-t) x_j).
struct MixingStep {
  std::size_t i = 0, j = 1;
  double t = 0.0;

  /// Accepts t in [0,1]; t > 1/2 is folded to 1 - t with i and j swapped.
  static MixingStep make(std::size_t i, std::size_t j, double t);
};

std::vector<double> t_transform(std::span<const double> spectrum, const MixingStep& step);

/// Left-minus-right sides of the four inequalities implied by concavity of h_s:
///   2h'(x,x,y) - h'(y,x,x) - 2h'(y,x,y) + h'(x,y,y)
///   h'(x,x,l) - h'(y,y,l)
///   h'(x,y,l) - h'(y,x,l)
///   h'(x,l,m) - h'(y,l,m)
/// all expected >= 0. Throws OrderViolation unless x < y.
std::array<double, 4> lemma4_check(const SymmetrizedKernel& k, double x, double y, double lambda, double mu);

/// Symmetric 3x3 Hessian of h_s: central differences (one Richardson level)
/// of the gradient with relative step 1e-3 per coordinate.
Eigen::Matrix3d hs_hessian(const SymmetrizedKernel& k, double x, double y, double z);

struct HessianMinors {
  double M1 = 0.0, M2 = 0.0, M3 = 0.0;
  /// Largest of |H_ij|, the scale the sign tolerance refers to.
  double scale = 0.0;
  /// Signed excess beyond the expected signs M1 <= 0, M2 >= 0, M3 <= 0,
  /// each normalized by scale^k; <= 0 means the pattern holds.
  double worst_excess() const noexcept;
};

HessianMinors hessian_minors(const SymmetrizedKernel& k, double x, double y, double z);

/// Relative tolerance on minor signs (times scale^k for M_k).
inline constexpr double kMinorTolerance = 1e-10;

struct MinorGridReport {
  std::size_t points = 0;
  std::size_t violations = 0;
  double worst_excess = 0.0;
  std::array<double, 3> worst_point{};
};

/// Leading minors over (x, y, fixed_z) on a count x count log-spaced grid in [lo, hi]^2.
MinorGridReport hessian_minor_grid(const SymmetrizedKernel& k, double lo, double hi, std::size_t count,
                                   double fixed_z = 1.0);

struct ScanRegion {
  double lo = 1e-2;
  double hi = 1e2;
};

struct ConcavityReport {
  std::uint64_t seed = 0;
  std::size_t trials = 0;
  /// max over trials of ((1-t) h_s(P1) + t h_s(P2) - h_s(P_t)) / scale, with
  /// scale = max(|h_s(P1)|, |h_s(P2)|, |h_s(P_t)|); concavity predicts <= 0.
  double max_violation = -std::numeric_limits<double>::infinity();
  std::size_t worst_trial = 0;
  std::array<double, 3> worst_p1{}, worst_p2{};
  double worst_t = 0.0;
};

/// Log-uniform points in region^3; a fraction of trials (near_fraction) has
/// all coordinates of each point within a relative gap of 1e-5.
ConcavityReport concavity_scan(const SymmetrizedKernel& k, std::size_t trials, std::uint64_t seed,
                               ScanRegion region = {}, double near_fraction = 0.05);

struct Lemma4Report {
  std::uint64_t seed = 0;
  std::size_t trials = 0;
  /// min over trials and inequalities of residual / (sum of |h_s'| terms).
  double min_residual = std::numeric_limits<double>::infinity();
  std::size_t worst_trial = 0;
  int worst_inequality = -1;
  std::array<double, 4> worst_point{};
};

Lemma4Report lemma4_scan(const SymmetrizedKernel& k, std::size_t trials, std::uint64_t seed, ScanRegion region = {});

struct MonotonicityReport {
  std::uint64_t seed = 0;
  std::size_t n = 0, paths = 0, steps = 0, evaluations = 0;
  /// Largest decrease S^1(before) - S^1(after) along a T-transform step,
  /// divided by max(1, |S^1(before)|).
  double max_decrease = -std::numeric_limits<double>::infinity();
  std::size_t violations = 0;
  double max_scalar = -std::numeric_limits<double>::infinity();
  double trace_state_value = 0.0;
  std::vector<double> worst_before, worst_after;
};

/// Relative decrease beyond which a step counts as a violation.
inline constexpr double kMonotonicityTolerance = 1e-8;

/// Random normalized spectra (flat Dirichlet) followed by random T-transform
/// steps, evaluating the Kubo-Mori S^1 at every step. With zero_steps the
/// mixing parameter is always 0.
MonotonicityReport monotonicity_scan(std::size_t n, std::size_t paths, std::size_t steps_per_path,
                                     std::uint64_t seed, bool zero_steps = false);

/// (1/3)(d/dx - d/dy) S^1(x, y, tail...) from the h_s' expansion and from
/// central differences of kubo_mori_scalar. Throws OrderViolation unless x < y.
struct DirectionalDerivative {
  double expansion = 0.0;
  double finite_difference = 0.0;
  /// Sum of |h_s'| over all expansion terms, a natural scale.
  double scale = 0.0;
};

DirectionalDerivative directional_derivative_check(const SymmetrizedKernel& k, double x, double y,
                                                   std::span<const double> tail);

struct DirectionalReport {
  std::uint64_t seed = 0;
  std::size_t trials = 0;
  /// min of expansion / scale.
  double min_value = std::numeric_limits<double>::infinity();
  /// max |expansion - finite_difference| / max(|expansion|, |finite_difference|, 1e-6 scale).
  double max_disagreement = 0.0;
  std::vector<double> worst_spectrum;
};

/// Random (x < y, tail) with n drawn from {3,4,5}, log-uniform in the region.
DirectionalReport directional_scan(const SymmetrizedKernel& k, std::size_t trials, std::uint64_t seed,
                                   ScanRegion region = {});

/// Worker count for scans: MONOCURV_THREADS if set and positive, else the
/// hardware concurrency (at least 1).
unsigned scan_threads();

}  // namespace monocurv
