#include "monocurv/scalar.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "monocurv/divided_difference.hpp"
#include "monocurv/error.hpp"
#include "monocurv/geometry.hpp"

namespace monocurv {

namespace {

// E(s,t) = c(s,t) / (c(s,z) c(t,z)); h1(x,y,z) = E[x,z ; y,z] because
// E(z,t) = E(s,z) = z.
struct H1Surface {
  const MorozovaChentsovFunction& c;
  double z;

  double u(double s) const { return 1.0 / c.c(s, z); }
  double du(double s) const {
    const double v = c.c(s, z);
    return -c.c10(s, z) / (v * v);
  }
  double value(double s, double t) const { return c.c(s, t) * u(s) * u(t); }
  double ds(double s, double t) const { return (c.c10(s, t) * u(s) + c.c(s, t) * du(s)) * u(t); }
  double dt(double s, double t) const { return (c.c10(t, s) * u(t) + c.c(s, t) * du(t)) * u(s); }
  double dst(double s, double t) const {
    const double us = u(s), ut = u(t), dus = du(s), dut = du(t);
    return c.c11(s, t) * us * ut + c.c10(s, t) * us * dut + c.c10(t, s) * dus * ut + c.c(s, t) * dus * dut;
  }
};

// (2 - (x+y) c(x,y)) / ((x-y)^2 c(x,y)): the numerator as a function of y
// has a double zero at y = x, so it is psi[x,x,y] / c(x,y).
double doubled_zero_term(const MorozovaChentsovFunction& c, double x, double y) {
  auto f = [&](double t) { return 2.0 - (x + t) * c.c(x, t); };
  auto df = [&](double t) { return -c.c(x, t) - (x + t) * c.c10(t, x); };
  auto d2f = [&](double t) { return -2.0 * c.c10(t, x) - (x + t) * c.c20(t, x); };
  return divdiff::second(f, df, d2f, x, x, y) / c.c(x, y);
}

// (x (ln c)'(x,y) - y (ln c)'(y,x)) / (x - y) = w[x,y] with
// w(s) = 2 s (ln c)'(s,y) + 1, by the logarithmic Euler identity.
double log_euler_quotient(const MorozovaChentsovFunction& c, double x, double y) {
  auto f = [&](double s) { return 2.0 * s * c.lnc10(s, y) + 1.0; };
  auto df = [&](double s) { return 2.0 * c.lnc10(s, y) + 2.0 * s * c.lnc20(s, y); };
  return divdiff::first(f, df, x, y);
}

// The bracket of C that is singular at x = z:
//   (c(z,y) - c(x,y)) / (2 (x-z)^2 c(x,z) c(y,z)) + z (ln c)'(z,y) / (2 (x-z)).
// Over the common denominator the numerator N(x) has a double zero at z.
double c_bracket(const MorozovaChentsovFunction& c, double x, double y, double z) {
  const double k = z * c.lnc10(z, y) * c.c(y, z);
  const double czy = c.c(z, y);
  auto f = [&](double s) { return czy - c.c(s, y) + (s - z) * k * c.c(s, z); };
  auto df = [&](double s) { return -c.c10(s, y) + k * (c.c(s, z) + (s - z) * c.c10(s, z)); };
  auto d2f = [&](double s) { return -c.c20(s, y) + k * (2.0 * c.c10(s, z) + (s - z) * c.c20(s, z)); };
  return divdiff::second(f, df, d2f, z, z, x) / (2.0 * c.c(x, z) * c.c(y, z));
}

double rel_residual(double lhs, double rhs, double floor) {
  return std::abs(lhs - rhs) / std::max({std::abs(lhs), std::abs(rhs), floor});
}

std::vector<double> without(std::span<const double> s, std::initializer_list<std::size_t> skip) {
  std::vector<double> out;
  for (std::size_t i = 0; i < s.size(); ++i)
    if (std::find(skip.begin(), skip.end(), i) == skip.end()) out.push_back(s[i]);
  return out;
}

void require_spectrum(std::span<const double> spectrum, std::size_t min_size = 1) {
  if (spectrum.size() < min_size)
    throw Error(ErrorCode::DimensionTooSmall, "spectrum needs at least " + std::to_string(min_size) + " entries");
  for (double v : spectrum)
    if (!(v > 0.0) || !std::isfinite(v)) throw Error(ErrorCode::InvalidArgument, "spectrum entries must be positive");
}

double square(double v) { return v * v; }

}  // namespace

double HKernel::h1(double x, double y, double z) const {
  return divdiff::mixed(H1Surface{c_, z}, x, z, y, z);
}

double HKernel::h2(double x, double y, double z) const {
  const double dd = divided_diff_1(c_, x, y, z);
  return dd * dd / (c_.c(x, y) * c_.c(x, z) * c_.c(y, z));
}

double HKernel::h3(double x, double y, double z) const {
  return z * divdiff::first([&](double t) { return c_.lnc10(z, t); }, [&](double t) { return c_.lnc11(z, t); }, x,
                            y);
}

double HKernel::h4(double x, double y, double z) const { return z * c_.lnc10(z, x) * c_.lnc10(z, y); }

double HKernel::h(double x, double y, double z) const {
  return h1(x, y, z) - 0.5 * h2(x, y, z) + 2.0 * h3(x, y, z) - h4(x, y, z);
}

double HKernel::h_sym(double x, double y, double z) const { return (h(x, y, z) + h(y, z, x) + h(z, x, y)) / 3.0; }

double HKernel::h_diag(double x) const { return 15.0 / (8.0 * x) - 3.0 * x * x * c_.c20(x, x); }

double HKernel::B(double x, double y) const {
  return doubled_zero_term(c_, x, y) - 0.25 * x * square(c_.lnc10(x, y)) - 0.25 * y * square(c_.lnc10(y, x)) -
         log_euler_quotient(c_, x, y);
}

double HKernel::C(double x, double y, double z) const {
  const double ones = 0.25 * (3.0 * h1(x, y, z) - h1(y, z, x) - h1(z, x, y));
  const double twos = 0.125 * (h2(x, y, z) + h2(y, z, x) + h2(z, x, y));
  return ones + twos - 0.25 * h4(x, y, z) + c_bracket(c_, x, y, z) + c_bracket(c_, y, x, z);
}

double HKernel::C_xxy(double x, double y) const {
  return 0.25 * doubled_zero_term(c_, x, y) + 0.125 * x * square(c_.lnc10(x, y)) -
         0.25 * y * square(c_.lnc10(y, x)) - 0.25 * log_euler_quotient(c_, x, y);
}

double h_eval(const HKernel& k, HTerm which, double x, double y, double z) {
  switch (which) {
    case HTerm::H1: return k.h1(x, y, z);
    case HTerm::H2: return k.h2(x, y, z);
    case HTerm::H3: return k.h3(x, y, z);
    case HTerm::H4: return k.h4(x, y, z);
    case HTerm::H: return k.h(x, y, z);
  }
  return 0.0;
}

double scalar_theorem1(const HKernel& k, std::span<const double> spectrum, bool symmetrized) {
  require_spectrum(spectrum);
  double total = 0.0;
  for (double x : spectrum)
    for (double y : spectrum)
      for (double z : spectrum) total += symmetrized ? k.h_sym(x, y, z) : k.h(x, y, z);
  for (double x : spectrum) total -= k.h_diag(x);
  return total;
}

double normalize_scalar(double unnormalized, Eigen::Index n) {
  if (n < 2) throw Error(ErrorCode::DimensionTooSmall, "normalization needs n >= 2");
  const double m = static_cast<double>(n * n);
  return unnormalized + (m - 1.0) * (m - 2.0) / 4.0;
}

double denormalize_scalar(double normalized, Eigen::Index n) {
  if (n < 2) throw Error(ErrorCode::DimensionTooSmall, "normalization needs n >= 2");
  const double m = static_cast<double>(n * n);
  return normalized - (m - 1.0) * (m - 2.0) / 4.0;
}

double trace_state_scalar(const HKernel& k, Eigen::Index n) {
  if (n < 2) throw Error(ErrorCode::DimensionTooSmall, "trace state needs n >= 2");
  const double d = static_cast<double>(n);
  const double c20 = k.function().c20(1.0 / d, 1.0 / d);
  return (d * d - 1.0) * (17.0 * d * d * d - 4.0 * d - 24.0 * c20) / (8.0 * d);
}

double trace_state_closed_form(MetricKind kind, Eigen::Index n) {
  if (n < 2) throw Error(ErrorCode::DimensionTooSmall, "trace state needs n >= 2");
  const double m = static_cast<double>(n * n);
  switch (kind) {
    case MetricKind::Smallest: return (m - 1.0) * (5.0 * m - 4.0) / 8.0;
    case MetricKind::Largest: return (1.0 - m) * (7.0 * m + 4.0) / 8.0;
    case MetricKind::KuboMori: return (m - 1.0) * (m - 4.0) / 8.0;
    case MetricKind::Custom: break;
  }
  throw Error(ErrorCode::InvalidArgument, "no closed form for custom metrics");
}

CurvatureReport curvature_report(const HKernel& k, std::span<const double> spectrum) {
  require_spectrum(spectrum);
  CurvatureReport r;
  r.n = static_cast<Eigen::Index>(spectrum.size());
  for (double x : spectrum)
    for (double y : spectrum)
      for (double z : spectrum) {
        r.sum_h1 += k.h1(x, y, z);
        r.sum_h2 += k.h2(x, y, z);
        r.sum_h3 += k.h3(x, y, z);
        r.sum_h4 += k.h4(x, y, z);
      }
  for (double x : spectrum) r.diagonal += k.h_diag(x);
  r.scalar = r.sum_h1 - 0.5 * r.sum_h2 + 2.0 * r.sum_h3 - r.sum_h4 - r.diagonal;
  r.normalized_scalar = r.n >= 2 ? normalize_scalar(r.scalar, r.n) : r.scalar;
  return r;
}

RecurrenceResidual recurrence_check(const HKernel& k, std::span<const double> spectrum) {
  const std::size_t n = spectrum.size();
  if (n < 3) throw Error(ErrorCode::DimensionTooSmall, "recurrences need n >= 3");
  require_spectrum(spectrum);
  auto S = [&](std::span<const double> s) { return scalar_theorem1(k, s, true); };

  const double all = S(spectrum);
  double pairs = 0.0, pairs_abs = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const std::array<double, 2> p{spectrum[i], spectrum[j]};
      const double v = S(p);
      pairs += v;
      pairs_abs += std::abs(v);
    }
  double drop = 0.0, drop_abs = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const auto rest = without(spectrum, {i});
    const double v = S(rest);
    drop += v;
    drop_abs += std::abs(v);
  }
  const double nm3 = static_cast<double>(n) - 3.0;
  RecurrenceResidual r;
  r.drop_one = std::abs(nm3 * all - (drop - pairs)) /
               std::max(std::abs(nm3 * all) + drop_abs + pairs_abs, 1e-300);

  if (n > 3) {
    double triples = 0.0, triples_abs = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j)
        for (std::size_t l = j + 1; l < n; ++l) {
          const std::array<double, 3> t{spectrum[i], spectrum[j], spectrum[l]};
          const double v = S(t);
          triples += v;
          triples_abs += std::abs(v);
        }
    r.triples = std::abs(all - (triples - nm3 * pairs)) /
                std::max(std::abs(all) + triples_abs + std::abs(nm3) * pairs_abs, 1e-300);
  }
  return r;
}

AbcReport abc_crosscheck(const HKernel& k, double x, double y, double z) {
  if (!(x > 0.0) || !(y > 0.0) || !(z > 0.0)) throw Error(ErrorCode::InvalidArgument, "arguments must be positive");
  AbcReport r;
  r.A = k.A(x, y);
  r.B = k.B(x, y);
  r.C = k.C(x, y, z);
  r.C_xxy = k.C_xxy(x, y);

  const auto b2 = basis_vectors(2);
  const std::array<double, 2> s2{x, y};
  const MetricContext two(k.function(), DensityMatrix::diagonal(s2));
  r.A_sectional = sectional(two, b2[basis_index_diag(2, 0)], b2[basis_index_real(2, 0, 1)], false).value;
  r.B_sectional = sectional(two, b2[basis_index_real(2, 0, 1)], b2[basis_index_imag(2, 0, 1)], false).value;

  const auto b3 = basis_vectors(3);
  const std::array<double, 3> s3{x, y, z};
  const MetricContext three(k.function(), DensityMatrix::diagonal(s3));
  r.C_sectional = sectional(three, b3[basis_index_real(3, 0, 2)], b3[basis_index_real(3, 1, 2)], false).value;

  const double floor2 = 1.0 / std::max(x, y), floor3 = 1.0 / std::max({x, y, z});
  r.b_vs_sectional = rel_residual(r.B, r.B_sectional, floor2);
  r.c_vs_sectional = rel_residual(r.C, r.C_sectional, floor3);
  r.a_identity = rel_residual(r.A_sectional, 2.0 * k.C(x, y, x), floor2);
  r.b_identity = rel_residual(r.B, 2.0 * k.C(x, x, y) + 2.0 * k.C(y, y, x), floor2);
  r.c_xxy_vs_limit = rel_residual(r.C_xxy, k.C(x, x, y), floor2);
  return r;
}

double bures_scalar(std::span<const double> spectrum) {
  require_spectrum(spectrum);
  double triple = 0.0, inverse = 0.0;
  for (double x : spectrum) {
    inverse += 1.0 / x;
    for (double y : spectrum)
      for (double z : spectrum) triple += z / ((x + z) * (y + z));
  }
  return 1.5 * triple - 0.375 * inverse;
}

double largest_scalar(std::span<const double> spectrum) {
  require_spectrum(spectrum);
  const double n = static_cast<double>(spectrum.size());
  double weighted = 0.0, pair = 0.0, inverse = 0.0;
  for (double z : spectrum) {
    double resolvent = 0.0;
    for (double x : spectrum) resolvent += 1.0 / (x + z);
    weighted += z * resolvent * resolvent;
    pair += resolvent;
    inverse += 1.0 / z;
  }
  return -2.5 * weighted + n * pair + (9.0 / 8.0 - n * n) * inverse;
}

std::vector<double> elementary_symmetric(std::span<const double> spectrum) {
  std::vector<double> e(spectrum.size() + 1, 0.0);
  e[0] = 1.0;
  for (std::size_t m = 0; m < spectrum.size(); ++m)
    for (std::size_t k = m + 1; k >= 1; --k) e[k] += spectrum[m] * e[k - 1];
  return e;
}

std::vector<double> characteristic_invariants(const CMatrix& a) {
  if (a.rows() != a.cols()) throw Error(ErrorCode::DimensionMismatch, "matrix must be square");
  const Eigen::Index n = a.rows();
  // det(t - A) = sum_k coeff[k] t^k, coeff[n] = 1.
  std::vector<Complex> coeff(static_cast<std::size_t>(n + 1));
  coeff[n] = 1.0;
  CMatrix m = CMatrix::Zero(n, n);
  const CMatrix id = CMatrix::Identity(n, n);
  for (Eigen::Index k = 1; k <= n; ++k) {
    m = a * m + coeff[n - k + 1] * id;
    coeff[n - k] = -(a * m).trace() / static_cast<double>(k);
  }
  std::vector<double> e(static_cast<std::size_t>(n + 1));
  for (Eigen::Index k = 0; k <= n; ++k) e[k] = ((k % 2 == 0) ? 1.0 : -1.0) * coeff[n - k].real();
  return e;
}

Eigen::MatrixXd companion_matrix(std::span<const double> invariants) {
  if (invariants.size() < 2) throw Error(ErrorCode::DimensionTooSmall, "companion matrix needs n >= 1");
  const auto n = static_cast<Eigen::Index>(invariants.size() - 1);
  Eigen::MatrixXd e = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i + 1 < n; ++i) e(i, i + 1) = 1.0;
  for (Eigen::Index j = 0; j < n; ++j) e(n - 1, j) = (((n - 1 - j) % 2 == 0) ? 1.0 : -1.0) * invariants[n - j];
  return e;
}

double largest_scalar_companion_from_invariants(std::span<const double> raw) {
  // S is homogeneous of degree -1, so rescale to unit mean eigenvalue first:
  // e_i scale like lambda^i and otherwise chi(-E) is badly scaled for n >= 5.
  const auto degree = static_cast<Eigen::Index>(raw.size()) - 1;
  const double mean = (degree > 0 && raw[1] > 0.0) ? raw[1] / static_cast<double>(degree) : 1.0;
  std::vector<double> invariants(raw.begin(), raw.end());
  double power = 1.0;
  for (double& v : invariants) {
    v /= power;
    power *= mean;
  }
  const Eigen::MatrixXd e = companion_matrix(invariants);
  const Eigen::Index n = e.rows();
  const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(n, n);
  const Eigen::MatrixXd m = -e;

  // chi(t) = sum_i a_i t^i with a_i = (-1)^i e_(n-i); Horner at t = -E.
  auto a = [&](Eigen::Index i) { return ((i % 2 == 0) ? 1.0 : -1.0) * invariants[n - i]; };
  Eigen::MatrixXd chi = a(n) * id, dchi = static_cast<double>(n) * a(n) * id;
  for (Eigen::Index i = n - 1; i >= 0; --i) chi = chi * m + a(i) * id;
  for (Eigen::Index i = n - 2; i >= 0; --i) dchi = dchi * m + static_cast<double>(i + 1) * a(i + 1) * id;

  constexpr double kMinReciprocalCondition = 1e-13;
  const Eigen::PartialPivLU<Eigen::MatrixXd> chi_lu(chi);
  if (!(chi_lu.rcond() > kMinReciprocalCondition))
    throw Error(ErrorCode::SingularCompanion, "chi(-E) reciprocal condition " + std::to_string(chi_lu.rcond()));
  const Eigen::PartialPivLU<Eigen::MatrixXd> e_lu(e);
  if (!(e_lu.rcond() > kMinReciprocalCondition))
    throw Error(ErrorCode::SingularCompanion, "E reciprocal condition " + std::to_string(e_lu.rcond()));

  const Eigen::MatrixXd ratio = chi_lu.solve(dchi);
  const double nd = static_cast<double>(n);
  return (-2.5 * (e * ratio * ratio).trace() - nd * ratio.trace() + (9.0 / 8.0 - nd * nd) * e_lu.solve(id).trace()) /
         mean;
}

double largest_scalar_companion(std::span<const double> spectrum) {
  require_spectrum(spectrum);
  const auto e = elementary_symmetric(spectrum);
  return largest_scalar_companion_from_invariants(e);
}

namespace kubo_mori {

namespace {

constexpr int kTerms = 40;
constexpr double kRadius = 0.25;

// Taylor coefficients of psi(1+u) = A(u)/B(u) with
// A(u) = (ln(1+u) - u)/u^2 and B(u) = ln(1+u)/u.
const std::array<double, kTerms>& psi_series() {
  static const std::array<double, kTerms> p = [] {
    std::array<double, kTerms> a{}, b{}, out{};
    for (int k = 0; k < kTerms; ++k) {
      a[k] = ((k % 2 == 0) ? -1.0 : 1.0) / (k + 2);
      b[k] = ((k % 2 == 0) ? 1.0 : -1.0) / (k + 1);
    }
    for (int k = 0; k < kTerms; ++k) {
      double s = a[k];
      for (int j = 1; j <= k; ++j) s -= b[j] * out[k - j];
      out[k] = s / b[0];
    }
    return out;
  }();
  return p;
}

void require_positive_ratio(double r) {
  if (!(r > 0.0)) throw Error(ErrorCode::InvalidArgument, "psi needs a positive argument");
}

}  // namespace

double psi(double r) {
  require_positive_ratio(r);
  const double u = r - 1.0;
  if (std::abs(u) < kRadius) {
    const auto& p = psi_series();
    double acc = 0.0;
    for (int k = kTerms - 1; k >= 0; --k) acc = acc * u + p[k];
    return acc;
  }
  const double l = std::log(r);
  return (1.0 - r + l) / (u * l);
}

double dpsi(double r) {
  require_positive_ratio(r);
  const double u = r - 1.0;
  if (std::abs(u) < kRadius) {
    const auto& p = psi_series();
    double acc = 0.0;
    for (int k = kTerms - 1; k >= 1; --k) acc = acc * u + k * p[k];
    return acc;
  }
  const double l = std::log(r);
  const double num = 1.0 - r + l, den = u * l;
  const double dnum = -1.0 + 1.0 / r, dden = l + u / r;
  return (dnum * den - num * dden) / (den * den);
}

double d2psi(double r) {
  require_positive_ratio(r);
  const double u = r - 1.0;
  if (std::abs(u) < kRadius) {
    const auto& p = psi_series();
    double acc = 0.0;
    for (int k = kTerms - 1; k >= 2; --k) acc = acc * u + static_cast<double>(k) * (k - 1) * p[k];
    return acc;
  }
  const double l = std::log(r);
  const double num = 1.0 - r + l, den = u * l;
  const double dnum = -1.0 + 1.0 / r, dden = l + u / r;
  const double d2num = -1.0 / (r * r), d2den = 1.0 / r + 1.0 / (r * r);
  return (d2num * den - num * d2den) / (den * den) - 2.0 * dden * (dnum * den - num * dden) / (den * den * den);
}

double d(double x, double y, double z) {
  const double rx = x / z, ry = y / z;
  const double dd = divdiff::first(psi, dpsi, rx, ry);
  return (1.5 * dd - psi(rx) * psi(ry)) / z;
}

double d_dx(double x, double y, double z) {
  const double rx = x / z, ry = y / z;
  const double dd2 = divdiff::second(psi, dpsi, d2psi, rx, rx, ry);
  return (1.5 * dd2 - dpsi(rx) * psi(ry)) / (z * z);
}

double d_dz(double x, double y, double z) {
  // Degree -1 homogeneity: x d_x + y d_y + z d_z = -d.
  return -(d(x, y, z) + x * d_dx(x, y, z) + y * d_dx(y, x, z)) / z;
}

}  // namespace kubo_mori

double kubo_mori_scalar(std::span<const double> spectrum, bool normalized) {
  require_spectrum(spectrum);
  double total = 0.0;
  for (double x : spectrum)
    for (double y : spectrum)
      for (double z : spectrum) total += kubo_mori::d(x, y, z);
  for (double x : spectrum) total -= kubo_mori::d(x, x, x);
  if (normalized) total = normalize_scalar(total, static_cast<Eigen::Index>(spectrum.size()));
  return total;
}

}  // namespace monocurv
