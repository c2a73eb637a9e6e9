#include "monocurv/mcfun.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "monocurv/divided_difference.hpp"
#include "monocurv/error.hpp"

namespace monocurv {

namespace {

// Kubo-Mori: c(x,y) = phi(x/y)/y with phi(t) = ln t / (t - 1).
// Near t = 1 the closed forms cancel catastrophically; use the Taylor
// series of ln(1+u)/u there.
constexpr double kSeriesRadius = 0.25;
constexpr int kSeriesTerms = 40;

// Evaluates sum_k coeff(k) u^k by Horner's scheme.
template <class Coeff>
double horner(double u, Coeff coeff) {
  double acc = 0.0;
  for (int k = kSeriesTerms - 1; k >= 0; --k) acc = acc * u + coeff(k);
  return acc;
}

double sign_pow(int k) { return (k % 2 == 0) ? 1.0 : -1.0; }

double km_phi(double t) {
  const double u = t - 1.0;
  if (std::abs(u) < kSeriesRadius) return horner(u, [](int k) { return sign_pow(k) / (k + 1); });
  return std::log(t) / u;
}

double km_dphi(double t) {
  const double u = t - 1.0;
  if (std::abs(u) < kSeriesRadius)
    return horner(u, [](int k) { return sign_pow(k + 1) * (k + 1) / (k + 2.0); });
  return 1.0 / (t * u) - std::log(t) / (u * u);
}

double km_d2phi(double t) {
  const double u = t - 1.0;
  if (std::abs(u) < kSeriesRadius)
    return horner(u, [](int k) { return sign_pow(k) * (k + 2.0) * (k + 1) / (k + 3.0); });
  return -1.0 / (t * t * u) - 2.0 / (t * u * u) + 2.0 * std::log(t) / (u * u * u);
}

void require_positive(double x, double y) {
  if (!(x > 0.0) || !(y > 0.0))
    throw Error(ErrorCode::InvalidArgument,
                "Morozova-Chentsov functions need positive arguments, got (" + std::to_string(x) + ", " +
                    std::to_string(y) + ")");
}

double relative(double residual, double scale) {
  return std::abs(residual) / std::max(std::abs(scale), 1e-300);
}

}  // namespace

std::string_view to_string(MetricKind kind) noexcept {
  switch (kind) {
    case MetricKind::Smallest: return "bures";
    case MetricKind::Largest: return "largest";
    case MetricKind::KuboMori: return "kubo-mori";
    case MetricKind::Custom: return "custom";
  }
  return "custom";
}

MetricKind parse_metric_kind(std::string_view name) {
  if (name == "bures" || name == "smallest") return MetricKind::Smallest;
  if (name == "largest") return MetricKind::Largest;
  if (name == "kubo-mori" || name == "km" || name == "kubomori") return MetricKind::KuboMori;
  throw Error(ErrorCode::InvalidArgument, "unknown metric '" + std::string(name) + "'");
}

MorozovaChentsovFunction MorozovaChentsovFunction::builtin(MetricKind kind) {
  if (kind == MetricKind::Custom)
    throw Error(ErrorCode::InvalidArgument, "custom functions must be built with custom()");
  return MorozovaChentsovFunction(kind, std::string(to_string(kind)));
}

MorozovaChentsovFunction MorozovaChentsovFunction::custom(std::string name, Fn c, Fn c10, Fn c20) {
  if (!c || !c10 || !c20) throw Error(ErrorCode::InvalidArgument, "custom function needs c, c10 and c20");
  MorozovaChentsovFunction f(MetricKind::Custom, std::move(name));
  f.custom_c_ = std::move(c);
  f.custom_c10_ = std::move(c10);
  f.custom_c20_ = std::move(c20);
  return f;
}

double MorozovaChentsovFunction::c(double x, double y) const {
  require_positive(x, y);
  switch (kind_) {
    case MetricKind::Smallest: return 2.0 / (x + y);
    case MetricKind::Largest: return 0.5 / x + 0.5 / y;
    case MetricKind::KuboMori: return km_phi(x / y) / y;
    case MetricKind::Custom: return custom_c_(x, y);
  }
  return 0.0;
}

double MorozovaChentsovFunction::c10(double x, double y) const {
  require_positive(x, y);
  switch (kind_) {
    case MetricKind::Smallest: return -2.0 / ((x + y) * (x + y));
    case MetricKind::Largest: return -0.5 / (x * x);
    case MetricKind::KuboMori: return km_dphi(x / y) / (y * y);
    case MetricKind::Custom: return custom_c10_(x, y);
  }
  return 0.0;
}

double MorozovaChentsovFunction::c20(double x, double y) const {
  require_positive(x, y);
  switch (kind_) {
    case MetricKind::Smallest: {
      const double s = x + y;
      return 4.0 / (s * s * s);
    }
    case MetricKind::Largest: return 1.0 / (x * x * x);
    case MetricKind::KuboMori: return km_d2phi(x / y) / (y * y * y);
    case MetricKind::Custom: return custom_c20_(x, y);
  }
  return 0.0;
}

double MorozovaChentsovFunction::c11(double x, double y) const {
  return -(2.0 * c10(x, y) + x * c20(x, y)) / y;
}

double MorozovaChentsovFunction::lnc10(double x, double y) const { return c10(x, y) / c(x, y); }

double MorozovaChentsovFunction::lnc11(double x, double y) const {
  const double v = c(x, y);
  return (c11(x, y) * v - c10(x, y) * c10(y, x)) / (v * v);
}

double MorozovaChentsovFunction::lnc20(double x, double y) const {
  const double v = c(x, y);
  const double d = c10(x, y);
  return (c20(x, y) * v - d * d) / (v * v);
}

double divided_diff_1(const MorozovaChentsovFunction& c, double a, double b, double y) {
  return divdiff::first([&](double s) { return c.c(s, y); }, [&](double s) { return c.c10(s, y); }, a, b);
}

double divided_diff_2(const MorozovaChentsovFunction& c, double a, double b, double d, double y) {
  return divdiff::second([&](double s) { return c.c(s, y); }, [&](double s) { return c.c10(s, y); },
                         [&](double s) { return c.c20(s, y); }, a, b, d);
}

namespace {
struct MixedAdapter {
  const MorozovaChentsovFunction& f;
  double value(double s, double t) const { return f.c(s, t); }
  double ds(double s, double t) const { return f.c10(s, t); }
  double dt(double s, double t) const { return f.c10(t, s); }
  double dst(double s, double t) const { return f.c11(s, t); }
};
}  // namespace

double divided_diff_mixed(const MorozovaChentsovFunction& c, double a, double b, double p, double q) {
  return divdiff::mixed(MixedAdapter{c}, a, b, p, q);
}

double IdentityReport::worst() const noexcept {
  return std::max({symmetry, homogeneity, diagonal, diagonal_derivative, euler, second_order, log_euler});
}

IdentityReport verify_identities(const MorozovaChentsovFunction& c,
                                 std::span<const std::pair<double, double>> samples) {
  IdentityReport r;
  constexpr std::array<double, 3> kScales{0.37, 2.0, 11.0};
  for (const auto& [x, y] : samples) {
    if (!(x > 0.0) || !(y > 0.0)) throw Error(ErrorCode::InvalidArgument, "identity samples must be positive");
    const double cxy = c.c(x, y), cyx = c.c(y, x);
    r.symmetry = std::max(r.symmetry, relative(cxy - cyx, cxy));
    for (double t : kScales) r.homogeneity = std::max(r.homogeneity, relative(cxy - t * c.c(t * x, t * y), cxy));
    for (double v : {x, y}) {
      r.diagonal = std::max(r.diagonal, relative(c.c(v, v) - 1.0 / v, 1.0 / v));
      r.diagonal_derivative =
          std::max(r.diagonal_derivative, relative(c.c10(v, v) + 0.5 / (v * v), 0.5 / (v * v)));
    }
    const double dx = x * c.c10(x, y), dy = y * c.c10(y, x);
    r.euler = std::max(r.euler, relative(cxy + dx + dy, std::abs(cxy) + std::abs(dx) + std::abs(dy)));
    const double ax = 2.0 * x * c.c10(x, y), bx = x * x * c.c20(x, y);
    const double ay = 2.0 * y * c.c10(y, x), by = y * y * c.c20(y, x);
    r.second_order = std::max(
        r.second_order, relative(ax + bx - ay - by, std::abs(ax) + std::abs(bx) + std::abs(ay) + std::abs(by)));
    const double lx = x * c.lnc10(x, y), ly = y * c.lnc10(y, x);
    r.log_euler = std::max(r.log_euler, relative(1.0 + lx + ly, 1.0 + std::abs(lx) + std::abs(ly)));
  }
  return r;
}

}  // namespace monocurv
