#pragma once

// Morozova-Chentsov functions c(x,y) = 1/(f(x/y) y) of monotone metrics,
// their partial derivatives and divided differences.

#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace monocurv {

enum class MetricKind { Smallest, Largest, KuboMori, Custom };

std::string_view to_string(MetricKind kind) noexcept;
/// Accepts "bures"/"smallest", "largest", "kubo-mori"/"km". Throws InvalidArgument.
MetricKind parse_metric_kind(std::string_view name);

class MorozovaChentsovFunction {
 public:
  using Fn = std::function<double(double, double)>;

  /// c(x,y) = 2/(x+y), (x+y)/(2xy) or (ln x - ln y)/(x - y).
  static MorozovaChentsovFunction builtin(MetricKind kind);

  /// A user function with analytic first and second x-derivatives.
  static MorozovaChentsovFunction custom(std::string name, Fn c, Fn c10, Fn c20);

  MetricKind kind() const noexcept { return kind_; }
  const std::string& name() const noexcept { return name_; }

  // All evaluators reject non-positive arguments with InvalidArgument.
  double operator()(double x, double y) const { return c(x, y); }
  double c(double x, double y) const;
  double c10(double x, double y) const;  ///< dc/dx
  double c20(double x, double y) const;  ///< d2c/dx2
  /// d2c/dxdy, eliminated through the homogeneity identity
  /// 2 c10 + y c11 + x c20 = 0.
  double c11(double x, double y) const;
  /// (ln c)'(x,y) = c10/c.
  double lnc10(double x, double y) const;
  /// d/dy of lnc10(x,y).
  double lnc11(double x, double y) const;
  /// d/dx of lnc10(x,y).
  double lnc20(double x, double y) const;

 private:
  MorozovaChentsovFunction(MetricKind kind, std::string name) : kind_(kind), name_(std::move(name)) {}

  MetricKind kind_;
  std::string name_;
  Fn custom_c_, custom_c10_, custom_c20_;
};

/// c[a,b ; y]: first divided difference in the first argument.
/// Equals c10(a,y) when a == b.
double divided_diff_1(const MorozovaChentsovFunction& c, double a, double b, double y);

/// c[a,b,d ; y]: second divided difference in the first argument.
double divided_diff_2(const MorozovaChentsovFunction& c, double a, double b, double d, double y);

/// c[a,b ; p,q]: first-order divided difference in each argument.
double divided_diff_mixed(const MorozovaChentsovFunction& c, double a, double b, double p, double q);

/// Largest relative residual of each defining identity over a sample set.
struct IdentityReport {
  double symmetry = 0.0;             ///< c(x,y) - c(y,x)
  double homogeneity = 0.0;          ///< c(x,y) - t c(tx,ty)
  double diagonal = 0.0;             ///< c(x,x) - 1/x
  double diagonal_derivative = 0.0;  ///< c10(x,x) + 1/(2x^2)
  double euler = 0.0;                ///< c + x c10(x,y) + y c10(y,x)
  double second_order = 0.0;         ///< 2x c10 + x^2 c20 symmetric under x<->y
  double log_euler = 0.0;            ///< 1 + x lnc10(x,y) + y lnc10(y,x)

  double worst() const noexcept;
  bool ok(double tolerance = 1e-10) const noexcept { return worst() <= tolerance; }
};

IdentityReport verify_identities(const MorozovaChentsovFunction& c,
                                 std::span<const std::pair<double, double>> samples);

}  // namespace monocurv
