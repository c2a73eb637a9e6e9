#include <doctest.h>

#include <cmath>
#include <tuple>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_dec_float.hpp>

#include "monocurv/error.hpp"
#include "monocurv/mcfun.hpp"

using namespace monocurv;
using Big = boost::multiprecision::cpp_dec_float_50;

namespace {

const MetricKind kBuiltins[] = {MetricKind::Smallest, MetricKind::Largest, MetricKind::KuboMori};

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

// Kubo-Mori c in 50-digit arithmetic, straight from the definition.
Big km_big(Big x, Big y) { return (log(x) - log(y)) / (x - y); }

}  // namespace

TEST_CASE("built-in functions match their definitions at separated points") {
  const double x = 0.3, y = 1.7;
  CHECK(MorozovaChentsovFunction::builtin(MetricKind::Smallest)(x, y) == doctest::Approx(2.0 / (x + y)).epsilon(1e-15));
  CHECK(MorozovaChentsovFunction::builtin(MetricKind::Largest)(x, y) ==
        doctest::Approx((x + y) / (2 * x * y)).epsilon(1e-15));
  CHECK(MorozovaChentsovFunction::builtin(MetricKind::KuboMori)(x, y) ==
        doctest::Approx((std::log(x) - std::log(y)) / (x - y)).epsilon(1e-14));
}

TEST_CASE("parse_metric_kind accepts aliases and rejects unknown names") {
  CHECK(parse_metric_kind("bures") == MetricKind::Smallest);
  CHECK(parse_metric_kind("smallest") == MetricKind::Smallest);
  CHECK(parse_metric_kind("largest") == MetricKind::Largest);
  CHECK(parse_metric_kind("km") == MetricKind::KuboMori);
  CHECK(parse_metric_kind("kubo-mori") == MetricKind::KuboMori);
  CHECK_THROWS_AS(parse_metric_kind("wigner-yanase"), Error);
}

TEST_CASE("non-positive arguments are rejected") {
  const auto c = MorozovaChentsovFunction::builtin(MetricKind::KuboMori);
  CHECK_THROWS_AS(c(0.0, 1.0), Error);
  CHECK_THROWS_AS(c(1.0, -1.0), Error);
  CHECK_THROWS_AS(c.c20(std::nan(""), 1.0), Error);
}

TEST_CASE("defining identities hold on a sample set") {
  std::vector<std::pair<double, double>> samples;
  for (double x : {1e-3, 0.1, 0.5, 1.0, 3.0, 250.0})
    for (double y : {2e-3, 0.1, 0.7, 1.0, 1.0 + 1e-9, 40.0}) samples.emplace_back(x, y);
  for (auto kind : kBuiltins) {
    const auto report = verify_identities(MorozovaChentsovFunction::builtin(kind), samples);
    INFO(to_string(kind), " worst ", report.worst());
    CHECK(report.ok(1e-10));
  }
}

TEST_CASE("diagonal second derivatives against the Taylor expansions") {
  // Along x = y(1+u): Bures 2/(y(2+u)), largest (2+u)/(2y(1+u)),
  // Kubo-Mori ln(1+u)/(yu); the u^2 coefficient times 2/y^2 gives c20.
  const double x = 0.37;
  CHECK(rel(MorozovaChentsovFunction::builtin(MetricKind::Smallest).c20(x, x), 1.0 / (2 * x * x * x)) < 1e-12);
  CHECK(rel(MorozovaChentsovFunction::builtin(MetricKind::Largest).c20(x, x), 1.0 / (x * x * x)) < 1e-12);
  CHECK(rel(MorozovaChentsovFunction::builtin(MetricKind::KuboMori).c20(x, x), 2.0 / (3 * x * x * x)) < 1e-12);
  for (auto kind : kBuiltins) {
    const auto c = MorozovaChentsovFunction::builtin(kind);
    CHECK(rel(c(x, x), 1.0 / x) < 1e-15);
    CHECK(rel(c.c10(x, x), -1.0 / (2 * x * x)) < 1e-14);
  }
}

TEST_CASE("Kubo-Mori near coincidence against 50-digit evaluation") {
  const auto c = MorozovaChentsovFunction::builtin(MetricKind::KuboMori);
  for (double gap : {1e-9, 1e-6, 1e-3, 0.2}) {
    const double x = 0.8, y = 0.8 * (1.0 + gap);
    const double expected = km_big(Big(x), Big(y)).convert_to<double>();
    INFO("gap ", gap);
    CHECK(rel(c(x, y), expected) < 1e-14);
    // c10 = 1/(x(x-y)) - c/(x-y), evaluated exactly at these doubles.
    const Big bx(x), by(y);
    const Big c10 = (1 / (bx * (bx - by)) - km_big(bx, by) / (bx - by));
    CHECK(rel(c.c10(x, y), c10.convert_to<double>()) < 1e-9);
  }
}

TEST_CASE("first divided difference: quotient away from coincidence, c10 at it") {
  for (auto kind : kBuiltins) {
    const auto c = MorozovaChentsovFunction::builtin(kind);
    const double a = 0.4, b = 1.3, y = 0.9;
    CHECK(rel(divided_diff_1(c, a, b, y), (c(a, y) - c(b, y)) / (a - b)) < 1e-13);
    CHECK(rel(divided_diff_1(c, a, a, y), c.c10(a, y)) < 1e-13);
    // Continuity across the edge of the coincidence band.
    const double inside = divided_diff_1(c, a, a * (1 + 0.99e-2), y);
    const double outside = divided_diff_1(c, a, a * (1 + 1.01e-2), y);
    CHECK(rel(inside, outside) < 1e-3);
  }
}

TEST_CASE("Bures divided differences have exact partial-fraction forms") {
  // 2/(t+y): [a,b] = -2/((a+y)(b+y)), [a,b,d] = 2/((a+y)(b+y)(d+y)).
  const auto c = MorozovaChentsovFunction::builtin(MetricKind::Smallest);
  const double y = 0.6;
  for (auto [a, b, d] : {std::tuple{0.2, 0.9, 1.7}, std::tuple{0.5, 0.5, 0.5}, std::tuple{0.5, 0.5001, 0.4999}}) {
    CHECK(rel(divided_diff_1(c, a, b, y), -2.0 / ((a + y) * (b + y))) < 1e-12);
    CHECK(rel(divided_diff_2(c, a, b, d, y), 2.0 / ((a + y) * (b + y) * (d + y))) < 1e-10);
  }
  // f(x,y) = 2/(x+y): the mixed difference is 2 (a+b+p+q) / ((a+p)(a+q)(b+p)(b+q)).
  for (auto [a, b, p, q] : {std::tuple{0.2, 0.9, 1.7, 0.3}, std::tuple{0.5, 0.5, 0.7, 0.7},
                            std::tuple{0.5, 0.5000001, 0.5, 0.4999999}}) {
    const double expected = 2.0 * (a + b + p + q) / ((a + p) * (a + q) * (b + p) * (b + q));
    CHECK(rel(divided_diff_mixed(c, a, b, p, q), expected) < 1e-10);
  }
}

TEST_CASE("Kubo-Mori second and mixed differences against 50-digit quotients") {
  const auto c = MorozovaChentsovFunction::builtin(MetricKind::KuboMori);
  auto first = [](Big a, Big b, Big y) { return (km_big(a, y) - km_big(b, y)) / (a - b); };
  const Big a(0.3), b(1.1), d(2.5), y(0.7), p(0.45), q(1.9);
  const Big second = (first(a, b, y) - first(b, d, y)) / (a - d);
  CHECK(rel(divided_diff_2(c, 0.3, 1.1, 2.5, 0.7), second.convert_to<double>()) < 1e-12);
  auto f1 = [&](Big yy) { return first(a, b, yy); };
  const Big mixed = (f1(p) - f1(q)) / (p - q);
  CHECK(rel(divided_diff_mixed(c, 0.3, 1.1, 0.45, 1.9), mixed.convert_to<double>()) < 1e-12);

  // Near coincidence: divided differences of nearly equal nodes taken in
  // 50 digits approximate the confluent limit to about the node gap.
  const Big h("1e-12");
  const Big x0(0.8), z0(1.3);
  const Big conf = (first(x0 + h, x0, z0) - first(x0, x0 - h, z0)) / (2 * h);
  CHECK(rel(divided_diff_2(c, 0.8, 0.8, 0.8, 1.3), conf.convert_to<double>()) < 1e-10);
}

TEST_CASE("custom functions use the supplied derivatives") {
  const auto c = MorozovaChentsovFunction::custom(
      "bures-copy", [](double x, double y) { return 2.0 / (x + y); },
      [](double x, double y) { return -2.0 / ((x + y) * (x + y)); },
      [](double x, double y) { return 4.0 / ((x + y) * (x + y) * (x + y)); });
  const auto ref = MorozovaChentsovFunction::builtin(MetricKind::Smallest);
  CHECK(c.kind() == MetricKind::Custom);
  for (auto [x, y] : {std::pair{0.3, 0.8}, std::pair{1.0, 1.0}}) {
    CHECK(rel(c.c11(x, y), ref.c11(x, y)) < 1e-12);
    CHECK(rel(c.lnc20(x, y), ref.lnc20(x, y)) < 1e-12);
    CHECK(rel(divided_diff_2(c, x, y, 0.5, 0.9), divided_diff_2(ref, x, y, 0.5, 0.9)) < 1e-12);
  }
}
