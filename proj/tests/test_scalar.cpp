#include <doctest.h>

#include <cmath>
#include <random>
#include <tuple>
#include <vector>

#include <boost/multiprecision/cpp_dec_float.hpp>

#include "monocurv/error.hpp"
#include "monocurv/geometry.hpp"
#include "monocurv/scalar.hpp"

using namespace monocurv;
using Big = boost::multiprecision::cpp_dec_float_50;

namespace {

const MetricKind kBuiltins[] = {MetricKind::Smallest, MetricKind::Largest, MetricKind::KuboMori};

HKernel kernel(MetricKind kind) { return HKernel(MorozovaChentsovFunction::builtin(kind)); }

double rel(double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

std::vector<double> random_spectrum(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> u(std::log(0.05), std::log(5.0));
  std::vector<double> s(n);
  for (double& v : s) v = std::exp(u(rng));
  return s;
}

// (ln c)'(z, y) for Kubo-Mori, with c(z,y) = (ln z - ln y)/(z - y).
Big km_lnc10(Big z, Big y) {
  const Big c = (log(z) - log(y)) / (z - y);
  const Big c10 = 1 / (z * (z - y)) - c / (z - y);
  return c10 / c;
}

}  // namespace

TEST_CASE("trace-state values agree with the closed forms") {
  for (auto kind : kBuiltins)
    for (Eigen::Index n = 2; n <= 5; ++n) {
      INFO(to_string(kind), " n=", n);
      const std::vector<double> s(n, 1.0 / n);
      const double expected = trace_state_closed_form(kind, n);
      CHECK(rel(normalize_scalar(scalar_theorem1(kernel(kind), s), n), expected) < 1e-10);
      CHECK(rel(trace_state_scalar(kernel(kind), n), expected) < 1e-10);
    }
  CHECK(trace_state_closed_form(MetricKind::KuboMori, 3) == 5.0);
  CHECK(trace_state_closed_form(MetricKind::Smallest, 2) == 6.0);
  CHECK(normalize_scalar(denormalize_scalar(1.25, 4), 4) == 1.25);
}

TEST_CASE("h3 at coincident arguments against a 50-digit limit") {
  const auto k = kernel(MetricKind::KuboMori);
  const double x = 0.6, z = 1.9;
  // z ((ln c)'(z,x) - (ln c)'(z,y)) / (x - y) with y one part in 1e20 away.
  const Big bx(x), bz(z), by = bx * (1 + Big("1e-20"));
  const Big limit = bz * (km_lnc10(bz, bx) - km_lnc10(bz, by)) / (bx - by);
  CHECK(rel(k.h3(x, x, z), limit.convert_to<double>()) < 1e-9);
  // and the separated case
  const Big y2(1.4);
  const Big sep = bz * (km_lnc10(bz, bx) - km_lnc10(bz, y2)) / (bx - y2);
  CHECK(rel(k.h3(x, 1.4, z), sep.convert_to<double>()) < 1e-12);
}

TEST_CASE("the kernel on the diagonal matches its limit") {
  for (auto kind : kBuiltins) {
    const auto k = kernel(kind);
    for (double x : {0.05, 0.7, 3.0}) {
      CHECK(rel(k.h(x, x, x), k.h_diag(x)) < 1e-8);
      CHECK(rel(k.h(x, x * (1 + 1e-7), x), k.h_diag(x)) < 1e-5);
    }
  }
}

TEST_CASE("triple sum equals the geometric scalar curvature") {
  std::vector<double> s{0.15, 0.35, 0.5};
  for (auto kind : kBuiltins) {
    INFO(to_string(kind));
    const auto k = kernel(kind);
    const MetricContext ctx(k.function(), DensityMatrix::diagonal(s));
    const double direct = scalar_theorem1(k, s);
    CHECK(rel(direct, scalar_from_basis(ctx, false)) < 1e-9);
    CHECK(rel(direct, scalar_theorem1(k, s, true)) < 1e-12);
    const auto report = curvature_report(k, s);
    CHECK(rel(report.scalar, direct) < 1e-12);
    CHECK(rel(report.sum_h1 - report.sum_h2 / 2 + 2 * report.sum_h3 - report.sum_h4 - report.diagonal, direct) < 1e-10);
  }
}

TEST_CASE("per-metric closed forms against the triple sum") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    const auto s = random_spectrum(rng, 2 + trial % 4);
    CHECK(rel(bures_scalar(s), scalar_theorem1(kernel(MetricKind::Smallest), s)) < 1e-9);
    const double largest = scalar_theorem1(kernel(MetricKind::Largest), s);
    CHECK(rel(largest_scalar(s), largest) < 1e-9);
    CHECK(rel(largest_scalar_companion(s), largest) < 1e-8);
    CHECK(rel(kubo_mori_scalar(s, false), scalar_theorem1(kernel(MetricKind::KuboMori), s)) < 1e-9);
  }
}

TEST_CASE("characteristic invariants: elementary symmetric polynomials and Faddeev-LeVerrier") {
  const std::vector<double> s{1.0, 2.0, 3.0};
  const auto e = elementary_symmetric(s);
  REQUIRE(e.size() == 4);
  CHECK(e[0] == 1.0);
  CHECK(e[1] == 6.0);
  CHECK(e[2] == 11.0);
  CHECK(e[3] == 6.0);
  const auto rho = random_state(4, 17, 6.0);
  const auto ev = decompose(rho).eigenvalues;
  const std::vector<double> spec(ev.data(), ev.data() + ev.size());
  const auto a = elementary_symmetric(spec), b = characteristic_invariants(rho.matrix());
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(rel(b[i], a[i]) < 1e-10);
  CHECK(rel(largest_scalar_companion_from_invariants(b), largest_scalar(spec)) < 1e-8);
}

TEST_CASE("companion matrix has the spectrum as eigenvalues") {
  const std::vector<double> s{0.2, 0.5, 1.5, 4.0};
  const Eigen::MatrixXd e = companion_matrix(elementary_symmetric(s));
  Eigen::VectorXd ev = e.eigenvalues().real();
  std::sort(ev.data(), ev.data() + ev.size());
  for (int i = 0; i < 4; ++i) CHECK(ev(i) == doctest::Approx(s[i]).epsilon(1e-10));
}

TEST_CASE("dimension recurrences hold") {
  std::mt19937_64 rng(9);
  for (auto kind : kBuiltins)
    for (std::size_t n : {3u, 4u, 6u}) {
      const auto r = recurrence_check(kernel(kind), random_spectrum(rng, n));
      CHECK(r.drop_one < 1e-10);
      CHECK(r.triples.has_value() == (n > 3));
      if (r.triples) CHECK(*r.triples < 1e-10);
    }
  const std::vector<double> two{0.4, 0.6};
  CHECK_THROWS_AS(recurrence_check(kernel(MetricKind::KuboMori), two), Error);
}

TEST_CASE("closed-form sectional functions against coordinate-plane curvatures") {
  for (auto kind : kBuiltins) {
    INFO(to_string(kind));
    const auto r = abc_crosscheck(kernel(kind), 0.3, 0.8, 1.7);
    CHECK(r.b_vs_sectional < 1e-9);
    CHECK(r.c_vs_sectional < 1e-9);
    CHECK(r.a_identity < 1e-9);
    CHECK(r.b_identity < 1e-9);
    CHECK(r.c_xxy_vs_limit < 1e-9);
  }
}

TEST_CASE("Kubo-Mori psi near one against 50-digit evaluation") {
  for (double r : {1.0 + 1e-9, 1.0 - 3e-5, 1.01, 1.3, 0.2, 7.0}) {
    const Big br(r);
    const Big expected = (1 - br + log(br)) / ((br - 1) * log(br));
    INFO("r=", r);
    CHECK(std::abs(kubo_mori::psi(r) - expected.convert_to<double>()) < 1e-14);
  }
  CHECK(kubo_mori::psi(1.0) == doctest::Approx(-0.5).epsilon(1e-15));
  const double h = 1e-5;
  for (double r : {0.5, 1.0, 2.5}) {
    CHECK(kubo_mori::dpsi(r) == doctest::Approx((kubo_mori::psi(r + h) - kubo_mori::psi(r - h)) / (2 * h)).epsilon(1e-8));
    CHECK(kubo_mori::d2psi(r) == doctest::Approx((kubo_mori::dpsi(r + h) - kubo_mori::dpsi(r - h)) / (2 * h)).epsilon(1e-7));
  }
}

TEST_CASE("Kubo-Mori d symmetrizes to the generic kernel and its partials match differences") {
  const auto k = kernel(MetricKind::KuboMori);
  for (auto [x, y, z] : {std::tuple{0.3, 1.1, 2.0}, std::tuple{0.5, 0.5, 0.9}, std::tuple{1.0, 1.0, 1.0}}) {
    const double d_sym = (kubo_mori::d(x, y, z) + kubo_mori::d(y, z, x) + kubo_mori::d(z, x, y)) / 3;
    CHECK(rel(d_sym, k.h_sym(x, y, z)) < 1e-10);
    const double h = 1e-5;
    CHECK(rel(kubo_mori::d_dx(x, y, z), (kubo_mori::d(x + h, y, z) - kubo_mori::d(x - h, y, z)) / (2 * h)) < 1e-7);
    CHECK(rel(kubo_mori::d_dz(x, y, z), (kubo_mori::d(x, y, z + h) - kubo_mori::d(x, y, z - h)) / (2 * h)) < 1e-7);
  }
}

TEST_CASE("kernels are homogeneous of degree -1 and continuous near coincidence") {
  for (auto kind : kBuiltins) {
    const auto k = kernel(kind);
    for (auto [x, y, z] : {std::tuple{0.3, 1.1, 2.0}, std::tuple{0.5, 0.5, 0.9}}) {
      CHECK(rel(k.h(3 * x, 3 * y, 3 * z), k.h(x, y, z) / 3) < 1e-10);
      CHECK(rel(k.h_sym(0.1 * x, 0.1 * y, 0.1 * z), 10 * k.h_sym(x, y, z)) < 1e-10);
    }
    // Either side of the coincidence band edge.
    const double x = 0.7, z = 1.3;
    const double inside = k.h(x, x * (1 + 0.999e-2), z), outside = k.h(x, x * (1 + 1.001e-2), z);
    CHECK(rel(inside, outside) < 1e-4);
  }
}

TEST_CASE("companion path on a spread-out six-level spectrum") {
  const std::vector<double> s{0.012, 0.03, 0.07, 0.14, 0.26, 0.488};
  CHECK(rel(largest_scalar_companion(s), largest_scalar(s)) < 1e-8);
}
