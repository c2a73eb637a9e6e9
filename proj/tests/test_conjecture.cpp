#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <numeric>
#include <tuple>
#include <vector>

#include "monocurv/conjecture.hpp"
#include "monocurv/error.hpp"

using namespace monocurv;

namespace {

HKernel km_kernel() { return HKernel(MorozovaChentsovFunction::builtin(MetricKind::KuboMori)); }

double rel(double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

}  // namespace

TEST_CASE("symmetrized Kubo-Mori kernel: closed form, generic route and derivative") {
  const auto km = SymmetrizedKernel::kubo_mori();
  const auto generic = SymmetrizedKernel::generic(km_kernel());
  CHECK(km.is_kubo_mori());
  CHECK_FALSE(generic.is_kubo_mori());
  CHECK(generic.kernel() != nullptr);
  for (auto [x, y, z] : {std::tuple{0.2, 0.9, 3.1}, std::tuple{5.0, 0.03, 40.0}}) {
    CHECK(rel(km.value(x, y, z), kubo_mori_hs_closed_form(x, y, z)) < 1e-11);
    CHECK(rel(km.value(x, y, z), generic.value(x, y, z)) < 1e-11);
    CHECK(rel(km.dx(x, y, z), km.dx_numeric(x, y, z)) < 1e-8);
    CHECK(rel(km.dx(x, y, z), generic.dx(x, y, z)) < 1e-8);
  }
  CHECK_THROWS_AS(kubo_mori_hs_closed_form(1.0, 1.0, 2.0), Error);
}

TEST_CASE("majorization") {
  const std::vector<double> mixed{1.0 / 3, 1.0 / 3, 1.0 / 3}, pure{0.8, 0.1, 0.1}, mid{0.5, 0.3, 0.2};
  CHECK(majorizes(mixed, pure));
  CHECK(majorizes(mid, pure));
  CHECK_FALSE(majorizes(pure, mid));
  CHECK(majorizes(mid, mid));
  const std::vector<double> short_one{0.5, 0.5}, other_sum{0.5, 0.3, 0.3};
  CHECK_THROWS_AS(majorizes(mixed, short_one), Error);
  CHECK_THROWS_AS(majorizes(mixed, other_sum), Error);
}

TEST_CASE("T-transforms mix and preserve the trace") {
  const std::vector<double> s{0.6, 0.3, 0.1};
  const auto step = MixingStep::make(0, 2, 0.8);
  CHECK(step.i == 2);
  CHECK(step.j == 0);
  CHECK(step.t == doctest::Approx(0.2));
  const auto out = t_transform(s, step);
  CHECK(std::accumulate(out.begin(), out.end(), 0.0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(majorizes(out, s));
  CHECK(out[0] == doctest::Approx(0.5));
  CHECK(out[2] == doctest::Approx(0.2));
  CHECK(t_transform(s, MixingStep::make(0, 1, 0.0)) == s);
  CHECK_THROWS_AS(t_transform(s, MixingStep{0, 3, 0.1}), Error);
  CHECK_THROWS_AS(MixingStep::make(0, 1, 1.5), Error);
}

TEST_CASE("derivative inequalities at sample points") {
  const auto km = SymmetrizedKernel::kubo_mori();
  for (auto [x, y, l, m] : {std::tuple{0.1, 0.4, 2.0, 0.7}, std::tuple{1.0, 30.0, 0.05, 5.0}}) {
    for (double v : lemma4_check(km, x, y, l, m)) CHECK(v >= 0.0);
  }
  try {
    lemma4_check(km, 0.5, 0.2, 1.0, 1.0);
    FAIL("expected OrderViolation");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::OrderViolation);
  }
}

TEST_CASE("Hessian of h_s: symmetric, matches differences, expected sign pattern") {
  const auto km = SymmetrizedKernel::kubo_mori();
  const Eigen::Matrix3d h = hs_hessian(km, 0.7, 1.6, 1.0);
  CHECK((h - h.transpose()).norm() == 0.0);
  const double s = 1e-4;
  const double fd = (km.value(0.7 + s, 1.6, 1.0) - 2 * km.value(0.7, 1.6, 1.0) + km.value(0.7 - s, 1.6, 1.0)) / (s * s);
  CHECK(h(0, 0) == doctest::Approx(fd).epsilon(1e-5));
  const auto minors = hessian_minors(km, 0.7, 1.6, 1.0);
  CHECK(minors.M1 < 0.0);
  CHECK(minors.M2 > 0.0);
  CHECK(minors.worst_excess() <= kMinorTolerance);
  const auto grid = hessian_minor_grid(km, 0.1, 10.0, 6);
  CHECK(grid.points == 36);
  CHECK(grid.violations == 0);
}

TEST_CASE("scans are reproducible and independent of the worker count") {
  const auto km = SymmetrizedKernel::kubo_mori();
  setenv("MONOCURV_THREADS", "1", 1);
  const auto a = concavity_scan(km, 9000, 77);
  const auto la = lemma4_scan(km, 5000, 77);
  const auto ma = monotonicity_scan(3, 40, 10, 77);
  setenv("MONOCURV_THREADS", "3", 1);
  const auto b = concavity_scan(km, 9000, 77);
  const auto lb = lemma4_scan(km, 5000, 77);
  const auto mb = monotonicity_scan(3, 40, 10, 77);
  unsetenv("MONOCURV_THREADS");
  CHECK(a.max_violation == b.max_violation);
  CHECK(a.worst_trial == b.worst_trial);
  CHECK(la.min_residual == lb.min_residual);
  CHECK(ma.max_decrease == mb.max_decrease);
  CHECK(ma.evaluations == 40 * 11);
  CHECK(a.max_violation <= 1e-9);
  CHECK(la.min_residual >= -1e-9);
  CHECK(ma.violations == 0);
  CHECK(ma.max_scalar <= ma.trace_state_value + 1e-6);
  CHECK(concavity_scan(km, 9000, 78).max_violation != a.max_violation);
}

TEST_CASE("monotonicity scan with zero mixing never decreases") {
  const auto r = monotonicity_scan(4, 5, 5, 3, true);
  CHECK(r.max_decrease == 0.0);
  CHECK(r.trace_state_value == doctest::Approx(22.5));
  CHECK_THROWS_AS(monotonicity_scan(1, 1, 1, 1), Error);
}

TEST_CASE("directional derivative expansion agrees with differences of the curvature") {
  const auto km = SymmetrizedKernel::kubo_mori();
  const std::vector<double> tail{0.4, 2.2};
  const auto d = directional_derivative_check(km, 0.3, 1.1, tail);
  CHECK(std::abs(d.expansion - d.finite_difference) <= 1e-6 * std::max(std::abs(d.expansion), d.scale));
  CHECK(d.expansion >= 0.0);
  const auto generic = directional_derivative_check(SymmetrizedKernel::generic(km_kernel()), 0.3, 1.1, tail);
  CHECK(generic.expansion == doctest::Approx(d.expansion).epsilon(1e-6));
  const auto scan = directional_scan(km, 300, 4);
  CHECK(scan.min_value >= 0.0);
  CHECK(scan.max_disagreement < 1e-4);
}

TEST_CASE("scan regions are validated") {
  const auto km = SymmetrizedKernel::kubo_mori();
  CHECK_THROWS_AS(concavity_scan(km, 1, 1, ScanRegion{0.0, 1.0}), Error);
  CHECK_THROWS_AS(lemma4_scan(km, 1, 1, ScanRegion{2.0, 1.0}), Error);
  CHECK(concavity_scan(km, 0, 1).trials == 0);
}

TEST_CASE("h_s is symmetric and homogeneous of degree -1") {
  const auto km = SymmetrizedKernel::kubo_mori();
  const double x = 0.4, y = 2.5, z = 9.0, v = km.value(x, y, z);
  for (double p : {km.value(y, x, z), km.value(z, y, x), km.value(x, z, y), km.value(y, z, x), km.value(z, x, y)})
    CHECK(rel(p, v) < 1e-10);
  CHECK(rel(km.value(5 * x, 5 * y, 5 * z), v / 5) < 1e-10);
}
