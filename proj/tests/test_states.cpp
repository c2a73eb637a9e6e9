#include <doctest.h>

#include <cmath>

#include "monocurv/error.hpp"
#include "monocurv/states.hpp"

using namespace monocurv;

namespace {

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an Error");
  return ErrorCode::InvalidArgument;
}

}  // namespace

TEST_CASE("density matrices reject invalid input with the right code") {
  CMatrix bad(2, 2);
  bad << 1.0, Complex(0.1, 0.2), Complex(0.1, 0.2), 1.0;
  CHECK(code_of([&] { DensityMatrix{bad}; }) == ErrorCode::NotHermitian);

  CMatrix singular(2, 2);
  singular << 1.0, 1.0, 1.0, 1.0;
  CHECK(code_of([&] { DensityMatrix{singular}; }) == ErrorCode::NotPositiveDefinite);

  CMatrix one = CMatrix::Identity(1, 1);
  CHECK(code_of([&] { DensityMatrix{one}; }) == ErrorCode::DimensionTooSmall);

  const std::vector<double> negative{0.5, -0.1};
  CHECK(code_of([&] { DensityMatrix::diagonal(negative); }) == ErrorCode::NotPositiveDefinite);
}

TEST_CASE("tiny anti-Hermitian noise is accepted and symmetrized away") {
  CMatrix m(2, 2);
  m << 0.6, Complex(0.1, 0.05), Complex(0.1, -0.05 + 1e-15), 0.4;
  const DensityMatrix rho(m);
  CHECK((rho.matrix() - rho.matrix().adjoint()).norm() == 0.0);
  CHECK(rho.is_normalized());
}

TEST_CASE("spectral decomposition reconstructs and follows the phase convention") {
  const auto rho = random_state(4, 11, 10.0);
  const auto spec = decompose(rho);
  CHECK((spec.reconstruct() - rho.matrix()).norm() < 1e-12 * rho.matrix().norm());
  for (Eigen::Index k = 0; k + 1 < spec.eigenvalues.size(); ++k) CHECK(spec.eigenvalues(k) <= spec.eigenvalues(k + 1));
  for (Eigen::Index k = 0; k < spec.eigenvectors.cols(); ++k) {
    Eigen::Index big = 0;
    spec.eigenvectors.col(k).cwiseAbs().maxCoeff(&big);
    CHECK(std::abs(spec.eigenvectors(big, k).imag()) < 1e-14);
    CHECK(spec.eigenvectors(big, k).real() > 0.0);
  }
  CHECK((spec.eigenvectors.adjoint() * spec.eigenvectors - CMatrix::Identity(4, 4)).norm() < 1e-12);
}

TEST_CASE("basis vectors are Hermitian, trace-orthogonal and indexed as documented") {
  const Eigen::Index n = 3;
  const auto basis = basis_vectors(n);
  REQUIRE(basis.size() == 9);
  for (std::size_t a = 0; a < basis.size(); ++a)
    for (std::size_t b = 0; b < basis.size(); ++b) {
      const Complex ip = (basis[a].matrix() * basis[b].matrix()).trace();
      if (a == b)
        CHECK(ip.real() > 0.0);
      else
        CHECK(std::abs(ip) < 1e-15);
    }
  CHECK(basis[basis_index_diag(n, 1)].matrix()(1, 1) == Complex(2.0, 0.0));
  CHECK(basis[basis_index_real(n, 0, 2)].matrix()(0, 2) == Complex(1.0, 0.0));
  CHECK(basis[basis_index_real(n, 0, 2)].matrix()(2, 0) == Complex(1.0, 0.0));
  CHECK(basis[basis_index_imag(n, 1, 2)].matrix()(1, 2) == Complex(0.0, 1.0));
  CHECK(basis[basis_index_imag(n, 1, 2)].matrix()(2, 1) == Complex(0.0, -1.0));
}

TEST_CASE("random states are deterministic and respect the spread") {
  const auto a = random_state(3, 42, 5.0), b = random_state(3, 42, 5.0), c = random_state(3, 43, 5.0);
  CHECK(a.matrix() == b.matrix());
  CHECK(a.matrix() != c.matrix());
  const auto ev = decompose(a).eigenvalues;
  CHECK(ev.maxCoeff() / ev.minCoeff() <= 5.0 * (1 + 1e-12));
  CHECK(random_state(3, 42, 5.0, true).is_normalized());
  CHECK((random_state(3, 7, 1.0).matrix() - CMatrix::Identity(3, 3)).norm() < 1e-12);
}

TEST_CASE("random unitaries and tangent vectors") {
  const CMatrix u = random_unitary(4, 3);
  CHECK((u.adjoint() * u - CMatrix::Identity(4, 4)).norm() < 1e-12);
  const auto t = random_tangent(3, 5, true);
  CHECK(t.is_traceless());
  CHECK((t.matrix() - t.matrix().adjoint()).norm() == 0.0);
  CHECK_FALSE(random_tangent(3, 5, false).is_traceless());
}
