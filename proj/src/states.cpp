#include "monocurv/states.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "monocurv/error.hpp"

namespace monocurv {

namespace {

constexpr double kPositivityFloor = 1e-12;

double hermitian_defect(const CMatrix& m) {
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

double entry_scale(const CMatrix& m) {
  return std::max(1.0, m.cwiseAbs().maxCoeff());
}

CMatrix checked_hermitian(CMatrix m, const char* what) {
  if (m.rows() != m.cols()) throw Error(ErrorCode::DimensionMismatch, std::string(what) + " must be square");
  if (m.rows() == 0) throw Error(ErrorCode::DimensionTooSmall, std::string(what) + " is empty");
  if (!m.allFinite()) throw Error(ErrorCode::InvalidArgument, std::string(what) + " has non-finite entries");
  const double defect = hermitian_defect(m);
  if (defect > kHermitianTolerance * entry_scale(m))
    throw Error(ErrorCode::NotHermitian,
                std::string(what) + " deviates from its adjoint by " + std::to_string(defect));
  CMatrix sym = 0.5 * (m + m.adjoint());
  return sym;
}

}  // namespace

DensityMatrix::DensityMatrix(CMatrix entries) : entries_(checked_hermitian(std::move(entries), "density matrix")) {
  if (entries_.rows() < 2) throw Error(ErrorCode::DimensionTooSmall, "density matrices need n >= 2");
  const Eigen::SelfAdjointEigenSolver<CMatrix> solver(entries_, Eigen::EigenvaluesOnly);
  const auto& ev = solver.eigenvalues();
  if (!(ev(0) > kPositivityFloor * std::abs(ev(ev.size() - 1))))
    throw Error(ErrorCode::NotPositiveDefinite, "smallest eigenvalue " + std::to_string(ev(0)));
}

DensityMatrix DensityMatrix::diagonal(std::span<const double> spectrum) {
  CMatrix m = CMatrix::Zero(static_cast<Eigen::Index>(spectrum.size()), static_cast<Eigen::Index>(spectrum.size()));
  for (std::size_t i = 0; i < spectrum.size(); ++i) m(i, i) = spectrum[i];
  return DensityMatrix(std::move(m));
}

bool DensityMatrix::is_normalized(double tolerance) const { return std::abs(trace() - 1.0) <= tolerance; }

TangentVector::TangentVector(CMatrix entries) : entries_(checked_hermitian(std::move(entries), "tangent vector")) {}

bool TangentVector::is_traceless(double tolerance) const {
  return std::abs(entries_.trace()) <= tolerance * entry_scale(entries_);
}

CMatrix SpectralDecomposition::reconstruct() const {
  return eigenvectors * eigenvalues.cast<Complex>().asDiagonal() * eigenvectors.adjoint();
}

SpectralDecomposition decompose(const DensityMatrix& rho) {
  const Eigen::SelfAdjointEigenSolver<CMatrix> solver(rho.matrix());
  if (solver.info() != Eigen::Success) throw Error(ErrorCode::InvalidArgument, "eigensolver did not converge");
  SpectralDecomposition out{solver.eigenvalues(), solver.eigenvectors()};
  const double lmax = out.eigenvalues(out.eigenvalues.size() - 1);
  if (!(out.eigenvalues(0) > kPositivityFloor * std::abs(lmax)))
    throw Error(ErrorCode::NotPositiveDefinite, "smallest eigenvalue " + std::to_string(out.eigenvalues(0)));

  for (Eigen::Index k = 0; k < out.eigenvectors.cols(); ++k) {
    auto col = out.eigenvectors.col(k);
    Eigen::Index arg = 0;
    col.cwiseAbs().maxCoeff(&arg);
    const Complex phase = std::conj(col(arg)) / std::abs(col(arg));
    col *= phase;
    col(arg) = std::abs(col(arg));
  }
  return out;
}

std::size_t basis_index_diag(Eigen::Index n, Eigen::Index i) {
  if (i < 0 || i >= n) throw Error(ErrorCode::IndexOutOfRange, "diagonal basis index");
  return static_cast<std::size_t>(i);
}

namespace {
std::size_t pair_rank(Eigen::Index n, Eigen::Index i, Eigen::Index j) {
  if (i < 0 || j >= n || i >= j) throw Error(ErrorCode::IndexOutOfRange, "basis pair needs 0 <= i < j < n");
  // Row-major rank of (i,j) among pairs i<j.
  return static_cast<std::size_t>(i * n - i * (i + 1) / 2 + (j - i - 1));
}
}  // namespace

std::size_t basis_index_real(Eigen::Index n, Eigen::Index i, Eigen::Index j) {
  return static_cast<std::size_t>(n) + pair_rank(n, i, j);
}

std::size_t basis_index_imag(Eigen::Index n, Eigen::Index i, Eigen::Index j) {
  return static_cast<std::size_t>(n + n * (n - 1) / 2) + pair_rank(n, i, j);
}

std::vector<TangentVector> basis_vectors(Eigen::Index n) {
  if (n < 2) throw Error(ErrorCode::DimensionTooSmall, "basis_vectors needs n >= 2");
  std::vector<TangentVector> out;
  out.reserve(static_cast<std::size_t>(n * n));
  for (Eigen::Index i = 0; i < n; ++i) {
    CMatrix b = CMatrix::Zero(n, n);
    b(i, i) = 2.0;
    out.emplace_back(std::move(b));
  }
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i + 1; j < n; ++j) {
      CMatrix b = CMatrix::Zero(n, n);
      b(i, j) = 1.0;
      b(j, i) = 1.0;
      out.emplace_back(std::move(b));
    }
  const Complex I(0.0, 1.0);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i + 1; j < n; ++j) {
      CMatrix b = CMatrix::Zero(n, n);
      b(i, j) = I;
      b(j, i) = -I;
      out.emplace_back(std::move(b));
    }
  return out;
}

CMatrix random_unitary(Eigen::Index n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  CMatrix g(n, n);
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index i = 0; i < n; ++i) g(i, j) = Complex(normal(rng), normal(rng));
  const Eigen::HouseholderQR<CMatrix> qr(g);
  CMatrix q = qr.householderQ();
  const CMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index k = 0; k < n; ++k) {
    const Complex d = r(k, k);
    if (std::abs(d) > 0.0) q.col(k) *= d / std::abs(d);
  }
  return q;
}

DensityMatrix random_state(Eigen::Index n, std::uint64_t seed, double spread, bool normalized) {
  if (n < 2) throw Error(ErrorCode::DimensionTooSmall, "random_state needs n >= 2");
  if (!(spread >= 1.0)) throw Error(ErrorCode::InvalidArgument, "spread must be >= 1");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  Eigen::VectorXd spectrum(n);
  for (Eigen::Index i = 0; i < n; ++i) spectrum(i) = std::exp(unit(rng) * std::log(spread));

  CMatrix m;
  if (spread == 1.0) {
    m = CMatrix::Identity(n, n);
  } else {
    const CMatrix u = random_unitary(n, rng());
    m = u * spectrum.cast<Complex>().asDiagonal() * u.adjoint();
    m = 0.5 * (m + m.adjoint()).eval();
  }
  if (normalized) m /= m.trace().real();
  return DensityMatrix(std::move(m));
}

TangentVector random_tangent(Eigen::Index n, std::uint64_t seed, bool traceless) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  CMatrix m(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    m(i, i) = normal(rng);
    for (Eigen::Index j = i + 1; j < n; ++j) {
      m(i, j) = Complex(normal(rng), normal(rng));
      m(j, i) = std::conj(m(i, j));
    }
  }
  if (traceless) m -= (m.trace() / static_cast<double>(n)) * CMatrix::Identity(n, n);
  return TangentVector(std::move(m));
}

}  // namespace monocurv
