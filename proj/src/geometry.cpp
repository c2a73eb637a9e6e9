#include "monocurv/geometry.hpp"

#include <cmath>
#include <string>

#include "monocurv/error.hpp"

namespace monocurv {

MetricContext::MetricContext(MorozovaChentsovFunction c, DensityMatrix rho, Depth depth)
    : c_(std::move(c)), rho_(std::move(rho)), spec_(decompose(rho_)), n_(rho_.dim()) {
  const auto& lam = spec_.eigenvalues;
  const auto n = n_;
  cvals_.resize(static_cast<std::size_t>(n * n));
  for (Eigen::Index a = 0; a < n; ++a)
    for (Eigen::Index b = 0; b < n; ++b) cvals_[idx(a, b)] = c_.c(lam(a), lam(b));
  if (depth == Depth::MetricOnly) return;

  first_.resize(static_cast<std::size_t>(n * n * n));
  for (Eigen::Index a = 0; a < n; ++a)
    for (Eigen::Index b = 0; b < n; ++b)
      for (Eigen::Index d = 0; d < n; ++d) first_[idx(a, b, d)] = divided_diff_1(c_, lam(a), lam(b), lam(d));

  second_.resize(static_cast<std::size_t>(n * n * n * n));
  mixed_.resize(second_.size());
  for (Eigen::Index a = 0; a < n; ++a)
    for (Eigen::Index b = 0; b < n; ++b)
      for (Eigen::Index e = 0; e < n; ++e)
        for (Eigen::Index d = 0; d < n; ++d) {
          second_[idx(a, b, e, d)] = divided_diff_2(c_, lam(a), lam(b), lam(e), lam(d));
          mixed_[idx(a, b, e, d)] = divided_diff_mixed(c_, lam(a), lam(b), lam(e), lam(d));
        }
}

CMatrix MetricContext::to_eigenbasis(const TangentVector& x) const {
  if (x.dim() != n_)
    throw Error(ErrorCode::DimensionMismatch,
                "tangent vector of size " + std::to_string(x.dim()) + " at a point of size " + std::to_string(n_));
  return spec_.eigenvectors.adjoint() * x.matrix() * spec_.eigenvectors;
}

CMatrix MetricContext::from_eigenbasis(const CMatrix& a) const {
  return spec_.eigenvectors * a * spec_.eigenvectors.adjoint();
}

namespace {

void require_tables(const MetricContext& ctx) {
  if (!ctx.has_derivative_tables())
    throw Error(ErrorCode::InvalidArgument, "metric-only context cannot evaluate derivatives");
}

// The helpers below take tangent vectors already rotated into the eigenbasis.

double g_hat(const MetricContext& ctx, const CMatrix& x, const CMatrix& y) {
  const auto n = ctx.dim();
  Complex sum = 0.0;
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) sum += std::conj(x(i, j)) * ctx.c_at(i, j) * y(i, j);
  return sum.real();
}

// sum_abc Z_ab X_bc Y_ca c[a,b ; c]
Complex dg_term(const MetricContext& ctx, const CMatrix& z, const CMatrix& x, const CMatrix& y) {
  const auto n = ctx.dim();
  Complex sum = 0.0;
  for (Eigen::Index a = 0; a < n; ++a)
    for (Eigen::Index b = 0; b < n; ++b) {
      const Complex zab = z(a, b);
      if (zab == 0.0) continue;
      for (Eigen::Index c = 0; c < n; ++c) sum += zab * x(b, c) * y(c, a) * ctx.first_dd(a, b, c);
    }
  return sum;
}

double dg_hat(const MetricContext& ctx, const CMatrix& z, const CMatrix& x, const CMatrix& y) {
  return (dg_term(ctx, z, x, y) + dg_term(ctx, z, y, x)).real();
}

// Second derivative with X, Y fixed in this order; the caller adds X<->Y.
//   sum_abcd (Z_ab W_bc + W_ab Z_bc) X_cd Y_da c[a,b,c ; d]
//          + Z_ab X_bc W_cd Y_da c[a,b ; c,d]
Complex d2g_term(const MetricContext& ctx, const CMatrix& z, const CMatrix& w, const CMatrix& x,
                 const CMatrix& y) {
  const auto n = ctx.dim();
  Complex sum = 0.0;
  for (Eigen::Index a = 0; a < n; ++a)
    for (Eigen::Index b = 0; b < n; ++b)
      for (Eigen::Index c = 0; c < n; ++c) {
        const Complex path = z(a, b) * w(b, c) + w(a, b) * z(b, c);
        const Complex zx = z(a, b) * x(b, c);
        for (Eigen::Index d = 0; d < n; ++d) {
          sum += path * x(c, d) * y(d, a) * ctx.second_dd(a, b, c, d);
          sum += zx * w(c, d) * y(d, a) * ctx.mixed_dd(a, b, c, d);
        }
      }
  return sum;
}

double d2g_hat(const MetricContext& ctx, const CMatrix& z, const CMatrix& w, const CMatrix& x, const CMatrix& y) {
  return (d2g_term(ctx, z, w, x, y) + d2g_term(ctx, z, w, y, x)).real();
}

CMatrix gamma_hat(const MetricContext& ctx, const CMatrix& x, const CMatrix& y) {
  const auto n = ctx.dim();
  CMatrix out = CMatrix::Zero(n, n);
  for (Eigen::Index a = 0; a < n; ++a)
    for (Eigen::Index d = 0; d < n; ++d) {
      Complex sum = 0.0;
      for (Eigen::Index b = 0; b < n; ++b) {
        const double weight = ctx.first_dd(a, b, d) + ctx.first_dd(b, d, a) - ctx.first_dd(a, d, b);
        sum += (x(a, b) * y(b, d) + y(a, b) * x(b, d)) * weight;
      }
      out(a, d) = sum / (2.0 * ctx.c_at(a, d));
    }
  return out;
}

double riemann_hat(const MetricContext& ctx, const CMatrix& x, const CMatrix& y, const CMatrix& z,
                   const CMatrix& w) {
  const double connection = g_hat(ctx, gamma_hat(ctx, x, w), gamma_hat(ctx, y, z)) -
                            g_hat(ctx, gamma_hat(ctx, x, z), gamma_hat(ctx, y, w));
  const double hessian = d2g_hat(ctx, x, w, y, z) + d2g_hat(ctx, y, z, x, w) - d2g_hat(ctx, x, z, y, w) -
                         d2g_hat(ctx, y, w, x, z);
  return connection + 0.5 * hessian;
}

double gauss_shift(const MetricContext& ctx, const CMatrix& x, const CMatrix& y, const CMatrix& z,
                   const CMatrix& w) {
  return 0.25 * (g_hat(ctx, x, z) * g_hat(ctx, y, w) - g_hat(ctx, y, z) * g_hat(ctx, x, w));
}

void require_normalized(const MetricContext& ctx) {
  if (!ctx.state().is_normalized())
    throw Error(ErrorCode::NotNormalized, "trace of rho is " + std::to_string(ctx.state().trace()));
}

void require_traceless(const TangentVector& v) {
  if (!v.is_traceless()) throw Error(ErrorCode::NotTangent, "tangent vectors of the trace-one states must be traceless");
}

}  // namespace

double metric(const MetricContext& ctx, const TangentVector& x, const TangentVector& y) {
  return g_hat(ctx, ctx.to_eigenbasis(x), ctx.to_eigenbasis(y));
}

Eigen::MatrixXd metric_gram(const MetricContext& ctx, const std::vector<TangentVector>& vectors) {
  std::vector<CMatrix> hats;
  hats.reserve(vectors.size());
  for (const auto& v : vectors) hats.push_back(ctx.to_eigenbasis(v));
  const auto m = static_cast<Eigen::Index>(vectors.size());
  Eigen::MatrixXd gram(m, m);
  for (Eigen::Index k = 0; k < m; ++k)
    for (Eigen::Index l = k; l < m; ++l) gram(k, l) = gram(l, k) = g_hat(ctx, hats[k], hats[l]);
  return gram;
}

double metric_derivative(const MetricContext& ctx, const TangentVector& z, const TangentVector& x,
                         const TangentVector& y) {
  require_tables(ctx);
  return dg_hat(ctx, ctx.to_eigenbasis(z), ctx.to_eigenbasis(x), ctx.to_eigenbasis(y));
}

double metric_second_derivative(const MetricContext& ctx, const TangentVector& z, const TangentVector& w,
                                const TangentVector& x, const TangentVector& y) {
  require_tables(ctx);
  return d2g_hat(ctx, ctx.to_eigenbasis(z), ctx.to_eigenbasis(w), ctx.to_eigenbasis(x), ctx.to_eigenbasis(y));
}

TangentVector christoffel(const MetricContext& ctx, const TangentVector& x, const TangentVector& y) {
  require_tables(ctx);
  const CMatrix hat = gamma_hat(ctx, ctx.to_eigenbasis(x), ctx.to_eigenbasis(y));
  const CMatrix back = ctx.from_eigenbasis(hat);
  return TangentVector(0.5 * (back + back.adjoint()));
}

double riemann(const MetricContext& ctx, const TangentVector& x, const TangentVector& y, const TangentVector& z,
               const TangentVector& w) {
  require_tables(ctx);
  return riemann_hat(ctx, ctx.to_eigenbasis(x), ctx.to_eigenbasis(y), ctx.to_eigenbasis(z), ctx.to_eigenbasis(w));
}

double riemann_normalized(const MetricContext& ctx, const TangentVector& x, const TangentVector& y,
                          const TangentVector& z, const TangentVector& w) {
  require_tables(ctx);
  require_normalized(ctx);
  for (const auto* v : {&x, &y, &z, &w}) require_traceless(*v);
  const CMatrix xh = ctx.to_eigenbasis(x), yh = ctx.to_eigenbasis(y);
  const CMatrix zh = ctx.to_eigenbasis(z), wh = ctx.to_eigenbasis(w);
  return riemann_hat(ctx, xh, yh, zh, wh) + gauss_shift(ctx, xh, yh, zh, wh);
}

CurvatureValue sectional(const MetricContext& ctx, const TangentVector& x, const TangentVector& y,
                         bool normalized) {
  require_tables(ctx);
  if (normalized) {
    require_normalized(ctx);
    require_traceless(x);
    require_traceless(y);
  }
  const CMatrix xh = ctx.to_eigenbasis(x), yh = ctx.to_eigenbasis(y);
  const double gxx = g_hat(ctx, xh, xh), gyy = g_hat(ctx, yh, yh), gxy = g_hat(ctx, xh, yh);
  if (!(gxx > 0.0) || !(gyy > 0.0)) throw Error(ErrorCode::InvalidArgument, "sectional curvature of a zero vector");
  if (std::abs(gxy) > kOrthogonalityTolerance * std::sqrt(gxx * gyy))
    throw Error(ErrorCode::NotOrthogonal, "g(X,Y) = " + std::to_string(gxy));
  double k = riemann_hat(ctx, xh, yh, xh, yh) / (gxx * gyy);
  if (normalized) k += 0.25;
  return {k, normalized};
}

std::vector<TangentVector> orthogonal_basis(const MetricContext& ctx, bool traceless) {
  const auto n = ctx.dim();
  const auto& lam = ctx.spectrum().eigenvalues;
  std::vector<CMatrix> hats;

  if (!traceless) {
    for (Eigen::Index i = 0; i < n; ++i) {
      CMatrix b = CMatrix::Zero(n, n);
      b(i, i) = 2.0;
      hats.push_back(std::move(b));
    }
  } else {
    // Diagonal directions are orthogonal for the weight 1/lambda_i.
    std::vector<Eigen::VectorXd> done;
    for (Eigen::Index k = 0; k + 1 < n; ++k) {
      Eigen::VectorXd v = Eigen::VectorXd::Zero(n);
      v(k) = 1.0;
      v(n - 1) = -1.0;
      for (const auto& u : done) {
        const double num = (v.array() * u.array() / lam.array()).sum();
        const double den = (u.array() * u.array() / lam.array()).sum();
        v -= (num / den) * u;
      }
      done.push_back(v);
      hats.push_back(v.cast<Complex>().asDiagonal().toDenseMatrix());
    }
  }
  const auto all = basis_vectors(n);
  for (std::size_t k = static_cast<std::size_t>(n); k < all.size(); ++k) hats.push_back(all[k].matrix());

  std::vector<TangentVector> out;
  out.reserve(hats.size());
  for (const auto& h : hats) {
    const CMatrix m = ctx.from_eigenbasis(h);
    out.emplace_back(0.5 * (m + m.adjoint()));
  }
  return out;
}

double scalar_from_basis(const MetricContext& ctx, bool normalized) {
  require_tables(ctx);
  if (normalized) require_normalized(ctx);
  const auto basis = orthogonal_basis(ctx, normalized);
  std::vector<CMatrix> hats;
  std::vector<double> norms;
  for (const auto& b : basis) {
    hats.push_back(ctx.to_eigenbasis(b));
    norms.push_back(g_hat(ctx, hats.back(), hats.back()));
  }
  double total = 0.0;
  for (std::size_t k = 0; k < hats.size(); ++k)
    for (std::size_t l = k + 1; l < hats.size(); ++l) {
      double kappa = riemann_hat(ctx, hats[k], hats[l], hats[k], hats[l]) / (norms[k] * norms[l]);
      if (normalized) kappa += 0.25;
      total += 2.0 * kappa;
    }
  return total;
}

}  // namespace monocurv
