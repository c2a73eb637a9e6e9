#include "monocurv/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "monocurv/error.hpp"

namespace monocurv {

namespace {

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;

VectorXd offset(Index dim, Index i, double hi, Index j = -1, double hj = 0.0) {
  VectorXd p = VectorXd::Zero(dim);
  p(i) += hi;
  if (j >= 0) p(j) += hj;
  return p;
}

// Frobenius-orthonormal basis of Hermitian (or traceless Hermitian) n x n matrices.
std::vector<TangentVector> chart_basis(Index n, bool traceless) {
  std::vector<TangentVector> out;
  if (traceless) {
    for (Index l = 1; l < n; ++l) {
      CMatrix d = CMatrix::Zero(n, n);
      for (Index k = 0; k < l; ++k) d(k, k) = 1.0;
      d(l, l) = -static_cast<double>(l);
      d /= std::sqrt(static_cast<double>(l * (l + 1)));
      out.emplace_back(std::move(d));
    }
  } else {
    for (Index i = 0; i < n; ++i) {
      CMatrix d = CMatrix::Zero(n, n);
      d(i, i) = 1.0;
      out.emplace_back(std::move(d));
    }
  }
  const double r = 1.0 / std::sqrt(2.0);
  for (Index i = 0; i < n; ++i)
    for (Index j = i + 1; j < n; ++j) {
      CMatrix re = CMatrix::Zero(n, n), im = CMatrix::Zero(n, n);
      re(i, j) = re(j, i) = r;
      im(i, j) = Complex(0.0, r);
      im(j, i) = Complex(0.0, -r);
      out.emplace_back(std::move(re));
      out.emplace_back(std::move(im));
    }
  return out;
}

}  // namespace

double chart_scalar_curvature(const ChartMetric& metric, Index dim, ChartSteps steps) {
  if (dim < 2) throw Error(ErrorCode::DimensionTooSmall, "chart curvature needs dimension >= 2");
  const MatrixXd g0 = metric(VectorXd::Zero(dim));
  if (g0.rows() != dim || g0.cols() != dim) throw Error(ErrorCode::DimensionMismatch, "chart metric has wrong size");

  const Eigen::SelfAdjointEigenSolver<MatrixXd> eig(g0, Eigen::EigenvaluesOnly);
  const double lo = eig.eigenvalues()(0), hi = eig.eigenvalues()(dim - 1);
  if (!(lo > 0.0) || hi / lo > kMaxChartCondition)
    throw Error(ErrorCode::IllConditioned, "chart metric condition number " + std::to_string(hi / lo));
  const MatrixXd ginv = g0.llt().solve(MatrixXd::Identity(dim, dim));

  // dg[m] = d_m G
  std::vector<MatrixXd> dg(static_cast<std::size_t>(dim));
  for (Index m = 0; m < dim; ++m) {
    auto central = [&](double h) {
      return MatrixXd((metric(offset(dim, m, h)) - metric(offset(dim, m, -h))) / (2.0 * h));
    };
    const double h = steps.first;
    dg[m] = (4.0 * central(0.5 * h) - central(h)) / 3.0;
  }

  // ddg[i*dim+j] = d_i d_j G
  std::vector<MatrixXd> ddg(static_cast<std::size_t>(dim * dim));
  for (Index i = 0; i < dim; ++i)
    for (Index j = i; j < dim; ++j) {
      auto stencil = [&](double h) -> MatrixXd {
        if (i == j) return (metric(offset(dim, i, h)) - 2.0 * g0 + metric(offset(dim, i, -h))) / (h * h);
        return (metric(offset(dim, i, h, j, h)) - metric(offset(dim, i, h, j, -h)) -
                metric(offset(dim, i, -h, j, h)) + metric(offset(dim, i, -h, j, -h))) /
               (4.0 * h * h);
      };
      const double h = steps.second;
      ddg[i * dim + j] = (4.0 * stencil(0.5 * h) - stencil(h)) / 3.0;
      ddg[j * dim + i] = ddg[i * dim + j];
    }
  auto d2 = [&](Index a, Index b, Index r, Index s) { return ddg[a * dim + b](r, s); };

  // Lowered and raised Christoffel symbols.
  const auto d3 = static_cast<std::size_t>(dim * dim * dim);
  std::vector<double> lower(d3), upper(d3);
  auto at = [dim](Index p, Index k, Index l) { return static_cast<std::size_t>((p * dim + k) * dim + l); };
  for (Index p = 0; p < dim; ++p)
    for (Index k = 0; k < dim; ++k)
      for (Index l = 0; l < dim; ++l) lower[at(p, k, l)] = 0.5 * (dg[l](p, k) + dg[k](p, l) - dg[p](k, l));
  for (Index q = 0; q < dim; ++q)
    for (Index k = 0; k < dim; ++k)
      for (Index l = 0; l < dim; ++l) {
        double s = 0.0;
        for (Index p = 0; p < dim; ++p) s += ginv(q, p) * lower[at(p, k, l)];
        upper[at(q, k, l)] = s;
      }

  double total = 0.0;
  for (Index i = 0; i < dim; ++i)
    for (Index k = 0; k < dim; ++k)
      for (Index l = 0; l < dim; ++l) {
        if (ginv(i, l) == 0.0) continue;
        for (Index m = 0; m < dim; ++m) {
          double r = 0.5 * (d2(k, l, i, m) + d2(i, m, k, l) - d2(k, m, i, l) - d2(i, l, k, m));
          for (Index p = 0; p < dim; ++p)
            r += lower[at(p, k, l)] * upper[at(p, i, m)] - lower[at(p, k, m)] * upper[at(p, i, l)];
          total += ginv(i, l) * ginv(k, m) * r;
        }
      }
  return total;
}

double oracle_scalar(const MetricContext& ctx, bool normalized) {
  if (normalized && !ctx.state().is_normalized())
    throw Error(ErrorCode::NotNormalized, "trace of rho is " + std::to_string(ctx.state().trace()));
  const Index n = ctx.dim();
  const auto basis = chart_basis(n, normalized);
  const auto dim = static_cast<Index>(basis.size());
  const CMatrix& rho = ctx.state().matrix();

  const auto& lam = ctx.spectrum().eigenvalues;
  const double norm = lam(n - 1), floor = 0.1 * lam(0);
  const ChartSteps steps{std::min(1e-3 * norm, floor), std::min(5e-3 * norm, floor)};

  const ChartMetric chart = [&](const VectorXd& p) {
    CMatrix point = rho;
    for (Index k = 0; k < dim; ++k) point += p(k) * basis[static_cast<std::size_t>(k)].matrix();
    const MetricContext local(ctx.function(), DensityMatrix(point), MetricContext::Depth::MetricOnly);
    return metric_gram(local, basis);
  };
  return chart_scalar_curvature(chart, dim, steps);
}

}  // namespace monocurv
