#include "monocurv/conjecture.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <numeric>
#include <random>
#include <string>
#include <thread>

#include "monocurv/error.hpp"

namespace monocurv {

namespace {

// Scans split their trials into fixed-size chunks; chunk c draws from a
// generator seeded with base + c, so results do not depend on the number
// of workers. Per-chunk results are merged in chunk order.
constexpr std::size_t kChunk = 4096;

template <class Result, class Work>
std::vector<Result> run_chunks(std::size_t total, std::size_t chunk, const Work& work) {
  const std::size_t chunks = (total + chunk - 1) / chunk;
  std::vector<Result> results(chunks);
  if (chunks == 0) return results;
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t c = next++; c < chunks; c = next++)
      results[c] = work(c, c * chunk, std::min(total, (c + 1) * chunk));
  };
  const unsigned threads = std::min<std::size_t>(scan_threads(), chunks);
  if (threads <= 1) {
    worker();
    return results;
  }
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  return results;
}

double log_uniform(std::mt19937_64& rng, ScanRegion region) {
  std::uniform_real_distribution<double> u(std::log(region.lo), std::log(region.hi));
  return std::exp(u(rng));
}

void require_region(ScanRegion region) {
  if (!(region.lo > 0.0) || !(region.hi > region.lo))
    throw Error(ErrorCode::InvalidArgument, "scan region needs 0 < lo < hi");
}

double relative_total(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += std::abs(x);
  return s;
}

}  // namespace

unsigned scan_threads() {
  if (const char* env = std::getenv("MONOCURV_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && v > 0) return static_cast<unsigned>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

SymmetrizedKernel SymmetrizedKernel::kubo_mori() { return SymmetrizedKernel(); }

SymmetrizedKernel SymmetrizedKernel::generic(HKernel kernel) {
  SymmetrizedKernel k;
  k.kernel_.emplace(std::move(kernel));
  return k;
}

double SymmetrizedKernel::value(double x, double y, double z) const {
  if (kernel_) return kernel_->h_sym(x, y, z);
  return (kubo_mori::d(x, y, z) + kubo_mori::d(y, z, x) + kubo_mori::d(z, x, y)) / 3.0;
}

double SymmetrizedKernel::dx(double x, double y, double z) const {
  if (kernel_) return dx_numeric(x, y, z);
  // x enters d(x,y,z) first, d(y,z,x) third and d(z,x,y) = d(x,z,y) first.
  return (kubo_mori::d_dx(x, y, z) + kubo_mori::d_dz(y, z, x) + kubo_mori::d_dx(x, z, y)) / 3.0;
}

double SymmetrizedKernel::dx_numeric(double x, double y, double z) const {
  const double h = std::min(std::cbrt(std::numeric_limits<double>::epsilon()) * std::max(x, 1.0), 0.5 * x);
  auto central = [&](double s) { return (value(x + s, y, z) - value(x - s, y, z)) / (2.0 * s); };
  return (4.0 * central(0.5 * h) - central(h)) / 3.0;
}

Eigen::Vector3d SymmetrizedKernel::gradient(double x, double y, double z) const {
  return {dx(x, y, z), dx(y, x, z), dx(z, x, y)};
}

double kubo_mori_hs_closed_form(double x, double y, double z) {
  if (!(x > 0.0) || !(y > 0.0) || !(z > 0.0)) throw Error(ErrorCode::InvalidArgument, "arguments must be positive");
  if (x == y || x == z || y == z)
    throw Error(ErrorCode::InvalidArgument, "closed form needs pairwise distinct arguments");
  const double lx = std::log(x), ly = std::log(y), lz = std::log(z);
  const double lxy = lx - ly, lxz = lx - lz, lyz = ly - lz;
  const double logs = lxy * lxz * lyz;
  const double first = ((y - z) * (y - z) * lxy * lxz - (x - z) * (x - z) * lxy * lyz + (x - y) * (x - y) * lxz * lyz) /
                       (6.0 * (x - y) * (x - z) * (y - z) * logs);
  const double second = (-x * y * lxy + x * z * lxz - y * z * lyz) / (3.0 * x * y * z * logs);
  return first + second;
}

bool majorizes(std::span<const double> more_mixed, std::span<const double> less_mixed) {
  if (more_mixed.size() != less_mixed.size())
    throw Error(ErrorCode::LengthMismatch, "spectra of different lengths");
  for (auto s : {more_mixed, less_mixed})
    for (double v : s)
      if (!(v > 0.0)) throw Error(ErrorCode::InvalidArgument, "spectra must be positive");
  std::vector<double> a(more_mixed.begin(), more_mixed.end()), b(less_mixed.begin(), less_mixed.end());
  std::sort(a.begin(), a.end(), std::greater<>());
  std::sort(b.begin(), b.end(), std::greater<>());
  const double sa = std::accumulate(a.begin(), a.end(), 0.0), sb = std::accumulate(b.begin(), b.end(), 0.0);
  if (std::abs(sa - sb) > 1e-10 * std::max(sa, sb))
    throw Error(ErrorCode::SumMismatch, "spectra sum to " + std::to_string(sa) + " and " + std::to_string(sb));
  const double slack = 1e-12 * std::max(sa, sb);
  double pa = 0.0, pb = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    pa += a[k];
    pb += b[k];
    if (pa > pb + slack) return false;
  }
  return true;
}

MixingStep MixingStep::make(std::size_t i, std::size_t j, double t) {
  if (!(t >= 0.0 && t <= 1.0)) throw Error(ErrorCode::InvalidArgument, "mixing parameter must lie in [0,1]");
  if (t > 0.5) return {j, i, 1.0 - t};
  return {i, j, t};
}

std::vector<double> t_transform(std::span<const double> spectrum, const MixingStep& step) {
  if (step.i >= spectrum.size() || step.j >= spectrum.size() || step.i == step.j)
    throw Error(ErrorCode::IndexOutOfRange, "T-transform needs two distinct valid indices");
  if (!(step.t >= 0.0 && step.t <= 0.5)) throw Error(ErrorCode::InvalidArgument, "mixing parameter must lie in [0,1/2]");
  std::vector<double> out(spectrum.begin(), spectrum.end());
  const double x = spectrum[step.i], y = spectrum[step.j], t = step.t;
  out[step.i] = (1.0 - t) * x + t * y;
  out[step.j] = t * x + (1.0 - t) * y;
  return out;
}

std::array<double, 4> lemma4_check(const SymmetrizedKernel& k, double x, double y, double lambda, double mu) {
  if (!(x < y)) throw Error(ErrorCode::OrderViolation, "derivative inequalities need x < y");
  return {2.0 * k.dx(x, x, y) - k.dx(y, x, x) - 2.0 * k.dx(y, x, y) + k.dx(x, y, y),
          k.dx(x, x, lambda) - k.dx(y, y, lambda), k.dx(x, y, lambda) - k.dx(y, x, lambda),
          k.dx(x, lambda, mu) - k.dx(y, lambda, mu)};
}

namespace {

// Sum of |h_s'| over the terms of each inequality.
std::array<double, 4> lemma4_scales(const SymmetrizedKernel& k, double x, double y, double lambda, double mu) {
  auto a = [&](double p, double q, double r) { return std::abs(k.dx(p, q, r)); };
  return {2.0 * a(x, x, y) + a(y, x, x) + 2.0 * a(y, x, y) + a(x, y, y), a(x, x, lambda) + a(y, y, lambda),
          a(x, y, lambda) + a(y, x, lambda), a(x, lambda, mu) + a(y, lambda, mu)};
}

}  // namespace

Eigen::Matrix3d hs_hessian(const SymmetrizedKernel& k, double x, double y, double z) {
  const Eigen::Vector3d p(x, y, z);
  Eigen::Matrix3d h;
  for (int i = 0; i < 3; ++i) {
    const double step = 1e-3 * p(i);
    auto central = [&](double s) {
      Eigen::Vector3d plus = p, minus = p;
      plus(i) += s;
      minus(i) -= s;
      return Eigen::Vector3d((k.gradient(plus(0), plus(1), plus(2)) - k.gradient(minus(0), minus(1), minus(2))) /
                             (2.0 * s));
    };
    h.row(i) = ((4.0 * central(0.5 * step) - central(step)) / 3.0).transpose();
  }
  return 0.5 * (h + h.transpose());
}

double HessianMinors::worst_excess() const noexcept {
  if (!(scale > 0.0)) return 0.0;
  return std::max({M1 / scale, -M2 / (scale * scale), M3 / (scale * scale * scale)});
}

HessianMinors hessian_minors(const SymmetrizedKernel& k, double x, double y, double z) {
  const Eigen::Matrix3d h = hs_hessian(k, x, y, z);
  HessianMinors m;
  m.M1 = h(0, 0);
  m.M2 = h.topLeftCorner<2, 2>().determinant();
  m.M3 = h.determinant();
  m.scale = h.cwiseAbs().maxCoeff();
  return m;
}

MinorGridReport hessian_minor_grid(const SymmetrizedKernel& k, double lo, double hi, std::size_t count,
                                   double fixed_z) {
  require_region({lo, hi});
  MinorGridReport r;
  r.worst_excess = -std::numeric_limits<double>::infinity();
  if (count == 0) return r;
  auto coord = [&](std::size_t i) {
    if (count == 1) return lo;
    return std::exp(std::log(lo) + (std::log(hi) - std::log(lo)) * static_cast<double>(i) / (count - 1));
  };
  for (std::size_t i = 0; i < count; ++i)
    for (std::size_t j = 0; j < count; ++j) {
      const double x = coord(i), y = coord(j);
      const double excess = hessian_minors(k, x, y, fixed_z).worst_excess();
      ++r.points;
      if (excess > kMinorTolerance) ++r.violations;
      if (excess > r.worst_excess) {
        r.worst_excess = excess;
        r.worst_point = {x, y, fixed_z};
      }
    }
  return r;
}

ConcavityReport concavity_scan(const SymmetrizedKernel& k, std::size_t trials, std::uint64_t seed, ScanRegion region,
                               double near_fraction) {
  require_region(region);
  const auto parts = run_chunks<ConcavityReport>(trials, kChunk, [&](std::size_t c, std::size_t begin, std::size_t end) {
    std::mt19937_64 rng(seed + c);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::uniform_real_distribution<double> jitter(-1.0, 1.0);
    ConcavityReport part;
    auto draw = [&](bool near) {
      std::array<double, 3> p{};
      if (near) {
        const double base = log_uniform(rng, region);
        for (double& v : p) v = base * (1.0 + 1e-5 * jitter(rng));
      } else {
        for (double& v : p) v = log_uniform(rng, region);
      }
      return p;
    };
    for (std::size_t trial = begin; trial < end; ++trial) {
      const bool near = unit(rng) < near_fraction;
      const auto p1 = draw(near), p2 = draw(near);
      double t = unit(rng);
      if (t == 0.0) t = 0.5;
      std::array<double, 3> pt{};
      for (int i = 0; i < 3; ++i) pt[i] = (1.0 - t) * p1[i] + t * p2[i];
      const double v1 = k.value(p1[0], p1[1], p1[2]), v2 = k.value(p2[0], p2[1], p2[2]);
      const double vt = k.value(pt[0], pt[1], pt[2]);
      const double scale = std::max({std::abs(v1), std::abs(v2), std::abs(vt), 1e-300});
      const double violation = ((1.0 - t) * v1 + t * v2 - vt) / scale;
      if (violation > part.max_violation) {
        part.max_violation = violation;
        part.worst_trial = trial;
        part.worst_p1 = p1;
        part.worst_p2 = p2;
        part.worst_t = t;
      }
    }
    return part;
  });
  ConcavityReport r;
  for (const auto& p : parts)
    if (p.max_violation > r.max_violation) r = p;
  r.seed = seed;
  r.trials = trials;
  return r;
}

Lemma4Report lemma4_scan(const SymmetrizedKernel& k, std::size_t trials, std::uint64_t seed, ScanRegion region) {
  require_region(region);
  const auto parts = run_chunks<Lemma4Report>(trials, kChunk, [&](std::size_t c, std::size_t begin, std::size_t end) {
    std::mt19937_64 rng(seed + c);
    Lemma4Report part;
    for (std::size_t trial = begin; trial < end; ++trial) {
      double x = log_uniform(rng, region), y = log_uniform(rng, region);
      const double lambda = log_uniform(rng, region), mu = log_uniform(rng, region);
      if (x == y) continue;
      if (x > y) std::swap(x, y);
      const auto res = lemma4_check(k, x, y, lambda, mu);
      const auto scale = lemma4_scales(k, x, y, lambda, mu);
      for (int i = 0; i < 4; ++i) {
        const double v = res[i] / std::max(scale[i], 1e-300);
        if (v < part.min_residual) {
          part.min_residual = v;
          part.worst_trial = trial;
          part.worst_inequality = i;
          part.worst_point = {x, y, lambda, mu};
        }
      }
    }
    return part;
  });
  Lemma4Report r;
  for (const auto& p : parts)
    if (p.min_residual < r.min_residual) r = p;
  r.seed = seed;
  r.trials = trials;
  return r;
}

MonotonicityReport monotonicity_scan(std::size_t n, std::size_t paths, std::size_t steps_per_path, std::uint64_t seed,
                                     bool zero_steps) {
  if (n < 2) throw Error(ErrorCode::DimensionTooSmall, "monotonicity scan needs n >= 2");
  constexpr std::size_t kPathsPerChunk = 16;
  const auto parts =
      run_chunks<MonotonicityReport>(paths, kPathsPerChunk, [&](std::size_t c, std::size_t begin, std::size_t end) {
        std::mt19937_64 rng(seed + c);
        std::uniform_real_distribution<double> unit(0.0, 1.0);
        std::uniform_int_distribution<std::size_t> index(0, n - 1);
        MonotonicityReport part;
        for (std::size_t path = begin; path < end; ++path) {
          std::vector<double> spectrum(n);
          for (double& v : spectrum) v = -std::log(1.0 - unit(rng));
          const double total = std::accumulate(spectrum.begin(), spectrum.end(), 0.0);
          for (double& v : spectrum) v /= total;

          double before = kubo_mori_scalar(spectrum, true);
          ++part.evaluations;
          part.max_scalar = std::max(part.max_scalar, before);
          for (std::size_t s = 0; s < steps_per_path; ++s) {
            const std::size_t i = index(rng);
            std::size_t j = index(rng);
            while (j == i) j = index(rng);
            const double t = zero_steps ? 0.0 : 0.5 * unit(rng);
            auto next = t_transform(spectrum, MixingStep::make(i, j, t));
            const double after = kubo_mori_scalar(next, true);
            ++part.evaluations;
            part.max_scalar = std::max(part.max_scalar, after);
            const double decrease = (before - after) / std::max(1.0, std::abs(before));
            if (decrease > kMonotonicityTolerance) ++part.violations;
            if (decrease > part.max_decrease) {
              part.max_decrease = decrease;
              part.worst_before = spectrum;
              part.worst_after = next;
            }
            spectrum = std::move(next);
            before = after;
          }
        }
        return part;
      });
  MonotonicityReport r;
  for (const auto& p : parts) {
    r.evaluations += p.evaluations;
    r.violations += p.violations;
    r.max_scalar = std::max(r.max_scalar, p.max_scalar);
    if (p.max_decrease > r.max_decrease) {
      r.max_decrease = p.max_decrease;
      r.worst_before = p.worst_before;
      r.worst_after = p.worst_after;
    }
  }
  r.seed = seed;
  r.n = n;
  r.paths = paths;
  r.steps = steps_per_path;
  const double m = static_cast<double>(n * n);
  r.trace_state_value = (m - 1.0) * (m - 4.0) / 8.0;
  return r;
}

DirectionalDerivative directional_derivative_check(const SymmetrizedKernel& k, double x, double y,
                                                   std::span<const double> tail) {
  if (!(x < y)) throw Error(ErrorCode::OrderViolation, "directional derivative needs x < y");
  if (!(x > 0.0)) throw Error(ErrorCode::InvalidArgument, "eigenvalues must be positive");
  for (double v : tail)
    if (!(v > 0.0)) throw Error(ErrorCode::InvalidArgument, "eigenvalues must be positive");

  DirectionalDerivative out;
  std::vector<double> terms{2.0 * k.dx(x, x, y), -k.dx(y, x, x), -2.0 * k.dx(y, x, y), k.dx(x, y, y)};
  for (double l : tail) {
    terms.push_back(2.0 * k.dx(x, x, l));
    terms.push_back(-2.0 * k.dx(y, y, l));
    terms.push_back(2.0 * k.dx(x, y, l));
    terms.push_back(-2.0 * k.dx(y, x, l));
  }
  for (double l : tail)
    for (double m : tail) {
      terms.push_back(k.dx(x, l, m));
      terms.push_back(-k.dx(y, l, m));
    }
  out.expansion = std::accumulate(terms.begin(), terms.end(), 0.0);
  out.scale = relative_total(terms);

  std::vector<double> spectrum{x, y};
  spectrum.insert(spectrum.end(), tail.begin(), tail.end());
  auto scalar_at = [&](double s) {
    spectrum[0] = x + s;
    spectrum[1] = y - s;
    if (const HKernel* h = k.kernel()) return scalar_theorem1(*h, spectrum);
    return kubo_mori_scalar(spectrum, false);
  };
  const double h = 1e-3 * x;
  auto central = [&](double s) { return (scalar_at(s) - scalar_at(-s)) / (2.0 * s); };
  out.finite_difference = (4.0 * central(0.5 * h) - central(h)) / 9.0;
  return out;
}

DirectionalReport directional_scan(const SymmetrizedKernel& k, std::size_t trials, std::uint64_t seed,
                                   ScanRegion region) {
  require_region(region);
  constexpr std::size_t kTrialsPerChunk = 256;
  const auto parts =
      run_chunks<DirectionalReport>(trials, kTrialsPerChunk, [&](std::size_t c, std::size_t begin, std::size_t end) {
        std::mt19937_64 rng(seed + c);
        std::uniform_int_distribution<int> size(3, 5);
        DirectionalReport part;
        for (std::size_t trial = begin; trial < end; ++trial) {
          const int n = size(rng);
          double x = log_uniform(rng, region), y = log_uniform(rng, region);
          std::vector<double> tail(static_cast<std::size_t>(n - 2));
          for (double& v : tail) v = log_uniform(rng, region);
          if (x == y) continue;
          if (x > y) std::swap(x, y);
          const auto d = directional_derivative_check(k, x, y, tail);
          const double value = d.expansion / std::max(d.scale, 1e-300);
          const double gap = std::abs(d.expansion - d.finite_difference) /
                             std::max({std::abs(d.expansion), std::abs(d.finite_difference), 1e-6 * d.scale, 1e-300});
          part.max_disagreement = std::max(part.max_disagreement, gap);
          if (value < part.min_value) {
            part.min_value = value;
            part.worst_spectrum = {x, y};
            part.worst_spectrum.insert(part.worst_spectrum.end(), tail.begin(), tail.end());
          }
        }
        return part;
      });
  DirectionalReport r;
  for (const auto& p : parts) {
    r.max_disagreement = std::max(r.max_disagreement, p.max_disagreement);
    if (p.min_value < r.min_value) {
      r.min_value = p.min_value;
      r.worst_spectrum = p.worst_spectrum;
    }
  }
  r.seed = seed;
  r.trials = trials;
  return r;
}

}  // namespace monocurv
