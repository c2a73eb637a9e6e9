#include "monocurv/cli.hpp"

#include <chrono>
#include <cmath>
#include <array>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "monocurv/conjecture.hpp"
#include "monocurv/error.hpp"
#include "monocurv/geometry.hpp"
#include "monocurv/io.hpp"
#include "monocurv/oracle.hpp"
#include "monocurv/scalar.hpp"

namespace monocurv::cli {

namespace {

using io::Json;

// Tolerances of the scalar cross-check, relative to max(1, |reference|).
constexpr double kClosedFormTolerance = 1e-8;
constexpr double kOracleTolerance = 1e-3;

// Conjecture scan thresholds.
constexpr double kConcavityTolerance = 1e-9;
constexpr double kResidualTolerance = 1e-9;
constexpr double kDirectionalTolerance = 1e-8;
constexpr double kMaximumSlack = 1e-6;

Json load_json(const std::string& arg) {
  std::string text;
  const auto first = arg.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && (arg[first] == '{' || arg[first] == '[')) {
    text = arg;
  } else {
    std::ifstream in(arg);
    if (!in) throw Error(ErrorCode::InvalidArgument, "cannot read '" + arg + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    text = buf.str();
  }
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw Error(ErrorCode::InvalidArgument, std::string("malformed JSON: ") + e.what());
  }
}

void emit(const std::string& text, const std::string& path, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text;
    return;
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) throw Error(ErrorCode::InvalidArgument, "cannot write '" + path + "'");
  file << text;
}

double relative_gap(double value, double reference) {
  return std::abs(value - reference) / std::max(1.0, std::abs(reference));
}

Json spectrum_json(std::span<const double> s) {
  Json a = Json::array();
  for (double v : s) a.push_back(v);
  return a;
}

// ---- scalar ---------------------------------------------------------------

struct ScalarOptions {
  std::string metric = "kubo-mori";
  std::string spectrum;
  std::string state;
  std::string path = "theorem1";
  std::string output;
};

// The per-metric closed form for S, if there is one.
std::optional<std::pair<std::string, double>> closed_form(MetricKind kind, std::span<const double> s) {
  switch (kind) {
    case MetricKind::Smallest: return std::pair{std::string("bures"), bures_scalar(s)};
    case MetricKind::Largest: return std::pair{std::string("largest"), largest_scalar(s)};
    case MetricKind::KuboMori: return std::pair{std::string("kubo-mori"), kubo_mori_scalar(s, false)};
    case MetricKind::Custom: break;
  }
  return std::nullopt;
}

int cmd_scalar(const ScalarOptions& o, std::ostream& out, std::ostream& err) {
  if (o.spectrum.empty() == o.state.empty())
    throw Error(ErrorCode::InvalidArgument, "give exactly one of --spectrum and --state");
  const MetricKind kind = parse_metric_kind(o.metric);
  const HKernel kernel(MorozovaChentsovFunction::builtin(kind));

  std::optional<DensityMatrix> rho;
  std::vector<double> spectrum;
  if (!o.spectrum.empty()) {
    spectrum = io::parse_spectrum(o.spectrum);
    rho.emplace(DensityMatrix::diagonal(spectrum));
  } else {
    rho.emplace(io::matrix_from_json(load_json(o.state)));
    const auto ev = decompose(*rho).eigenvalues;
    spectrum.assign(ev.data(), ev.data() + ev.size());
  }
  const Eigen::Index n = static_cast<Eigen::Index>(spectrum.size());

  const double via_theorem = scalar_theorem1(kernel, spectrum);
  double value = via_theorem;
  std::string check_method;
  std::optional<double> check_value;
  double tolerance = kClosedFormTolerance;

  if (o.path == "theorem1") {
    if (auto cf = closed_form(kind, spectrum)) {
      check_method = "closed-form:" + cf->first;
      check_value = cf->second;
    }
  } else if (o.path == "closed-form") {
    auto cf = closed_form(kind, spectrum);
    if (!cf) throw Error(ErrorCode::InvalidArgument, "no closed form for this metric");
    value = cf->second;
    check_method = "theorem1";
    check_value = via_theorem;
  } else if (o.path == "companion") {
    if (kind != MetricKind::Largest)
      throw Error(ErrorCode::InvalidArgument, "the companion-matrix path exists for the largest metric only");
    value = largest_scalar_companion(spectrum);
    check_method = "theorem1";
    check_value = via_theorem;
  } else if (o.path == "oracle") {
    const MetricContext ctx(kernel.function(), *rho, MetricContext::Depth::MetricOnly);
    value = oracle_scalar(ctx, false);
    check_method = "theorem1";
    check_value = via_theorem;
    tolerance = kOracleTolerance;
  } else {
    throw Error(ErrorCode::InvalidArgument, "unknown --path '" + o.path + "'");
  }

  Json report;
  report["metric"] = std::string(to_string(kind));
  report["n"] = n;
  report["spectrum"] = spectrum_json(spectrum);
  report["trace_one"] = rho->is_normalized();
  report["path"] = o.path;
  report["scalar"] = io::number_or_null(value);
  report["normalized_scalar"] = io::number_or_null(normalize_scalar(value, n));
  bool agree = true;
  if (check_value) {
    const double gap = relative_gap(value, *check_value);
    agree = gap <= tolerance;
    Json check;
    check["method"] = check_method;
    check["scalar"] = io::number_or_null(*check_value);
    check["relative_difference"] = io::number_or_null(gap);
    check["tolerance"] = tolerance;
    check["agree"] = agree;
    report["cross_check"] = std::move(check);
  } else {
    report["cross_check"] = nullptr;
  }
  emit(report.dump(2) + "\n", o.output, out);
  if (!agree) {
    err << "cross-check disagreement beyond tolerance\n";
    return kCrossCheckFailed;
  }
  return kOk;
}

// ---- simplex-grid ---------------------------------------------------------

struct GridOptions {
  int mesh = 100;
  double margin = 1e-3;
  std::string metric = "kubo-mori";
  std::string output;
};

int cmd_simplex_grid(const GridOptions& o, std::ostream& out) {
  if (o.mesh < 1) throw Error(ErrorCode::InvalidArgument, "--mesh must be positive");
  if (!(o.margin > 0.0 && o.margin < 1.0 / 3.0))
    throw Error(ErrorCode::InvalidArgument, "--margin must lie in (0, 1/3)");
  const MetricKind kind = parse_metric_kind(o.metric);
  const HKernel kernel(MorozovaChentsovFunction::builtin(kind));
  auto value = [&](std::span<const double> s) {
    if (kind == MetricKind::KuboMori) return kubo_mori_scalar(s, true);
    return normalize_scalar(scalar_theorem1(kernel, s), 3);
  };

  std::string csv = "lambda1,lambda2,lambda3,scalar_curvature\n";
  auto row = [&](std::array<double, 3> s) {
    csv += io::format_double(s[0]) + ',' + io::format_double(s[1]) + ',' + io::format_double(s[2]) + ',' +
           io::format_double(value(s)) + '\n';
  };
  const double m = o.mesh, width = 1.0 - 3.0 * o.margin;
  for (int i = 0; i <= o.mesh; ++i)
    for (int j = 0; i + j <= o.mesh; ++j) {
      const int k = o.mesh - i - j;
      row({o.margin + width * i / m, o.margin + width * j / m, o.margin + width * k / m});
    }
  // The barycenter is a grid node only when 3 divides the mesh.
  if (o.mesh % 3 != 0) row({1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0});
  emit(csv, o.output, out);
  return kOk;
}

// ---- conjecture -----------------------------------------------------------

struct ConjectureOptions {
  std::uint64_t seed = 1;
  std::size_t concavity_trials = 1000000;
  std::size_t lemma4_trials = 100000;
  std::size_t directional_trials = 10000;
  std::size_t n = 3;
  std::size_t paths = 1000;
  std::size_t steps = 50;
  std::size_t grid = 60;
  double grid_lo = 0.05, grid_hi = 20.0;
  double region_lo = 1e-2, region_hi = 1e2;
  std::optional<std::size_t> trials;
  bool deterministic = false;
  std::string output;
};

Json array3(std::span<const double> v) { return spectrum_json(v); }

int cmd_conjecture(ConjectureOptions o, std::ostream& out, std::ostream& err) {
  if (o.trials) {
    o.concavity_trials = o.lemma4_trials = o.directional_trials = o.paths = *o.trials;
    if (*o.trials == 0) o.grid = 0;
  }
  const ScanRegion region{o.region_lo, o.region_hi};
  if (!(region.lo > 0.0 && region.hi > region.lo) || !(o.grid_lo > 0.0 && o.grid_hi > o.grid_lo))
    throw Error(ErrorCode::InvalidArgument, "region bounds need 0 < lo < hi");
  if (o.n < 2) throw Error(ErrorCode::DimensionTooSmall, "--n must be at least 2");

  const auto started = std::chrono::steady_clock::now();
  const auto k = SymmetrizedKernel::kubo_mori();
  bool violated = false;
  Json report;
  report["seed"] = o.seed;
  report["region"] = Json{{"lo", region.lo}, {"hi", region.hi}};

  {
    const auto r = monotonicity_scan(o.n, o.paths, o.steps, o.seed);
    const bool bad = r.violations > 0 || (r.evaluations > 0 && r.max_scalar > r.trace_state_value + kMaximumSlack);
    violated |= bad;
    Json j;
    j["n"] = r.n;
    j["paths"] = r.paths;
    j["steps"] = r.steps;
    j["evaluations"] = r.evaluations;
    j["max_relative_decrease"] = io::number_or_null(r.max_decrease);
    j["tolerance"] = kMonotonicityTolerance;
    j["violations"] = r.violations;
    j["max_scalar"] = io::number_or_null(r.max_scalar);
    j["trace_state_value"] = r.trace_state_value;
    j["worst_before"] = spectrum_json(r.worst_before);
    j["worst_after"] = spectrum_json(r.worst_after);
    j["violated"] = bad;
    report["monotonicity"] = std::move(j);
  }
  {
    const auto r = concavity_scan(k, o.concavity_trials, o.seed, region);
    const bool bad = r.max_violation > kConcavityTolerance;
    violated |= bad;
    Json j;
    j["trials"] = r.trials;
    j["max_relative_violation"] = io::number_or_null(r.max_violation);
    j["tolerance"] = kConcavityTolerance;
    if (r.trials > 0) {
      j["worst_p1"] = array3(r.worst_p1);
      j["worst_p2"] = array3(r.worst_p2);
      j["worst_t"] = r.worst_t;
    }
    j["violated"] = bad;
    report["concavity"] = std::move(j);
  }
  {
    const auto r = hessian_minor_grid(k, o.grid_lo, o.grid_hi, o.grid);
    const bool bad = r.violations > 0;
    violated |= bad;
    Json j;
    j["count"] = o.grid;
    j["points"] = r.points;
    j["z"] = 1.0;
    j["worst_excess"] = io::number_or_null(r.worst_excess);
    j["tolerance"] = kMinorTolerance;
    j["violations"] = r.violations;
    if (r.points > 0) j["worst_point"] = array3(r.worst_point);
    j["violated"] = bad;
    report["hessian_minors"] = std::move(j);
  }
  {
    const auto r = lemma4_scan(k, o.lemma4_trials, o.seed, region);
    const bool bad = r.min_residual < -kResidualTolerance;
    violated |= bad;
    Json j;
    j["trials"] = r.trials;
    j["min_relative_residual"] = io::number_or_null(r.min_residual);
    j["tolerance"] = kResidualTolerance;
    if (r.worst_inequality >= 0) {
      j["worst_inequality"] = r.worst_inequality + 1;
      j["worst_point"] = spectrum_json(r.worst_point);
    }
    j["violated"] = bad;
    report["derivative_inequalities"] = std::move(j);
  }
  {
    const auto r = directional_scan(k, o.directional_trials, o.seed, region);
    const bool bad = r.min_value < -kDirectionalTolerance;
    violated |= bad;
    Json j;
    j["trials"] = r.trials;
    j["min_relative_value"] = io::number_or_null(r.min_value);
    j["max_expansion_vs_difference"] = io::number_or_null(r.max_disagreement);
    j["tolerance"] = kDirectionalTolerance;
    j["worst_spectrum"] = spectrum_json(r.worst_spectrum);
    j["violated"] = bad;
    report["directional_derivative"] = std::move(j);
  }
  report["violation"] = violated;
  if (!o.deterministic) {
    report["threads"] = scan_threads();
    report["wall_time_seconds"] =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  }
  emit(report.dump(2) + "\n", o.output, out);
  if (violated) {
    err << "conjecture scan found a violation beyond tolerance\n";
    return kConjectureViolation;
  }
  return kOk;
}

// ---- curvature ------------------------------------------------------------

struct CurvatureOptions {
  std::string metric = "kubo-mori";
  std::string state;
  std::string vectors;
  bool normalized = false;
  std::string output;
};

int cmd_curvature(const CurvatureOptions& o, std::ostream& out) {
  const MetricKind kind = parse_metric_kind(o.metric);
  const DensityMatrix rho(io::matrix_from_json(load_json(o.state)));
  const Json list = load_json(o.vectors);
  if (!list.is_array() || (list.size() != 2 && list.size() != 4))
    throw Error(ErrorCode::InvalidArgument, "--vectors must be a JSON array of two or four tangent vectors");
  std::vector<TangentVector> v;
  for (const auto& item : list) {
    if (item.is_string() && item.get<std::string>() == "rho") {
      v.push_back(TangentVector::radial(rho));
      continue;
    }
    TangentVector t(io::matrix_from_json(item));
    if (t.dim() != rho.dim()) throw Error(ErrorCode::DimensionMismatch, "tangent vector and state differ in size");
    v.push_back(std::move(t));
  }
  if (o.normalized) {
    if (!rho.is_normalized()) throw Error(ErrorCode::NotNormalized, "--normalized needs a trace-one state");
    for (const auto& t : v)
      if (!t.is_traceless()) throw Error(ErrorCode::NotTangent, "--normalized needs traceless vectors");
  }

  const MetricContext ctx(MorozovaChentsovFunction::builtin(kind), rho);
  Json report;
  report["metric"] = std::string(to_string(kind));
  report["n"] = rho.dim();
  report["normalized"] = o.normalized;
  report["g"] = metric(ctx, v[0], v[1]);
  report["christoffel"] = io::matrix_to_json(christoffel(ctx, v[0], v[1]).matrix());
  if (v.size() == 2) {
    try {
      const auto k = sectional(ctx, v[0], v[1], o.normalized);
      report["sectional"] = io::number_or_null(k.value);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::NotOrthogonal) throw;
      report["sectional"] = nullptr;
      report["sectional_note"] = "vectors are not g-orthogonal";
    }
  } else {
    const double r = o.normalized ? riemann_normalized(ctx, v[0], v[1], v[2], v[3]) : riemann(ctx, v[0], v[1], v[2], v[3]);
    report["riemann"] = io::number_or_null(r);
  }
  emit(report.dump(2) + "\n", o.output, out);
  return kOk;
}

// ---- random-state ---------------------------------------------------------

struct RandomStateOptions {
  int n = 3;
  std::uint64_t seed = 1;
  double spread = 10.0;
  bool normalized = false;
  std::string output;
};

int cmd_random_state(const RandomStateOptions& o, std::ostream& out) {
  if (o.n < 2) throw Error(ErrorCode::DimensionTooSmall, "--n must be at least 2");
  if (!(o.spread >= 1.0)) throw Error(ErrorCode::InvalidArgument, "--spread must be at least 1");
  const auto rho = random_state(o.n, o.seed, o.spread, o.normalized);
  emit(io::matrix_to_json(rho.matrix()).dump() + "\n", o.output, out);
  return kOk;
}

}  // namespace

int run(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Curvature of monotone metrics on density matrices"};
  app.require_subcommand(1);

  ScalarOptions scalar;
  auto* s = app.add_subcommand("scalar", "Scalar curvature at a state or spectrum");
  s->add_option("--metric", scalar.metric, "bures | largest | kubo-mori")->capture_default_str();
  s->add_option("--spectrum", scalar.spectrum, "Comma-separated eigenvalues; fractions like 1/3 allowed");
  s->add_option("--state", scalar.state, "JSON matrix, inline or a file path");
  s->add_option("--path", scalar.path, "theorem1 | closed-form | companion | oracle")->capture_default_str();
  s->add_option("--output,-o", scalar.output, "Write the report here instead of stdout");

  GridOptions grid;
  auto* g = app.add_subcommand("simplex-grid", "CSV of the normalized scalar curvature over the n=3 simplex");
  g->add_option("--mesh", grid.mesh, "Grid subdivisions per edge")->capture_default_str();
  g->add_option("--margin", grid.margin, "Distance kept from the boundary")->capture_default_str();
  g->add_option("--metric", grid.metric, "bures | largest | kubo-mori")->capture_default_str();
  g->add_option("--output,-o", grid.output, "CSV path (stdout if omitted)");

  ConjectureOptions conj;
  auto* c = app.add_subcommand("conjecture", "Randomized scans for monotonicity of the Kubo-Mori curvature");
  c->add_option("--seed", conj.seed)->capture_default_str();
  c->add_option("--trials", conj.trials, "Override every trial and path count");
  c->add_option("--concavity-trials", conj.concavity_trials)->capture_default_str();
  c->add_option("--inequality-trials", conj.lemma4_trials)->capture_default_str();
  c->add_option("--directional-trials", conj.directional_trials)->capture_default_str();
  c->add_option("--n", conj.n, "Dimension for the monotonicity paths")->capture_default_str();
  c->add_option("--paths", conj.paths)->capture_default_str();
  c->add_option("--steps", conj.steps)->capture_default_str();
  c->add_option("--grid", conj.grid, "Points per axis of the Hessian-minor grid")->capture_default_str();
  c->add_option("--grid-lo", conj.grid_lo)->capture_default_str();
  c->add_option("--grid-hi", conj.grid_hi)->capture_default_str();
  c->add_option("--region-lo", conj.region_lo)->capture_default_str();
  c->add_option("--region-hi", conj.region_hi)->capture_default_str();
  c->add_flag("--deterministic", conj.deterministic, "Omit wall time and thread count from the report");
  c->add_option("--output,-o", conj.output);

  CurvatureOptions curv;
  auto* v = app.add_subcommand("curvature", "Metric, Christoffel tensor and curvature for given tangent vectors");
  v->add_option("--metric", curv.metric)->capture_default_str();
  v->add_option("--state", curv.state, "JSON matrix, inline or a file path")->required();
  v->add_option("--vectors", curv.vectors, "JSON array of 2 or 4 matrices or \"rho\"")->required();
  v->add_flag("--normalized", curv.normalized, "Curvature of the trace-one submanifold");
  v->add_option("--output,-o", curv.output);

  RandomStateOptions rs;
  auto* r = app.add_subcommand("random-state", "Seeded random positive definite state as JSON");
  r->add_option("--n", rs.n)->capture_default_str();
  r->add_option("--seed", rs.seed)->capture_default_str();
  r->add_option("--spread", rs.spread, "Bound on lambda_max / lambda_min")->capture_default_str();
  r->add_flag("--normalized", rs.normalized);
  r->add_option("--output,-o", rs.output);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kInvalidInput;
  }

  try {
    if (*s) return cmd_scalar(scalar, out, err);
    if (*g) return cmd_simplex_grid(grid, out);
    if (*c) return cmd_conjecture(conj, out, err);
    if (*v) return cmd_curvature(curv, out);
    if (*r) return cmd_random_state(rs, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kInvalidInput;
  } catch (const nlohmann::json::exception& e) {
    err << "error: " << e.what() << '\n';
    return kInvalidInput;
  } catch (const std::exception& e) {
    err << "unexpected error: " << e.what() << '\n';
    return kUnexpected;
  }
  return kUnexpected;
}

}  // namespace monocurv::cli
