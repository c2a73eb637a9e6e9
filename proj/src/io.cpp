#include "monocurv/io.hpp"

#include <charconv>
#include <cmath>
#include <limits>

#include <boost/multiprecision/cpp_int.hpp>

#include "monocurv/error.hpp"

namespace monocurv::io {

namespace {

using boost::multiprecision::cpp_int;
using boost::multiprecision::cpp_rational;

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

[[noreturn]] void bad_number(std::string_view text) {
  throw Error(ErrorCode::InvalidArgument, "cannot parse number '" + std::string(text) + "'");
}

// Exact value of a decimal literal [sign] digits [. digits] [e|E [sign] digits].
cpp_rational parse_decimal(std::string_view text) {
  const std::string_view original = text;
  bool negative = false;
  if (!text.empty() && (text.front() == '+' || text.front() == '-')) {
    negative = text.front() == '-';
    text.remove_prefix(1);
  }
  cpp_int mantissa = 0;
  long scale = 0;
  bool digits = false, dot = false;
  std::size_t pos = 0;
  for (; pos < text.size(); ++pos) {
    const char ch = text[pos];
    if (ch >= '0' && ch <= '9') {
      mantissa = mantissa * 10 + (ch - '0');
      digits = true;
      if (dot) --scale;
    } else if (ch == '.' && !dot) {
      dot = true;
    } else {
      break;
    }
  }
  if (!digits) bad_number(original);
  if (pos < text.size()) {
    if (text[pos] != 'e' && text[pos] != 'E') bad_number(original);
    long exponent = 0;
    const auto rest = text.substr(pos + 1);
    const char* begin = rest.data();
    if (!rest.empty() && rest.front() == '+') ++begin;
    const auto [ptr, ec] = std::from_chars(begin, rest.data() + rest.size(), exponent);
    if (ec != std::errc() || ptr != rest.data() + rest.size() || begin == rest.data() + rest.size())
      bad_number(original);
    if (exponent > 400 || exponent < -400) bad_number(original);
    scale += exponent;
  }
  cpp_rational value(mantissa);
  const cpp_int power = boost::multiprecision::pow(cpp_int(10), static_cast<unsigned>(std::labs(scale)));
  if (scale >= 0)
    value *= power;
  else
    value /= power;
  return negative ? cpp_rational(-value) : value;
}

double to_double(const cpp_rational& q) {
  const cpp_int num = boost::multiprecision::numerator(q), den = boost::multiprecision::denominator(q);
  const cpp_int exact_limit = cpp_int(1) << 53;
  if (boost::multiprecision::abs(num) <= exact_limit && den <= exact_limit)
    return num.convert_to<double>() / den.convert_to<double>();
  return q.convert_to<double>();
}

}  // namespace

double parse_number(std::string_view text) {
  text = trim(text);
  if (text.empty()) bad_number(text);
  const auto slash = text.find('/');
  cpp_rational value;
  if (slash == std::string_view::npos) {
    value = parse_decimal(text);
  } else {
    const cpp_rational den = parse_decimal(trim(text.substr(slash + 1)));
    if (den == 0) throw Error(ErrorCode::InvalidArgument, "zero denominator in '" + std::string(text) + "'");
    value = parse_decimal(trim(text.substr(0, slash))) / den;
  }
  const double out = to_double(value);
  if (!std::isfinite(out)) bad_number(text);
  return out;
}

std::vector<double> parse_spectrum(std::string_view text) {
  std::vector<double> out;
  while (true) {
    const auto comma = text.find(',');
    out.push_back(parse_number(text.substr(0, comma)));
    if (comma == std::string_view::npos) break;
    text.remove_prefix(comma + 1);
  }
  return out;
}

std::string format_double(double value) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  if (ec != std::errc()) throw Error(ErrorCode::InvalidArgument, "cannot format number");
  return std::string(buf, ptr);
}

Json number_or_null(double value) { return std::isfinite(value) ? Json(value) : Json(nullptr); }

Json matrix_to_json(const CMatrix& m) {
  Json re = Json::array(), im = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json rr = Json::array(), ir = Json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      rr.push_back(m(i, j).real());
      ir.push_back(m(i, j).imag());
    }
    re.push_back(std::move(rr));
    im.push_back(std::move(ir));
  }
  Json out;
  out["n"] = m.rows();
  out["re"] = std::move(re);
  out["im"] = std::move(im);
  return out;
}

namespace {

std::vector<double> flatten(const Json& part, std::size_t n, const char* name) {
  if (!part.is_array()) throw Error(ErrorCode::InvalidArgument, std::string("'") + name + "' must be an array");
  std::vector<double> flat;
  auto push = [&](const Json& v) {
    if (!v.is_number()) throw Error(ErrorCode::InvalidArgument, std::string("'") + name + "' entries must be numbers");
    flat.push_back(v.get<double>());
  };
  if (!part.empty() && part.front().is_array()) {
    if (part.size() != n) throw Error(ErrorCode::DimensionMismatch, std::string("'") + name + "' needs n rows");
    for (const auto& row : part) {
      if (!row.is_array() || row.size() != n)
        throw Error(ErrorCode::DimensionMismatch, std::string("'") + name + "' rows need n entries");
      for (const auto& v : row) push(v);
    }
  } else {
    for (const auto& v : part) push(v);
    if (flat.size() != n * n) throw Error(ErrorCode::DimensionMismatch, std::string("'") + name + "' needs n*n entries");
  }
  return flat;
}

}  // namespace

CMatrix matrix_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("n") || !j.contains("re"))
    throw Error(ErrorCode::InvalidArgument, "matrix JSON needs 'n' and 're'");
  if (!j["n"].is_number_integer() || j["n"].get<long long>() < 1)
    throw Error(ErrorCode::InvalidArgument, "'n' must be a positive integer");
  const auto n = static_cast<std::size_t>(j["n"].get<long long>());
  const auto re = flatten(j["re"], n, "re");
  const auto im = j.contains("im") ? flatten(j["im"], n, "im") : std::vector<double>(n * n, 0.0);
  CMatrix m(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k) m(i, k) = Complex(re[i * n + k], im[i * n + k]);
  return m;
}

}  // namespace monocurv::io
