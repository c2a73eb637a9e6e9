#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

#include "monocurv/error.hpp"
#include "monocurv/io.hpp"

using namespace monocurv;

TEST_CASE("numbers and fractions parse to the correctly rounded double") {
  CHECK(io::parse_number("1/3") == 1.0 / 3.0);
  CHECK(io::parse_number("2/3") == 2.0 / 3.0);
  CHECK(io::parse_number("0.1") == 0.1);
  CHECK(io::parse_number(" -2/4 ") == -0.5);
  CHECK(io::parse_number("1e-3") == 1e-3);
  CHECK(io::parse_number("1.5E+2") == 150.0);
  CHECK(io::parse_number("0.3/0.1") == 3.0);
  CHECK(io::parse_number("123456789012345678901234567890") == 123456789012345678901234567890.0);
  CHECK(io::parse_number("1/7") == 1.0 / 7.0);
  for (const char* bad : {"", "abc", "1/0", "1..2", "1e", "--1", "1/", "1e999"}) {
    INFO(bad);
    CHECK_THROWS_AS(io::parse_number(bad), Error);
  }
}

TEST_CASE("spectra are comma separated") {
  const auto s = io::parse_spectrum("1/3, 1/3,1/3");
  REQUIRE(s.size() == 3);
  CHECK(s[2] == 1.0 / 3.0);
  CHECK_THROWS_AS(io::parse_spectrum("0.5,,0.5"), Error);
}

TEST_CASE("formatted doubles round-trip and ignore locale") {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-30, 30);
  for (int i = 0; i < 1000; ++i) {
    const double v = std::pow(10.0, u(rng)) * (i % 2 ? 1 : -1);
    const auto text = io::format_double(v);
    CHECK(text.find(',') == std::string::npos);
    CHECK(std::strtod(text.c_str(), nullptr) == v);
  }
  CHECK(io::format_double(0.5) == "0.5");
  CHECK(io::number_or_null(std::numeric_limits<double>::infinity()).is_null());
  CHECK(io::number_or_null(2.0) == 2.0);
}

TEST_CASE("matrix JSON round trip is exact") {
  CMatrix m(3, 3);
  std::mt19937_64 rng(2);
  std::normal_distribution<double> g;
  for (Eigen::Index i = 0; i < 3; ++i)
    for (Eigen::Index j = 0; j < 3; ++j) m(i, j) = Complex(g(rng), g(rng));
  const auto text = io::matrix_to_json(m).dump();
  CHECK(io::matrix_from_json(io::Json::parse(text)) == m);
}

TEST_CASE("matrix JSON accepts flat arrays and a missing imaginary part") {
  const auto flat = io::matrix_from_json(io::Json::parse(R"({"n":2,"re":[1,2,3,4]})"));
  CHECK(flat(1, 0) == Complex(3.0, 0.0));
  const auto nested = io::matrix_from_json(io::Json::parse(R"({"n":2,"re":[[1,2],[3,4]],"im":[0,1,-1,0]})"));
  CHECK(nested(0, 1) == Complex(2.0, 1.0));
  for (const char* bad : {R"({"re":[1]})", R"({"n":2,"re":[1,2,3]})", R"({"n":2,"re":[[1,2],[3]]})",
                          R"({"n":0,"re":[]})", R"({"n":1,"re":["x"]})", R"([1,2])"}) {
    INFO(bad);
    CHECK_THROWS_AS(io::matrix_from_json(io::Json::parse(bad)), Error);
  }
}
