#pragma once

// Text and JSON interchange: spectra with exact fractions, Hermitian
// matrices as {"n", "re", "im"} objects, locale-independent numbers.

#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "monocurv/states.hpp"

namespace monocurv::io {

using Json = nlohmann::ordered_json;

/// Parses "0.25", "1e-3", "-2" or a fraction "1/3" of two such decimals.
/// Fractions are reduced as exact rationals and rounded to double once.
/// Throws InvalidArgument.
double parse_number(std::string_view text);

/// Comma-separated list of parse_number entries.
std::vector<double> parse_spectrum(std::string_view text);

/// Shortest decimal that round-trips (at most 17 significant digits),
/// '.' as decimal separator regardless of locale.
std::string format_double(double value);

/// {"n": n, "re": [[...]...], "im": [[...]...]} in row-major order.
Json matrix_to_json(const CMatrix& m);

/// Accepts "re"/"im" as nested rows or as flat row-major arrays of n*n
/// numbers; "im" may be omitted. Throws InvalidArgument / DimensionMismatch.
CMatrix matrix_from_json(const Json& j);

/// JSON number, or null for non-finite values.
Json number_or_null(double value);

}  // namespace monocurv::io
