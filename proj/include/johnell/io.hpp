#pragma once

// Text formats.
//
// Matrix file:
//   # comment lines and blank lines are ignored
//   n d
//   a_11 ... a_1d
//   ...            (exactly n rows of d numbers, one row per line)
//
// Weights file: one value per line (comments and blanks ignored).

#include "johnell/matcore.hpp"

#include <filesystem>
#include <iosfwd>
#include <string>

namespace johnell {

// Throws ParseError (with 1-based line) on malformed tokens or non-finite
// values, DimensionError on a bad header or row count.
PolytopeMatrix parse_matrix(std::istream& in);
PolytopeMatrix read_matrix_file(const std::filesystem::path& path);

WeightVector parse_weights(std::istream& in);
WeightVector read_weights_file(const std::filesystem::path& path);

// Values are written with 17 significant digits, so parsing them back is exact.
void write_matrix(std::ostream& out, const PolytopeMatrix& a);
void write_weights(std::ostream& out, const WeightVector& w);

// Whole file as bytes; throws Error when unreadable.
std::string read_file(const std::filesystem::path& path);

// Lower-case hex SHA-256 of the given bytes.
std::string sha256_hex(const std::string& bytes);

// printf("%.17g").
std::string format_double(double v);

}  // namespace johnell
