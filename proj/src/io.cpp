#include "johnell/io.hpp"

#include "johnell/errors.hpp"

#include <openssl/evp.h>

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <memory>
#include <ostream>
#include <sstream>
#include <string_view>
#include <vector>

namespace johnell {

namespace {

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> tokens;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    const std::size_t start = i;
    while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    if (i > start) tokens.push_back(line.substr(start, i - start));
  }
  return tokens;
}

bool is_significant(std::string_view line) {
  for (char c : line) {
    if (c == '#') return false;
    if (!std::isspace(static_cast<unsigned char>(c))) return true;
  }
  return false;
}

double parse_real(std::string_view token, std::size_t line) {
  double value = 0.0;
  const char* first = token.data();
  const char* last = token.data() + token.size();
  if (!token.empty() && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last) {
    throw ParseError("not a number: '" + std::string(token) + "'", line);
  }
  if (!std::isfinite(value)) {
    throw ParseError("non-finite value: '" + std::string(token) + "'", line);
  }
  return value;
}

std::size_t parse_count(std::string_view token, std::size_t line) {
  std::size_t value = 0;
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc() || ptr != token.data() + token.size()) {
    throw ParseError("expected a non-negative integer, got '" + std::string(token) + "'", line);
  }
  return value;
}

}  // namespace

PolytopeMatrix parse_matrix(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  std::size_t n = 0, d = 0;
  bool have_header = false;
  Matrix m;
  std::size_t row = 0;

  while (std::getline(in, line)) {
    ++line_no;
    if (!is_significant(line)) continue;
    const auto tokens = split(line);
    if (!have_header) {
      if (tokens.size() != 2) {
        throw ParseError("header must be 'n d'", line_no);
      }
      n = parse_count(tokens[0], line_no);
      d = parse_count(tokens[1], line_no);
      if (d < 1 || n < d) {
        throw DimensionError("header declares " + std::to_string(n) + "x" + std::to_string(d) +
                             "; need n >= d >= 1");
      }
      m.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(d));
      have_header = true;
      continue;
    }
    if (row == n) {
      throw DimensionError("more than the declared " + std::to_string(n) + " rows (line " +
                           std::to_string(line_no) + ")");
    }
    if (tokens.size() != d) {
      throw ParseError("expected " + std::to_string(d) + " values, found " +
                           std::to_string(tokens.size()),
                       line_no);
    }
    for (std::size_t j = 0; j < d; ++j) {
      m(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(j)) =
          parse_real(tokens[j], line_no);
    }
    ++row;
  }
  if (!have_header) {
    throw DimensionError("missing 'n d' header");
  }
  if (row != n) {
    throw DimensionError("declared " + std::to_string(n) + " rows, found " + std::to_string(row));
  }
  return PolytopeMatrix(std::move(m));
}

PolytopeMatrix read_matrix_file(const std::filesystem::path& path) {
  std::istringstream in(read_file(path));
  return parse_matrix(in);
}

WeightVector parse_weights(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  std::vector<double> values;
  while (std::getline(in, line)) {
    ++line_no;
    if (!is_significant(line)) continue;
    const auto tokens = split(line);
    if (tokens.size() != 1) {
      throw ParseError("expected one weight per line", line_no);
    }
    const double v = parse_real(tokens[0], line_no);
    if (v < 0.0) {
      throw ParseError("negative weight", line_no);
    }
    values.push_back(v);
  }
  Vector w(static_cast<Eigen::Index>(values.size()));
  for (std::size_t i = 0; i < values.size(); ++i) w(static_cast<Eigen::Index>(i)) = values[i];
  return WeightVector(std::move(w));
}

WeightVector read_weights_file(const std::filesystem::path& path) {
  std::istringstream in(read_file(path));
  return parse_weights(in);
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_matrix(std::ostream& out, const PolytopeMatrix& a) {
  out << a.rows() << ' ' << a.cols() << '\n';
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) {
      if (j) out << ' ';
      out << format_double(a.entries()(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)));
    }
    out << '\n';
  }
}

void write_weights(std::ostream& out, const WeightVector& w) {
  for (std::size_t i = 0; i < w.size(); ++i) out << format_double(w[i]) << '\n';
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error("cannot open '" + path.string() + "'");
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::string sha256_hex(const std::string& bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), EVP_MD_CTX_free);
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1 ||
      EVP_DigestUpdate(ctx.get(), bytes.data(), bytes.size()) != 1 ||
      EVP_DigestFinal_ex(ctx.get(), digest, &len) != 1) {
    throw Error("SHA-256 computation failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  out.reserve(2 * len);
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(kHex[digest[i] >> 4]);
    out.push_back(kHex[digest[i] & 0xF]);
  }
  return out;
}

}  // namespace johnell
