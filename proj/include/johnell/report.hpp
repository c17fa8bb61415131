#pragma once

// Run reports and their canonical JSON form: object keys sorted, floats with
// 17 significant digits, no whitespace, newline-terminated. Optional fields
// are omitted rather than written as null.

#include "johnell/certify.hpp"

#include <json.hpp>

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace johnell {

inline constexpr const char* kToolVersion = "0.3.1";

struct FactorReport {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::size_t iterations = 0;
  std::uint64_t oracle_calls = 0;
  double sum_weights = 0.0;
  double max_weighted_leverage = 0.0;
};

struct RunReport {
  std::string tool_version = kToolVersion;
  std::string subcommand;
  std::optional<std::string> input_digest;
  std::optional<std::string> input_digest_a;
  std::optional<std::string> input_digest_b;
  std::optional<std::string> weights_digest;
  std::size_t rows = 0;
  std::size_t cols = 0;
  double epsilon = 0.0;
  std::string oracle;
  std::optional<std::string> noise_mode;
  std::uint64_t seed = 0;
  std::optional<std::size_t> iterations;
  std::optional<std::uint64_t> oracle_calls;
  std::vector<FactorReport> factors;
  Certificate certificate;
  std::optional<double> wall_clock_ms;
};

nlohmann::json to_json(const RunReport& report);

// Canonical serialization; throws Error on non-finite floats.
std::string canonical_json(const nlohmann::json& value);

void write_report(const RunReport& report, std::ostream& out);

}  // namespace johnell
