#include "johnell/report.hpp"

#include "johnell/errors.hpp"
#include "johnell/io.hpp"

#include <cmath>
#include <ostream>

namespace johnell {

namespace {

void emit(const nlohmann::json& v, std::string& out) {
  using value_t = nlohmann::json::value_t;
  switch (v.type()) {
    case value_t::null:
      out += "null";
      break;
    case value_t::boolean:
      out += v.get<bool>() ? "true" : "false";
      break;
    case value_t::number_integer:
      out += std::to_string(v.get<std::int64_t>());
      break;
    case value_t::number_unsigned:
      out += std::to_string(v.get<std::uint64_t>());
      break;
    case value_t::number_float: {
      const double d = v.get<double>();
      if (!std::isfinite(d)) throw Error("report contains a non-finite number");
      out += format_double(d);
      break;
    }
    case value_t::string:
      out += v.dump();
      break;
    case value_t::array: {
      out += '[';
      bool first = true;
      for (const auto& item : v) {
        if (!first) out += ',';
        first = false;
        emit(item, out);
      }
      out += ']';
      break;
    }
    case value_t::object: {
      // nlohmann::json objects are std::map-backed, so iteration is sorted.
      out += '{';
      bool first = true;
      for (const auto& [key, item] : v.items()) {
        if (!first) out += ',';
        first = false;
        out += nlohmann::json(key).dump();
        out += ':';
        emit(item, out);
      }
      out += '}';
      break;
    }
    default:
      throw Error("unsupported JSON value in report");
  }
}

}  // namespace

std::string canonical_json(const nlohmann::json& value) {
  std::string out;
  emit(value, out);
  return out;
}

nlohmann::json to_json(const RunReport& r) {
  const Certificate& c = r.certificate;
  nlohmann::json j;
  j["tool_version"] = r.tool_version;
  j["subcommand"] = r.subcommand;
  if (r.input_digest) j["input_digest"] = *r.input_digest;
  if (r.input_digest_a) j["input_digest_a"] = *r.input_digest_a;
  if (r.input_digest_b) j["input_digest_b"] = *r.input_digest_b;
  if (r.weights_digest) j["weights_digest"] = *r.weights_digest;
  j["rows"] = r.rows;
  j["cols"] = r.cols;
  j["epsilon"] = r.epsilon;
  j["oracle"] = r.oracle;
  if (r.noise_mode) j["noise_mode"] = *r.noise_mode;
  j["seed"] = r.seed;
  if (r.iterations) j["iterations"] = *r.iterations;
  if (r.oracle_calls) j["oracle_calls"] = *r.oracle_calls;

  j["sum_weights"] = c.sum_weights;
  j["sum_lower"] = c.sum_lower;
  j["sum_upper"] = c.sum_upper;
  j["max_weighted_leverage"] = c.max_weighted_leverage;
  j["leverage_threshold"] = c.leverage_threshold;
  j["dual_objective"] = c.dual_objective;
  j["duality_gap"] = c.duality_gap;
  j["gap_bound"] = c.gap_bound;
  j["slack"] = c.slack;
  if (c.volume_log_margin) {
    j["volume_log_margin"] = *c.volume_log_margin;
    j["volume_bound"] = c.volume_bound;
  }
  if (c.containment) {
    j["containment"] = {
        {"samples", c.containment->samples},
        {"ellipsoid_outside_polytope", c.containment->ellipsoid_outside_polytope},
        {"polytope_outside_ellipsoid", c.containment->polytope_outside_ellipsoid},
    };
  }

  nlohmann::json flags;
  flags["sum_window_pass"] = c.sum_window_pass();
  flags["leverage_pass"] = c.leverage_pass();
  flags["gap_pass"] = c.gap_pass();
  if (c.volume_log_margin) flags["volume_pass"] = c.volume_pass();
  if (c.containment) flags["containment_pass"] = c.containment_pass();
  flags["passed"] = c.passed();
  j["certificate"] = flags;

  if (!r.factors.empty()) {
    nlohmann::json factors = nlohmann::json::array();
    for (const FactorReport& f : r.factors) {
      factors.push_back({{"rows", f.rows},
                         {"cols", f.cols},
                         {"iterations", f.iterations},
                         {"oracle_calls", f.oracle_calls},
                         {"sum_weights", f.sum_weights},
                         {"max_weighted_leverage", f.max_weighted_leverage}});
    }
    j["factors"] = factors;
  }
  if (r.wall_clock_ms) j["wall_clock_ms"] = *r.wall_clock_ms;
  return j;
}

void write_report(const RunReport& report, std::ostream& out) {
  out << canonical_json(to_json(report)) << '\n';
  if (!out) throw Error("failed to write report");
}

}  // namespace johnell
