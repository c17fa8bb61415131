#pragma once

// Averaged fixed-point iteration for approximate l-infinity Lewis weights:
//
//   w(1) = d/n,   w(k+1) = w(k) o f~(w(k)),   output (1/T) sum_{k<=T} w(k),
//
// where f~ is the configured leverage oracle. The output's ellipsoid
// {x : x^T A^T diag(w) A x <= 1} is a (1+eps)-approximate John ellipsoid of
// {x : |Ax| <= 1} for T = ceil(2 ln(n/d) / eps).

#include "johnell/matcore.hpp"
#include "johnell/oracle.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace johnell {

struct SolverConfig {
  double epsilon = 0.1;
  std::optional<std::size_t> iterations_override;
  OracleConfig oracle;
  // Keys the oracle's random streams; overrides oracle.seed.
  std::uint64_t seed = 0;
  // Store every iterate w(1..T) in the trace (diagnostics only).
  bool keep_iterates = false;
};

struct IterationRecord {
  std::size_t k = 0;  // 1-based
  double weight_sum = 0.0;
  // max_i of the oracle estimate at w(k); empty for k = T (never queried).
  std::optional<double> max_leverage;
  std::uint64_t oracle_calls = 0;  // cumulative, after this iterate
};

struct IterationTrace {
  std::vector<IterationRecord> records;
  std::uint64_t oracle_calls = 0;
  std::vector<Vector> iterates;  // only with keep_iterates
};

struct SolveResult {
  WeightVector weights;
  IterationTrace trace;
  std::size_t iterations = 0;
};

// T = max(1, ceil(2 ln(n/d) / eps)).
std::size_t default_iterations(std::size_t n, std::size_t d, double eps);

// Throws RankDeficient, InputError on bad config, NumericalError when an
// iterate overflows. Iterates that underflow are tracked in the log domain.
SolveResult approx_john(const PolytopeMatrix& a, const SolverConfig& config);

// E = {x : x^T Q x <= 1} with Q = A^T diag(w) A.
struct EllipsoidForm {
  GramMatrix q;
  WeightVector weights;
  std::size_t rows = 0;  // n of the source polytope
};

EllipsoidForm ellipsoid_from_weights(const PolytopeMatrix& a, const WeightVector& w);

}  // namespace johnell
