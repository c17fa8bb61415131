#include "johnell/solver.hpp"

#include "johnell/errors.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace johnell {

std::size_t default_iterations(std::size_t n, std::size_t d, double eps) {
  validate_epsilon(eps);
  if (d < 1 || n < d) {
    throw DimensionError("default_iterations requires n >= d >= 1");
  }
  const double t = std::ceil(2.0 * std::log(static_cast<double>(n) / static_cast<double>(d)) / eps);
  return std::max<std::size_t>(1, static_cast<std::size_t>(t));
}

SolveResult approx_john(const PolytopeMatrix& a, const SolverConfig& config) {
  validate_epsilon(config.epsilon);
  const std::size_t n = a.rows();
  const std::size_t d = a.cols();
  std::size_t iterations = default_iterations(n, d, config.epsilon);
  if (config.iterations_override) {
    if (*config.iterations_override < 1) {
      throw InputError("iteration count must be positive");
    }
    iterations = *config.iterations_override;
  }

  OracleConfig oracle_config = config.oracle;
  oracle_config.seed = config.seed;
  LeverageOracle oracle(oracle_config, config.epsilon);

  const auto size = static_cast<Eigen::Index>(n);
  // Iterates are tracked as logarithms: rows with small leverage decay
  // geometrically and can fall below the smallest double long before T.
  Vector log_w = Vector::Constant(size, std::log(static_cast<double>(d) / static_cast<double>(n)));
  Vector w = log_w.array().exp();
  // Compensated running sum of w(1..T).
  Vector sum = Vector::Zero(size);
  Vector carry = Vector::Zero(size);

  SolveResult result;
  result.iterations = iterations;
  result.trace.records.reserve(iterations);

  for (std::size_t k = 1; k <= iterations; ++k) {
    for (Eigen::Index i = 0; i < size; ++i) {
      const double y = w(i) - carry(i);
      const double t = sum(i) + y;
      carry(i) = (t - sum(i)) - y;
      sum(i) = t;
    }
    if (config.keep_iterates) result.trace.iterates.push_back(w);

    IterationRecord record;
    record.k = k;
    record.weight_sum = WeightVector(w).sum();

    // w(T+1) never enters the average, so the last oracle call is skipped.
    if (k < iterations) {
      // Underflowed rows contribute nothing to the Gram; the floor only keeps
      // the oracle's positivity precondition.
      const Vector floored = w.cwiseMax(std::numeric_limits<double>::denorm_min());
      const LeverageEstimate f = oracle(a, WeightVector(floored));
      record.max_leverage = f.values.maxCoeff();
      log_w += f.values.array().log().matrix();
      if (log_w.hasNaN() || log_w.maxCoeff() > std::log(std::numeric_limits<double>::max())) {
        throw NumericalError("iterate " + std::to_string(k + 1) + " has non-finite weights");
      }
      w = log_w.array().exp();
    }
    record.oracle_calls = oracle.calls();
    result.trace.records.push_back(record);
  }
  result.trace.oracle_calls = oracle.calls();

  Vector avg = sum / static_cast<double>(iterations);
  if (!avg.allFinite()) {
    throw NumericalError("averaged weights are non-finite");
  }
  result.weights = WeightVector(std::move(avg));
  return result;
}

EllipsoidForm ellipsoid_from_weights(const PolytopeMatrix& a, const WeightVector& w) {
  GramMatrix q = gram(a, w);
  pd_factorize(q);  // positive-definiteness check
  return EllipsoidForm{std::move(q), w, a.rows()};
}

}  // namespace johnell
