#pragma once

// High-precision reference Lewis weights for small instances: iterate the
// undamped (or damped) map w <- w o f(w) until the fixed-point residual
// |w o f(w) - w|_inf drops below tolerance. Used as ground truth in tests.

#include "johnell/matcore.hpp"

#include <cstddef>

namespace johnell {

struct RefConfig {
  double tolerance = 1e-10;
  std::size_t max_iterations = 100000;
  // w <- (1 - damping) w + damping * (w o f(w)); must lie in (0, 1].
  double damping = 1.0;
};

// Throws NonConvergence (carrying the final residual) or RankDeficient.
WeightVector exact_lewis_weights(const PolytopeMatrix& a, const RefConfig& cfg = {});

// |w o f(w) - w|_inf.
double fixed_point_residual(const PolytopeMatrix& a, const WeightVector& w);

}  // namespace johnell
