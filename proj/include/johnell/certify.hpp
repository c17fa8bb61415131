#pragma once

// Verification that weights w form a (1+eps)-approximate John ellipsoid:
//
//   sum_i w_i in [(1-eps) d, (1+eps) d]   and   max_i f_i(w) <= threshold,
//
// plus the duality gap, the log-volume margin against a reference optimum,
// and sampled evidence for the two containments
//   (1/sqrt(1+eps)) E  in  P   and   P  in  sqrt((1+eps) d) E.

#include "johnell/matcore.hpp"

#include <cstdint>
#include <optional>

namespace johnell {

// Absolute slack added to every certificate threshold.
inline constexpr double kCertificateSlack = 1e-9;

struct ContainmentCounts {
  std::size_t samples = 0;
  // Boundary points of (1/sqrt(1+eps)) E with max_i |a_i^T x| > 1 + slack.
  std::size_t ellipsoid_outside_polytope = 0;
  // Boundary points of P with x^T Q x > (1+eps) d + slack.
  std::size_t polytope_outside_ellipsoid = 0;

  bool clean() const noexcept {
    return ellipsoid_outside_polytope == 0 && polytope_outside_ellipsoid == 0;
  }
};

struct Certificate {
  double epsilon = 0.0;
  double slack = kCertificateSlack;
  double dimension = 0.0;  // d (d1*d2 for tensor certificates)

  double sum_weights = 0.0;
  double sum_lower = 0.0;
  double sum_upper = 0.0;
  double max_weighted_leverage = 0.0;
  double leverage_threshold = 0.0;
  double dual_objective = 0.0;
  double duality_gap = 0.0;
  double gap_bound = 0.0;
  double volume_bound = 0.0;

  std::optional<double> volume_log_margin;
  std::optional<ContainmentCounts> containment;

  bool sum_window_pass() const noexcept {
    return sum_weights >= sum_lower - slack && sum_weights <= sum_upper + slack;
  }
  bool leverage_pass() const noexcept {
    return max_weighted_leverage <= leverage_threshold + slack;
  }
  bool gap_pass() const noexcept { return duality_gap <= gap_bound + slack; }
  // Vacuously true when no reference optimum was supplied.
  bool volume_pass() const noexcept {
    return !volume_log_margin || *volume_log_margin >= volume_bound - slack;
  }
  bool containment_pass() const noexcept { return !containment || containment->clean(); }

  bool passed() const noexcept {
    return sum_window_pass() && leverage_pass() && gap_pass() && volume_pass() &&
           containment_pass();
  }
};

// threshold defaults to 1 + eps. Requires eps >= 0.
Certificate certify_solution(const PolytopeMatrix& a, const WeightVector& w, double eps,
                             std::optional<double> threshold = std::nullopt);

// Default leverage threshold for outputs of approximate oracles: 1 + 3 eps.
inline double noisy_threshold(double eps) { return 1.0 + 3.0 * eps; }

// sum_i w_i - log det(A^T W A) - d.
double dual_objective(const PolytopeMatrix& a, const WeightVector& w);

// dual(w) - log det(G'^2) with G' = ((1+eps) A^T W A)^{-1/2}.
double duality_gap(const PolytopeMatrix& a, const WeightVector& w, double eps);

// ln det G' - ln det G* with G'^2 = ((1+eps) A^T W A)^{-1} and
// G*^2 = (A^T W_ref A)^{-1}.
double volume_log_margin(const PolytopeMatrix& a, const WeightVector& w,
                         const WeightVector& w_ref, double eps);

ContainmentCounts sample_containment(const PolytopeMatrix& a, const WeightVector& w, double eps,
                                     std::size_t samples, std::uint64_t seed);

}  // namespace johnell
