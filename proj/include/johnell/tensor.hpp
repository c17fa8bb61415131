#pragma once

// John ellipsoids of Kronecker-structured polytopes
//   P = {x in R^{d1 d2} : |<a_{1,i1} (x) a_{2,i2}, x>| <= 1 for all i1, i2}.
// The Lewis weights of A1 (x) A2 are w1 (x) w2, and leverage scores factor:
//   f_{i1 + i2 n1}(w1 (x) w2) = f_{i1}(w1) * f_{i2}(w2).
// Everything here works factor-wise; the n1 n2 x d1 d2 instance is only
// materialized for cross-checks.

#include "johnell/certify.hpp"
#include "johnell/matcore.hpp"
#include "johnell/solver.hpp"

#include <optional>
#include <utility>

namespace johnell {

inline constexpr std::size_t kDefaultMaterializeLimit = 1U << 16;

class TensorWeights {
 public:
  TensorWeights(WeightVector w1, WeightVector w2) : w1_(std::move(w1)), w2_(std::move(w2)) {}

  const WeightVector& first() const noexcept { return w1_; }
  const WeightVector& second() const noexcept { return w2_; }
  std::size_t size() const noexcept { return w1_.size() * w2_.size(); }
  double sum() const { return w1_.sum() * w2_.sum(); }
  double operator()(std::size_t i1, std::size_t i2) const { return w1_[i1] * w2_[i2]; }

  // w1 (x) w2, built once and cached. Throws SizeError above limit.
  const WeightVector& materialize(std::size_t limit = kDefaultMaterializeLimit);
  const std::optional<WeightVector>& materialized() const noexcept { return materialized_; }

 private:
  WeightVector w1_;
  WeightVector w2_;
  std::optional<WeightVector> materialized_;
};

struct TensorSolveResult {
  TensorWeights weights;
  SolveResult first;
  SolveResult second;
};

// Solves each factor with approx_john (seeds config.seed and config.seed + 1).
TensorSolveResult approx_tensor_john(const PolytopeMatrix& a1, const PolytopeMatrix& a2,
                                     const SolverConfig& config);

WeightVector kron_weights(const WeightVector& w1, const WeightVector& w2,
                          std::size_t limit = kDefaultMaterializeLimit);

// (lhs, rhs): lhs evaluated on the materialized instance, rhs as the product
// of factor leverages. Indices are 0-based.
std::pair<double, double> tensor_leverage_consistency(const PolytopeMatrix& a1,
                                                      const PolytopeMatrix& a2,
                                                      const WeightVector& w1,
                                                      const WeightVector& w2, std::size_t i1,
                                                      std::size_t i2,
                                                      std::size_t limit = kDefaultMaterializeLimit);

// Certificate with squared thresholds, computed from the factors alone (no
// d1 d2 x d1 d2 Gram is formed): sum window [(1-eps)^2 D, (1+eps)^2 D] with
// D = d1 d2, leverage threshold (1+eps)^2, gap and volume bounds at the
// combined accuracy eps' = (1+eps)^2 - 1.
// factor_threshold (default 1 + eps) is the per-factor leverage threshold;
// the tensor threshold is its square.
Certificate certify_tensor(const PolytopeMatrix& a1, const PolytopeMatrix& a2,
                           const TensorWeights& tw, double eps,
                           std::optional<double> factor_threshold = std::nullopt);

// Accuracy of the combined instance: (1+eps)^2 - 1.
inline double tensor_epsilon(double eps) { return (1.0 + eps) * (1.0 + eps) - 1.0; }

// Log-volume margin of the tensor ellipsoid against reference factor optima.
double tensor_volume_log_margin(const PolytopeMatrix& a1, const PolytopeMatrix& a2,
                                const TensorWeights& tw, const TensorWeights& ref, double eps);

}  // namespace johnell
