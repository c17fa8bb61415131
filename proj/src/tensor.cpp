#include "johnell/tensor.hpp"

#include "johnell/errors.hpp"

#include <cmath>

namespace johnell {

namespace {

struct FactorSummary {
  double logdet = 0.0;
  Vector leverage;
};

FactorSummary summarize(const PolytopeMatrix& a, const WeightVector& w) {
  const PDFactor factor = pd_factorize(gram(a, w));
  return {factor.logdet(),
          factor.whiten(a.entries().transpose()).colwise().squaredNorm().transpose()};
}

}  // namespace

const WeightVector& TensorWeights::materialize(std::size_t limit) {
  if (!materialized_) materialized_ = kron_weights(w1_, w2_, limit);
  return *materialized_;
}

WeightVector kron_weights(const WeightVector& w1, const WeightVector& w2, std::size_t limit) {
  return WeightVector(kron(w1.values(), w2.values(), limit));
}

TensorSolveResult approx_tensor_john(const PolytopeMatrix& a1, const PolytopeMatrix& a2,
                                     const SolverConfig& config) {
  SolverConfig second_config = config;
  second_config.seed = config.seed + 1;
  SolveResult first = approx_john(a1, config);
  SolveResult second = approx_john(a2, second_config);
  TensorWeights weights(first.weights, second.weights);
  return {std::move(weights), std::move(first), std::move(second)};
}

std::pair<double, double> tensor_leverage_consistency(const PolytopeMatrix& a1,
                                                      const PolytopeMatrix& a2,
                                                      const WeightVector& w1,
                                                      const WeightVector& w2, std::size_t i1,
                                                      std::size_t i2, std::size_t limit) {
  if (i1 >= a1.rows() || i2 >= a2.rows()) {
    throw InputError("tensor row index out of range");
  }
  const PolytopeMatrix big = kron(a1, a2, limit);
  const WeightVector big_w = kron_weights(w1, w2, limit);
  const PDFactor factor = pd_factorize(gram(big, big_w));
  const auto row = static_cast<Eigen::Index>(kron_index(i1, i2, a1.rows()));
  const Matrix col = big.entries().row(row).transpose();
  const double lhs = factor.whiten(col).squaredNorm();

  const double f1 = summarize(a1, w1).leverage(static_cast<Eigen::Index>(i1));
  const double f2 = summarize(a2, w2).leverage(static_cast<Eigen::Index>(i2));
  return {lhs, f1 * f2};
}

Certificate certify_tensor(const PolytopeMatrix& a1, const PolytopeMatrix& a2,
                           const TensorWeights& tw, double eps,
                           std::optional<double> factor_threshold) {
  if (!(eps >= 0.0) || !std::isfinite(eps)) {
    throw InputError("certificate epsilon must be finite and >= 0");
  }
  const FactorSummary s1 = summarize(a1, tw.first());
  const FactorSummary s2 = summarize(a2, tw.second());
  const double d1 = static_cast<double>(a1.cols());
  const double d2 = static_cast<double>(a2.cols());
  const double dim = d1 * d2;
  const double eps2 = tensor_epsilon(eps);

  // log det(Q1 (x) Q2) = d2 log det Q1 + d1 log det Q2.
  const double logdet = d2 * s1.logdet + d1 * s2.logdet;

  Certificate cert;
  cert.epsilon = eps2;
  cert.dimension = dim;
  cert.sum_weights = tw.sum();
  cert.sum_lower = (1.0 - eps) * (1.0 - eps) * dim;
  cert.sum_upper = (1.0 + eps) * (1.0 + eps) * dim;
  cert.gap_bound = 2.0 * eps2 * dim;
  cert.volume_bound = -eps2 * dim;
  // Leverages are nonnegative, so the max of products is the product of maxes.
  cert.max_weighted_leverage = s1.leverage.maxCoeff() * s2.leverage.maxCoeff();
  const double per_factor = factor_threshold.value_or(1.0 + eps);
  cert.leverage_threshold = per_factor * per_factor;
  cert.dual_objective = cert.sum_weights - logdet - dim;
  cert.duality_gap = cert.dual_objective + dim * std::log1p(eps2) + logdet;
  return cert;
}

double tensor_volume_log_margin(const PolytopeMatrix& a1, const PolytopeMatrix& a2,
                                const TensorWeights& tw, const TensorWeights& ref, double eps) {
  const double d1 = static_cast<double>(a1.cols());
  const double d2 = static_cast<double>(a2.cols());
  const double dim = d1 * d2;
  const double logdet_q = d2 * pd_factorize(gram(a1, tw.first())).logdet() +
                          d1 * pd_factorize(gram(a2, tw.second())).logdet();
  const double logdet_ref = d2 * pd_factorize(gram(a1, ref.first())).logdet() +
                            d1 * pd_factorize(gram(a2, ref.second())).logdet();
  return -0.5 * (dim * std::log1p(tensor_epsilon(eps)) + logdet_q) + 0.5 * logdet_ref;
}

}  // namespace johnell
