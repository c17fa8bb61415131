#include "johnell/refsolve.hpp"

#include "johnell/errors.hpp"

#include <cmath>
#include <string>

namespace johnell {

namespace {

// f(w) for w >= 0; zero weights are allowed as long as the support spans.
Vector leverage_allow_zeros(const PolytopeMatrix& a, const Vector& w) {
  const PDFactor factor = pd_factorize(gram(a, WeightVector(w)));
  return factor.whiten(a.entries().transpose()).colwise().squaredNorm().transpose();
}

}  // namespace

double fixed_point_residual(const PolytopeMatrix& a, const WeightVector& w) {
  const Vector f = leverage_allow_zeros(a, w.values());
  return (w.values().cwiseProduct(f) - w.values()).cwiseAbs().maxCoeff();
}

WeightVector exact_lewis_weights(const PolytopeMatrix& a, const RefConfig& cfg) {
  if (!(cfg.tolerance > 0.0) || cfg.max_iterations < 1) {
    throw InputError("reference solver needs tolerance > 0 and max_iterations >= 1");
  }
  if (!(cfg.damping > 0.0 && cfg.damping <= 1.0)) {
    throw InputError("damping must lie in (0, 1]");
  }
  const double n = static_cast<double>(a.rows());
  const double d = static_cast<double>(a.cols());
  Vector w = Vector::Constant(static_cast<Eigen::Index>(a.rows()), d / n);

  double residual = 0.0;
  for (std::size_t it = 0; it < cfg.max_iterations; ++it) {
    const Vector f = leverage_allow_zeros(a, w);
    const Vector next = w.cwiseProduct(f);
    residual = (next - w).cwiseAbs().maxCoeff();
    if (residual <= cfg.tolerance && std::abs(w.sum() - d) <= d * cfg.tolerance) {
      return WeightVector(std::move(w));
    }
    w = (1.0 - cfg.damping) * w + cfg.damping * next;
    if (!w.allFinite() || w.minCoeff() < 0.0) {
      throw NumericalError("reference iterate became invalid at step " + std::to_string(it + 1));
    }
  }
  throw NonConvergence("reference solver did not converge after " +
                           std::to_string(cfg.max_iterations) + " iterations (residual " +
                           std::to_string(residual) + ")",
                       residual, cfg.max_iterations);
}

}  // namespace johnell
