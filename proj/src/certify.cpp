#include "johnell/certify.hpp"

#include "johnell/errors.hpp"
#include "johnell/rng.hpp"

#include <cmath>

namespace johnell {

namespace {

constexpr std::uint64_t kEllipsoidStream = 0x656c6cULL;
constexpr std::uint64_t kPolytopeStream = 0x706f6cULL;

void require_nonnegative_epsilon(double eps) {
  if (!(eps >= 0.0) || !std::isfinite(eps)) {
    throw InputError("certificate epsilon must be finite and >= 0");
  }
}

}  // namespace

double dual_objective(const PolytopeMatrix& a, const WeightVector& w) {
  const PDFactor factor = pd_factorize(gram(a, w));
  return w.sum() - factor.logdet() - static_cast<double>(a.cols());
}

double duality_gap(const PolytopeMatrix& a, const WeightVector& w, double eps) {
  require_nonnegative_epsilon(eps);
  const PDFactor factor = pd_factorize(gram(a, w));
  const double d = static_cast<double>(a.cols());
  const double dual = w.sum() - factor.logdet() - d;
  // log det G'^2 = -log det((1+eps) A^T W A).
  const double primal = -(d * std::log1p(eps) + factor.logdet());
  return dual - primal;
}

double volume_log_margin(const PolytopeMatrix& a, const WeightVector& w,
                         const WeightVector& w_ref, double eps) {
  require_nonnegative_epsilon(eps);
  const double d = static_cast<double>(a.cols());
  const double logdet_q = pd_factorize(gram(a, w)).logdet();
  const double logdet_ref = pd_factorize(gram(a, w_ref)).logdet();
  const double log_g_prime = -0.5 * (d * std::log1p(eps) + logdet_q);
  const double log_g_star = -0.5 * logdet_ref;
  return log_g_prime - log_g_star;
}

Certificate certify_solution(const PolytopeMatrix& a, const WeightVector& w, double eps,
                             std::optional<double> threshold) {
  require_nonnegative_epsilon(eps);
  const PDFactor factor = pd_factorize(gram(a, w));
  const double d = static_cast<double>(a.cols());
  const Vector f = factor.whiten(a.entries().transpose()).colwise().squaredNorm().transpose();

  Certificate cert;
  cert.epsilon = eps;
  cert.dimension = d;
  cert.sum_weights = w.sum();
  cert.sum_lower = (1.0 - eps) * d;
  cert.sum_upper = (1.0 + eps) * d;
  cert.gap_bound = 2.0 * eps * d;
  cert.volume_bound = -eps * d;
  cert.max_weighted_leverage = f.maxCoeff();
  cert.leverage_threshold = threshold.value_or(1.0 + eps);
  cert.dual_objective = cert.sum_weights - factor.logdet() - d;
  cert.duality_gap = cert.dual_objective + d * std::log1p(eps) + factor.logdet();
  return cert;
}

ContainmentCounts sample_containment(const PolytopeMatrix& a, const WeightVector& w, double eps,
                                     std::size_t samples, std::uint64_t seed) {
  require_nonnegative_epsilon(eps);
  if (samples < 1) {
    throw InputError("containment sampling needs at least one sample");
  }
  const GramMatrix q = gram(a, w);
  const PDFactor factor = pd_factorize(q);
  const auto d = static_cast<Eigen::Index>(a.cols());
  const double radius_inner = 1.0 / std::sqrt(1.0 + eps);
  const double outer_bound = (1.0 + eps) * static_cast<double>(d);

  auto direction = [&](std::uint64_t stream, std::size_t index) {
    Vector g(d);
    for (Eigen::Index j = 0; j < d; ++j) {
      g(j) = rng::gaussian(seed, stream, index, static_cast<std::uint64_t>(j));
    }
    return g;
  };

  ContainmentCounts counts;
  counts.samples = samples;
  for (std::size_t s = 0; s < samples; ++s) {
    // Boundary of (1/sqrt(1+eps)) E.
    Vector u = direction(kEllipsoidStream, s);
    u *= radius_inner / u.norm();
    const Vector x = factor.sphere_to_ellipsoid(u);
    if ((a.entries() * x).cwiseAbs().maxCoeff() > 1.0 + kCertificateSlack) {
      ++counts.ellipsoid_outside_polytope;
    }

    // Boundary of P.
    const Vector v = direction(kPolytopeStream, s);
    const Vector y = v / (a.entries() * v).cwiseAbs().maxCoeff();
    if (y.dot(q.entries * y) > outer_bound + kCertificateSlack) {
      ++counts.polytope_outside_ellipsoid;
    }
  }
  return counts;
}

}  // namespace johnell
