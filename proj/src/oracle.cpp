#include "johnell/oracle.hpp"

#include "johnell/errors.hpp"
#include "johnell/rng.hpp"

#include <cmath>
#include <string>

namespace johnell {

namespace {

// Stream tags separating the sketch signs from the noise multipliers.
constexpr std::uint64_t kSketchStream = 0x736b65746368ULL;
constexpr std::uint64_t kNoiseStream = 0x6e6f697365ULL;

void require_positive(const WeightVector& w) {
  if (w.size() == 0 || !(w.min() > 0.0)) {
    throw InputError("leverage oracle requires strictly positive weights");
  }
}

}  // namespace

std::string_view to_string(OracleKind kind) {
  switch (kind) {
    case OracleKind::exact:
      return "exact";
    case OracleKind::sketch:
      return "sketch";
    case OracleKind::noisy:
      return "noisy";
  }
  return "unknown";
}

std::string_view to_string(NoiseMode mode) {
  switch (mode) {
    case NoiseMode::uniform:
      return "uniform";
    case NoiseMode::low:
      return "low";
    case NoiseMode::high:
      return "high";
  }
  return "unknown";
}

OracleKind parse_oracle_kind(std::string_view s) {
  if (s == "exact") return OracleKind::exact;
  if (s == "sketch") return OracleKind::sketch;
  if (s == "noisy") return OracleKind::noisy;
  throw InputError("unknown oracle kind '" + std::string(s) + "'");
}

NoiseMode parse_noise_mode(std::string_view s) {
  if (s == "uniform") return NoiseMode::uniform;
  if (s == "low") return NoiseMode::low;
  if (s == "high") return NoiseMode::high;
  throw InputError("unknown noise mode '" + std::string(s) + "'");
}

void validate_epsilon(double eps) {
  if (!(eps > 0.0 && eps < 0.5)) {
    throw InputError("epsilon must lie in (0, 0.5), got " + std::to_string(eps));
  }
}

LeverageEstimate exact_leverage(const PolytopeMatrix& a) {
  return weighted_leverage(a, WeightVector::constant(a.rows(), 1.0));
}

LeverageEstimate weighted_leverage(const PolytopeMatrix& a, const WeightVector& w) {
  require_positive(w);
  const PDFactor factor = pd_factorize(gram(a, w));
  const Matrix y = factor.whiten(a.entries().transpose());
  LeverageEstimate out;
  out.values = y.colwise().squaredNorm().transpose();
  out.kind = OracleKind::exact;
  out.oracle_calls = 1;
  return out;
}

std::size_t sketch_rows(std::size_t n, double eps, double sketch_constant) {
  if (!(sketch_constant > 0.0)) {
    throw InputError("sketch constant must be positive");
  }
  const double logn = std::log(static_cast<double>(std::max<std::size_t>(n, 2)));
  return static_cast<std::size_t>(std::ceil(sketch_constant * logn / (eps * eps)));
}

LeverageEstimate sketch_leverage(const PolytopeMatrix& a, const WeightVector& w, double eps,
                                 std::uint64_t seed, double sketch_constant,
                                 std::uint64_t call_index) {
  validate_epsilon(eps);
  require_positive(w);
  const PDFactor factor = pd_factorize(gram(a, w));

  const auto n = static_cast<Eigen::Index>(a.rows());
  const auto d = static_cast<Eigen::Index>(a.cols());
  const auto s = static_cast<Eigen::Index>(sketch_rows(a.rows(), eps, sketch_constant));

  // C = S sqrt(W) A, built one data row at a time; 64 signs per hash.
  Matrix c = Matrix::Zero(s, d);
  for (Eigen::Index j = 0; j < n; ++j) {
    const Eigen::RowVectorXd b = std::sqrt(w[static_cast<std::size_t>(j)]) * a.row(j);
    for (Eigen::Index block = 0; block * 64 < s; ++block) {
      const std::uint64_t bits = rng::key(seed, kSketchStream ^ call_index,
                                          static_cast<std::uint64_t>(j),
                                          static_cast<std::uint64_t>(block));
      const Eigen::Index end = std::min<Eigen::Index>(s, (block + 1) * 64);
      for (Eigen::Index r = block * 64; r < end; ++r) {
        if ((bits >> (r - block * 64)) & 1U) {
          c.row(r) += b;
        } else {
          c.row(r) -= b;
        }
      }
    }
  }
  c /= std::sqrt(static_cast<double>(s));

  // Estimate_i = |C M^{-1} a_i|^2.
  const Matrix z = factor.solve(Matrix(c.transpose())).transpose();  // s x d
  const Matrix e = z * a.entries().transpose();                       // s x n

  LeverageEstimate out;
  out.values = e.colwise().squaredNorm().transpose();
  out.epsilon = eps;
  out.kind = OracleKind::sketch;
  out.oracle_calls = 1;
  return out;
}

LeverageEstimate noisy_leverage(const PolytopeMatrix& a, const WeightVector& w, double eps,
                                std::uint64_t seed, NoiseMode mode,
                                std::uint64_t call_index) {
  validate_epsilon(eps);
  LeverageEstimate out = weighted_leverage(a, w);
  for (Eigen::Index i = 0; i < out.values.size(); ++i) {
    double factor = 1.0;
    switch (mode) {
      case NoiseMode::uniform:
        factor = 1.0 - eps +
                 2.0 * eps * rng::uniform(seed, kNoiseStream, call_index, static_cast<std::uint64_t>(i));
        break;
      case NoiseMode::low:
        factor = 1.0 - eps;
        break;
      case NoiseMode::high:
        factor = 1.0 + eps;
        break;
    }
    out.values(i) *= factor;
  }
  out.epsilon = eps;
  out.kind = OracleKind::noisy;
  return out;
}

LeverageOracle::LeverageOracle(OracleConfig config, double fallback_epsilon)
    : config_(config), epsilon_(config.epsilon.value_or(fallback_epsilon)) {
  if (config_.kind != OracleKind::exact) {
    validate_epsilon(epsilon_);
  }
}

LeverageEstimate LeverageOracle::operator()(const PolytopeMatrix& a, const WeightVector& w) {
  const std::uint64_t index = calls_;
  LeverageEstimate out;
  switch (config_.kind) {
    case OracleKind::exact:
      out = weighted_leverage(a, w);
      break;
    case OracleKind::sketch:
      out = sketch_leverage(a, w, epsilon_, config_.seed, config_.sketch_constant, index);
      break;
    case OracleKind::noisy:
      out = noisy_leverage(a, w, epsilon_, config_.seed, config_.noise_mode, index);
      break;
  }
  ++calls_;
  out.oracle_calls = calls_;
  return out;
}

}  // namespace johnell
