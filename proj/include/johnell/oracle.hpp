#pragma once

// Weighted leverage scores f_i(w) = a_i^T (A^T diag(w) A)^{-1} a_i behind a
// single interface. Three flavors:
//   exact   - Cholesky solve, machine precision;
//   sketch  - Rademacher random projection (JL), (1 +- eps) w.h.p.;
//   noisy   - exact values times a multiplier c_i in [1 - eps, 1 + eps],
//             standing in for a black-box approximate oracle.
// Randomness is keyed by (seed, call index, row), never by evaluation order.

#include "johnell/matcore.hpp"

#include <cstdint>
#include <optional>
#include <string_view>

namespace johnell {

enum class OracleKind { exact, sketch, noisy };
enum class NoiseMode { uniform, low, high };

std::string_view to_string(OracleKind kind);
std::string_view to_string(NoiseMode mode);
OracleKind parse_oracle_kind(std::string_view s);
NoiseMode parse_noise_mode(std::string_view s);

struct OracleConfig {
  OracleKind kind = OracleKind::exact;
  // Oracle accuracy. Unset means "same as the solver's target epsilon".
  std::optional<double> epsilon;
  std::uint64_t seed = 0;
  NoiseMode noise_mode = NoiseMode::uniform;
  double sketch_constant = 8.0;
};

struct LeverageEstimate {
  Vector values;
  double epsilon = 0.0;
  OracleKind kind = OracleKind::exact;
  std::uint64_t oracle_calls = 0;
};

// Throws InputError unless 0 < eps < 0.5.
void validate_epsilon(double eps);

// sigma_i(A) = a_i^T (A^T A)^{-1} a_i.
LeverageEstimate exact_leverage(const PolytopeMatrix& a);

// f(w); requires w > 0 entrywise.
LeverageEstimate weighted_leverage(const PolytopeMatrix& a, const WeightVector& w);

// Number of sketch rows: ceil(c * eps^-2 * ln(max(n, 2))).
std::size_t sketch_rows(std::size_t n, double eps, double sketch_constant = 8.0);

// Estimates f_i(w) = |sqrt(W) A M^{-1} a_i|^2 by |S sqrt(W) A M^{-1} a_i|^2
// with S a (s x n) Rademacher matrix scaled by 1/sqrt(s).
LeverageEstimate sketch_leverage(const PolytopeMatrix& a, const WeightVector& w, double eps,
                                 std::uint64_t seed, double sketch_constant = 8.0,
                                 std::uint64_t call_index = 0);

LeverageEstimate noisy_leverage(const PolytopeMatrix& a, const WeightVector& w, double eps,
                                std::uint64_t seed, NoiseMode mode,
                                std::uint64_t call_index = 0);

// Stateful dispatcher used by the solver. Each call advances the call
// counter, which also keys the random streams of that call.
class LeverageOracle {
 public:
  // fallback_epsilon is used when config.epsilon is unset.
  LeverageOracle(OracleConfig config, double fallback_epsilon);

  LeverageEstimate operator()(const PolytopeMatrix& a, const WeightVector& w);

  std::uint64_t calls() const noexcept { return calls_; }
  double epsilon() const noexcept { return epsilon_; }
  const OracleConfig& config() const noexcept { return config_; }

 private:
  OracleConfig config_;
  double epsilon_;
  std::uint64_t calls_ = 0;
};

}  // namespace johnell
