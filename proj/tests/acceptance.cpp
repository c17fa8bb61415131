// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include "johnell/certify.hpp"
#include "johnell/cli.hpp"
#include "johnell/errors.hpp"
#include "johnell/io.hpp"
#include "johnell/oracle.hpp"
#include "johnell/refsolve.hpp"
#include "johnell/solver.hpp"
#include "johnell/tensor.hpp"
#include "test_support.hpp"

#include <json.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

using namespace johnell;
using namespace johnell::testing;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok && pass) detail = what;
    pass = pass && ok;
  }
};

std::string fmt(const char* format, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, format, a, b, c);
  return buf;
}

// Instances shared by criteria 3 through 8.
constexpr int kInstances = 20;
constexpr double kEpsilons[] = {0.1, 0.25};

struct Run {
  int seed;
  double eps;
  PolytopeMatrix a;
  SolveResult result;
  Certificate cert;
  double seconds;
};

struct Shared {
  std::vector<PolytopeMatrix> instances;
  std::vector<Run> exact_runs;
  std::vector<Run> noisy_runs;
  std::vector<WeightVector> references;
};

Shared& shared() {
  static Shared s;
  return s;
}

Matrix instance_matrix(int seed) { return gaussian_matrix(256, 8, 10000 + static_cast<std::uint64_t>(seed)); }

// 1. Leverage invariants.
Outcome leverage_invariants() {
  Outcome o;
  const auto start = Clock::now();
  int count = 0;
  double worst_sum = 0.0, worst_hi = 0.0;
  for (Eigen::Index n : {50, 200}) {
    for (Eigen::Index d : {3, 8}) {
      for (int k = 0; k < 25; ++k, ++count) {
        const Matrix m = gaussian_matrix(n, d, 100 + static_cast<std::uint64_t>(count));
        const Vector s = exact_leverage(PolytopeMatrix(m)).values;
        worst_sum = std::max(worst_sum, std::abs(s.sum() - static_cast<double>(d)));
        worst_hi = std::max(worst_hi, s.maxCoeff());
        o.require(s.minCoeff() >= 0.0, "negative leverage score");
        o.require(s.maxCoeff() <= 1.0, "leverage score above 1");
        o.require(std::abs(s.sum() - static_cast<double>(d)) <= 1e-8, "sum of scores differs from d");
      }
    }
  }
  const double t = seconds_since(start);
  o.require(count == 100, "expected 100 matrices");
  o.require(t < 10.0, "runtime " + fmt("%.3f s", t));
  if (o.pass) o.detail = fmt("100 matrices, max sigma %.17g, max |sum - d| %.3g, %.3f s", worst_hi, worst_sum, t);
  return o;
}

// 2. Cube fixed point.
Outcome cube_fixed_point() {
  Outcome o;
  const auto start = Clock::now();
  const PolytopeMatrix a(Matrix::Identity(8, 8));
  SolverConfig cfg;
  cfg.epsilon = 0.1;
  const SolveResult r = approx_john(a, cfg);
  const EllipsoidForm e = ellipsoid_from_weights(a, r.weights);
  const Certificate c = certify_solution(a, r.weights, 0.1);
  const double t = seconds_since(start);
  o.require((r.weights.values() - Vector::Ones(8)).cwiseAbs().maxCoeff() <= 1e-12, "w differs from 1");
  o.require((e.q.entries - Matrix::Identity(8, 8)).cwiseAbs().maxCoeff() <= 1e-12, "Q differs from I");
  o.require(c.passed(), "certificate failed");
  o.require(std::abs(c.max_weighted_leverage - 1.0) <= 1e-12, "max f differs from 1");
  o.require(t < 0.1, "runtime " + fmt("%.4f s", t));
  if (o.pass) o.detail = fmt("w = 1, Q = I8, max f = %.17g, %.4f s", c.max_weighted_leverage, t);
  return o;
}

// 3. Approximation guarantee with the exact oracle.
Outcome approximation_guarantee() {
  Outcome o;
  Shared& s = shared();
  double slowest = 0.0, worst_excess = -1.0;
  for (int seed = 0; seed < kInstances; ++seed) {
    s.instances.emplace_back(instance_matrix(seed));
    for (double eps : kEpsilons) {
      const PolytopeMatrix& a = s.instances.back();
      const auto start = Clock::now();
      SolverConfig cfg;
      cfg.epsilon = eps;
      cfg.seed = static_cast<std::uint64_t>(seed);
      SolveResult r = approx_john(a, cfg);
      const Certificate c = certify_solution(a, r.weights, eps);
      const double t = seconds_since(start);
      slowest = std::max(slowest, t);
      worst_excess = std::max(worst_excess, c.max_weighted_leverage - (1.0 + eps));
      o.require(r.iterations == default_iterations(256, 8, eps), "T differs from default_iterations");
      o.require(c.sum_weights >= (1 - eps) * 8 && c.sum_weights <= (1 + eps) * 8, "sum outside window");
      o.require(c.max_weighted_leverage <= 1.0 + eps + 1e-9, "max f above 1 + eps");
      o.require(c.passed(), "certificate failed");
      o.require(t < 5.0, "run took " + fmt("%.3f s", t));
      s.exact_runs.push_back({seed, eps, a, std::move(r), c, t});
    }
  }
  if (o.pass)
    o.detail = fmt("40 runs certified, max f - (1+eps) <= %.3g, slowest %.3f s", worst_excess, slowest);
  return o;
}

// 4. Noisy-oracle robustness.
Outcome noisy_robustness() {
  Outcome o;
  Shared& s = shared();
  double worst_excess = -1.0, lo = 2.0, hi = 0.0;
  for (int seed = 0; seed < kInstances; ++seed) {
    const PolytopeMatrix& a = s.instances[static_cast<std::size_t>(seed)];
    for (double eps : kEpsilons) {
      for (NoiseMode mode : {NoiseMode::uniform, NoiseMode::low, NoiseMode::high}) {
        SolverConfig cfg;
        cfg.epsilon = eps;
        cfg.seed = static_cast<std::uint64_t>(seed);
        cfg.keep_iterates = true;
        cfg.oracle.kind = OracleKind::noisy;
        cfg.oracle.noise_mode = mode;
        SolveResult r = approx_john(a, cfg);
        // Multipliers against an independent exact oracle.
        for (std::size_t k = 0; k + 1 < r.trace.iterates.size(); ++k) {
          const Vector& w = r.trace.iterates[k];
          const Vector ratio =
              r.trace.iterates[k + 1].cwiseQuotient(w.cwiseProduct(gram_leverage(a.entries(), w)));
          lo = std::min(lo, ratio.minCoeff() - (1 - eps));
          hi = std::max(hi, ratio.maxCoeff() - (1 + eps));
          o.require(ratio.minCoeff() >= 1 - eps - 1e-9 && ratio.maxCoeff() <= 1 + eps + 1e-9,
                    "multiplier outside [1 - eps, 1 + eps]");
        }
        r.trace.iterates.clear();
        const Certificate c = certify_solution(a, r.weights, eps, noisy_threshold(eps));
        worst_excess = std::max(worst_excess, c.max_weighted_leverage - (1 + 3 * eps));
        o.require(c.max_weighted_leverage <= 1 + 3 * eps + 1e-9, "max f above 1 + 3 eps");
        s.noisy_runs.push_back({seed, eps, a, std::move(r), c, 0.0});
      }
    }
  }
  if (o.pass)
    o.detail = fmt("120 runs, max f - (1+3eps) <= %.3g, multiplier margins %.3g / %.3g", worst_excess, lo, hi);
  return o;
}

// 5. Telescoping bound.
Outcome telescoping_bound() {
  Outcome o;
  double worst = -1e300;
  auto check = [&](const Run& run) {
    const double maxlog = std::log(gram_leverage(run.a.entries(), run.result.weights.values()).maxCoeff());
    const double t = static_cast<double>(run.result.iterations);
    const double bound = std::log(256.0 / 8.0) / t + std::log(1.0 / (1.0 - run.eps));
    worst = std::max(worst, maxlog - bound);
    o.require(maxlog <= bound + 1e-8, "telescoping bound violated");
  };
  for (const Run& run : shared().exact_runs) check(run);
  for (const Run& run : shared().noisy_runs) check(run);
  if (o.pass) o.detail = fmt("160 runs, max (ln f - bound) = %.3g", worst);
  return o;
}

// 6. Duality gap.
Outcome duality_gap_bound() {
  Outcome o;
  Shared& s = shared();
  double worst_cert = -1e300, worst_opt = 0.0;
  for (const Run& run : s.exact_runs) {
    if (!run.cert.passed()) continue;
    const double gap = duality_gap(run.a, run.result.weights, run.eps);
    worst_cert = std::max(worst_cert, gap - 2 * run.eps * 8);
    o.require(gap <= 2 * run.eps * 8 + 1e-6, "gap above 2 eps d");
  }
  RefConfig ref;
  ref.tolerance = 1e-10;
  for (const PolytopeMatrix& a : s.instances) {
    s.references.push_back(exact_lewis_weights(a, ref));
    const double gap = duality_gap(a, s.references.back(), 0.0);
    worst_opt = std::max(worst_opt, std::abs(gap));
    o.require(gap <= 1e-6, "gap at reference optimum above 1e-6");
  }
  if (o.pass) o.detail = fmt("max gap - 2 eps d = %.3g, max |gap| at optima = %.3g", worst_cert, worst_opt);
  return o;
}

// 7. Volume margin.
Outcome volume_margin() {
  Outcome o;
  Shared& s = shared();
  double worst = 1e300;
  for (const Run& run : s.exact_runs) {
    if (!run.cert.passed()) continue;
    const double m = volume_log_margin(run.a, run.result.weights,
                                       s.references[static_cast<std::size_t>(run.seed)], run.eps);
    worst = std::min(worst, m + run.eps * 8);
    o.require(m >= -run.eps * 8 - 1e-6, "margin below -eps d");
  }
  if (o.pass) o.detail = fmt("min margin + eps d = %.3g", worst);
  return o;
}

// 8. Containment sampling.
Outcome containment() {
  Outcome o;
  std::size_t runs = 0, control_hits = 0;
  for (const Run& run : shared().exact_runs) {
    if (!run.cert.passed()) continue;
    const auto seed = static_cast<std::uint64_t>(run.seed);
    const ContainmentCounts c = sample_containment(run.a, run.result.weights, run.eps, 10000, seed);
    o.require(c.samples == 10000 && c.clean(), "violations on a certified output");
    // Negative control: scaling w by 4d shrinks E until the boundary of P
    // leaves sqrt((1+eps) d) E, since x^T Q x >= 1 / max f there.
    const WeightVector scaled(4.0 * 8.0 * run.result.weights.values());
    const ContainmentCounts n = sample_containment(run.a, scaled, run.eps, 10000, seed);
    o.require(n.polytope_outside_ellipsoid > 0, "negative control produced no violations");
    control_hits += n.polytope_outside_ellipsoid;
    ++runs;
  }
  o.require(runs == shared().exact_runs.size(), "some runs were not certified");
  if (o.pass)
    o.detail = std::to_string(runs) + " certified runs clean at 10000 samples/direction; control flagged " +
               std::to_string(control_hits) + " points";
  return o;
}

// 9. Tensor decomposition.
Outcome tensor_decomposition() {
  Outcome o;
  double worst_pair = 0.0, worst_cert = 0.0;
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const PolytopeMatrix a1(gaussian_matrix(12, 3, 700 + seed));
    const PolytopeMatrix a2(gaussian_matrix(12, 3, 800 + seed));
    const WeightVector w1(positive_vector(12, 900 + seed));
    const WeightVector w2(positive_vector(12, 950 + seed));
    for (std::size_t i1 = 0; i1 < 12; ++i1) {
      for (std::size_t i2 = 0; i2 < 12; ++i2) {
        const auto [lhs, rhs] = tensor_leverage_consistency(a1, a2, w1, w2, i1, i2);
        worst_pair = std::max(worst_pair, std::abs(lhs - rhs));
        o.require(std::abs(lhs - rhs) <= 1e-9, "leverage does not factor");
      }
    }

    SolverConfig cfg;
    cfg.epsilon = 0.2;
    cfg.seed = seed;
    TensorSolveResult r = approx_tensor_john(a1, a2, cfg);
    const Certificate ct = certify_tensor(a1, a2, r.weights, 0.2);
    const Certificate cm = certify_solution(kron(a1, a2), r.weights.materialize(), tensor_epsilon(0.2));
    for (auto [x, y] : {std::pair{ct.sum_weights, cm.sum_weights},
                        std::pair{ct.max_weighted_leverage, cm.max_weighted_leverage},
                        std::pair{ct.leverage_threshold, cm.leverage_threshold},
                        std::pair{ct.dual_objective, cm.dual_objective},
                        std::pair{ct.duality_gap, cm.duality_gap}}) {
      worst_cert = std::max(worst_cert, std::abs(x - y));
      o.require(std::abs(x - y) <= 1e-9, "factor-wise and materialized certificates differ");
    }
    o.require(ct.passed(), "tensor output fails the (1+eps)^2 certificate");
    o.require(std::abs(ct.leverage_threshold - 1.44) <= 1e-15, "threshold is not (1+eps)^2");
  }
  if (o.pass)
    o.detail = fmt("5 factor pairs, max |lhs - rhs| = %.3g, max certificate diff = %.3g", worst_pair, worst_cert);
  return o;
}

// 10. Sketch oracle statistics.
Outcome sketch_statistics() {
  Outcome o;
  const PolytopeMatrix a(gaussian_matrix(500, 5, 4242));
  const WeightVector w = WeightVector::constant(500, 1.0);
  const Vector exact = qr_leverage(a.entries());
  o.require(sketch_rows(500, 0.2) == static_cast<std::size_t>(std::ceil(8.0 / 0.04 * std::log(500.0))),
            "sketch size differs from ceil(8 eps^-2 ln n)");
  std::size_t within = 0, total = 0;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const Vector est = sketch_leverage(a, w, 0.2, seed).values;
    for (Eigen::Index i = 0; i < est.size(); ++i, ++total) within += std::abs(est(i) / exact(i) - 1.0) <= 0.2;
  }
  const double frac = static_cast<double>(within) / static_cast<double>(total);
  o.require(frac >= 0.98, fmt("only %.4f within (1 +- eps)", frac));
  if (o.pass) o.detail = fmt("%.0f sketch rows, %.4f of 25000 estimates within (1 +- 0.2)",
                             static_cast<double>(sketch_rows(500, 0.2)), frac);
  return o;
}

// 11. Determinism and accounting through the CLI.
Outcome determinism() {
  Outcome o;
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / ("johnell_accept_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  const std::string input = (dir / "a.txt").string();
  const std::string input_b = (dir / "b.txt").string();
  {
    std::ofstream out(input);
    write_matrix(out, PolytopeMatrix(gaussian_matrix(120, 5, 31)));
    std::ofstream outb(input_b);
    write_matrix(outb, PolytopeMatrix(gaussian_matrix(9, 2, 32)));
  }
  auto invoke = [](std::vector<std::string> args, int& code) {
    args.insert(args.begin(), "johnell");
    std::vector<const char*> argv;
    for (const std::string& s : args) argv.push_back(s.c_str());
    std::ostringstream out, err;
    code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    return out.str();
  };

  std::size_t runs = 0;
  for (const char* oracle : {"exact", "sketch", "noisy"}) {
    for (const char* eps : {"0.1", "0.3"}) {
      const std::vector<std::string> args = {"solve", "--input", input, "--epsilon", eps, "--oracle", oracle,
                                             "--seed", "5", "--samples", "200"};
      int c1 = 0, c2 = 0;
      const std::string r1 = invoke(args, c1);
      const std::string r2 = invoke(args, c2);
      o.require(!r1.empty() && r1 == r2 && c1 == c2, std::string("reports differ for oracle ") + oracle);
      const nlohmann::json j = nlohmann::json::parse(r1);
      const double e = std::stod(eps);
      const auto t = static_cast<std::size_t>(std::max(1.0, std::ceil(2 * std::log(120.0 / 5.0) / e)));
      o.require(j["iterations"].get<std::size_t>() == t, "iterations differ from the formula");
      o.require(j["oracle_calls"].get<std::size_t>() == t - 1, "oracle_calls differ from T - 1");
      ++runs;
    }
  }
  const std::vector<std::string> targs = {"tensor", "--input-a", input, "--input-b", input_b,
                                          "--epsilon", "0.2", "--seed", "7"};
  int c1 = 0, c2 = 0;
  o.require(invoke(targs, c1) == invoke(targs, c2) && c1 == c2, "tensor reports differ");
  fs::remove_all(dir);
  if (o.pass) o.detail = std::to_string(runs) + " solve configurations and one tensor run reproduce byte-for-byte";
  return o;
}

// 12. Convexity of phi_i = ln f_i.
Outcome convexity() {
  Outcome o;
  std::mt19937_64 gen(12);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double worst = -1e300;
  for (std::uint64_t draw = 0; draw < 50; ++draw) {
    const PolytopeMatrix a(gaussian_matrix(10, 3, 5000 + draw));
    const Vector w1 = positive_vector(10, 6000 + draw, 0.01, 5.0);
    const Vector w2 = positive_vector(10, 7000 + draw, 0.01, 5.0);
    const double lambda = 0.001 + 0.998 * unit(gen);
    const Vector mid = lambda * w1 + (1 - lambda) * w2;
    const Vector p1 = weighted_leverage(a, WeightVector(w1)).values.array().log();
    const Vector p2 = weighted_leverage(a, WeightVector(w2)).values.array().log();
    const Vector pm = weighted_leverage(a, WeightVector(mid)).values.array().log();
    const double excess = (pm - lambda * p1 - (1 - lambda) * p2).maxCoeff();
    worst = std::max(worst, excess);
    o.require(excess <= 1e-10, "Jensen inequality violated");
  }
  if (o.pass) o.detail = fmt("50 draws, max (phi(mid) - chord) = %.3g", worst);
  return o;
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria = {
      {"leverage invariants", leverage_invariants},
      {"cube fixed point", cube_fixed_point},
      {"approximation guarantee (exact oracle)", approximation_guarantee},
      {"noisy-oracle robustness", noisy_robustness},
      {"telescoping bound", telescoping_bound},
      {"duality gap", duality_gap_bound},
      {"volume margin", volume_margin},
      {"containment sampling", containment},
      {"tensor decomposition", tensor_decomposition},
      {"sketch oracle statistics", sketch_statistics},
      {"determinism and accounting", determinism},
      {"convexity of phi", convexity},
  };

  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].run();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    failures += !o.pass;
    std::cout << (o.pass ? "PASS" : "FAIL") << "  " << (i + 1) << ". " << criteria[i].name << ": " << o.detail
              << std::endl;
  }
  std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed")
            << std::endl;
  return failures == 0 ? 0 : 1;
}
