#include "johnell/cli.hpp"

#include "johnell/certify.hpp"
#include "johnell/errors.hpp"
#include "johnell/io.hpp"
#include "johnell/oracle.hpp"
#include "johnell/refsolve.hpp"
#include "johnell/report.hpp"
#include "johnell/solver.hpp"
#include "johnell/tensor.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>

namespace johnell::cli {

namespace {

struct Options {
  std::string input;
  std::string input_a;
  std::string input_b;
  std::string weights;
  std::string weights_out;
  double epsilon = 0.0;
  std::string oracle = "exact";
  std::string noise_mode = "uniform";
  std::optional<std::size_t> iters;
  std::uint64_t seed = 0;
  std::size_t samples = 0;
  bool reference = false;
  bool timing = false;
  std::string out;
};

struct Loaded {
  PolytopeMatrix matrix;
  std::string digest;
};

Loaded load_matrix(const std::string& path) {
  const std::string bytes = read_file(path);
  std::istringstream in(bytes);
  return {parse_matrix(in), sha256_hex(bytes)};
}

// Leverage threshold for the oracle that produced the weights.
double threshold_for(OracleKind kind, double eps) {
  return kind == OracleKind::exact ? 1.0 + eps : noisy_threshold(eps);
}

SolverConfig solver_config(const Options& o) {
  SolverConfig cfg;
  cfg.epsilon = o.epsilon;
  cfg.iterations_override = o.iters;
  cfg.seed = o.seed;
  cfg.oracle.kind = parse_oracle_kind(o.oracle);
  cfg.oracle.noise_mode = parse_noise_mode(o.noise_mode);
  return cfg;
}

RunReport base_report(const Options& o, std::string subcommand) {
  RunReport r;
  r.subcommand = std::move(subcommand);
  r.epsilon = o.epsilon;
  r.oracle = o.oracle;
  if (parse_oracle_kind(o.oracle) == OracleKind::noisy) r.noise_mode = o.noise_mode;
  r.seed = o.seed;
  return r;
}

// Adds reference volume margin and containment sampling when requested.
void add_evidence(const Options& o, const PolytopeMatrix& a, const WeightVector& w,
                  Certificate& cert) {
  if (o.reference) {
    cert.volume_log_margin = volume_log_margin(a, w, exact_lewis_weights(a), o.epsilon);
  }
  if (o.samples > 0) {
    cert.containment =
        sample_containment(a, w, cert.leverage_threshold - 1.0, o.samples, o.seed);
  }
}

RunReport run_solve(const Options& o) {
  const Loaded in = load_matrix(o.input);
  const SolverConfig cfg = solver_config(o);
  const SolveResult result = approx_john(in.matrix, cfg);

  RunReport r = base_report(o, "solve");
  r.input_digest = in.digest;
  r.rows = in.matrix.rows();
  r.cols = in.matrix.cols();
  r.iterations = result.iterations;
  r.oracle_calls = result.trace.oracle_calls;
  r.certificate = certify_solution(in.matrix, result.weights, o.epsilon,
                                   threshold_for(cfg.oracle.kind, o.epsilon));
  add_evidence(o, in.matrix, result.weights, r.certificate);

  if (!o.weights_out.empty()) {
    std::ofstream wout(o.weights_out);
    write_weights(wout, result.weights);
    if (!wout) throw Error("cannot write weights to '" + o.weights_out + "'");
  }
  return r;
}

RunReport run_certify(const Options& o) {
  const Loaded in = load_matrix(o.input);
  const std::string weight_bytes = read_file(o.weights);
  std::istringstream win(weight_bytes);
  const WeightVector w = parse_weights(win);
  if (w.size() != in.matrix.rows()) {
    throw InputError("weights file has " + std::to_string(w.size()) + " entries, matrix has " +
                     std::to_string(in.matrix.rows()) + " rows");
  }

  RunReport r = base_report(o, "certify");
  r.input_digest = in.digest;
  r.weights_digest = sha256_hex(weight_bytes);
  r.rows = in.matrix.rows();
  r.cols = in.matrix.cols();
  r.certificate = certify_solution(in.matrix, w, o.epsilon,
                                   threshold_for(parse_oracle_kind(o.oracle), o.epsilon));
  add_evidence(o, in.matrix, w, r.certificate);
  return r;
}

FactorReport factor_report(const PolytopeMatrix& a, const SolveResult& s) {
  const Certificate c = certify_solution(a, s.weights, 0.0);
  return {a.rows(), a.cols(), s.iterations, s.trace.oracle_calls, c.sum_weights,
          c.max_weighted_leverage};
}

RunReport run_tensor(const Options& o) {
  const Loaded a = load_matrix(o.input_a);
  const Loaded b = load_matrix(o.input_b);
  const SolverConfig cfg = solver_config(o);
  TensorSolveResult result = approx_tensor_john(a.matrix, b.matrix, cfg);

  RunReport r = base_report(o, "tensor");
  r.input_digest_a = a.digest;
  r.input_digest_b = b.digest;
  r.rows = a.matrix.rows() * b.matrix.rows();
  r.cols = a.matrix.cols() * b.matrix.cols();
  r.oracle_calls = result.first.trace.oracle_calls + result.second.trace.oracle_calls;
  r.factors = {factor_report(a.matrix, result.first), factor_report(b.matrix, result.second)};

  const double factor_threshold = threshold_for(cfg.oracle.kind, o.epsilon);
  r.certificate = certify_tensor(a.matrix, b.matrix, result.weights, o.epsilon, factor_threshold);
  if (o.reference) {
    const TensorWeights ref(exact_lewis_weights(a.matrix), exact_lewis_weights(b.matrix));
    r.certificate.volume_log_margin =
        tensor_volume_log_margin(a.matrix, b.matrix, result.weights, ref, o.epsilon);
  }
  if (o.samples > 0) {
    const PolytopeMatrix big = kron(a.matrix, b.matrix, kDefaultMaterializeLimit);
    const WeightVector& big_w = result.weights.materialize();
    r.certificate.containment = sample_containment(
        big, big_w, r.certificate.leverage_threshold - 1.0, o.samples, o.seed);
  }
  return r;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Approximate John ellipsoids of symmetric polytopes {x : |Ax| <= 1}"};
  app.name("johnell");
  app.require_subcommand(1);
  app.set_version_flag("--version", kToolVersion);

  Options o;
  auto add_common = [&o](CLI::App* sub) {
    sub->add_option("--epsilon", o.epsilon, "accuracy in (0, 0.5)")->required();
    sub->add_option("--oracle", o.oracle, "leverage oracle")
        ->check(CLI::IsMember({"exact", "sketch", "noisy"}));
    sub->add_option("--noise-mode", o.noise_mode, "noisy-oracle multiplier mode")
        ->check(CLI::IsMember({"uniform", "low", "high"}));
    sub->add_option("--seed", o.seed, "random seed");
    sub->add_option("--samples", o.samples, "containment samples per direction (0 = skip)");
    sub->add_flag("--reference", o.reference, "also solve to high precision, report volume margin");
    sub->add_flag("--timing", o.timing, "include wall-clock milliseconds in the report");
    sub->add_option("--out", o.out, "report path (default stdout)");
  };

  CLI::App* solve = app.add_subcommand("solve", "run the averaged fixed-point solver");
  solve->add_option("--input", o.input, "matrix file")->required()->check(CLI::ExistingFile);
  solve->add_option("--iters", o.iters, "override the iteration count T")
      ->check(CLI::PositiveNumber);
  solve->add_option("--weights-out", o.weights_out, "write output weights to this file");
  add_common(solve);

  CLI::App* certify = app.add_subcommand("certify", "certify a given weight vector");
  certify->add_option("--input", o.input, "matrix file")->required()->check(CLI::ExistingFile);
  certify->add_option("--weights", o.weights, "weights file")->required()->check(CLI::ExistingFile);
  add_common(certify);

  CLI::App* tensor = app.add_subcommand("tensor", "solve the Kronecker instance A (x) B");
  tensor->add_option("--input-a", o.input_a, "first factor")->required()->check(CLI::ExistingFile);
  tensor->add_option("--input-b", o.input_b, "second factor")->required()->check(CLI::ExistingFile);
  tensor->add_option("--iters", o.iters, "override the iteration count T")
      ->check(CLI::PositiveNumber);
  add_common(tensor);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForVersion&) {
    out << kToolVersion << '\n';
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "johnell: " << e.what() << '\n';
    return kExitError;
  }

  try {
    validate_epsilon(o.epsilon);
    const auto start = std::chrono::steady_clock::now();
    RunReport report;
    if (solve->parsed()) {
      report = run_solve(o);
    } else if (certify->parsed()) {
      report = run_certify(o);
    } else {
      report = run_tensor(o);
    }
    if (o.timing) {
      report.wall_clock_ms =
          std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
              .count();
    }

    if (o.out.empty()) {
      write_report(report, out);
    } else {
      std::ofstream file(o.out);
      if (!file) throw Error("cannot open '" + o.out + "' for writing");
      write_report(report, file);
    }
    if (!report.certificate.passed()) {
      err << "johnell: certificate failed\n";
      return kExitCertificateFailed;
    }
    return kExitOk;
  } catch (const std::exception& e) {
    err << "johnell: " << e.what() << '\n';
    return kExitError;
  }
}

}  // namespace johnell::cli
