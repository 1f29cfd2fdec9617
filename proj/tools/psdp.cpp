// psdp: command-line front end.
//
// Exit codes: 0 ok, 1 validation or IO error, 2 solver error,
// 3 verification failure.

#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>
#include <variant>

#include <CLI11.hpp>

#include "psdp/psdp.hpp"

namespace {

using psdp::ErrorKind;
using psdp::io::Json;

enum class Level { Error = 0, Warn = 1, Info = 2, Debug = 3 };

struct Logger {
  Level level = Level::Warn;
  bool json = false;

  void log(Level at, const std::string& msg, const Json& fields = Json::object()) const {
    if (at > level) return;
    static constexpr const char* names[] = {"error", "warn", "info", "debug"};
    const char* name = names[static_cast<int>(at)];
    if (json) {
      Json line{{"level", name}, {"message", msg}};
      for (const auto& [k, v] : fields.items()) line[k] = v;
      std::cerr << line.dump() << '\n';
    } else {
      std::cerr << "psdp " << name << ": " << msg;
      for (const auto& [k, v] : fields.items()) std::cerr << ' ' << k << '=' << (v.is_string() ? v.get<std::string>() : v.dump());
      std::cerr << '\n';
    }
  }
  void error(const std::string& m, const Json& f = Json::object()) const { log(Level::Error, m, f); }
  void info(const std::string& m, const Json& f = Json::object()) const { log(Level::Info, m, f); }
  void debug(const std::string& m, const Json& f = Json::object()) const { log(Level::Debug, m, f); }
};

std::optional<Level> parse_level(const std::string& s) {
  if (s == "error") return Level::Error;
  if (s == "warn") return Level::Warn;
  if (s == "info") return Level::Info;
  if (s == "debug") return Level::Debug;
  return std::nullopt;
}

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NonConvergence:
    case ErrorKind::ThrSearchOverrun:
    case ErrorKind::DegenerateProjector:
    case ErrorKind::MaxIterationsExceeded:
    case ErrorKind::InvariantViolation:
    case ErrorKind::OracleInfeasible:
    case ErrorKind::ResolutionUnreachable:
    case ErrorKind::NoSamplesAccepted:
      return 2;
    default:
      return 1;
  }
}

// Writes to `path`, or stdout when it is empty or "-".
void emit(const std::string& path, const Json& doc) {
  const std::string text = psdp::io::dump(doc);
  if (path.empty() || path == "-") std::cout << text;
  else psdp::io::write_text_file(path, text);
}

psdp::io::AnyInstance load_instance(const std::string& path) {
  return psdp::io::instance_from_json(psdp::io::read_json_file(path));
}

psdp::PositiveSdpInstance load_general(const std::string& path) {
  auto inst = load_instance(path);
  if (!std::holds_alternative<psdp::PositiveSdpInstance>(inst)) {
    psdp::fail(ErrorKind::ValidationError, path + ": kind: expected a general-form instance");
  }
  return std::get<psdp::PositiveSdpInstance>(std::move(inst));
}

struct SolveOptions {
  std::string input, output;
  double epsilon = 0.1;
  long long max_iter = 1'000'000;
  bool assert_invariants = false;
  std::string trace = "summary";
};

int run_solve(const SolveOptions& o, const Logger& log) {
  const auto mode = psdp::io::trace_mode_from_string(o.trace);
  const auto inst = load_instance(o.input);
  psdp::SolverParams tuning;
  tuning.max_iterations = o.max_iter;
  tuning.assert_invariants = o.assert_invariants;

  if (const auto* special = std::get_if<psdp::SpecialFormInstance>(&inst)) {
    auto params = psdp::SolverParams::make(o.epsilon, special->n(), special->m());
    params.max_iterations = tuning.max_iterations;
    params.assert_invariants = tuning.assert_invariants;
    const auto res = psdp::solve(*special, params);
    log.info("solved", {{"iterations", res.iterations}, {"gap_ratio", res.gap_ratio}});
    emit(o.output, psdp::io::to_json(psdp::io::certificate_of(res), &res, mode));
    return 0;
  }
  const auto& general = std::get<psdp::PositiveSdpInstance>(inst);
  const auto run = psdp::solve_general(general, o.epsilon, tuning);
  log.info("solved", {{"iterations", run.special.iterations},
                      {"special_gap_ratio", run.special.gap_ratio},
                      {"objective", run.primal.objective},
                      {"dual_value", run.dual.value}});
  auto cert = psdp::io::certificate_of(run.special);
  cert.pullback = psdp::io::pullback_section(run.primal, run.dual);
  emit(o.output, psdp::io::to_json(cert, &run.special, mode));
  return 0;
}

int run_transform(const std::string& input, double epsilon, const std::string& output, const std::string& record_path,
                  const Logger& log) {
  const auto inst = load_general(input);
  const auto [special, record] = psdp::to_special_form(inst, epsilon);
  log.info("transformed", {{"special_m", special.m()}, {"removed", record.removed_constraints.size()},
                           {"scale_t", record.scale_t}});
  emit(output, psdp::io::to_json(special));
  if (!record_path.empty()) emit(record_path, psdp::io::to_json(record));
  return 0;
}

int run_pullback(const std::string& input, const std::string& cert_path, const std::string& record_path,
                 const std::string& output, const Logger& log) {
  const auto inst = load_general(input);
  auto cert = psdp::io::certificate_from_json(psdp::io::read_json_file(cert_path));
  const auto record = psdp::io::record_from_json(psdp::io::read_json_file(record_path));
  if (record.n != inst.n() || record.original_m != inst.m()) {
    psdp::fail(ErrorKind::ValidationError, record_path + ": record does not match the instance dimensions");
  }
  const auto primal = psdp::pull_back(cert.X_star, record, inst);
  const auto dual = psdp::pull_back_dual(cert.y_star, record, inst);
  log.info("pulled back", {{"objective", primal.objective}, {"dual_value", dual.value}});
  cert.pullback = psdp::io::pullback_section(primal, dual);
  emit(output, psdp::io::to_json(cert));
  return 0;
}

int run_verify(const std::string& input, const std::string& cert_path, const std::string& output, const Logger& log) {
  const auto inst = load_instance(input);
  const auto cert = psdp::io::certificate_from_json(psdp::io::read_json_file(cert_path));
  psdp::VerificationReport report;
  if (const auto* special = std::get_if<psdp::SpecialFormInstance>(&inst)) {
    report = psdp::verify_certificate(*special, cert.X_star, cert.y_star, cert.epsilon);
  } else {
    if (!cert.pullback) {
      psdp::fail(ErrorKind::ValidationError, cert_path + ": pullback: missing for a general-form instance");
    }
    report = psdp::verify_general(std::get<psdp::PositiveSdpInstance>(inst), cert.pullback->X, cert.pullback->y,
                                  cert.epsilon);
  }
  emit(output, psdp::io::to_json(report));
  log.info("verified", {{"verdict", std::string(psdp::to_string(report.verdict))}, {"gap_ratio", report.gap_ratio}});
  return report.verdict == psdp::Verdict::Certified ? 0 : 3;
}

struct GenOptions {
  std::string kind = "random", output;
  long long n = 4, m = 8, rank = 0;
  std::uint64_t seed = 0;
  bool ill_conditioned = false;
};

int run_gen(const GenOptions& o) {
  if (o.kind == "identity") {
    emit(o.output, psdp::io::to_json(psdp::gen_identity(o.n, o.m)));
  } else if (o.kind == "diag") {
    emit(o.output, psdp::io::to_json(psdp::gen_diagonal(o.n, o.m, o.seed)));
  } else {
    psdp::RankProfile profile{static_cast<psdp::Index>(o.rank), o.ill_conditioned};
    emit(o.output, psdp::io::to_json(psdp::gen_random_psd(o.n, o.m, o.seed, profile)));
  }
  return 0;
}

struct DiagnoseOptions {
  std::string which, mode = "both", output;
  long trials = 200;
  double epsilon = 0.1;
  std::uint64_t seed = 1;
  long long dim = 16;
  double delta = 1e-4;
};

int run_diagnose(const DiagnoseOptions& o, const Logger& log) {
  Json doc;
  long violations = 0;
  if (o.which == "jordan") {
    const auto r = psdp::validate_jordan(o.trials, o.dim, o.seed);
    doc = psdp::io::to_json(r);
    if (r.max_invariance_residual > 1e-9 || r.max_reconstruction_error > 1e-9 || r.dimension_count_failures > 0 ||
        r.block_rank_failures > 0) {
      violations = 1;
    }
  } else if (o.which == "lemma2x2") {
    const auto r = psdp::validate_2x2_lemma(o.trials, o.epsilon, o.seed, o.dim);
    doc = psdp::io::to_json(r);
    violations = r.violations;
    if (r.no_samples()) log.log(Level::Warn, "NoSamplesAccepted", {{"diagnostic", "lemma2x2"}});
  } else {
    std::vector<psdp::LemmaMode> modes;
    if (o.mode != "relaxed") modes.push_back(psdp::LemmaMode::Strict);
    if (o.mode != "strict") modes.push_back(psdp::LemmaMode::Relaxed);
    Json reports = Json::array();
    for (auto m : modes) {
      const auto r = psdp::validate_main_lemma(o.trials, o.epsilon, o.seed, m, o.dim, o.delta);
      violations += r.violations;
      if (r.no_samples()) log.log(Level::Warn, "NoSamplesAccepted", {{"mode", std::string(psdp::to_string(m))}});
      reports.push_back(psdp::io::to_json(r));
    }
    doc = reports.size() == 1 ? reports[0]
                              : Json{{"format", psdp::io::kDiagnosticFormat}, {"diagnostic", "mainlemma"},
                                     {"reports", std::move(reports)}};
  }
  emit(o.output, doc);
  return violations == 0 ? 0 : 3;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Width-free positive SDP solver"};
  app.require_subcommand(1);
  std::string log_level = "warn", log_format = "text";
  app.add_option("--log-level", log_level, "error|warn|info|debug (PSDP_LOG overrides)")
      ->check(CLI::IsMember({"error", "warn", "info", "debug"}));
  app.add_option("--log-format", log_format, "text|json")->check(CLI::IsMember({"text", "json"}));

  SolveOptions solve_opts;
  auto* solve = app.add_subcommand("solve", "solve an instance and write a certificate");
  solve->add_option("-i,--input", solve_opts.input, "instance file")->required();
  solve->add_option("--epsilon", solve_opts.epsilon, "accuracy parameter in (0, 1)");
  solve->add_option("-o,--output", solve_opts.output, "certificate file (default stdout)");
  solve->add_option("--max-iter", solve_opts.max_iter, "iteration cap")->check(CLI::PositiveNumber);
  solve->add_flag("--assert-invariants", solve_opts.assert_invariants, "abort on the first failed per-iteration check");
  solve->add_option("--trace", solve_opts.trace, "full|summary|none")->check(CLI::IsMember({"full", "summary", "none"}));

  std::string t_input, t_output, t_record;
  double t_epsilon = 0.1;
  auto* transform = app.add_subcommand("transform", "reduce a general instance to special form");
  transform->add_option("-i,--input", t_input, "general-form instance")->required();
  transform->add_option("--epsilon", t_epsilon, "accuracy parameter in (0, 1)");
  transform->add_option("-o,--output", t_output, "special-form instance (default stdout)");
  transform->add_option("--record", t_record, "transform record sidecar");

  std::string p_input, p_cert, p_record, p_output;
  auto* pullback = app.add_subcommand("pullback", "map a special-form certificate back to the general instance");
  pullback->add_option("-i,--input", p_input, "general-form instance")->required();
  pullback->add_option("-s,--special", p_cert, "special-form certificate")->required();
  pullback->add_option("-r,--record", p_record, "transform record")->required();
  pullback->add_option("-o,--output", p_output, "certificate with pullback section (default stdout)");

  std::string v_input, v_cert, v_output;
  auto* verify = app.add_subcommand("verify", "check a certificate against an instance");
  verify->add_option("-i,--input", v_input, "instance file")->required();
  verify->add_option("-c,--certificate", v_cert, "certificate file")->required();
  verify->add_option("-o,--output", v_output, "report file (default stdout)");

  GenOptions gen_opts;
  auto* gen = app.add_subcommand("gen", "generate a seeded instance");
  gen->add_option("--kind", gen_opts.kind, "identity|diag|random")->check(CLI::IsMember({"identity", "diag", "random"}));
  gen->add_option("--n", gen_opts.n, "dimension")->check(CLI::PositiveNumber);
  gen->add_option("--m", gen_opts.m, "number of constraints")->check(CLI::PositiveNumber);
  gen->add_option("--seed", gen_opts.seed, "generator seed");
  gen->add_option("--rank", gen_opts.rank, "rank of each A_i for random instances (0 = full)")
      ->check(CLI::NonNegativeNumber);
  gen->add_flag("--ill-conditioned", gen_opts.ill_conditioned, "lower the eigenvalue floor to 1e-8");
  gen->add_option("-o,--output", gen_opts.output, "instance file (default stdout)");

  DiagnoseOptions diag_opts;
  auto* diagnose = app.add_subcommand("diagnose", "run a spectral-lemma validator");
  diagnose->add_option("which", diag_opts.which, "jordan|mainlemma|lemma2x2")
      ->required()
      ->check(CLI::IsMember({"jordan", "mainlemma", "lemma2x2"}));
  diagnose->add_option("--trials", diag_opts.trials, "number of samples")->check(CLI::PositiveNumber);
  diagnose->add_option("--epsilon", diag_opts.epsilon, "accuracy parameter in (0, 1)");
  diagnose->add_option("--seed", diag_opts.seed, "master seed");
  diagnose->add_option("--mode", diag_opts.mode, "strict|relaxed|both (mainlemma)")
      ->check(CLI::IsMember({"strict", "relaxed", "both"}));
  diagnose->add_option("--dim", diag_opts.dim, "ambient dimension (max dimension for jordan)")
      ->check(CLI::Range(2, 4096));
  diagnose->add_option("--delta", diag_opts.delta, "mass-hypothesis slack in relaxed mode")
      ->check(CLI::Range(0.0, 1.0));
  diagnose->add_option("-o,--output", diag_opts.output, "report file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  Logger log;
  log.json = log_format == "json";
  log.level = *parse_level(log_level);
  if (const char* env = std::getenv("PSDP_LOG")) {
    if (auto lvl = parse_level(env)) log.level = *lvl;
    else log.log(Level::Warn, "ignoring unrecognized PSDP_LOG value", {{"value", env}});
  }

  try {
    if (*solve) return run_solve(solve_opts, log);
    if (*transform) return run_transform(t_input, t_epsilon, t_output, t_record, log);
    if (*pullback) return run_pullback(p_input, p_cert, p_record, p_output, log);
    if (*verify) return run_verify(v_input, v_cert, v_output, log);
    if (*gen) return run_gen(gen_opts);
    if (*diagnose) return run_diagnose(diag_opts, log);
  } catch (const psdp::Error& e) {
    log.error(e.what(), {{"kind", std::string(psdp::to_string(e.kind()))}});
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    log.error(e.what(), {{"kind", "InternalError"}});
    return 1;
  }
  return 1;
}
