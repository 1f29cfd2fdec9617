#pragma once

// JSON file formats: instances, transform records, certificates, verification
// and diagnostic reports. Doubles are written with round-trip precision, so
// reading a file back gives bit-identical data. Parse failures name the
// offending field.

#include <cmath>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>  // vendored nlohmann/json

#include "psdp/diagnostics.hpp"
#include "psdp/instance.hpp"
#include "psdp/solver.hpp"
#include "psdp/transform.hpp"
#include "psdp/verify.hpp"

namespace psdp::io {

using Json = nlohmann::ordered_json;

inline constexpr const char* kInstanceFormat = "psdp-instance/v1";
inline constexpr const char* kTransformFormat = "psdp-transform/v1";
inline constexpr const char* kCertificateFormat = "psdp-certificate/v1";
inline constexpr const char* kVerifyFormat = "psdp-verify/v1";
inline constexpr const char* kDiagnosticFormat = "psdp-diagnostic/v1";

// ---------------------------------------------------------------------------
// Field access with path-qualified errors.

[[noreturn]] inline void parse_fail(const std::string& field, const std::string& what) {
  fail(ErrorKind::ParseError, field + ": " + what);
}

inline const Json& member(const Json& obj, const std::string& key, const std::string& path = "") {
  if (!obj.is_object()) parse_fail(path.empty() ? "<root>" : path, "expected an object");
  const auto it = obj.find(key);
  if (it == obj.end()) parse_fail(path.empty() ? key : path + "." + key, "missing");
  return *it;
}

inline double as_number(const Json& j, const std::string& field) {
  if (!j.is_number()) parse_fail(field, "expected a number");
  return j.get<double>();
}

inline long long as_integer(const Json& j, const std::string& field) {
  if (!j.is_number_integer()) parse_fail(field, "expected an integer");
  return j.get<long long>();
}

inline std::string as_string(const Json& j, const std::string& field) {
  if (!j.is_string()) parse_fail(field, "expected a string");
  return j.get<std::string>();
}

inline bool as_bool(const Json& j, const std::string& field) {
  if (!j.is_boolean()) parse_fail(field, "expected a boolean");
  return j.get<bool>();
}

inline std::vector<double> as_number_list(const Json& j, const std::string& field) {
  if (!j.is_array()) parse_fail(field, "expected an array");
  std::vector<double> out;
  out.reserve(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(as_number(j[i], field + "[" + std::to_string(i) + "]"));
  return out;
}

inline std::vector<Index> as_index_list(const Json& j, const std::string& field) {
  if (!j.is_array()) parse_fail(field, "expected an array");
  std::vector<Index> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    out.push_back(static_cast<Index>(as_integer(j[i], field + "[" + std::to_string(i) + "]")));
  }
  return out;
}

inline void expect_format(const Json& j, const char* format) {
  const auto got = as_string(member(j, "format"), "format");
  if (got != format) parse_fail("format", "expected \"" + std::string(format) + "\", got \"" + got + "\"");
}

// ---------------------------------------------------------------------------
// Matrices. Entries are bare numbers when every imaginary part is +0, and
// [re, im] pairs otherwise; the reader accepts either form per entry.

inline Json to_json(const Matrix& m) {
  bool real = true;
  for (Index j = 0; j < m.cols() && real; ++j)
    for (Index i = 0; i < m.rows(); ++i) {
      const double im = m(i, j).imag();
      if (im != 0.0 || std::signbit(im)) {
        real = false;
        break;
      }
    }
  Json rows = Json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Index j = 0; j < m.cols(); ++j) {
      if (real) row.push_back(m(i, j).real());
      else row.push_back(Json::array({m(i, j).real(), m(i, j).imag()}));
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

inline Json to_json(const HermitianMatrix& m) { return to_json(m.matrix()); }

inline Json to_json(const Vector& v) {
  Json out = Json::array();
  for (Index i = 0; i < v.size(); ++i) out.push_back(v[i]);
  return out;
}

inline Complex entry_from_json(const Json& j, const std::string& field) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number()) {
    return {j[0].get<double>(), j[1].get<double>()};
  }
  parse_fail(field, "expected a number or a [re, im] pair");
}

/// Reads a rows x cols matrix; cols < 0 accepts any consistent width.
inline Matrix matrix_from_json(const Json& j, const std::string& field, Index rows, Index cols = -1) {
  if (!j.is_array()) parse_fail(field, "expected an array of rows");
  if (rows >= 0 && static_cast<Index>(j.size()) != rows) {
    fail(ErrorKind::ValidationError,
         field + ": expected " + std::to_string(rows) + " rows, got " + std::to_string(j.size()));
  }
  const Index r = static_cast<Index>(j.size());
  Index c = cols;
  if (c < 0) c = r == 0 ? 0 : (j[0].is_array() ? static_cast<Index>(j[0].size()) : -1);
  Matrix m(r, std::max<Index>(c, 0));
  for (Index i = 0; i < r; ++i) {
    const std::string row_field = field + "[" + std::to_string(i) + "]";
    const Json& row = j[static_cast<std::size_t>(i)];
    if (!row.is_array()) parse_fail(row_field, "expected an array");
    if (static_cast<Index>(row.size()) != c) {
      fail(ErrorKind::ValidationError, row_field + ": expected " + std::to_string(c) + " entries");
    }
    for (Index k = 0; k < c; ++k) {
      m(i, k) = entry_from_json(row[static_cast<std::size_t>(k)], row_field + "[" + std::to_string(k) + "]");
    }
  }
  return m;
}

inline HermitianMatrix hermitian_from_json(const Json& j, const std::string& field, Index n) {
  const Matrix m = matrix_from_json(j, field, n, n);
  try {
    return HermitianMatrix(m);
  } catch (const Error& e) {
    fail(ErrorKind::ValidationError, field + ": " + e.what());
  }
}

inline Vector vector_from_json(const Json& j, const std::string& field) {
  const auto values = as_number_list(j, field);
  return Eigen::Map<const Vector>(values.data(), static_cast<Index>(values.size()));
}

// ---------------------------------------------------------------------------
// Instances.

using AnyInstance = std::variant<PositiveSdpInstance, SpecialFormInstance>;

inline Json metadata_to_json(const InstanceMetadata& meta) {
  Json out = Json::object();
  out["name"] = meta.name;
  if (meta.seed) out["seed"] = *meta.seed;
  if (!meta.provenance.empty()) out["provenance"] = meta.provenance;
  return out;
}

inline InstanceMetadata metadata_from_json(const Json& j) {
  InstanceMetadata meta;
  if (!j.is_object()) parse_fail("metadata", "expected an object");
  if (j.contains("name")) meta.name = as_string(j["name"], "metadata.name");
  if (j.contains("seed") && !j["seed"].is_null()) meta.seed = as_integer(j["seed"], "metadata.seed");
  if (j.contains("provenance") && !j["provenance"].is_null()) {
    meta.provenance = as_string(j["provenance"], "metadata.provenance");
  }
  return meta;
}

inline Json to_json(const PositiveSdpInstance& inst) {
  Json out;
  out["format"] = kInstanceFormat;
  out["kind"] = "general";
  out["n"] = inst.n();
  out["m"] = inst.m();
  out["C"] = to_json(inst.C);
  Json a = Json::array();
  for (const auto& ai : inst.A) a.push_back(to_json(ai));
  out["A"] = std::move(a);
  out["b"] = inst.b;
  out["metadata"] = metadata_to_json(inst.metadata);
  return out;
}

inline Json to_json(const SpecialFormInstance& inst) {
  Json out;
  out["format"] = kInstanceFormat;
  out["kind"] = "special";
  out["n"] = inst.n();
  out["m"] = inst.m();
  Json a = Json::array();
  for (const auto& ai : inst.A) a.push_back(to_json(ai));
  out["A"] = std::move(a);
  out["gamma"] = inst.gamma;
  out["metadata"] = metadata_to_json(inst.metadata);
  return out;
}

inline Json to_json(const AnyInstance& inst) {
  return std::visit([](const auto& i) { return to_json(i); }, inst);
}

/// Parses and validates an instance document.
inline AnyInstance instance_from_json(const Json& j) {
  expect_format(j, kInstanceFormat);
  const auto kind = as_string(member(j, "kind"), "kind");
  if (kind != "general" && kind != "special") parse_fail("kind", "expected \"general\" or \"special\"");
  const auto n = as_integer(member(j, "n"), "n");
  const auto m = as_integer(member(j, "m"), "m");
  if (n < 1) fail(ErrorKind::ValidationError, "n: must be at least 1");
  if (m < 1) fail(ErrorKind::ValidationError, "m: must be at least 1");
  const Json& a_json = member(j, "A");
  if (!a_json.is_array()) parse_fail("A", "expected an array of matrices");
  if (static_cast<long long>(a_json.size()) != m) {
    fail(ErrorKind::ValidationError, "A: has " + std::to_string(a_json.size()) + " matrices, m is " + std::to_string(m));
  }
  std::vector<HermitianMatrix> a;
  for (std::size_t i = 0; i < a_json.size(); ++i) {
    a.push_back(hermitian_from_json(a_json[i], "A[" + std::to_string(i) + "]", static_cast<Index>(n)));
  }
  const InstanceMetadata meta = j.contains("metadata") ? metadata_from_json(j["metadata"]) : InstanceMetadata{};

  if (kind == "general") {
    PositiveSdpInstance inst;
    inst.C = hermitian_from_json(member(j, "C"), "C", static_cast<Index>(n));
    inst.A = std::move(a);
    inst.b = as_number_list(member(j, "b"), "b");
    inst.metadata = meta;
    validate(inst);
    return inst;
  }
  SpecialFormInstance inst;
  inst.A = std::move(a);
  inst.gamma = as_number(member(j, "gamma"), "gamma");
  inst.metadata = meta;
  validate(inst);
  return inst;
}

// ---------------------------------------------------------------------------
// Transform record.

inline Json to_json(const TransformRecord& rec) {
  Json out;
  out["format"] = kTransformFormat;
  out["n"] = rec.n;
  out["original_m"] = rec.original_m;
  out["epsilon"] = rec.epsilon;
  out["C_inv_sqrt"] = to_json(rec.C_inv_sqrt);
  out["removed_constraints"] = rec.removed_constraints;
  out["retained_constraints"] = rec.retained_constraints;
  out["padding"] = rec.padding;
  out["beta"] = rec.beta;
  out["clip_hi"] = rec.clip_hi;
  out["clip_lo"] = rec.clip_lo;
  out["scale_t"] = rec.scale_t;
  Json bases = Json::array();
  for (const auto& b : rec.eigbases) bases.push_back(to_json(b));
  out["eigbases"] = std::move(bases);
  Json values = Json::array();
  for (const auto& v : rec.normalized_eigenvalues) values.push_back(to_json(v));
  out["normalized_eigenvalues"] = std::move(values);
  return out;
}

inline TransformRecord record_from_json(const Json& j) {
  expect_format(j, kTransformFormat);
  TransformRecord rec;
  rec.n = static_cast<Index>(as_integer(member(j, "n"), "n"));
  rec.original_m = static_cast<Index>(as_integer(member(j, "original_m"), "original_m"));
  rec.epsilon = as_number(member(j, "epsilon"), "epsilon");
  rec.C_inv_sqrt = hermitian_from_json(member(j, "C_inv_sqrt"), "C_inv_sqrt", rec.n);
  rec.removed_constraints = as_index_list(member(j, "removed_constraints"), "removed_constraints");
  rec.retained_constraints = as_index_list(member(j, "retained_constraints"), "retained_constraints");
  rec.padding = static_cast<Index>(as_integer(member(j, "padding"), "padding"));
  rec.beta = as_number(member(j, "beta"), "beta");
  rec.clip_hi = as_number(member(j, "clip_hi"), "clip_hi");
  rec.clip_lo = as_number(member(j, "clip_lo"), "clip_lo");
  rec.scale_t = as_number(member(j, "scale_t"), "scale_t");
  const Json& bases = member(j, "eigbases");
  const Json& values = member(j, "normalized_eigenvalues");
  if (!bases.is_array() || bases.size() != rec.retained_constraints.size()) {
    fail(ErrorKind::ValidationError, "eigbases: expected one basis per retained constraint");
  }
  if (!values.is_array() || values.size() != rec.retained_constraints.size()) {
    fail(ErrorKind::ValidationError, "normalized_eigenvalues: expected one spectrum per retained constraint");
  }
  for (std::size_t k = 0; k < bases.size(); ++k) {
    rec.eigbases.push_back(matrix_from_json(bases[k], "eigbases[" + std::to_string(k) + "]", rec.n, rec.n));
    const std::string field = "normalized_eigenvalues[" + std::to_string(k) + "]";
    rec.normalized_eigenvalues.push_back(vector_from_json(values[k], field));
    if (rec.normalized_eigenvalues.back().size() != rec.n) fail(ErrorKind::ValidationError, field + ": expected n values");
  }
  if (rec.retained_constraints.empty()) fail(ErrorKind::ValidationError, "retained_constraints: empty");
  for (Index i : rec.retained_constraints) {
    if (i < 0 || i >= rec.original_m) fail(ErrorKind::ValidationError, "retained_constraints: index out of range");
  }
  if (!(rec.beta > 0.0)) fail(ErrorKind::ValidationError, "beta: must be positive");
  if (!(rec.clip_lo < rec.clip_hi)) fail(ErrorKind::ValidationError, "clip_lo: must be below clip_hi");
  if (!(rec.scale_t > 0.0 && rec.scale_t <= rec.clip_hi)) fail(ErrorKind::ValidationError, "scale_t: outside (0, clip_hi]");
  return rec;
}

// ---------------------------------------------------------------------------
// Certificates.

enum class TraceMode { Full, Summary, None };

inline TraceMode trace_mode_from_string(const std::string& s) {
  if (s == "full") return TraceMode::Full;
  if (s == "summary") return TraceMode::Summary;
  if (s == "none") return TraceMode::None;
  fail(ErrorKind::InvalidArgument, "trace mode must be full, summary or none");
}

inline Json to_json(const IterationRecord& r) {
  Json out;
  out["t"] = r.t;
  out["k"] = r.k;
  out["thr"] = r.thr;
  out["lambda"] = r.lambda_t;
  out["r_index"] = r.r_index;
  out["tr_Pi"] = r.tr_Pi_t;
  out["tr_Y"] = r.tr_Y;
  out["norm_phi_star_Y"] = r.norm_phi_star_Y;
  out["ratio"] = r.ratio_tr_over_norm;
  Json flags = Json::object();
  for (std::size_t c = 0; c < kCheckCount; ++c) flags[std::string(kCheckNames[c])] = r.invariant_flags[c];
  out["invariants"] = std::move(flags);
  return out;
}

/// Summary keeps the first record of every phase and the last record.
inline std::vector<const IterationRecord*> select_trace(const std::vector<IterationRecord>& trace, TraceMode mode) {
  std::vector<const IterationRecord*> out;
  if (mode == TraceMode::None) return out;
  for (std::size_t i = 0; i < trace.size(); ++i) {
    const bool keep = mode == TraceMode::Full || i == 0 || i + 1 == trace.size() || trace[i].k != trace[i - 1].k;
    if (keep) out.push_back(&trace[i]);
  }
  return out;
}

/// Pulled-back primal and dual for a general-form instance.
struct PullbackSection {
  HermitianMatrix X;
  std::vector<double> y;
  double primal_value = 0.0;
  double dual_value = 0.0;
  double gap_ratio = 0.0;
  double factor_bound = 0.0;
};

struct Certificate {
  double epsilon = 0.0;
  HermitianMatrix X_star;
  std::vector<double> y_star;
  double primal_value = 0.0;
  double dual_value = 0.0;
  double gap_ratio = 0.0;
  double alpha = 0.0;
  long long iterations = 0;
  std::vector<PhaseCount> phases;
  bool invariants_checked = false;
  std::optional<PullbackSection> pullback;
};

inline Certificate certificate_of(const SolveResult& res) {
  Certificate c;
  c.epsilon = res.params.epsilon;
  c.X_star = res.X_star;
  c.y_star = res.y_star;
  c.primal_value = res.primal_value;
  c.dual_value = res.dual_value;
  c.gap_ratio = res.gap_ratio;
  c.alpha = res.alpha;
  c.iterations = res.iterations;
  c.phases = res.phases;
  c.invariants_checked = res.params.assert_invariants;
  return c;
}

inline PullbackSection pullback_section(const PullbackResult& primal, const DualPullback& dual) {
  PullbackSection s;
  s.X = primal.X;
  s.y = dual.y;
  s.primal_value = primal.objective;
  s.dual_value = dual.value;
  s.gap_ratio = primal.objective / dual.value;
  s.factor_bound = primal.factor_bound;
  return s;
}

inline Json to_json(const PullbackSection& p) {
  Json out;
  out["X"] = to_json(p.X);
  out["y"] = p.y;
  out["primal_value"] = p.primal_value;
  out["dual_value"] = p.dual_value;
  out["gap_ratio"] = p.gap_ratio;
  out["factor_bound"] = p.factor_bound;
  return out;
}

/// `solve` is optional; when present its trace and run summary are included.
inline Json to_json(const Certificate& c, const SolveResult* solve = nullptr, TraceMode mode = TraceMode::None) {
  Json out;
  out["format"] = kCertificateFormat;
  out["epsilon"] = c.epsilon;
  out["primal_value"] = c.primal_value;
  out["dual_value"] = c.dual_value;
  out["gap_ratio"] = c.gap_ratio;
  out["alpha"] = c.alpha;
  out["X_star"] = to_json(c.X_star);
  out["y_star"] = c.y_star;
  out["iterations"] = c.iterations;
  Json phases = Json::array();
  for (const auto& p : c.phases) phases.push_back(Json{{"k", p.k}, {"count", p.count}});
  out["phases"] = std::move(phases);
  out["invariants_checked"] = c.invariants_checked;
  if (solve != nullptr) {
    out["run"] = Json{{"k_start", solve->k_start},
                      {"k_final", solve->k_final},
                      {"best_t", solve->best_t},
                      {"final_tr_Y", solve->final_tr_Y},
                      {"epsilon0", solve->params.epsilon0},
                      {"epsilon1", solve->params.epsilon1},
                      {"thr_bound", solve->params.thr_bound}};
    if (mode != TraceMode::None) {
      Json trace = Json::array();
      for (const auto* r : select_trace(solve->trace, mode)) trace.push_back(to_json(*r));
      out["trace"] = std::move(trace);
    }
  }
  if (c.pullback) out["pullback"] = to_json(*c.pullback);
  return out;
}

inline Certificate certificate_from_json(const Json& j) {
  expect_format(j, kCertificateFormat);
  Certificate c;
  c.epsilon = as_number(member(j, "epsilon"), "epsilon");
  const Json& x = member(j, "X_star");
  if (!x.is_array()) parse_fail("X_star", "expected an array of rows");
  c.X_star = hermitian_from_json(x, "X_star", static_cast<Index>(x.size()));
  c.y_star = as_number_list(member(j, "y_star"), "y_star");
  if (j.contains("primal_value")) c.primal_value = as_number(j["primal_value"], "primal_value");
  if (j.contains("dual_value")) c.dual_value = as_number(j["dual_value"], "dual_value");
  if (j.contains("gap_ratio")) c.gap_ratio = as_number(j["gap_ratio"], "gap_ratio");
  if (j.contains("alpha")) c.alpha = as_number(j["alpha"], "alpha");
  if (j.contains("iterations")) c.iterations = as_integer(j["iterations"], "iterations");
  if (j.contains("invariants_checked")) c.invariants_checked = as_bool(j["invariants_checked"], "invariants_checked");
  if (j.contains("phases")) {
    const Json& phases = j["phases"];
    if (!phases.is_array()) parse_fail("phases", "expected an array");
    for (std::size_t i = 0; i < phases.size(); ++i) {
      const std::string field = "phases[" + std::to_string(i) + "]";
      c.phases.push_back({as_integer(member(phases[i], "k", field), field + ".k"),
                          as_integer(member(phases[i], "count", field), field + ".count")});
    }
  }
  if (j.contains("pullback")) {
    const Json& p = j["pullback"];
    PullbackSection s;
    const Json& px = member(p, "X", "pullback");
    if (!px.is_array()) parse_fail("pullback.X", "expected an array of rows");
    s.X = hermitian_from_json(px, "pullback.X", static_cast<Index>(px.size()));
    s.y = as_number_list(member(p, "y", "pullback"), "pullback.y");
    s.primal_value = as_number(member(p, "primal_value", "pullback"), "pullback.primal_value");
    s.dual_value = as_number(member(p, "dual_value", "pullback"), "pullback.dual_value");
    s.gap_ratio = as_number(member(p, "gap_ratio", "pullback"), "pullback.gap_ratio");
    s.factor_bound = as_number(member(p, "factor_bound", "pullback"), "pullback.factor_bound");
    c.pullback = std::move(s);
  }
  return c;
}

// ---------------------------------------------------------------------------
// Reports.

inline Json to_json(const VerificationReport& r) {
  Json out;
  out["format"] = kVerifyFormat;
  out["form"] = r.form == Form::Special ? "special" : "general";
  out["verdict"] = std::string(to_string(r.verdict));
  out["primal_feasibility"] = r.primal_feasibility;
  out["dual_feasibility"] = r.dual_feasibility;
  out["primal_psd"] = r.primal_psd;
  out["dual_nonnegativity"] = r.dual_nonnegativity;
  out["primal_value"] = r.primal_value;
  out["dual_value"] = r.dual_value;
  out["gap_ratio"] = r.gap_ratio;
  out["guarantee"] = r.guarantee;
  out["feas_tol"] = r.feas_tol;
  out["epsilon"] = r.epsilon;
  return out;
}

inline Json to_json(const LemmaReport& r) {
  Json out;
  out["format"] = kDiagnosticFormat;
  out["diagnostic"] = r.lemma;
  out["mode"] = std::string(to_string(r.mode));
  out["trials"] = r.trials;
  out["accepted"] = r.accepted;
  out["acceptance_rate"] = r.acceptance_rate();
  out["violations"] = r.violations;
  out["min_margin"] = r.min_margin ? Json(*r.min_margin) : Json(nullptr);
  out["epsilon"] = r.epsilon;
  out["n"] = r.n;
  out["delta"] = r.delta;
  out["seed"] = r.seed;
  if (r.no_samples()) out["error"] = "NoSamplesAccepted";
  return out;
}

inline Json to_json(const JordanReport& r) {
  Json out;
  out["format"] = kDiagnosticFormat;
  out["diagnostic"] = "jordan";
  out["trials"] = r.trials;
  out["max_dim"] = r.max_dim;
  out["seed"] = r.seed;
  out["max_invariance_residual"] = r.max_invariance_residual;
  out["max_gram_error"] = r.max_gram_error;
  out["max_reconstruction_error"] = r.max_reconstruction_error;
  out["dimension_count_failures"] = r.dimension_count_failures;
  out["block_rank_failures"] = r.block_rank_failures;
  return out;
}

// ---------------------------------------------------------------------------
// Files.

inline std::string dump(const Json& j) { return j.dump(2) + "\n"; }

/// Missing or unreadable input is a ParseError: the document could not be
/// obtained.
inline Json read_json_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::ParseError, path + ": cannot open file");
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return Json::parse(buf.str());
  } catch (const nlohmann::json::parse_error& e) {
    fail(ErrorKind::ParseError, path + ": " + e.what());
  }
}

inline void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorKind::IoError, path + ": cannot open for writing");
  out << text;
  if (!out) fail(ErrorKind::IoError, path + ": write failed");
}

}  // namespace psdp::io
