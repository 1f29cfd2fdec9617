#pragma once

// Problem data for general-form and special-form positive SDPs, plus seeded
// generators used by tests, the acceptance suite and `psdp gen`.

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "psdp/spectra.hpp"

namespace psdp {

struct InstanceMetadata {
  std::string name;
  std::optional<std::int64_t> seed;
  std::string provenance;

  friend bool operator==(const InstanceMetadata&, const InstanceMetadata&) = default;
};

/// minimize tr(C X) s.t. tr(A_i X) >= b_i, X >= 0, with C, A_i PSD and b >= 0.
struct PositiveSdpInstance {
  HermitianMatrix C;
  std::vector<HermitianMatrix> A;
  std::vector<double> b;
  InstanceMetadata metadata;

  Index n() const { return C.dim(); }
  Index m() const { return static_cast<Index>(A.size()); }

  friend bool operator==(const PositiveSdpInstance&, const PositiveSdpInstance&) = default;
};

/// minimize tr X s.t. tr(A_i X) >= 1, X >= 0, with max_i ||A_i|| = 1 and
/// every nonzero eigenvalue of every A_i at least 1/gamma.
struct SpecialFormInstance {
  std::vector<HermitianMatrix> A;
  double gamma = 1.0;
  InstanceMetadata metadata;

  Index n() const { return A.empty() ? 0 : A.front().dim(); }
  Index m() const { return static_cast<Index>(A.size()); }

  friend bool operator==(const SpecialFormInstance&, const SpecialFormInstance&) = default;
};

namespace detail {

inline void require_psd(const HermitianMatrix& a, const std::string& field) {
  if (!is_psd(a)) fail(ErrorKind::ValidationError, field + " not PSD");
}

}  // namespace detail

inline void validate(const PositiveSdpInstance& inst) {
  const Index n = inst.n();
  if (n < 1) fail(ErrorKind::ValidationError, "n must be at least 1");
  if (inst.m() < 1) fail(ErrorKind::ValidationError, "m must be at least 1");
  if (inst.b.size() != inst.A.size()) {
    fail(ErrorKind::ValidationError, "b has " + std::to_string(inst.b.size()) + " entries, expected " +
                                         std::to_string(inst.A.size()));
  }
  detail::require_psd(inst.C, "C");
  for (std::size_t i = 0; i < inst.A.size(); ++i) {
    const std::string field = "A[" + std::to_string(i) + "]";
    if (inst.A[i].dim() != n) fail(ErrorKind::ValidationError, field + " dimension mismatch");
    detail::require_psd(inst.A[i], field);
  }
  for (std::size_t i = 0; i < inst.b.size(); ++i) {
    if (!std::isfinite(inst.b[i])) fail(ErrorKind::ValidationError, "b[" + std::to_string(i) + "] not finite");
    if (inst.b[i] < 0.0) fail(ErrorKind::ValidationError, "b[" + std::to_string(i) + "] negative");
  }
}

inline void validate(const SpecialFormInstance& inst) {
  const Index n = inst.n();
  if (n < 1) fail(ErrorKind::ValidationError, "n must be at least 1");
  if (inst.m() < n) fail(ErrorKind::ValidationError, "special form requires m >= n");
  if (!(inst.gamma >= 1.0) || !std::isfinite(inst.gamma)) fail(ErrorKind::ValidationError, "gamma must be >= 1");
  double max_norm = 0.0;
  for (std::size_t i = 0; i < inst.A.size(); ++i) {
    const std::string field = "A[" + std::to_string(i) + "]";
    if (inst.A[i].dim() != n) fail(ErrorKind::ValidationError, field + " dimension mismatch");
    const auto dec = eigh(inst.A[i]);
    const double zero_band = tol::psd(dec.norm());
    if (dec.min() < -zero_band) fail(ErrorKind::ValidationError, field + " not PSD");
    for (Index j = 0; j < dec.dim(); ++j) {
      const double v = dec.values[j];
      if (v > zero_band && v < 1.0 / inst.gamma - 1e-9) {
        fail(ErrorKind::ValidationError, field + " has a nonzero eigenvalue below 1/gamma");
      }
    }
    max_norm = std::max(max_norm, dec.norm());
  }
  if (std::abs(max_norm - 1.0) > 1e-9) {
    fail(ErrorKind::ValidationError, "max_i ||A_i|| is " + std::to_string(max_norm) + ", expected 1");
  }
}

/// All A_i = I_n; the special-form optimum is exactly 1.
inline SpecialFormInstance gen_identity(Index n, Index m) {
  if (n < 1 || m < n) fail(ErrorKind::InvalidArgument, "gen_identity requires 1 <= n <= m");
  SpecialFormInstance inst;
  inst.A.assign(static_cast<std::size_t>(m), HermitianMatrix::identity(n));
  inst.gamma = 1.0;
  inst.metadata.name = "identity-n" + std::to_string(n) + "-m" + std::to_string(m);
  inst.metadata.provenance = "gen identity";
  return inst;
}

/// Commuting instance: C and every A_i diagonal, entries uniform on [0.1, 2],
/// b_i uniform on [0.5, 2].
inline PositiveSdpInstance gen_diagonal(Index n, Index m, std::uint64_t seed) {
  if (n < 1 || m < 1) fail(ErrorKind::InvalidArgument, "gen_diagonal requires n, m >= 1");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> entry(0.1, 2.0);
  std::uniform_real_distribution<double> rhs(0.5, 2.0);
  auto random_diag = [&] {
    Vector d(n);
    for (Index j = 0; j < n; ++j) d[j] = entry(rng);
    return HermitianMatrix::diagonal(d);
  };
  PositiveSdpInstance inst;
  inst.C = random_diag();
  for (Index i = 0; i < m; ++i) inst.A.push_back(random_diag());
  for (Index i = 0; i < m; ++i) inst.b.push_back(rhs(rng));
  inst.metadata.name = "diag-n" + std::to_string(n) + "-m" + std::to_string(m);
  inst.metadata.seed = static_cast<std::int64_t>(seed);
  inst.metadata.provenance = "gen diag";
  return inst;
}

struct RankProfile {
  Index rank = 0;  // 0 means full rank
  bool ill_conditioned = false;

  static RankProfile full() { return {}; }
  static RankProfile low(Index r) { return {r, false}; }
};

namespace detail {

inline Matrix complex_gaussian(Index rows, Index cols, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Matrix g(rows, cols);
  for (Index j = 0; j < cols; ++j)
    for (Index i = 0; i < rows; ++i) {
      const double re = gauss(rng);
      const double im = gauss(rng);
      g(i, j) = Complex(re, im);
    }
  return g;
}

// G G^H rescaled so its top eigenvalue is `top`, with the nonzero part of the
// spectrum clamped to [floor, top].
inline HermitianMatrix shaped_gram(const Matrix& g, double top, double floor) {
  const auto dec = eigh(HermitianMatrix::from_hermitian_part(g * g.adjoint()));
  const double scale = top / dec.max();
  const double cutoff = 1e-10 * dec.max();
  return dec.apply([&](double x) { return x > cutoff ? std::max(x * scale, floor) : 0.0; });
}

}  // namespace detail

/// A_i = G_i G_i^H with complex Gaussian G_i (n x rank), nonzero eigenvalues
/// clamped into [1e-3, 2] (down to 1e-8 when ill-conditioned); C = G G^H + 0.1 I.
inline PositiveSdpInstance gen_random_psd(Index n, Index m, std::uint64_t seed,
                                          RankProfile profile = RankProfile::full()) {
  if (n < 1 || m < 1) fail(ErrorKind::InvalidArgument, "gen_random_psd requires n, m >= 1");
  if (profile.rank < 0 || profile.rank > n) fail(ErrorKind::InvalidArgument, "rank must be in [0, n]");
  const Index width = profile.rank == 0 ? n : profile.rank;
  const double floor = profile.ill_conditioned ? 1e-8 : 1e-3;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> top(0.5, 2.0);
  std::uniform_real_distribution<double> rhs(0.5, 2.0);

  PositiveSdpInstance inst;
  const Matrix gc = detail::complex_gaussian(n, n, rng);
  inst.C = detail::shaped_gram(gc, top(rng), 0.0) + 0.1 * HermitianMatrix::identity(n);
  for (Index i = 0; i < m; ++i) {
    const Matrix g = detail::complex_gaussian(n, width, rng);
    inst.A.push_back(detail::shaped_gram(g, top(rng), floor));
  }
  for (Index i = 0; i < m; ++i) inst.b.push_back(rhs(rng));
  inst.metadata.name = "random-n" + std::to_string(n) + "-m" + std::to_string(m) +
                       (profile.rank == 0 ? std::string("-full") : "-rank" + std::to_string(profile.rank));
  inst.metadata.seed = static_cast<std::int64_t>(seed);
  inst.metadata.provenance = profile.ill_conditioned ? "gen random (ill-conditioned)" : "gen random";
  return inst;
}

}  // namespace psdp
