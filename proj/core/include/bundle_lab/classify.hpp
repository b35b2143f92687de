#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "bundle_lab/frames.hpp"
#include "bundle_lab/monodromy.hpp"

namespace bundle_lab {

/// Evidence that X intertwines M_B with the m-fold sum of M_z (or, for
/// jordan, M_{h o B} with the m-fold sum of M_h).
struct SimilarityCertificate {
  Matrix x;                    // K x m (n_max + 1), beta-normalized frame of B
  double residual = 0.0;       // max entry of the intertwining defect on the interior block
  double residual_scale = 0.0; // max entry of M_B X, for relative reading
  std::size_t interior_columns = 0;
  double cond = 0.0;           // sigma_max / sigma_min of X
  double cond_doubled = 0.0;   // same at (2K, 2 n_max)
  double cond_change = 0.0;    // relative
  RieszReport riesz;
  double tail = 0.0;           // worst relative column mass beyond row K (either scale)
  std::size_t K = 0;
  std::size_t n_max = 0;
  bool accepted = false;
  std::vector<std::string> warnings;
  std::string status;          // accepted | failed: <reason>
};

struct DouglasOptions {
  std::size_t K = 512;
  std::size_t n_max = 100;
  double residual_tol = 1e-10;  // relative to residual_scale when that exceeds 1
  double cond_tol = 0.05;
  double tail_tol = 1e-8;
  bool keep_matrix = false;     // retain X in the certificate
};

/// X with column (j, k) = (1 / (1 - conj(z_j) z)) B^k / beta_k, checked
/// against M_B X = X (sum of M_z) on columns k < n_max. Repeated zeros switch
/// to the model-space seeds z^s / prod (1 - conj(z_j) z). A certificate fails
/// when the columns spill beyond K rows, when the residual is not at rounding
/// level, or when cond(X) moves by cond_tol under doubling (K, n_max).
SimilarityCertificate douglas_intertwiner(const BlaschkeProduct& b, const WeightSequence& w,
                                          const DouglasOptions& options = {});

struct JordanResult {
  Decomposition decomposition;
  SimilarityCertificate certificate;  // for B, extended to h o B
  double h_residual = 0.0;            // X (sum M_h) vs M_{h o B} X, interior block
  double h_residual_scale = 0.0;
  std::size_t h_interior_columns = 0;
  bool accepted = false;
};

struct JordanOptions {
  DecomposeOptions decompose;
  DouglasOptions douglas;
};

/// decompose, then douglas_intertwiner for B with n_max lowered if needed so
/// that B^n fits in K rows (about n sum (1+|a|)/(1-|a|) coefficients).
JordanResult jordan(const FunctionSpec& spec, const WeightSequence& w, const JordanOptions& options = {});

struct MoebiusMatch {
  MoebiusTransform phi{0.0, 0.0};
  double residual = 0.0;        // max |g2 - g1 o phi| over the samples
  double param_residual = 0.0;  // size of the last Gauss-Newton correction
  std::size_t seeds = 0;
};

/// phi with g2 = g1 o phi, seeded from the g1-fiber over g2(0) and refined by
/// Levenberg-Marquardt on (theta, z0). Among accepted solutions the smallest
/// theta wins, then the smallest |z0|.
std::optional<MoebiusMatch> moebius_match(const FunctionSpec& g1, const FunctionSpec& g2);

enum class VerdictKind { Similar, NotSimilar, Inconclusive };
std::string to_string(VerdictKind k);

struct Verdict {
  VerdictKind kind = VerdictKind::Inconclusive;
  std::string reason;  // order mismatch | Moebius match failed | diagnostics
  std::size_t m1 = 0, m2 = 0;
  std::optional<MoebiusMatch> match;
  std::vector<JordanResult> evidence;  // jordan of h1, then h2 (when computed)
};

Verdict similar(const FunctionSpec& h1, const FunctionSpec& h2, const WeightSequence& w, const JordanOptions& options = {});

struct KaplanskyResult {
  Verdict double_verdict;
  Verdict single_verdict;
  bool consistent = false;
};

/// Compares the doubled bundles (multiplicities 2 m1, 2 m2 with the same
/// indecomposable parts) and the single ones.
KaplanskyResult kaplansky(const FunctionSpec& h1, const FunctionSpec& h2, const WeightSequence& w,
                          const JordanOptions& options = {});

struct CounterexampleReport {
  double t = 0.0;
  std::vector<double> profile;         // r_n, n = 0..n_max
  double slope = 0.0;                  // least-squares slope of log r_n vs log n on [n_max/8, n_max]
  double growth = 0.0;                 // r_{n_max} / r_{n_max/16}
  std::vector<std::size_t> ladder;     // N values
  std::vector<double> cond;            // cond(X_N) along the ladder
  std::string verdict;  // no bounded similarity at probed scales | similarity-consistent | inconclusive
};

CounterexampleReport counterexample_probe(double t, const WeightSequence& w, std::size_t n_max);

}  // namespace bundle_lab
