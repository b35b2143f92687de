#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "bundle_lab/common.hpp"

namespace bundle_lab {

/// Weight sequence {w_k}_{k>=1} of a weighted Hardy space H^2_beta, with
/// beta_0 = 1 and beta_k = beta_{k-1} * w_k.
///
/// Instances are cheap handles onto shared, lazily extended caches. The cache
/// extension is internally synchronized, so a WeightSequence may be shared
/// between threads.
class WeightSequence {
 public:
  enum class Kind { Hardy, Bergman, PolyGrowth, Nln, Explicit, Reciprocal };

  static WeightSequence hardy();
  /// Weighted Bergman space A^2_alpha: w_k = sqrt((k+1)/(k+2 alpha+1)).
  static WeightSequence bergman(double alpha);
  /// M-polynomial growth model: w_k = (k+M+1)/(k+1).
  static WeightSequence polygrowth(double M);
  /// w_k = e^{ln^2(k+3) - ln^2(k+2)} (k+2)/(k+1), intermediate growth.
  static WeightSequence nln();
  /// weights[i] holds w_{i+1}; every entry must be finite and positive.
  static WeightSequence explicit_list(std::vector<double> weights, std::string source = "inline");
  /// w'_k = 1 / w_k, hence beta'_k = 1 / beta_k.
  static WeightSequence reciprocal(const WeightSequence& of);

  /// Preset id grammar: hardy | bergman:alpha=A | polygrowth:M=M | nln |
  /// reciprocal:<id> | explicit:path=<csv>.
  static WeightSequence parse(std::string_view id);
  /// One positive decimal per line, line k holds w_k.
  static WeightSequence from_csv(const std::string& path);

  Kind kind() const;
  /// alpha for Bergman, M for polygrowth, 0 otherwise.
  double parameter() const;
  /// Underlying sequence of a reciprocal; nullopt otherwise.
  std::optional<WeightSequence> base() const;
  std::string id() const;

  /// w_k for k >= 1. Throws TruncationRangeError past an explicit list.
  double weight(std::size_t k) const;
  /// w_k - 1 evaluated without cancellation where the preset allows it.
  double weight_minus_one(std::size_t k) const;
  double beta(std::size_t k) const;
  double log_beta(std::size_t k) const;
  /// beta_0 .. beta_{count-1}.
  std::vector<double> betas(std::size_t count) const;
  /// Pre-extends the cache through index k.
  void reserve(std::size_t k) const;
  /// Largest admissible index for explicit lists.
  std::optional<std::size_t> max_index() const;

 private:
  struct Impl;
  explicit WeightSequence(std::shared_ptr<Impl> impl);
  std::shared_ptr<Impl> impl_;
};

enum class GrowthClass { Polynomial, Intermediate, Undetermined };

std::string to_string(GrowthClass c);

struct GrowthReport {
  std::size_t probe_limit = 0;
  double sup_val = 0.0;     // max_{1<=k<=K} (k+1)|w_k - 1|
  std::size_t sup_index = 0;
  double last_val = 0.0;    // (K+1)(w_K - 1)
  double tail_trend = 0.0;  // slope of (k+1)(w_k - 1) per decade of k over [K/10, K]
  GrowthClass classification = GrowthClass::Undetermined;
  bool certified = false;
};

/// beta_k; see WeightSequence::beta.
double beta(const WeightSequence& w, std::size_t k);

/// Probes (k+1)|w_k - 1| for k <= K. Classification is certified only for
/// presets with known asymptotics; explicit lists are reported as undetermined.
GrowthReport growth_classify(const WeightSequence& w, std::size_t K);

/// Sequence with reciprocal weights. Involutive: dual_weights(dual_weights(w))
/// returns the original handle.
WeightSequence dual_weights(const WeightSequence& w);

struct EquivalenceReport {
  bool equivalent = false;
  double k1 = 0.0;  // min_{k<=K} beta'_k / beta_k
  double k2 = 0.0;  // max_{k<=K} beta'_k / beta_k
  bool analytic = false;  // both sides carry known power-law asymptotics
  std::optional<double> exponent_a;
  std::optional<double> exponent_b;
};

/// Compares norms of two weighted Hardy spaces over the probe k <= K.
EquivalenceReport equivalent(const WeightSequence& a, const WeightSequence& b, std::size_t K);

/// Exponent e with beta_k ~ c k^e for presets; +inf / -inf for nln and its
/// reciprocal; nullopt for explicit lists.
std::optional<double> power_law_exponent(const WeightSequence& w);

}  // namespace bundle_lab
