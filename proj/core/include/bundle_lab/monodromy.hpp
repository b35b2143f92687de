#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "bundle_lab/blaschke_product.hpp"
#include "bundle_lab/series.hpp"

namespace bundle_lab {

/// Preimages of `omega` in the disk, kept in a fixed order.
struct Fiber {
  cplx omega;
  std::vector<cplx> points;
};

/// solve_fiber at omega0, sorted by (re, im). The count must match the
/// winding index and points must be separated by more than 1e-6.
Fiber base_fiber(const FunctionSpec& spec, cplx omega0);

/// Continues every fiber point along the polyline `path` (its first vertex
/// should be fiber.omega) by predictor-corrector steps. DomainError if a
/// point leaves the disk; ConvergenceError on step-size underflow or when two
/// points come within 1e-6 of each other.
Fiber track_fiber(const FunctionSpec& spec, const Fiber& fiber, const std::vector<cplx>& path);

/// perm[i] = j when point i of the base fiber continues to point j.
using Permutation = std::vector<std::size_t>;

Permutation compose(const Permutation& a, const Permutation& b);  // a after b
Permutation inverse(const Permutation& p);
/// One-line notation, 1-based: "[2 1 3]".
std::string to_string(const Permutation& p);

struct SkippedLoop {
  cplx branch_value;
  std::string reason;
};

struct MonodromyAction {
  Fiber base;
  std::vector<Permutation> generators;  // one per tracked branch-value loop
  std::vector<cplx> branch_values;      // loop centers, ordered like generators
  std::vector<SkippedLoop> skipped;
  std::size_t closure_size = 0;
  bool closure_complete = true;
  bool transitive = false;
};

/// Loops from omega0 to each branch value b: a straight segment, a circle of
/// radius min(max(1e-2, d/4), 0.45 d) with d the distance to the nearest
/// other branch value, and back. Loops on which tracking fails are skipped
/// and recorded.
MonodromyAction monodromy_generators(const FunctionSpec& spec, cplx omega0);

/// Orbit closure of the generated group (capped at `cap` elements).
std::size_t group_closure_size(const std::vector<Permutation>& gens, std::size_t n, std::size_t cap, bool* complete);

struct BlockSystem {
  std::vector<std::vector<std::size_t>> blocks;  // each sorted; block 0 contains point 0
  std::size_t d = 0;
  bool trivial = false;  // d == 1 or d == n
};

/// Minimal nontrivial block systems by pair closure, deduplicated, sorted by
/// block size.
std::vector<BlockSystem> block_systems(const MonodromyAction& action);
std::vector<BlockSystem> block_systems(const std::vector<Permutation>& gens, std::size_t n);

/// Every generator-stable partition into equal blocks, including the single
/// full block, ordered by decreasing block size.
std::vector<BlockSystem> all_block_systems(const std::vector<Permutation>& gens, std::size_t n);

/// prod_{mu in block} (mu - z) / (1 - conj(mu) z).
BlaschkeProduct inner_factor_from_block(const Fiber& fiber, const std::vector<std::size_t>& block);

struct OuterFactor {
  PowerSeries h;               // Taylor coefficients, trimmed at the noise floor
  std::vector<cplx> samples;   // h on |w| = radius
  double radius = 0.0;
  std::size_t sample_count = 0;
  double spread = 0.0;         // worst disagreement of f over a B-fiber
  bool consistent = false;
  double tail_decay = 0.0;     // max |c_k| r^k over the trimmed tail, relative
  std::size_t kept = 0;        // number of coefficients kept
};

/// h with f = h o B, from samples h(w) = f(z), B(z) = w, |w| = r. Values over
/// one fiber must agree within 1e-8 (relative to max(1, |f|)); otherwise
/// `consistent` is false and h is left empty. S must be a power of two.
OuterFactor outer_factor(const FunctionSpec& spec, const BlaschkeProduct& b, double r = 0.9, std::size_t S = 1024);

struct RejectedSystem {
  std::size_t d = 0;
  double spread = 0.0;
};

struct Decomposition {
  BlaschkeProduct b = BlaschkeProduct::identity();
  OuterFactor outer;
  std::size_t m = 1;
  double residual = 0.0;
  std::size_t test_points = 0;
  cplx omega0;
  std::size_t fiber_size = 0;
  std::size_t h_index = 0;  // zeros of h - omega0 in the disk; m * h_index should equal fiber_size
  MonodromyAction action;
  std::vector<std::size_t> block;          // accepted block (indices into the base fiber)
  std::vector<RejectedSystem> rejected;    // coarser candidates that failed the check
  std::string certificate_id;

  /// h as a polynomial spec (its kept Taylor coefficients).
  FunctionSpec h_spec() const;
};

struct DecomposeOptions {
  std::optional<cplx> omega0;
  double radius = 0.9;
  std::size_t samples = 1024;
  std::size_t test_points = 200;
  std::uint64_t seed = 20240531;
};

/// Default base point: f(0), pushed away from branch values (and from the
/// boundary curve) until both are at least 1e-2 away.
cplx default_base_point(const FunctionSpec& spec);

/// Maximal factorization f = h o B through the coarsest block system whose
/// outer factor passes the consistency check. B is normalized with B(0) = 0.
Decomposition decompose(const FunctionSpec& spec, const DecomposeOptions& options = {});

}  // namespace bundle_lab
