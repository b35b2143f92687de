#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "bundle_lab/blaschke_product.hpp"
#include "bundle_lab/operators.hpp"
#include "bundle_lab/weights.hpp"

namespace bundle_lab {

/// Column scaling of a frame matrix in the orthonormal base of the target
/// space: Raw is the plain coefficient matrix D_beta X, Beta divides column
/// (j, n) by beta_n, Inverse is D_{beta^-1} X (D_beta x I) in H^2_{beta^-1}.
enum class Normalization { Raw, Beta, Inverse };

std::string to_string(Normalization n);

/// Frame {B^n(z) / (1 - conj(z_j) z)} with column (j, n) stored at n m + j.
struct FrameMatrix {
  BlaschkeProduct b;
  WeightSequence w;
  std::vector<cplx> points;  // z_j, the kernel directions
  std::size_t n_max = 0;
  std::size_t K = 0;         // rows 0..K-1
  /// Raw Taylor coefficients, K + extra rows (the extra rows only feed `tail`).
  Matrix coeffs;
  /// When the input product had no zero at 0, `b` is input o conjugator and
  /// the conjugator maps 0 to the first zero of the input.
  std::optional<MoebiusTransform> conjugator;

  std::size_t m() const { return points.size(); }
  std::size_t columns() const { return (n_max + 1) * points.size(); }
  /// K x columns matrix in the requested normalization.
  Matrix matrix(Normalization n) const;
  /// Largest norm, among columns, of the coefficient rows beyond K in the
  /// given normalization.
  double tail(Normalization n) const;
};

/// Key Lemma frame of B. Zeros must be distinct; if 0 is not a zero, B is
/// replaced by B o psi with psi(0) = z_1 (recorded as the conjugator).
FrameMatrix build_frame(const BlaschkeProduct& b, const WeightSequence& w, std::size_t n_max, std::size_t K);

/// Same construction without any normalization of B (used for Moebius
/// frames and for intertwiners of a given B).
FrameMatrix raw_frame(const BlaschkeProduct& b, const WeightSequence& w, std::size_t n_max, std::size_t K);

/// {phi^n / (1 - conj(z0) z)} with phi = e^{i theta}(z0 - z)/(1 - conj(z0) z).
FrameMatrix moebius_frame(cplx z0, const WeightSequence& w, std::size_t n_max, std::size_t K, double theta = 0.0);

struct GramResult {
  Matrix gram;
  double tail_bound = 0.0;  // per-entry truncation bound, product of column tails
};

GramResult gram(const FrameMatrix& f, Normalization n);

struct RieszStability {
  std::size_t K = 0;
  std::size_t n_max = 0;
  double c1 = 0.0;
  double c2 = 0.0;
  double rel_change_c1 = 0.0;
  double rel_change_c2 = 0.0;
};

struct RieszReport {
  double c1 = 0.0;  // smallest singular value of the beta-normalized frame
  double c2 = 0.0;  // largest
  // c1^2 and c2^2 are the Riesz bounds C1, C2 (extreme Gram eigenvalues).
  double cond = 0.0;
  std::size_t K = 0;
  std::size_t n_max = 0;
  double tail = 0.0;
  std::optional<RieszStability> stability;
  std::string verdict;  // Riesz-consistent | degenerating | inconclusive
};

/// Extremal singular values of the beta-normalized frame at the frame's own
/// truncation only (from the Gram eigenvalues).
RieszReport riesz_bounds_at(const FrameMatrix& f);

/// riesz_bounds_at plus a rebuild at (2K, 2 n_max) for the stability block.
/// A verdict is Riesz-consistent when both bounds move by less than
/// `stable_tol` and c1 > 1e-7 c2; degenerating when c1 falls or c2 rises by
/// more than that.
RieszReport riesz_bounds(const FrameMatrix& f, double stable_tol = 0.05);

struct DualFrame {
  Matrix y;
  double residual = 0.0;  // max |Y* A - I|
  double gram_cond = 0.0;
};

/// Numerical dual Y = A (A* A)^{-1} of the beta-normalized frame.
DualFrame dual_frame(const FrameMatrix& f, Normalization n = Normalization::Beta);

struct KernelMatrix {
  Matrix a;
  Matrix inverse;
  double cond = 0.0;
  double min_singular = 0.0;
};

/// A_ij = 1 / (1 - conj(z_i) z_j). Points must be distinct and in the disk.
KernelMatrix kernel_matrix(const std::vector<cplx>& points);

struct ResidualReport {
  double max_deviation = 0.0;
  double max_entry = 0.0;  // largest entry magnitude, for scale
  std::size_t block = 0;
  std::size_t K = 0;
  std::size_t n_max = 0;
};

/// Gram of {B^{n+1} / btilde_n} in H^2_btilde, btilde_n = (n+1) beta_n,
/// against the Gram in H^2_beta of D D_w (B' B^n / beta_n), D = diag((k+2)/(k+1)),
/// D_w = diag(w_{k+1}). B must vanish at 0.
ResidualReport cpb_check(const BlaschkeProduct& b, const WeightSequence& w, std::size_t n_max, std::size_t K);

struct DualityReport {
  double max_deviation = 0.0;   // from scale * I
  double scale = 0.0;           // mean diagonal of A_{beta^-1}^* A_beta
  double expected_scale = 0.0;  // Hardy norm^2 of the frame vectors, 1 / (1 - |z0|^2)
  std::size_t K = 0;
  std::size_t n_max = 0;
};

/// Pairs the beta^-1 normalized Moebius frame with the beta-normalized one.
DualityReport moebius_duality_check(cplx z0, const WeightSequence& w, std::size_t n_max, std::size_t K);

/// r_n = ||phi^n||_beta / beta_n, phi = (z0 - z)/(1 - conj(z0) z), with the
/// truncation grown per n until the relative tail is below `tail_tol`.
/// Throws TruncationRangeError when `max_K` does not suffice.
std::vector<double> column_norm_profile(cplx z0, const WeightSequence& w, std::size_t n_max,
                                        double tail_tol = 1e-6, std::size_t max_K = 1u << 16);

/// ||(phi')^N||_{H^2} with phi = (t - z)/(1 - t z), by Taylor coefficients.
double claim_norm(double t, int N, std::size_t K = 0);
/// (1+t)^N / ((1-t)^{N-1} sqrt(2 pi (2N-1))).
double claim_lower_bound(double t, int N);

}  // namespace bundle_lab
