#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>

#include <Eigen/Dense>

#include "bundle_lab/blaschke_product.hpp"
#include "bundle_lab/series.hpp"
#include "bundle_lab/weights.hpp"

namespace bundle_lab {

using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

enum class OperatorRole { Shift, Mult, Calculus, Transport, Deformation };

std::string to_string(OperatorRole r);

/// Truncated operator in the orthonormal base {z^k / beta_k}.
struct OperatorMatrix {
  Matrix entries;
  OperatorRole role = OperatorRole::Shift;
  std::string weights;
  std::size_t K = 0;
};

/// Backward weighted shift: [S]_{k-1,k} = beta_{k-1} / beta_k. K >= 2.
OperatorMatrix shift_matrix(const WeightSequence& w, std::size_t K);

/// [M_f]_{i,j} = f_{i-j} beta_i / beta_j for i >= j. `cols` defaults to K;
/// a taller-than-wide matrix keeps images of the first columns exact.
OperatorMatrix mult_matrix(const PowerSeries& f, const WeightSequence& w, std::size_t K, std::size_t cols = 0);

/// [h(S)]_{j,j+i} = h_i beta_j / beta_{j+i}. `cols` defaults to K.
OperatorMatrix calculus_matrix(const PowerSeries& h, const WeightSequence& w, std::size_t K, std::size_t cols = 0);

enum class Coordinates { Orthonormal, Raw };

/// T_{a,b}: z^k -> (alpha_k / beta_k) z^k, an isometry H^2_alpha -> H^2_beta.
/// Identity in orthonormal coordinates; diag(alpha_k / beta_k) on raw Taylor
/// coefficients.
OperatorMatrix transport_matrix(const WeightSequence& wa, const WeightSequence& wb, std::size_t K,
                                Coordinates coords = Coordinates::Orthonormal);

/// Orthonormal coordinates f_k beta_k of a series, length K.
Vector to_orthonormal(const PowerSeries& f, const WeightSequence& w, std::size_t K);

struct IdentityReport {
  double max_deviation = 0.0;       // on the exact block
  std::size_t block = 0;            // leading block size checked
  std::size_t K = 0;
  std::size_t inner_dimension = 0;  // padded inner dimension of the product
  double unpadded_deviation = 0.0;  // same block, plain K x K product
};

/// B*(S_beta) B(M_z) against the identity on the leading K - 4 m block. The
/// inner dimension is padded until the Taylor tail of B is below 1e-18 so
/// the block is unaffected by truncation; the plain K x K product is
/// reported alongside.
IdentityReport left_inverse_check(const BlaschkeProduct& b, const WeightSequence& w, std::size_t K);

/// T_{beta,beta^-1} S_beta T_{beta^-1,beta}, formed on raw coefficients and
/// expressed in the orthonormal base of H^2_{beta^-1}, against M_z^* on the
/// dual space. Every entry is compared.
IdentityReport commutant_transport_check(const WeightSequence& w, std::size_t K);

/// Row-major CSV; each complex entry is written as two fields re,im.
void write_matrix_csv(std::ostream& os, const Matrix& m);

}  // namespace bundle_lab
