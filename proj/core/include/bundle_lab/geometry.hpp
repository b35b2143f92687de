#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <vector>

#include "bundle_lab/series.hpp"

namespace bundle_lab {

/// h(e^{2 pi i k / samples}) for k < samples, with extra points inserted
/// where consecutive samples are farther apart than 1% of the bounding box
/// diameter. The polyline is closed implicitly (last point joins the first).
std::vector<cplx> boundary_curve(const FunctionSpec& spec, std::size_t samples = 1024);

struct WindingResult {
  int index = 0;
  double raw = 0.0;                 // summed argument increments / 2 pi
  std::optional<int> root_count;    // zeros of h - omega in the disk, when rational
  double distance = 0.0;            // from omega to the sampled curve
  bool on_boundary = false;         // omega on h(T): only the root count applies
};

/// Argument principle on a boundary polyline, refining segments until each
/// step is shorter than half the distance to omega. Precomputes the curve and
/// the rational form once; reuse it for many target points.
class WindingCounter {
 public:
  explicit WindingCounter(const FunctionSpec& spec, std::size_t samples = 1024);

  /// Throws ConvergenceError when the raw winding is not within 0.05 of an
  /// integer and InconsistencyError when the root count disagrees. Within
  /// `margin` of the curve the argument principle is not used: the result is
  /// the number of zeros of h - omega in the open disk if h is rational and
  /// `boundary_fallback` is set, a DomainError otherwise.
  WindingResult evaluate(cplx omega, double margin = 1e-9, bool cross_check = true,
                         bool boundary_fallback = false) const;

  const std::vector<cplx>& curve() const { return curve_; }
  const std::vector<double>& parameters() const { return t_; }
  bool rational() const { return rational_.has_value(); }

 private:
  FunctionSpec spec_;
  std::vector<double> t_;
  std::vector<cplx> curve_;
  std::optional<RationalFunction> rational_;
};

/// Index of h(S) - omega, i.e. the zero count of h - omega in the disk. Uses
/// the boundary fallback of WindingCounter::evaluate.
int winding_index(const FunctionSpec& spec, cplx omega);

struct Bounds {
  double re_min = -1.0, re_max = 1.0, im_min = -1.0, im_max = 1.0;
};

struct Region {
  int index = 0;
  std::size_t cells = 0;
  std::size_t seed = 0;  // first cell of the region in row-major order
};

/// Row-major grid, row 0 at im_min. A cell is kBoundaryCell when its
/// center lies within 1.5 cell diagonals of the sampled curve.
struct IndexMap {
  static constexpr int kBoundaryCell = -1;

  Bounds bounds;
  std::size_t resolution = 0;
  std::vector<int> cells;
  std::vector<cplx> curve;
  std::vector<cplx> branch_values;
  std::vector<Region> regions;      // 4-connected components of non-boundary cells
  std::size_t cross_checked = 0;    // cells where the root count was compared

  int at(std::size_t col, std::size_t row) const { return cells[row * resolution + col]; }
  cplx center(std::size_t col, std::size_t row) const;
  /// Distinct indices over non-boundary cells, ascending.
  std::vector<int> distinct_indices() const;
};

/// Per-cell winding index at cell centers. Fails with InconsistencyError if
/// a connected region carries two different indices.
IndexMap index_map(const FunctionSpec& spec, const Bounds& bounds, std::size_t resolution);

/// h(z) for critical points z of h in the disk.
std::vector<cplx> branch_values(const FunctionSpec& spec);

/// Deterministic SVG 1.1 rendering: index colors (0 white, 1 red, 2 yellow,
/// 3 and up blues), boundary band grey, curve in black, branch values marked,
/// legend on the right.
void emit_svg(const IndexMap& map, std::ostream& os);

}  // namespace bundle_lab
