#pragma once

#include <cstdint>
#include <vector>

namespace treetrace {

/// Axis-aligned open box.
struct Cell {
  std::vector<double> lo;
  std::vector<double> hi;

  double volume() const;
  double diameter() const;
  bool contains(const Cell& other) const;
};

/// Distance between two boxes (componentwise gap).
double box_distance(const Cell& a, const Cell& b);

/// |a \ (a + h)| for a box, exact.
double box_shift_loss(const Cell& a, const std::vector<double>& h);

/// |a intersect b|, exact.
double box_overlap(const Cell& a, const Cell& b);

/// Regular strongly balanced p-multiscale decomposition of a box domain.
///
/// interval: the p-adic decomposition of (0,1) into cells (k p^-n, (k+1) p^-n).
/// hypercube: (0,1)^d subdivided by cycling through the axes; at step n+1 the
/// axis i with (n+1) == i mod d (i in 1..d) splits into p equal parts,
/// children ordered left-to-right along that axis.
///
/// Cells are computed on demand from the digits of k; nothing is stored
/// beyond the descriptor. Volumes are exactly |Omega| p^-n (A4*).
class Decomposition {
 public:
  static Decomposition interval(int p, int depth);
  static Decomposition hypercube(int d, int p, int depth);

  int dim() const { return d_; }
  int p() const { return p_; }
  int depth() const { return depth_; }
  double domain_volume() const { return 1.0; }
  std::int64_t cells_at(int n) const;

  Cell cell(int n, std::int64_t k) const;
  double cell_volume(int n) const;  // |Omega| / p^n

  /// Unique generation-n index k with x in the open cell; throws on a
  /// boundary hit.
  std::int64_t cell_of_point(const std::vector<double>& x, int n) const;

 private:
  Decomposition(int d, int p, int depth);
  int d_ = 1;
  int p_ = 2;
  int depth_ = 0;
};

/// Observed regularity constants of a decomposition. c1 certifies (A5)
/// diam <= c1 p^{-n/d}; c2 certifies (A6) via exact box-overlap volumes over
/// a fixed direction/radius set; K counts neighbors within p^{-n/d}
/// (excluding the cell itself).
struct DecompositionDiagnostics {
  std::vector<double> c1_by_generation;
  std::vector<double> c2_by_generation;
  std::vector<int> neighbors_by_generation;
  double c1_observed = 0.0;
  double c2_observed = 0.0;
  int K_observed = 0;

  /// max over generations >= n0; nonincreasing in n0 by construction.
  double c1_from(int n0) const;
  double c2_from(int n0) const;
};

DecompositionDiagnostics diagnostics(const Decomposition& dec);

}  // namespace treetrace
