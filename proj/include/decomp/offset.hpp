#pragma once

#include <memory>
#include <vector>

#include "decomp/geom.hpp"
#include "decomp/vh_polygon.hpp"

namespace decomp {

// Inner offset curve at depth eps: the interior points at distance exactly eps
// from the polygon boundary, stitched into one closed ccw loop of axis-parallel
// segments and radius-eps arcs centered at reflex vertices. Primitive anchors
// reference the reduced polygon (segments: generating side; arcs: center
// vertex).
struct OffsetCurve {
  Loop loop;
  double epsilon = 0.0;
  std::vector<double> cum_len;
  double total_len = 0.0;

  void build_cum();
  double along_dist(int pi, double ti, int pj, double tj) const;
};

OffsetCurve inner_offset(const ReducedPoly& R, double eps, const Tolerance& tol);
OffsetCurve inner_offset(const VHPolygon& P, double eps, const Tolerance& tol);

// Spatial index shared by the nearest-point and foot-map queries.
struct OffsetIndex {
  const ReducedPoly* poly = nullptr;
  const OffsetCurve* curve = nullptr;
  Tolerance tol;
  SegGrid side_grid;
  SegGrid prim_grid;

  OffsetIndex(const ReducedPoly& R, const OffsetCurve& S, const Tolerance& t);
  bool visible(Point p, Point z) const;              // open segment stays inside
  Point nearest_visible(Point p, double reach) const;
  // nearest curve point regardless of visibility, with its primitive index
  std::pair<int, Point> nearest_prim(Point p) const;
  // arc-length coordinate of a point lying on primitive pi
  double arc_coord(int pi, Point p) const;
};

// Nearest-point set m_eps(p): singleton away from reflex vertices, possibly a
// whole arc at a vertex with angle code >= 270.
struct NearestSet {
  std::vector<Point> points;
  bool is_arc = false;
  int arc_prim = -1;
};
NearestSet nearest_offset_points(const OffsetIndex& idx, int side, double t);
NearestSet nearest_offset_points_vertex(const OffsetIndex& idx, int vertex);

// Continuous surjection from the doubled boundary parameterization onto the
// curve; on [2k,2k+1] it follows side k, on [2k+1,2k+2] it dwells on vertex
// k+1 and sweeps the vertex arc when there is one.
struct FootMap {
  std::shared_ptr<OffsetIndex> idx;
  Point boundary_point(double t) const;
  Point foot(double t) const;
  int param_slots() const;  // 4n
};

struct FootMapReport {
  bool continuous = true;
  bool surjective = true;
  bool interval_preimages = true;
  double max_gap = 0.0;
  Point witness;
};

FootMap foot_map(const ReducedPoly& R, const OffsetCurve& S, const Tolerance& tol);
FootMapReport verify_foot_map(const FootMap& fm, int samples_per_side);

struct LipschitzResult {
  double max_ratio = 1.0;
  Point witness_a, witness_b;
};
LipschitzResult local_lipschitz_ratio(const OffsetCurve& S, double mu, int n_samples,
                                      uint64_t seed);

// total curve length inside the disc (a, r), computed analytically
double clipped_length(const OffsetCurve& S, Point a, double r);

}  // namespace decomp
