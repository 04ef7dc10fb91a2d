#pragma once

#include <optional>
#include <vector>

#include "decomp/cellgrid.hpp"
#include "decomp/geom.hpp"
#include "decomp/inscribe.hpp"
#include "decomp/offset.hpp"
#include "decomp/vh_polygon.hpp"

namespace decomp {

enum class CutKind { long_side, short_side, vertex_360, double_270, region2, split_45 };

struct CarrierRef {
  enum Kind { none, boundary, offset_curve, core_boundary } kind = none;
  int index = -1;  // side / primitive / core edge
  Point p;
};

struct Cut {
  CutKind kind = CutKind::short_side;
  std::vector<Point> pts;  // 2 or 3 points; pts.front() = outer end
  CarrierRef outer, inner;
  double max_ratio = 1.0;  // regularity certificate (filled by regular_check)
  bool regular = true;
  bool bend() const { return pts.size() == 3; }
};

// Shared unit-scale geometry of one decomposition run.
struct DecompGeometry {
  DomainPolygon dom_u;
  Tolerance tol;
  std::shared_ptr<DomainIndex> idx;
  VHPolygon P;
  ReducedPoly R;
  OffsetCurve S1, S2;
  std::shared_ptr<OffsetIndex> oidx;  // over (R, S1)
  double eps = 1.0 / 32.0;
  std::vector<double> bd_cum;  // prefix lengths of the reduced boundary cycle
  double bd_total = 0.0;

  void build_boundary_param();
  // arc-length coordinate along the reduced boundary of a point on side k
  double boundary_coord(int k, Point p) const;
};

std::vector<Cut> make_cuts_region1(const DecompGeometry& G);

// Regularity of one cut per the eps/36 rule; returns the max observed path
// ratio over sampled nearby pairs and flips `regular` when it exceeds eta.
double regular_check(const DecompGeometry& G, Cut& cut, double eta_tilde, int samples,
                     uint64_t seed);

// Dyadic core: union of closed cells of the given side meeting (fine rule) or
// contained in (coarse rule) the deep region { d(.,dP) > 2 eps }, with holes
// filled and undersized components dropped.
struct Core {
  std::optional<CellGrid> cells;
  double cell_side = 0.0;
  bool fine_rule = true;
  std::vector<std::vector<Point>> loops;  // ccw boundary loops
  bool empty() const { return !cells || loops.empty(); }
  bool contains(Point p) const;
};

Core dyadic_core(const DecompGeometry& G, double cell_side, bool fine_rule,
                 double min_loop_length);

std::vector<Cut> make_cuts_region2(const DecompGeometry& G, const Core& core);

}  // namespace decomp
