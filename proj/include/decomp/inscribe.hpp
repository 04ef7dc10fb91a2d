#pragma once

#include <optional>
#include <vector>

#include "decomp/geom.hpp"
#include "decomp/vh_polygon.hpp"

namespace decomp {

// Axis of the sides being grown in one expansion step.
enum class Axis { horizontal, vertical };

struct GrowthRect {
  int base_side = -1;  // side index at computation time
  Point p, q;          // top corners, outward of side_a / side_b
  double height = 0.0;
  bool empty = true;
  double area() const { return empty ? 0.0 : height * dist(p, q); }
};

struct InscribeStage {
  Axis axis = Axis::horizontal;
  std::vector<GrowthRect> rects;
  double max_rect_area = 0.0;
  double polygon_area = 0.0;
  VHPolygon snapshot;
};

struct InscribeTrace {
  std::vector<InscribeStage> stages;
  int stop_step = -1;  // first step whose added rectangles all have area < 1/4
};

struct InscribeResult {
  VHPolygon polygon;       // original units
  VHPolygon polygon_unit;  // rescaled so the lattice step is 1
  DomainPolygon domain_unit;
  double d = 1.0;
  Tolerance tol_unit;
  InscribeTrace trace;
  // witnesses (contact points with the domain boundary) per side of
  // polygon_unit, as parameters plus points
  std::vector<std::vector<Point>> side_witnesses;
};

// Connected component of the interior of the union of closed d-lattice squares
// contained in dom, containing x. Result in original units.
VHPolygon lattice_seed(const DomainPolygon& dom, double d, Point x);

// Maximal outward rectangle on side k of P (unit scale), per the sweeping
// construction: top placed at the clearance height, degenerate when the side
// already meets the domain boundary.
GrowthRect grow_rectangle(const DomainIndex& dom, const VHPolygon& P, int k);

// One growth step over every nonzero side of the given axis, including pinch
// resolution and the *-condition cleanup. P is at unit scale.
std::pair<VHPolygon, std::vector<GrowthRect>> expand_step(const DomainIndex& dom,
                                                          const VHPolygon& P, Axis axis);

InscribeResult inscribe(const DomainPolygon& dom, double d, Point x,
                        bool validate_stages = false);

// Contact parameters (and points) where the domain boundary touches [a,b]
// within tol; sorted by parameter along the segment.
std::vector<std::pair<double, Point>> boundary_contacts(const DomainIndex& dom, Point a, Point b,
                                                        double tol);

}  // namespace decomp
