#pragma once

#include <string>
#include <vector>

#include "decomp/geom.hpp"

namespace decomp {

// Rectilinear polygon with strictly alternating vertical/horizontal sides.
// Zero-length sides are first-class: they are stored as repeated vertices and
// carry the parity slot of their position. Side k runs v[k] -> v[k+1 mod n];
// side k is vertical iff (k % 2 == 0) == first_vertical.
//
// The boundary is an edge cycle (universal-cover convention): it may touch or
// overlap itself at pinch points and slits while still bounding a connected,
// simply connected region.
struct VHPolygon {
  std::vector<Point> v;
  bool first_vertical = true;

  int n() const { return (int)v.size(); }
  Point vert(int k) const { return v[mod(k)]; }
  int mod(int k) const {
    int m = (int)v.size();
    return ((k % m) + m) % m;
  }
  bool side_vertical(int k) const { return (mod(k) % 2 == 0) == first_vertical; }
  Point side_a(int k) const { return vert(k); }
  Point side_b(int k) const { return vert(k + 1); }
  double side_len(int k) const { return dist(side_a(k), side_b(k)); }
  bool side_zero(int k, double snap) const { return side_len(k) <= snap; }
  // unit direction of a nonzero side
  Point side_dir(int k) const;

  double area() const { return shoelace(v); }
  BBox bbox() const;
  Containment classify(Point p, double snap) const;  // winding with slit awareness
  Loop boundary_loop() const;                        // nonzero sides only

  void assert_parity(double snap) const;
};

struct VHViolation {
  int item = 0;  // definition clause 1..8
  int where = 0; // side or vertex index
  std::string detail;
};

// Interior angle code {90,180,270,360} at vertex k, from the incident nonzero
// side directions (zero sides are skipped; two adjacent zero sides are
// malformed and raise an error).
int angle_code(const VHPolygon& P, int k, double snap);

std::vector<VHViolation> validate_vh(const VHPolygon& P, double alpha, double beta,
                                     const Tolerance& tol, int max_probe_per_item = 1 << 30);

// Build a VHPolygon from a raw ccw rectilinear vertex list: aligns the parity
// phase (by start-index rotation when possible), inserts zero-length sides
// where consecutive sides share parity, and drops degenerate repeats.
VHPolygon canonicalize(const std::vector<Point>& raw, const Tolerance& tol);

// Same polygon with all 180-degree vertices removed: collinear runs merge into
// single sides, every remaining angle is 90/270/360, and zero sides remain
// only at 360-degree slit tips. side_map[k] = reduced side index covering
// original side k (-1 for removed zero sides).
struct ReducedPoly {
  std::vector<Point> v;                  // vertex cycle, not parity-padded
  std::vector<int> code;                 // angle code at each vertex
  std::vector<double> len;               // side k: v[k] -> v[k+1]
  int n() const { return (int)v.size(); }
  Point side_a(int k) const { return v[k]; }
  Point side_b(int k) const { return v[(k + 1) % n()]; }
  bool side_zero(int k) const { return len[k] == 0.0; }
  Point side_dir(int k) const;
};
ReducedPoly reduce(const VHPolygon& P, double snap);

}  // namespace decomp
