#pragma once

#include <vector>

#include "decomp/geom.hpp"

namespace decomp {

// Wall tags double as orientation witnesses: every wall primitive is supplied
// in the canonical direction of its carrier (domain boundary ccw, polygon
// boundary ccw, offset curve ccw, core loops ccw), so "the face left of a
// forward half-edge" is "inside" for that carrier.
enum WallTag : int {
  wall_domain = 1,
  wall_polygon = 2,
  wall_offset = 4,
  wall_core = 8,
  wall_cut = 16,
};

struct Wall {
  Primitive prim;
  int tag = 0;
};

// Planar subdivision of non-crossing walls meeting only at shared endpoints.
class Arrangement {
 public:
  struct HalfEdge {
    int from = -1, to = -1;
    int twin = -1, next = -1;
    int face = -1;
    Primitive geom;  // directed along the half-edge
    int tag = 0;
    bool forward = true;  // true when geom runs in the wall's canonical direction
  };
  struct Face {
    std::vector<int> cycle;  // half-edge orbit, interior on the left
    double area = 0;
    int label = -1;
  };

  void build(const std::vector<Wall>& walls, double join_tol);

  std::vector<Point> nodes;
  std::vector<HalfEdge> half_edges;
  std::vector<Face> faces;
  int outer_cycle_face = -1;  // index into faces for the unbounded face

  Loop face_loop(int f) const;
  // faces incident to each node (for closure-adjacency queries)
  std::vector<std::vector<int>> node_faces() const;
};

}  // namespace decomp
