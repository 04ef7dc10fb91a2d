#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "decomp/arrange.hpp"
#include "decomp/cuts.hpp"
#include "decomp/geom.hpp"

namespace decomp {

// One piece of the decomposition. Boundary loops are ccw; primitives carry the
// wall tag of their carrier in `anchor`. B pieces may consist of several
// components (one loop each).
struct Piece {
  std::vector<Loop> loops;
  char cls = 'A';
  int host = 1;  // 1,2,3: boundary band, middle band, deep core; 0 for B pieces
  double area = 0, diameter = 0, chord_arc = 0;
  int b_to_a = -1;
  BBox box;

  void recompute_basics(double sample_step);
  bool contains(Point p, double snap) const;
};

struct PartitionInternals {
  DecompGeometry G;
  Core core;
  std::vector<Cut> cuts_unit;
};

struct Partition {
  std::vector<Piece> a_pieces;
  std::vector<Piece> b_pieces;
  std::vector<std::vector<int>> adjacency;  // A-A closure intersections within the domain
  double epsilon = 0, d = 0;
  DomainPolygon domain;
  std::vector<Cut> cuts;  // original units
  std::shared_ptr<PartitionInternals> unit;  // absent for externally loaded partitions
};

struct PartitionOptions {
  std::optional<Point> seed_point;
  double eps_int = 1.0 / 32.0;
  double Delta_hat = 106.0;   // unit-scale piece diameter bound plus cut slack
  double delta_hat = 1.0 / 64.0;
  double eta_tilde = 121.0;   // regular-cut path-ratio cap (2*eta + 1 for eta = 60)
  double piece_diam_cap = 100.0;
  int core_cell_budget = 60000;
  double max_core_cell = 16.0;
  uint64_t seed = 0x5eedULL;
};

Point deepest_point(const DomainPolygon& dom);

// Split an oversized piece by witness cuts placed along the 45-degree
// projection of its boundary run; fragments come back with diameter <= cap.
std::vector<Piece> split_large(const Piece& piece, const DecompGeometry& G, double diam_cap,
                               std::vector<Cut>* new_cuts);

Partition make_partition(const DomainPolygon& dom, double eps, PartitionOptions opt = {});

}  // namespace decomp
