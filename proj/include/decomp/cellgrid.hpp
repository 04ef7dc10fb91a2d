#pragma once

#include <cstdint>
#include <vector>

#include "decomp/geom.hpp"

namespace decomp {

// Occupancy grid over unit cells [i,i+1]x[j,j+1] scaled by `cell` and offset
// by integer origin (ox, oy). Cell (i,j) covers
//   [ (ox+i)*cell, (ox+i+1)*cell ] x [ (oy+j)*cell, (oy+j+1)*cell ].
class CellGrid {
 public:
  CellGrid(int64_t ox, int64_t oy, int nx, int ny, double cell);

  int nx() const { return nx_; }
  int ny() const { return ny_; }
  double cell() const { return cell_; }
  bool in_range(int i, int j) const { return i >= 0 && i < nx_ && j >= 0 && j < ny_; }
  bool get(int i, int j) const { return in_range(i, j) && bits_[idx(i, j)]; }
  void set(int i, int j, bool v) { bits_[idx(i, j)] = v; }
  size_t count() const;

  Point corner(int i, int j) const {  // lower-left corner of cell (i,j)
    return {(double)(ox_ + i) * cell_, (double)(oy_ + j) * cell_};
  }
  Point cell_center(int i, int j) const {
    return {((double)(ox_ + i) + 0.5) * cell_, ((double)(oy_ + j) + 0.5) * cell_};
  }
  // cell index containing p (may be out of range)
  void locate(Point p, int& i, int& j) const;

  // 4-connected component containing (i,j), restricted to set cells.
  CellGrid component(int i, int j) const;
  // Keep only cells reachable 4-connectedly from the grid border over UNSET
  // cells complemented... returns grid of holes (unset cells not reachable
  // from the border).
  CellGrid holes() const;
  void or_with(const CellGrid& o);

  // Counterclockwise boundary loops of the cell union. Vertices at lattice
  // corners; a corner where two diagonal cells meet is visited twice (the
  // trace pairs edges by maximal left turn, so sheets never cross).
  std::vector<std::vector<Point>> boundary_loops() const;

 private:
  int64_t ox_, oy_;
  int nx_, ny_;
  double cell_;
  std::vector<char> bits_;
  size_t idx(int i, int j) const { return (size_t)j * nx_ + i; }
};

}  // namespace decomp
