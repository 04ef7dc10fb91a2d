#include "decomp/cellgrid.hpp"

#include <cmath>

namespace decomp {

CellGrid::CellGrid(int64_t ox, int64_t oy, int nx, int ny, double cell)
    : ox_(ox), oy_(oy), nx_(nx), ny_(ny), cell_(cell), bits_((size_t)nx * ny, 0) {}

size_t CellGrid::count() const {
  size_t c = 0;
  for (char b : bits_) c += (b != 0);
  return c;
}

void CellGrid::locate(Point p, int& i, int& j) const {
  i = (int)std::floor(p.x / cell_ - (double)ox_);
  j = (int)std::floor(p.y / cell_ - (double)oy_);
}

CellGrid CellGrid::component(int i0, int j0) const {
  CellGrid out(ox_, oy_, nx_, ny_, cell_);
  if (!get(i0, j0)) return out;
  std::vector<std::pair<int, int>> stack{{i0, j0}};
  out.set(i0, j0, true);
  while (!stack.empty()) {
    auto [i, j] = stack.back();
    stack.pop_back();
    const int di[4] = {1, -1, 0, 0}, dj[4] = {0, 0, 1, -1};
    for (int k = 0; k < 4; ++k) {
      int ii = i + di[k], jj = j + dj[k];
      if (get(ii, jj) && !out.get(ii, jj)) {
        out.set(ii, jj, true);
        stack.push_back({ii, jj});
      }
    }
  }
  return out;
}

CellGrid CellGrid::holes() const {
  // flood the complement from the border; unreached complement cells are holes
  CellGrid seen(ox_, oy_, nx_, ny_, cell_);
  std::vector<std::pair<int, int>> stack;
  auto push = [&](int i, int j) {
    if (in_range(i, j) && !get(i, j) && !seen.get(i, j)) {
      seen.set(i, j, true);
      stack.push_back({i, j});
    }
  };
  for (int i = 0; i < nx_; ++i) {
    push(i, 0);
    push(i, ny_ - 1);
  }
  for (int j = 0; j < ny_; ++j) {
    push(0, j);
    push(nx_ - 1, j);
  }
  while (!stack.empty()) {
    auto [i, j] = stack.back();
    stack.pop_back();
    push(i + 1, j);
    push(i - 1, j);
    push(i, j + 1);
    push(i, j - 1);
  }
  CellGrid out(ox_, oy_, nx_, ny_, cell_);
  for (int j = 0; j < ny_; ++j)
    for (int i = 0; i < nx_; ++i)
      if (!get(i, j) && !seen.get(i, j)) out.set(i, j, true);
  return out;
}

void CellGrid::or_with(const CellGrid& o) {
  for (size_t k = 0; k < bits_.size(); ++k) bits_[k] = bits_[k] | o.bits_[k];
}

std::vector<std::vector<Point>> CellGrid::boundary_loops() const {
  // Directed boundary edges over lattice corners, filled region on the left.
  // dir: 0=E 1=N 2=W 3=S. At each corner the outgoing partner of an incoming
  // edge is the sharpest left turn that is again a boundary edge; this keeps
  // the two sheets separate where diagonal cells pinch.
  const int DI[4] = {1, 0, -1, 0}, DJ[4] = {0, 1, 0, -1};

  auto left_cell = [&](int ci, int cj, int dir, int& i, int& j) {
    switch (dir) {
      case 0: i = ci; j = cj; break;
      case 1: i = ci - 1; j = cj; break;
      case 2: i = ci - 1; j = cj - 1; break;
      default: i = ci; j = cj - 1; break;
    }
  };
  auto right_cell = [&](int ci, int cj, int dir, int& i, int& j) {
    switch (dir) {
      case 0: i = ci; j = cj - 1; break;
      case 1: i = ci; j = cj; break;
      case 2: i = ci - 1; j = cj; break;
      default: i = ci - 1; j = cj - 1; break;
    }
  };
  auto is_boundary = [&](int ci, int cj, int dir) {
    int li, lj, ri, rj;
    left_cell(ci, cj, dir, li, lj);
    right_cell(ci, cj, dir, ri, rj);
    return get(li, lj) && !get(ri, rj);
  };
  auto partner_dir = [&](int ci, int cj, int dir_in) {
    for (int turn : {1, 0, 3}) {  // left, straight, right
      int nd = (dir_in + turn) % 4;
      if (is_boundary(ci, cj, nd)) return nd;
    }
    return -1;
  };

  std::vector<char> used((size_t)(nx_ + 1) * (ny_ + 1) * 4, 0);
  auto ukey = [&](int ci, int cj, int dir) { return ((size_t)cj * (nx_ + 1) + ci) * 4 + dir; };

  std::vector<std::vector<Point>> loops;
  for (int cj = 0; cj <= ny_; ++cj)
    for (int ci = 0; ci <= nx_; ++ci)
      for (int d0 = 0; d0 < 4; ++d0) {
        if (used[ukey(ci, cj, d0)] || !is_boundary(ci, cj, d0)) continue;
        std::vector<Point> loop;
        int pi = ci, pj = cj, dir = d0;
        for (;;) {
          used[ukey(pi, pj, dir)] = 1;
          loop.push_back(Point{(double)(ox_ + pi) * cell_, (double)(oy_ + pj) * cell_});
          pi += DI[dir];
          pj += DJ[dir];
          int nd = partner_dir(pi, pj, dir);
          if (nd < 0) fail(ErrorKind::internal_invariant, "cell boundary trace dead end");
          if (pi == ci && pj == cj && nd == d0) break;  // closed
          if (used[ukey(pi, pj, nd)])
            fail(ErrorKind::internal_invariant, "cell boundary trace re-entered an edge");
          dir = nd;
        }
        if (loop.size() >= 4) loops.push_back(std::move(loop));
      }
  return loops;
}

}  // namespace decomp
