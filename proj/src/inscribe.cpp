#include "decomp/inscribe.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "decomp/cellgrid.hpp"

namespace decomp {

namespace {

bool seg_horizontal(Point a, Point b) { return std::abs(b.y - a.y) <= std::abs(b.x - a.x); }

Point axis_dir(Point a, Point b) {
  Point d = b - a;
  if (seg_horizontal(a, b)) return {d.x > 0 ? 1.0 : -1.0, 0.0};
  return {0.0, d.y > 0 ? 1.0 : -1.0};
}

int turn_code(Point din, Point dout) {
  double c = cross(din, dout);
  if (c > 0.5) return 90;
  if (c < -0.5) return 270;
  return dot(din, dout) > 0 ? 180 : 360;
}

// Geometric corner cycle; zero-length sides are implicit and re-derived by
// canonicalize. Consecutive collinear corners are meaningful: they subdivide a
// straight run into separate sides.
struct Corners {
  std::vector<Point> c;
  double snap = 1e-12;

  int n() const { return (int)c.size(); }
  int mod(int i) const {
    int m = n();
    return ((i % m) + m) % m;
  }
  Point at(int i) const { return c[mod(i)]; }
  Point side_a(int i) const { return at(i); }
  Point side_b(int i) const { return at(i + 1); }
  double len(int i) const { return dist(side_a(i), side_b(i)); }
  bool horizontal(int i) const { return seg_horizontal(side_a(i), side_b(i)); }
  Point dir(int i) const { return axis_dir(side_a(i), side_b(i)); }
  int code(int i) const { return turn_code(dir(i - 1), dir(i)); }
  double area() const { return shoelace(c); }

  void clean() {
    for (;;) {
      bool changed = false;
      for (int i = 0; i < n() && n() > 3; ++i) {
        if (dist(at(i), at(i + 1)) <= snap) {
          c.erase(c.begin() + mod(i + 1));
          changed = true;
          break;
        }
      }
      if (!changed) break;
    }
  }
  void erase_corner(int i) {
    c.erase(c.begin() + mod(i));
    clean();
  }
};

Corners corners_from_vh(const VHPolygon& P, double snap) {
  Corners C;
  C.snap = snap;
  for (auto& p : P.v)
    if (C.c.empty() || dist(C.c.back(), p) > snap) C.c.push_back(p);
  while (C.c.size() > 1 && dist(C.c.front(), C.c.back()) <= snap) C.c.pop_back();
  return C;
}

VHPolygon vh_from_corners(const Corners& C, const Tolerance& tol) { return canonicalize(C.c, tol); }

bool side_matches_axis(const Corners& C, int i, Axis axis) {
  return C.horizontal(i) == (axis == Axis::horizontal);
}

struct Clearance {
  double h = 0.0;
  bool contact = false;
};

// Smallest outward offset at which the domain boundary enters the strip swept
// from segment [a,b].
Clearance strip_clearance(const DomainIndex& dom, Point a, Point b, Point outward, double snap) {
  double eps = 10 * snap;
  bool horiz = seg_horizontal(a, b);
  double s0, s1, level, osign;
  if (horiz) {
    s0 = std::min(a.x, b.x);
    s1 = std::max(a.x, b.x);
    level = a.y;
    osign = outward.y;
  } else {
    s0 = std::min(a.y, b.y);
    s1 = std::max(a.y, b.y);
    level = a.x;
    osign = outward.x;
  }
  auto to_st = [&](Point p) {
    return horiz ? Point{p.x, osign * (p.y - level)} : Point{p.y, osign * (p.x - level)};
  };

  double extent = dom.bbox().diag() + 1.0;
  for (double R = 2.0;; R *= 2) {
    BBox q;
    if (horiz) {
      q.add(Point{s0, level - osign * eps});
      q.add(Point{s1, level + osign * R});
    } else {
      q.add(Point{level - osign * eps, s0});
      q.add(Point{level + osign * R, s1});
    }
    double best = std::numeric_limits<double>::infinity();
    for (int id : dom.edges_near(q, eps)) {
      Point pa = to_st(dom.edge_a(id));
      Point pb = to_st(dom.edge_b(id));
      if (pa.x > pb.x) std::swap(pa, pb);
      // boundary running exactly along a flank line does not block the sweep
      if (pb.x < s0 + eps || pa.x > s1 - eps) continue;
      double tmin, tmax;
      if (pb.x - pa.x <= snap) {
        tmin = std::min(pa.y, pb.y);
        tmax = std::max(pa.y, pb.y);
      } else {
        auto t_at = [&](double s) { return pa.y + (pb.y - pa.y) * (s - pa.x) / (pb.x - pa.x); };
        double c0 = std::max(pa.x, s0 + eps), c1 = std::min(pb.x, s1 - eps);
        tmin = std::min(t_at(c0), t_at(c1));
        tmax = std::max(t_at(c0), t_at(c1));
      }
      if (tmax < -eps) continue;
      double cand = tmin <= eps ? std::max(tmin, 0.0) : tmin;
      best = std::min(best, cand);
    }
    if (best <= R || R > extent) {
      require(std::isfinite(best), ErrorKind::internal_invariant,
              "strip clearance found no boundary (domain not closed?)");
      Clearance cl;
      cl.h = best;
      cl.contact = best <= eps;
      return cl;
    }
  }
}

GrowthRect grow_on_side(const DomainIndex& dom, Point a, Point b, double snap) {
  GrowthRect g;
  g.p = a;
  g.q = b;
  g.empty = true;
  // only contacts in the side's interior block growth; a boundary touch at the
  // very endpoint leaves the swept strip clean
  double L = dist(a, b);
  for (auto& [s, p] : boundary_contacts(dom, a, b, 10 * snap))
    if (s > 10 * snap && s < L - 10 * snap) return g;
  Point outward = perp_right(axis_dir(a, b));
  Clearance cl = strip_clearance(dom, a, b, outward, snap);
  if (cl.contact || cl.h <= 10 * snap) return g;
  g.height = cl.h;
  g.empty = false;
  if (seg_horizontal(a, b)) {
    double yt = a.y + outward.y * cl.h;
    g.p = {a.x, yt};
    g.q = {b.x, yt};
  } else {
    double xt = a.x + outward.x * cl.h;
    g.p = {xt, a.y};
    g.q = {xt, b.y};
  }
  return g;
}

BBox rect_box(const GrowthRect& g, Point a, Point b) {
  BBox box;
  box.add(a);
  box.add(b);
  box.add(g.p);
  box.add(g.q);
  return box;
}

bool rects_overlap(const BBox& x, const BBox& y, double snap) {
  double ix = std::min(x.xmax, y.xmax) - std::max(x.xmin, y.xmin);
  double iy = std::min(x.ymax, y.ymax) - std::max(x.ymin, y.ymin);
  return ix > 4 * snap && iy > 4 * snap;
}

void assert_rects_disjoint_from_poly(const Corners& C, const std::vector<int>& grown,
                                     const std::vector<GrowthRect>& rects, double snap) {
  BBox box;
  for (auto& p : C.c) box.add(p);
  box.inflate(1.0);
  SegGrid grid(box, std::max(box.diag() / 256, 1e-9));
  for (int i = 0; i < C.n(); ++i) grid.insert(i, C.side_a(i), C.side_b(i));
  for (size_t t = 0; t < grown.size(); ++t) {
    const GrowthRect& g = rects[t];
    int k = grown[t];
    BBox rb = rect_box(g, C.side_a(k), C.side_b(k));
    double m = 4 * snap;
    BBox sh = rb;
    sh.xmin += m;
    sh.ymin += m;
    sh.xmax -= m;
    sh.ymax -= m;
    if (sh.xmax <= sh.xmin || sh.ymax <= sh.ymin) continue;
    Point c0{sh.xmin, sh.ymin}, c1{sh.xmax, sh.ymin}, c2{sh.xmax, sh.ymax}, c3{sh.xmin, sh.ymax};
    for (int id : grid.query(rb)) {
      if (C.len(id) <= snap) continue;
      Point sa = C.side_a(id), sb = C.side_b(id);
      bool hit =
          segments_intersect(sa, sb, c0, c1, snap) || segments_intersect(sa, sb, c1, c2, snap) ||
          segments_intersect(sa, sb, c2, c3, snap) || segments_intersect(sa, sb, c3, c0, snap);
      if (!hit && sa.x > sh.xmin && sa.x < sh.xmax && sa.y > sh.ymin && sa.y < sh.ymax) hit = true;
      if (hit)
        fail(ErrorKind::internal_invariant,
             "added rectangle overlaps the polygon (side " + std::to_string(id) + ")");
    }
  }
}

// Resolve one unwitnessed 360-degree fold. Deletion merges the overlapping
// sides; otherwise the slit retracts to the deepest boundary witness.
bool resolve_folds_once(const DomainIndex& dom, Corners& C, double snap) {
  int m = C.n();
  for (int i = 0; i < m; ++i) {
    if (C.len(i - 1) <= snap || C.len(i) <= snap) continue;
    Point din = C.dir(i - 1), dout = C.dir(i);
    if (turn_code(din, dout) != 360) continue;
    Point tip = C.at(i);
    double ov = std::min(C.len(i - 1), C.len(i));
    Point far = tip - ov * din;
    auto contacts = boundary_contacts(dom, far, tip, 10 * snap);
    double best = -1;
    for (auto& [s, pt] : contacts)
      if (s > 20 * snap) best = std::max(best, s);  // half-open: far end excluded
    if (best < 0) {
      C.erase_corner(i);
      return true;
    }
    if (ov - best <= 20 * snap) continue;  // tip already on the boundary
    Point w = far + best * din;
    if (std::abs(din.x) > 0.5)
      w.y = tip.y;
    else
      w.x = tip.x;
    C.c[C.mod(i)] = w;
    return true;
  }
  return false;
}

void resolve_folds(const DomainIndex& dom, Corners& C, double snap) {
  int guard = 4 * C.n() + 64;
  while (resolve_folds_once(dom, C, snap))
    require(--guard > 0, ErrorKind::internal_invariant, "fold resolution did not converge");
}

// *-condition cleanup after growing `axis`: merge short perpendicular sides
// across collinear corners, then subdivide perpendicular sides longer than 1
// into equal pieces in (1/2, 1].
void star_cleanup(Corners& C, Axis axis, double snap) {
  for (;;) {
    bool changed = false;
    for (int i = 0; i < C.n(); ++i) {
      if (C.len(i - 1) <= snap || C.len(i) <= snap) continue;
      if (C.code(i) != 180) continue;
      if (side_matches_axis(C, i, axis)) continue;
      if (C.len(i - 1) < 0.5 - snap || C.len(i) < 0.5 - snap) {
        C.erase_corner(i);
        changed = true;
        break;
      }
    }
    if (!changed) break;
  }
  std::vector<Point> out;
  int m = C.n();
  for (int i = 0; i < m; ++i) {
    out.push_back(C.at(i));
    if (side_matches_axis(C, i, axis)) continue;
    double L = C.len(i);
    if (L <= 1.0 + snap) continue;
    int k = (int)std::ceil(L - snap);
    Point a = C.side_a(i), b = C.side_b(i);
    for (int j = 1; j < k; ++j) {
      double f = (double)j / k;
      out.push_back(seg_horizontal(a, b) ? Point{a.x + f * (b.x - a.x), a.y}
                                         : Point{a.x, a.y + f * (b.y - a.y)});
    }
  }
  C.c = std::move(out);
  C.clean();
}

struct StepOutcome {
  std::vector<GrowthRect> rects;
  double max_area = 0.0;
};

StepOutcome expand_step_impl(const DomainIndex& dom, Corners& C, Axis axis, double snap) {
  StepOutcome out;
  std::vector<int> grown_sides;
  std::vector<GrowthRect> grown_rects;
  int m = C.n();
  for (int i = 0; i < m; ++i) {
    if (!side_matches_axis(C, i, axis) || C.len(i) <= snap) continue;
    GrowthRect g = grow_on_side(dom, C.side_a(i), C.side_b(i), snap);
    g.base_side = i;
    out.max_area = std::max(out.max_area, g.area());
    out.rects.push_back(g);
    if (!g.empty) {
      grown_sides.push_back(i);
      grown_rects.push_back(g);
    }
  }
  for (size_t s = 0; s < grown_rects.size(); ++s)
    for (size_t t = s + 1; t < grown_rects.size(); ++t)
      if (rects_overlap(
              rect_box(grown_rects[s], C.side_a(grown_sides[s]), C.side_b(grown_sides[s])),
              rect_box(grown_rects[t], C.side_a(grown_sides[t]), C.side_b(grown_sides[t])), snap))
        fail(ErrorKind::internal_invariant, "added rectangles overlap each other");
  assert_rects_disjoint_from_poly(C, grown_sides, grown_rects, snap);

  std::vector<Point> nv;
  size_t gi = 0;
  for (int i = 0; i < m; ++i) {
    nv.push_back(C.at(i));
    if (gi < grown_sides.size() && grown_sides[gi] == i) {
      nv.push_back(grown_rects[gi].p);
      nv.push_back(grown_rects[gi].q);
      ++gi;
    }
  }
  C.c = std::move(nv);
  C.clean();
  resolve_folds(dom, C, snap);
  star_cleanup(C, axis, snap);
  resolve_folds(dom, C, snap);
  C.clean();
  return out;
}

// Maximal straight monotone run of same-parity sides joined by 180 corners.
struct Run {
  int first_corner = 0;
  int side_count = 0;
};

std::vector<Run> collect_runs(const Corners& C, Axis axis, double snap) {
  std::vector<Run> runs;
  int m = C.n();
  std::vector<char> in_run(m, 0), seen(m, 0);
  for (int i = 0; i < m; ++i) in_run[i] = C.len(i) > snap && side_matches_axis(C, i, axis);
  for (int i = 0; i < m; ++i) {
    if (!in_run[i] || seen[i]) continue;
    int start = i;
    for (int guard = 0; guard < m; ++guard) {
      int p = C.mod(start - 1);
      if (!in_run[p] || seen[p] || C.code(start) != 180) break;
      start = p;
    }
    int count = 0, k = start;
    while (count < m && in_run[k] && !seen[k]) {
      seen[k] = 1;
      ++count;
      int nxt = C.mod(k + 1);
      if (!in_run[nxt] || C.code(k + 1) != 180) break;
      k = nxt;
    }
    runs.push_back({start, count});
  }
  return runs;
}

bool run_needs_recut(const DomainIndex& dom, const Corners& C, const Run& r, double snap) {
  for (int t = 0; t < r.side_count; ++t)
    if (C.len(r.first_corner + t) > 3.0 + snap) return true;
  for (int t = 1; t < r.side_count; ++t)
    if (dom.boundary_distance(C.at(r.first_corner + t)) > 20 * snap) return true;
  return false;
}

// Replace the interior corners of a straight run by cut corners at boundary
// witnesses so that every sub-side has length <= 3 and carries a witness.
void recut_run(const DomainIndex& dom, Corners& C, const Run& r, double snap) {
  Point P0 = C.at(r.first_corner);
  Point P1 = C.at(r.first_corner + r.side_count);
  double T = dist(P0, P1);
  Point u = axis_dir(P0, P1);
  auto contacts = boundary_contacts(dom, P0, P1, 10 * snap);
  std::vector<double> w;
  for (auto& [s, pt] : contacts) w.push_back(s);
  std::sort(w.begin(), w.end());

  std::vector<double> cuts;
  if (!w.empty()) {
    double t0 = 0;
    while (T - t0 > 2.0 + snap) {
      double cand = -1;
      for (double s : w)
        if (s > t0 + 20 * snap && s <= t0 + 2.0 && s < T - 20 * snap) cand = s;
      if (cand < 0)
        for (double s : w)
          if (s > t0 + 20 * snap && s <= t0 + 3.0 && s < T - 20 * snap) cand = s;
      if (cand < 0) {
        require(T - t0 <= 3.0 + snap, ErrorKind::internal_invariant,
                "witness gap longer than 3 in a straight run");
        break;
      }
      cuts.push_back(cand);
      t0 = cand;
    }
    if (!cuts.empty() && T - cuts.back() < 0.5) {
      double prev = cuts.size() >= 2 ? cuts[cuts.size() - 2] : 0.0;
      if (T - prev <= 3.0 + snap) cuts.pop_back();
    }
    if (!cuts.empty() && cuts.front() < 0.5) {
      double nxt = cuts.size() >= 2 ? cuts[1] : T;
      if (nxt <= 3.0 + snap) cuts.erase(cuts.begin());
    }
  } else {
    require(T <= 3.0 + snap, ErrorKind::internal_invariant,
            "unwitnessed straight run longer than 3");
  }

  std::vector<Point> nv;
  nv.push_back(P0);
  for (double s : cuts)
    nv.push_back(std::abs(u.x) > 0.5 ? Point{P0.x + u.x * s, P0.y} : Point{P0.x, P0.y + u.y * s});
  int m = C.n();
  for (int t = r.side_count; t <= m - 1; ++t) nv.push_back(C.at(r.first_corner + t));
  C.c = std::move(nv);
  C.clean();
}

void recut_axis(const DomainIndex& dom, Corners& C, Axis axis, double snap) {
  int guard = 4 * C.n() + 64;
  for (;;) {
    require(--guard > 0, ErrorKind::internal_invariant, "recut did not converge");
    auto runs = collect_runs(C, axis, snap);
    bool changed = false;
    for (auto& r : runs) {
      if (!run_needs_recut(dom, C, r, snap)) continue;
      recut_run(dom, C, r, snap);
      changed = true;
      break;
    }
    if (!changed) break;
  }
}

bool side_witnessed(const DomainIndex& dom, const Corners& C, int i, double snap) {
  return !boundary_contacts(dom, C.side_a(i), C.side_b(i), 10 * snap).empty();
}

// Grow rectangles on the remaining unwitnessed sides of the given axis (walls
// of the last step's rectangles).
void fix_unwitnessed(const DomainIndex& dom, Corners& C, Axis axis, double snap) {
  int guard = C.n() * 2 + 64;
  for (;;) {
    require(--guard > 0, ErrorKind::internal_invariant, "unwitnessed-side repair looped");
    bool changed = false;
    for (int i = 0; i < C.n(); ++i) {
      if (!side_matches_axis(C, i, axis) || C.len(i) <= snap) continue;
      if (side_witnessed(dom, C, i, snap)) continue;
      GrowthRect g = grow_on_side(dom, C.side_a(i), C.side_b(i), snap);
      if (g.empty) continue;
      require(g.height <= 3.0 + 100 * snap, ErrorKind::internal_invariant,
              "final rectangle slid further than 3");
      std::vector<Point> nv;
      for (int t = 0; t < C.n(); ++t) {
        nv.push_back(C.at(t));
        if (t == i) {
          nv.push_back(g.p);
          nv.push_back(g.q);
        }
      }
      C.c = std::move(nv);
      C.clean();
      resolve_folds(dom, C, snap);
      changed = true;
      break;
    }
    if (!changed) break;
  }
}

// Collinear corners that split a run into pieces one of which is unwitnessed
// get absorbed into their neighbor.
void merge_unwitnessed_splits(const DomainIndex& dom, Corners& C, double snap) {
  for (;;) {
    bool changed = false;
    for (int i = 0; i < C.n(); ++i) {
      if (C.len(i - 1) <= snap || C.len(i) <= snap) continue;
      if (C.code(i) != 180) continue;
      if (!side_witnessed(dom, C, i - 1, snap) || !side_witnessed(dom, C, i, snap)) {
        C.erase_corner(i);  // the following recut re-splits at witnesses
        changed = true;
        break;
      }
    }
    if (!changed) break;
  }
}

void finalize_polygon(const DomainIndex& dom, Corners& C, Axis grown_axis, double snap) {
  Axis other = grown_axis == Axis::horizontal ? Axis::vertical : Axis::horizontal;
  recut_axis(dom, C, other, snap);
  fix_unwitnessed(dom, C, other, snap);
  merge_unwitnessed_splits(dom, C, snap);
  recut_axis(dom, C, other, snap);
  recut_axis(dom, C, grown_axis, snap);
  merge_unwitnessed_splits(dom, C, snap);
  recut_axis(dom, C, other, snap);
  recut_axis(dom, C, grown_axis, snap);
  resolve_folds(dom, C, snap);
  C.clean();
}

DomainPolygon scale_domain(const DomainPolygon& dom, double f) {
  DomainPolygon out;
  for (auto& p : dom.vertices) out.vertices.push_back({p.x * f, p.y * f});
  return out;
}

// Nudge vertices off the unit-lattice lines so the seed never meets a
// degenerate incidence.
DomainPolygon perturb_off_lattice(const DomainPolygon& dom, double snap) {
  DomainPolygon out = dom;
  for (auto& p : out.vertices) {
    if (std::abs(p.x - std::round(p.x)) <= 4 * snap) p.x = std::round(p.x) + 16 * snap;
    if (std::abs(p.y - std::round(p.y)) <= 4 * snap) p.y = std::round(p.y) + 16 * snap;
  }
  return out;
}

CellGrid contained_cells(const DomainIndex& dom, double snap) {
  BBox box = dom.bbox();
  int64_t ox = (int64_t)std::floor(box.xmin) - 1;
  int64_t oy = (int64_t)std::floor(box.ymin) - 1;
  int nx = (int)(std::ceil(box.xmax) - (double)ox) + 2;
  int ny = (int)(std::ceil(box.ymax) - (double)oy) + 2;
  require((int64_t)nx * ny < ((int64_t)1 << 27), ErrorKind::scale_too_coarse,
          "lattice too fine for this domain");
  CellGrid g(ox, oy, nx, ny, 1.0);

  // cells near the boundary need the full containment test; everything else is
  // uniform per connected component
  CellGrid near(ox, oy, nx, ny, 1.0);
  for (int id = 0; id < dom.edge_count(); ++id) {
    Point a = dom.edge_a(id), b = dom.edge_b(id);
    int steps = std::max(1, (int)std::ceil(dist(a, b) / 0.5));
    for (int s = 0; s <= steps; ++s) {
      Point p = a + ((double)s / steps) * (b - a);
      int i, j;
      near.locate(p, i, j);
      for (int dj = -1; dj <= 1; ++dj)
        for (int di = -1; di <= 1; ++di)
          if (near.in_range(i + di, j + dj)) near.set(i + di, j + dj, true);
    }
  }
  CellGrid visited(ox, oy, nx, ny, 1.0);
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      if (near.get(i, j) || visited.get(i, j)) continue;
      bool inside = dom.classify(g.cell_center(i, j)) == Containment::inside;
      std::vector<std::pair<int, int>> stack{{i, j}};
      visited.set(i, j, true);
      while (!stack.empty()) {
        auto [ci, cj] = stack.back();
        stack.pop_back();
        if (inside) g.set(ci, cj, true);
        const int di[4] = {1, -1, 0, 0}, dj[4] = {0, 0, 1, -1};
        for (int k = 0; k < 4; ++k) {
          int ii = ci + di[k], jj = cj + dj[k];
          if (visited.in_range(ii, jj) && !near.get(ii, jj) && !visited.get(ii, jj)) {
            visited.set(ii, jj, true);
            stack.push_back({ii, jj});
          }
        }
      }
    }
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      if (!near.get(i, j)) continue;
      Point lo = g.corner(i, j);
      Point c00 = lo, c10{lo.x + 1, lo.y}, c11{lo.x + 1, lo.y + 1}, c01{lo.x, lo.y + 1};
      bool contained = true;
      for (Point c : {c00, c10, c11, c01})
        if (dom.classify(c) != Containment::inside) {
          contained = false;
          break;
        }
      if (contained) {
        BBox cb;
        cb.add(c00);
        cb.add(c11);
        for (int id : dom.edges_near(cb, 4 * snap)) {
          Point ea = dom.edge_a(id), eb = dom.edge_b(id);
          if (segments_intersect(ea, eb, c00, c10, snap) ||
              segments_intersect(ea, eb, c10, c11, snap) ||
              segments_intersect(ea, eb, c11, c01, snap) ||
              segments_intersect(ea, eb, c01, c00, snap) ||
              (ea.x > c00.x && ea.x < c11.x && ea.y > c00.y && ea.y < c11.y)) {
            contained = false;
            break;
          }
        }
      }
      if (contained) g.set(i, j, true);
    }
  return g;
}

Corners lattice_seed_unit(const DomainIndex& dom, Point x, double snap) {
  require(dom.classify(x) == Containment::inside, ErrorKind::input_rejection,
          "seed point is not inside the domain");
  double dx = dom.boundary_distance(x);
  require(dx > std::sqrt(2.0), ErrorKind::scale_too_coarse,
          "lattice step too coarse: d >= dist(x, boundary)/sqrt(2)");
  CellGrid cells = contained_cells(dom, snap);
  int i, j;
  cells.locate(x, i, j);
  require(cells.get(i, j), ErrorKind::scale_too_coarse,
          "no contained lattice square at the seed point");
  CellGrid comp = cells.component(i, j);
  require(comp.holes().count() == 0, ErrorKind::internal_invariant,
          "lattice seed component has holes");
  auto loops = comp.boundary_loops();
  require(loops.size() == 1, ErrorKind::internal_invariant,
          "lattice seed boundary is not a single loop");
  Corners C;
  C.snap = snap;
  C.c = loops[0];
  return C;
}

}  // namespace

std::vector<std::pair<double, Point>> boundary_contacts(const DomainIndex& dom, Point a, Point b,
                                                        double tol) {
  std::vector<std::pair<double, Point>> out;
  double L = dist(a, b);
  if (L <= tol) {
    if (dom.boundary_distance(a) <= tol) out.push_back({0.0, a});
    return out;
  }
  Point u = (1.0 / L) * (b - a);
  BBox q;
  q.add(a);
  q.add(b);
  auto push = [&](double s, Point p) { out.push_back({std::clamp(s, 0.0, L), p}); };
  for (int id : dom.edges_near(q, 4 * tol)) {
    Point p1 = dom.edge_a(id), p2 = dom.edge_b(id);
    for (Point p : {p1, p2}) {
      double s = std::clamp(dot(p - a, u), 0.0, L);
      if (dist(a + s * u, p) <= tol) push(s, p);
    }
    for (auto [s0, p] : {std::pair<double, Point>{0.0, a}, {L, b}}) {
      Point qq = closest_on_segment(p, p1, p2);
      if (dist(qq, p) <= tol) push(s0, qq);
    }
    Point d2 = p2 - p1;
    double n2 = norm(d2);
    double denom = cross(u, d2);
    if (std::abs(denom) > 1e-9 * n2) {
      double s = cross(p1 - a, d2) / denom;
      double t = cross(p1 - a, u) / denom;
      if (s >= -tol && s <= L + tol && t >= -tol / n2 && t <= 1 + tol / n2)
        push(s, a + std::clamp(s, 0.0, L) * u);
    } else if (std::abs(cross(u, p1 - a)) <= tol) {
      // collinear overlap: the whole span is in contact; emit witnesses at
      // unit spacing so downstream re-cuts always find one nearby
      double s1 = dot(p1 - a, u), s2 = dot(p2 - a, u);
      double lo = std::clamp(std::min(s1, s2), 0.0, L);
      double hi = std::clamp(std::max(s1, s2), 0.0, L);
      int steps = std::max(1, (int)std::ceil(hi - lo));
      for (int s = 0; s <= steps; ++s) {
        double sv = lo + (hi - lo) * s / steps;
        push(sv, a + sv * u);
      }
    }
  }
  std::sort(out.begin(), out.end(), [](auto& x, auto& y) { return x.first < y.first; });
  std::vector<std::pair<double, Point>> dedup;
  for (auto& c : out)
    if (dedup.empty() || c.first - dedup.back().first > tol) dedup.push_back(c);
  return dedup;
}

VHPolygon lattice_seed(const DomainPolygon& dom, double d, Point x) {
  Tolerance tol = Tolerance::for_bbox(dom.bbox());
  dom.validate(tol);
  require(d > 0 && std::isfinite(d), ErrorKind::input_rejection, "lattice step must be positive");
  DomainPolygon dom_u = scale_domain(dom, 1.0 / d);
  Tolerance tol_u = Tolerance::for_bbox(dom_u.bbox());
  dom_u = perturb_off_lattice(dom_u, tol_u.snap);
  DomainIndex idx(dom_u, tol_u);
  Corners C = lattice_seed_unit(idx, {x.x / d, x.y / d}, tol_u.snap);
  std::vector<Point> scaled;
  for (auto& p : C.c) scaled.push_back({p.x * d, p.y * d});
  return canonicalize(scaled, tol);
}

GrowthRect grow_rectangle(const DomainIndex& dom, const VHPolygon& P, int k) {
  double snap = dom.tol().snap;
  require(P.side_len(k) > snap, ErrorKind::input_rejection,
          "grow_rectangle called on a zero-length side");
  GrowthRect g = grow_on_side(dom, P.side_a(k), P.side_b(k), snap);
  g.base_side = P.mod(k);
  return g;
}

std::pair<VHPolygon, std::vector<GrowthRect>> expand_step(const DomainIndex& dom,
                                                          const VHPolygon& P, Axis axis) {
  double snap = dom.tol().snap;
  Corners C = corners_from_vh(P, snap);
  StepOutcome oc = expand_step_impl(dom, C, axis, snap);
  return {vh_from_corners(C, dom.tol()), oc.rects};
}

InscribeResult inscribe(const DomainPolygon& dom, double d, Point x, bool validate_stages) {
  Tolerance tol = Tolerance::for_bbox(dom.bbox());
  dom.validate(tol);
  require(d > 0 && std::isfinite(d), ErrorKind::input_rejection, "invalid lattice step");

  InscribeResult R;
  R.d = d;
  DomainPolygon dom_u = scale_domain(dom, 1.0 / d);
  Tolerance tol_u = Tolerance::for_bbox(dom_u.bbox());
  dom_u = perturb_off_lattice(dom_u, tol_u.snap);
  R.domain_unit = dom_u;
  R.tol_unit = tol_u;
  double snap = tol_u.snap;
  DomainIndex idx(dom_u, tol_u);

  Corners C = lattice_seed_unit(idx, {x.x / d, x.y / d}, snap);

  double max_steps = std::ceil(4.0 * dom_u.area()) + 2;
  Axis axis = Axis::horizontal;
  double prev_area = C.area();
  int step = 0;
  for (;;) {
    ++step;
    require(step <= (int)max_steps + 1, ErrorKind::internal_invariant,
            "inscription exceeded the area-argument step bound");
    StepOutcome oc = expand_step_impl(idx, C, axis, snap);
    double area_now = C.area();
    require(area_now >= prev_area - 1e-6, ErrorKind::internal_invariant,
            "polygon area decreased during growth");
    prev_area = area_now;
    InscribeStage st;
    st.axis = axis;
    st.rects = oc.rects;
    st.max_rect_area = oc.max_area;
    st.polygon_area = area_now;
    st.snapshot = vh_from_corners(C, tol_u);
    if (validate_stages) {
      auto viol = validate_vh(st.snapshot, 1.0, 0.5, tol_u, 64);
      require(viol.empty(), ErrorKind::internal_invariant,
              "stage polygon left VH(1,1/2) at step " + std::to_string(step));
    }
    R.trace.stages.push_back(std::move(st));
    if (oc.max_area < 0.25) {
      R.trace.stop_step = step;
      break;
    }
    axis = axis == Axis::horizontal ? Axis::vertical : Axis::horizontal;
  }

  finalize_polygon(idx, C, axis, snap);
  R.polygon_unit = vh_from_corners(C, tol_u);

  int m = R.polygon_unit.n();
  R.side_witnesses.resize(m);
  for (int k = 0; k < m; ++k) {
    Point a = R.polygon_unit.side_a(k), b = R.polygon_unit.side_b(k);
    for (auto& [s, p] : boundary_contacts(idx, a, b, 20 * snap)) R.side_witnesses[k].push_back(p);
    require(!R.side_witnesses[k].empty(), ErrorKind::internal_invariant,
            "final side " + std::to_string(k) + " carries no boundary point");
  }

  std::vector<Point> scaled;
  for (auto& p : R.polygon_unit.v) scaled.push_back({p.x * d, p.y * d});
  R.polygon.v = std::move(scaled);
  R.polygon.first_vertical = R.polygon_unit.first_vertical;
  return R;
}

}  // namespace decomp
