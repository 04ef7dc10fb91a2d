#include "decomp/cuts.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace decomp {

namespace {

std::vector<std::pair<double, Point>> side_witnesses(const DecompGeometry& G, int k) {
  return boundary_contacts(*G.idx, G.R.side_a(k), G.R.side_b(k), 20 * G.tol.snap);
}

std::optional<std::pair<double, Point>> nearest_witness(
    const std::vector<std::pair<double, Point>>& ws, double target, double lo, double hi) {
  std::optional<std::pair<double, Point>> best;
  for (auto& w : ws) {
    if (w.first < lo || w.first > hi) continue;
    if (!best || std::abs(w.first - target) < std::abs(best->first - target)) best = w;
  }
  return best;
}

}  // namespace

void DecompGeometry::build_boundary_param() {
  int n = R.n();
  bd_cum.assign(n + 1, 0.0);
  for (int k = 0; k < n; ++k) bd_cum[k + 1] = bd_cum[k] + R.len[k];
  bd_total = bd_cum[n];
}

double DecompGeometry::boundary_coord(int k, Point p) const {
  double along = R.len[k] > 0 ? dot(p - R.side_a(k), R.side_dir(k)) : 0.0;
  return bd_cum[k] + std::clamp(along, 0.0, R.len[k]);
}

std::vector<Cut> make_cuts_region1(const DecompGeometry& G) {
  std::vector<Cut> cuts;
  const ReducedPoly& R = G.R;
  double eps = G.eps;
  double snap = G.tol.snap;
  int n = R.n();

  auto project_on_side = [&](int k, double s) {
    Point a = R.side_a(k);
    Point u = R.side_dir(k);
    return std::abs(u.x) > 0.5 ? Point{a.x + u.x * s, a.y} : Point{a.x, a.y + u.y * s};
  };
  auto snap_inner = [&](Point target, double tol) {
    auto [prim, z] = G.oidx->nearest_prim(target);
    require(dist(z, target) <= tol, ErrorKind::internal_invariant,
            "cut target misses the offset curve by " + format_g17(dist(z, target)));
    CarrierRef ref;
    ref.kind = CarrierRef::offset_curve;
    ref.index = prim;
    ref.p = z;
    return ref;
  };
  auto add_perp_cut = [&](int k, double s, CutKind kind) {
    Point p = project_on_side(k, s);
    Point inward = perp_left(R.side_dir(k));
    Cut c;
    c.kind = kind;
    c.inner = snap_inner(p + eps * inward, 1e-3 * eps);
    c.outer = {CarrierRef::boundary, k, p};
    c.pts = {p, c.inner.p};
    cuts.push_back(c);
  };

  for (int k = 0; k < n; ++k) {
    if (R.side_zero(k)) continue;
    double L = R.len[k];
    int c0 = R.code[k], c1 = R.code[(k + 1) % n];
    auto ws = side_witnesses(G, k);

    if (L >= 6.0 + 4.0 * eps) {
      int kc = (int)std::floor((L - 4.0 * eps) / 6.0);
      double last = -1e9;
      for (int i = 1; i <= kc; ++i) {
        double target = L * i / (kc + 1);
        auto w = nearest_witness(ws, target, 2 * eps, L - 2 * eps);
        require(w.has_value(), ErrorKind::internal_invariant,
                "long side lacks a boundary witness near its cut target");
        if (w->first - last < 4 * eps) continue;  // witnesses collapsed together
        last = w->first;
        add_perp_cut(k, w->first, CutKind::long_side);
      }
      continue;
    }
    if (c0 == 90 && c1 == 90) {
      require(!ws.empty(), ErrorKind::internal_invariant,
              "witness missing on a side with two 90-degree ends");
      auto w = nearest_witness(ws, L / 2, 0.0, L);
      Point p = project_on_side(k, w->first);
      Point inward = perp_left(R.side_dir(k));
      Cut c;
      c.kind = CutKind::short_side;
      // z is the middle of the parallel interval at depth eps
      c.inner = snap_inner(project_on_side(k, L / 2) + eps * inward, 1e-3 * eps);
      c.outer = {CarrierRef::boundary, k, p};
      c.pts = {p, c.inner.p};
      cuts.push_back(c);
      continue;
    }
    if (c0 == 270 && c1 == 270) {
      require(!ws.empty(), ErrorKind::internal_invariant,
              "witness missing on a side with two 270-degree ends");
      auto w = nearest_witness(ws, L / 2, 0.0, L);
      add_perp_cut(k, w->first, CutKind::double_270);
      continue;
    }
  }

  // continuation cuts at slit tips
  for (int v = 0; v < n; ++v) {
    if (R.code[v] != 360) continue;
    Point p = R.v[v];
    require(G.idx->boundary_distance(p) <= 40 * snap, ErrorKind::internal_invariant,
            "slit tip is not on the domain boundary");
    Point din = R.side_dir((v - 1 + n) % n);
    Cut c;
    c.kind = CutKind::vertex_360;
    c.inner = snap_inner(p + eps * din, 1e-3 * eps);
    c.outer = {CarrierRef::boundary, (v - 1 + n) % n, p};
    c.pts = {p, c.inner.p};
    cuts.push_back(c);
  }
  return cuts;
}

double regular_check(const DecompGeometry& G, Cut& cut, double eta_tilde, int samples,
                     uint64_t seed) {
  // Sample x on the cut; y on the boundary, the offset curve, and the cut
  // itself within Euclidean distance eps/36 (pairs separated inside the
  // polygon are skipped: their internal distance exceeds the rule's radius).
  // Certified paths run along the cut and transfer to the carriers at its
  // endpoints.
  const double eps = G.eps;
  const double radius = eps / 36.0;
  double worst = 1.0;
  Rng rng(seed);

  std::vector<double> leg(cut.pts.size() - 1);
  double cut_len = 0;
  for (size_t i = 0; i + 1 < cut.pts.size(); ++i) {
    leg[i] = dist(cut.pts[i], cut.pts[i + 1]);
    cut_len += leg[i];
  }
  auto cut_point = [&](double s) {
    for (size_t i = 0; i < leg.size(); ++i) {
      if (s <= leg[i] || i + 1 == leg.size()) {
        double f = leg[i] > 0 ? std::clamp(s / leg[i], 0.0, 1.0) : 0.0;
        return cut.pts[i] + f * (cut.pts[i + 1] - cut.pts[i]);
      }
      s -= leg[i];
    }
    return cut.pts.back();
  };

  double outer_bd = cut.outer.kind == CarrierRef::boundary
                        ? G.boundary_coord(cut.outer.index, cut.outer.p)
                        : -1.0;
  double inner_s = cut.inner.kind == CarrierRef::offset_curve
                       ? G.oidx->arc_coord(cut.inner.index, cut.inner.p)
                       : -1.0;
  // outer end position along the cut: pts.front() is the outer end
  auto bd_dist = [&](double a, double b) {
    double d = std::abs(a - b);
    return std::min(d, G.bd_total - d);
  };
  auto s1_dist = [&](double a, double b) {
    double d = std::abs(a - b);
    return std::min(d, G.S1.total_len - d);
  };

  int nx = std::max(4, samples);
  for (int ix = 0; ix <= nx; ++ix) {
    double sx = cut_len * ix / nx;
    Point x = cut_point(sx);
    double to_outer = sx;
    double to_inner = cut_len - sx;

    BBox q;
    q.add(x);
    q.inflate(radius);

    auto consider = [&](Point y, double path) {
      double d = dist(x, y);
      if (d > radius || d < 1e-12) return;
      if (!G.oidx->visible(x, y)) return;
      worst = std::max(worst, path / d);
    };

    if (outer_bd >= 0) {
      for (int k : G.oidx->side_grid.query(q)) {
        if (G.R.side_zero(k)) continue;
        for (int rep = 0; rep < 3; ++rep) {
          Point y = rep == 0 ? closest_on_segment(x, G.R.side_a(k), G.R.side_b(k))
                             : G.R.side_a(k) + rng.uniform() * (G.R.side_b(k) - G.R.side_a(k));
          consider(y, to_outer + bd_dist(outer_bd, G.boundary_coord(k, y)));
        }
      }
    }
    if (inner_s >= 0) {
      for (int pi : G.oidx->prim_grid.query(q)) {
        const Primitive& pr = G.S1.loop.prims[pi];
        for (int rep = 0; rep < 3; ++rep) {
          Point y = rep == 0 ? closest_on_prim(x, pr) : pr.point_at(rng.uniform());
          consider(y, to_inner + s1_dist(inner_s, G.oidx->arc_coord(pi, y)));
        }
      }
    }
    // pairs on the cut itself
    for (int iy = 0; iy <= nx; ++iy) {
      double sy = cut_len * iy / nx;
      if (std::abs(sy - sx) < 1e-12) continue;
      consider(cut_point(sy), std::abs(sy - sx));
    }
  }
  cut.max_ratio = worst;
  cut.regular = worst <= eta_tilde;
  return worst;
}

Core dyadic_core(const DecompGeometry& G, double cell_side, bool fine_rule,
                 double min_loop_length) {
  Core core;
  core.cell_side = cell_side;
  core.fine_rule = fine_rule;
  double eps = G.eps;
  double snap = G.tol.snap;

  BBox box;
  for (auto& p : G.R.v) box.add(p);
  int64_t ox = (int64_t)std::floor(box.xmin / cell_side) - 2;
  int64_t oy = (int64_t)std::floor(box.ymin / cell_side) - 2;
  int nx = (int)((int64_t)std::ceil(box.xmax / cell_side) - ox) + 3;
  int ny = (int)((int64_t)std::ceil(box.ymax / cell_side) - oy) + 3;
  require((int64_t)nx * ny < ((int64_t)1 << 26), ErrorKind::internal_invariant,
          "core raster too large; increase the cell side");
  CellGrid cells(ox, oy, nx, ny, cell_side);

  SegGrid side_grid(box, std::max(box.diag() / 512, 2 * eps + cell_side));
  for (int k = 0; k < G.R.n(); ++k)
    if (!G.R.side_zero(k)) side_grid.insert(k, G.R.side_a(k), G.R.side_b(k));
  double halfdiag = cell_side * std::sqrt(2.0) / 2.0;
  double reach = 2 * eps + 3 * cell_side;
  auto dist_to_boundary = [&](Point p) {
    BBox q;
    q.add(p);
    q.inflate(reach);
    double best = std::numeric_limits<double>::infinity();
    for (int k : side_grid.query(q))
      best = std::min(best, dist_point_segment(p, G.R.side_a(k), G.R.side_b(k)));
    return best;  // +inf means deeper than `reach`
  };

  // cells near the boundary are excluded up front (they are shallower than
  // 2 eps + diag under the coarse rule and handled pointwise under the fine
  // rule); everything else is classified per flood component
  CellGrid near(ox, oy, nx, ny, cell_side);
  for (int k = 0; k < G.R.n(); ++k) {
    if (G.R.side_zero(k)) continue;
    Point a = G.R.side_a(k), b = G.R.side_b(k);
    int steps = std::max(1, (int)std::ceil(dist(a, b) / (cell_side * 0.5)));
    for (int s = 0; s <= steps; ++s) {
      Point p = a + ((double)s / steps) * (b - a);
      int i, j;
      near.locate(p, i, j);
      for (int dj = -1; dj <= 1; ++dj)
        for (int di = -1; di <= 1; ++di)
          if (near.in_range(i + di, j + dj)) near.set(i + di, j + dj, true);
    }
  }
  CellGrid inside(ox, oy, nx, ny, cell_side);
  {
    CellGrid visited(ox, oy, nx, ny, cell_side);
    for (int j = 0; j < ny; ++j)
      for (int i = 0; i < nx; ++i) {
        if (near.get(i, j) || visited.get(i, j)) continue;
        bool in = point_in_polygon(cells.cell_center(i, j), G.R.v, snap) == Containment::inside;
        std::vector<std::pair<int, int>> stack{{i, j}};
        visited.set(i, j, true);
        while (!stack.empty()) {
          auto [ci, cj] = stack.back();
          stack.pop_back();
          if (in) inside.set(ci, cj, true);
          const int di[4] = {1, -1, 0, 0}, dj[4] = {0, 0, 1, -1};
          for (int t = 0; t < 4; ++t) {
            int ii = ci + di[t], jj = cj + dj[t];
            if (visited.in_range(ii, jj) && !near.get(ii, jj) && !visited.get(ii, jj)) {
              visited.set(ii, jj, true);
              stack.push_back({ii, jj});
            }
          }
        }
      }
  }

  size_t included = 0;
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      bool in_p;
      if (near.get(i, j)) {
        if (!fine_rule) continue;
        in_p = point_in_polygon(cells.cell_center(i, j), G.R.v, snap) == Containment::inside;
      } else {
        in_p = inside.get(i, j);
      }
      if (!in_p) continue;
      Point c = cells.cell_center(i, j);
      double dc = dist_to_boundary(c);
      bool take;
      if (fine_rule) {
        double dmax = std::min(dc + halfdiag, reach);
        Point lo = cells.corner(i, j);
        for (Point q : {lo, Point{lo.x + cell_side, lo.y},
                        Point{lo.x + cell_side, lo.y + cell_side}, Point{lo.x, lo.y + cell_side}})
          dmax = std::max(dmax, std::min(dist_to_boundary(q), reach));
        take = dmax > 2 * eps;
      } else {
        take = dc > 2 * eps + halfdiag + snap;
      }
      if (take) {
        cells.set(i, j, true);
        ++included;
      }
    }
  if (included == 0) return core;

  cells.or_with(cells.holes());

  // drop components too small for even one region-2 anchor
  CellGrid kept(ox, oy, nx, ny, cell_side);
  CellGrid seen(ox, oy, nx, ny, cell_side);
  bool any = false;
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      if (!cells.get(i, j) || seen.get(i, j)) continue;
      CellGrid comp = cells.component(i, j);
      seen.or_with(comp);
      auto loops = comp.boundary_loops();
      double outer_len = 0;
      for (auto& lp : loops) {
        double L = 0;
        for (size_t t = 0; t < lp.size(); ++t) L += dist(lp[t], lp[(t + 1) % lp.size()]);
        outer_len = std::max(outer_len, L);
      }
      if (outer_len >= min_loop_length) {
        kept.or_with(comp);
        any = true;
      }
    }
  if (!any) return core;

  core.cells = kept;
  core.loops = kept.boundary_loops();

  double hug = fine_rule ? eps / 8.0 : 2.5 * cell_side * std::sqrt(2.0) + eps / 8.0;
  for (auto& lp : core.loops)
    for (size_t t = 0; t < lp.size(); t += std::max<size_t>(1, lp.size() / 64))
      require(G.S2.loop.distance_to(lp[t]) <= hug + snap, ErrorKind::internal_invariant,
              "core boundary drifted from the deep offset curve");
  return core;
}

bool Core::contains(Point p) const {
  if (!cells) return false;
  int i, j;
  cells->locate(p, i, j);
  return cells->get(i, j);
}

std::vector<Cut> make_cuts_region2(const DecompGeometry& G, const Core& core) {
  std::vector<Cut> cuts;
  if (core.empty()) return cuts;
  double eps = G.eps;
  double snap = G.tol.snap;

  auto nearest_on_core = [&](Point p) {
    double best = std::numeric_limits<double>::infinity();
    Point bp{};
    for (auto& loop2 : core.loops) {
      int mm = (int)loop2.size();
      for (int t = 0; t < mm; ++t) {
        Point c = closest_on_segment(p, loop2[t], loop2[(t + 1) % mm]);
        double d = dist(p, c);
        if (d < best) {
          best = d;
          bp = c;
        }
      }
    }
    return bp;
  };
  auto crossings_on_segment = [&](Point a, Point b) {
    // smallest parameter along a->b where a core edge is crossed (1 if none)
    double best_t = 1.0;
    Point hit = b;
    for (auto& loop2 : core.loops) {
      int mm = (int)loop2.size();
      for (int t = 0; t < mm; ++t) {
        Point w0 = loop2[t], w1 = loop2[(t + 1) % mm];
        Point d1 = b - a, d2 = w1 - w0;
        double den = cross(d1, d2);
        if (std::abs(den) < 1e-14) continue;
        double s = cross(w0 - a, d2) / den;
        double u = cross(w0 - a, d1) / den;
        if (s > 1e-9 && s < best_t - 1e-12 && u >= -1e-9 && u <= 1 + 1e-9) {
          best_t = s;
          hit = a + s * d1;
        }
      }
    }
    return std::make_pair(best_t, hit);
  };

  for (size_t li = 0; li < core.loops.size(); ++li) {
    const auto& lp = core.loops[li];
    int m = (int)lp.size();
    std::vector<double> cum(m + 1, 0.0);
    for (int t = 0; t < m; ++t) cum[t + 1] = cum[t] + dist(lp[t], lp[(t + 1) % m]);
    double T = cum[m];
    if (T < 30.0) continue;
    int anchors = (int)std::floor(T / 30.0);
    double spacing = T / anchors;

    auto loop_point = [&](double s) {
      s = std::fmod(s, T);
      if (s < 0) s += T;
      int lo = 0, hi = m;
      while (lo + 1 < hi) {
        int mid = (lo + hi) / 2;
        if (cum[mid] <= s)
          lo = mid;
        else
          hi = mid;
      }
      double seg = dist(lp[lo], lp[(lo + 1) % m]);
      double f = seg > 0 ? (s - cum[lo]) / seg : 0.0;
      return lp[lo] + f * (lp[(lo + 1) % m] - lp[lo]);
    };

    for (int ai = 0; ai < anchors; ++ai) {
      double base = spacing * ai;
      Point z{}, s_pt{};
      int s_prim = -1;
      bool clean = false;
      for (int attempt = 0; attempt < 9 && !clean; ++attempt) {
        double off = (attempt % 2 == 1 ? 1.0 : -1.0) * std::ceil(attempt / 2.0);
        z = loop_point(base + off);
        auto [prim, sp] = G.oidx->nearest_prim(z);
        s_prim = prim;
        s_pt = sp;
        auto [tcross, hit] = crossings_on_segment(s_pt, z);
        (void)hit;
        clean = tcross >= 1.0 - 1e-9;
      }
      Cut c;
      c.kind = CutKind::region2;
      if (!clean) {
        // straight fallback ending at the first core hit from the curve side
        z = loop_point(base);
        auto [prim, sp] = G.oidx->nearest_prim(z);
        auto [tcross, hit] = crossings_on_segment(sp, z);
        (void)tcross;
        c.pts = {hit, sp};
        c.outer = {CarrierRef::core_boundary, (int)li, hit};
        c.inner = {CarrierRef::offset_curve, prim, sp};
        cuts.push_back(c);
        continue;
      }
      double dsz = dist(s_pt, z);
      if (core.fine_rule) {
        require(dsz > 7.0 / 8.0 * eps - 1e-9 && dsz <= eps + 1e-9, ErrorKind::internal_invariant,
                "region-2 anchor distance out of the paper bounds: " + format_g17(dsz));
      } else {
        require(dsz >= eps - 1e-9, ErrorKind::internal_invariant,
                "region-2 anchor closer than eps to the offset curve");
      }
      Point r = 0.5 * (s_pt + z);
      Point q = nearest_on_core(r);
      if (dist(q, z) <= 100 * snap) {
        c.pts = {z, s_pt};  // the elbow degenerates: nearest core point is z itself
        c.outer = {CarrierRef::core_boundary, (int)li, z};
      } else {
        if (core.fine_rule) {
          require(dist(r, q) > 3.0 / 8.0 * eps - 1e-9, ErrorKind::internal_invariant,
                  "region-2 elbow too close to the core");
          require(dot(s_pt - r, q - r) < 0, ErrorKind::internal_invariant,
                  "region-2 cut bend is not obtuse");
        }
        c.pts = {q, r, s_pt};
        c.outer = {CarrierRef::core_boundary, (int)li, q};
      }
      c.inner = {CarrierRef::offset_curve, s_prim, s_pt};
      cuts.push_back(c);
    }
  }
  return cuts;
}

}  // namespace decomp
