#include "decomp/vh_polygon.hpp"

#include <algorithm>
#include <cmath>

namespace decomp {

Point VHPolygon::side_dir(int k) const {
  Point d = side_b(k) - side_a(k);
  double L = norm(d);
  require(L > 0, ErrorKind::internal_invariant, "side_dir on zero-length side");
  return (1.0 / L) * d;
}

BBox VHPolygon::bbox() const {
  BBox b;
  for (auto& p : v) b.add(p);
  return b;
}

Containment VHPolygon::classify(Point p, double snap) const {
  // Crossing parity ignores doubled slit edges (they cancel), so inside/outside
  // classification stays correct; points near any edge report boundary.
  return point_in_polygon(p, v, snap);
}

Loop VHPolygon::boundary_loop() const {
  Loop lp;
  int m = n();
  for (int k = 0; k < m; ++k) {
    if (dist(side_a(k), side_b(k)) > 0)
      lp.prims.push_back(Primitive::make_segment(side_a(k), side_b(k), k));
  }
  return lp;
}

void VHPolygon::assert_parity(double snap) const {
  int m = n();
  require(m >= 4 && m % 2 == 0, ErrorKind::internal_invariant, "VH polygon needs even >=4 sides");
  for (int k = 0; k < m; ++k) {
    Point a = side_a(k), b = side_b(k);
    if (side_vertical(k))
      require(std::abs(a.x - b.x) <= snap, ErrorKind::internal_invariant,
              "vertical side " + std::to_string(k) + " is not vertical");
    else
      require(std::abs(a.y - b.y) <= snap, ErrorKind::internal_invariant,
              "horizontal side " + std::to_string(k) + " is not horizontal");
  }
}

namespace {

int turn_code(Point din, Point dout) {
  double c = cross(din, dout);
  double d = dot(din, dout);
  if (c > 0.5) return 90;
  if (c < -0.5) return 270;
  return d > 0 ? 180 : 360;
}

Point axis_dir(Point a, Point b) {
  Point d = b - a;
  if (std::abs(d.x) >= std::abs(d.y)) return {d.x > 0 ? 1.0 : -1.0, 0.0};
  return {0.0, d.y > 0 ? 1.0 : -1.0};
}

}  // namespace

int angle_code(const VHPolygon& P, int k, double snap) {
  int back = 0, fwd = 0;
  int i = k - 1;
  while (P.side_zero(i, snap)) {
    --i;
    if (++back > 1)
      fail(ErrorKind::input_rejection, "adjacent zero-length sides at vertex " + std::to_string(k));
  }
  int j = k;
  while (P.side_zero(j, snap)) {
    ++j;
    if (++fwd > 1)
      fail(ErrorKind::input_rejection, "adjacent zero-length sides at vertex " + std::to_string(k));
  }
  require(back + fwd <= 1, ErrorKind::input_rejection, "adjacent zero-length sides");
  Point din = axis_dir(P.side_a(i), P.side_b(i));
  Point dout = axis_dir(P.side_a(j), P.side_b(j));
  return turn_code(din, dout);
}

namespace {

struct ProbeCtx {
  const VHPolygon& P;
  const Tolerance& tol;
  double beta;
  int max_probe;
};

// Probe the open patch origin + s*u + t*w, s in (0,lu), t in (0,lw), on a grid
// of resolution beta/16. Points within snap of skip_vertex are exempt.
bool patch_inside(const ProbeCtx& c, Point origin, Point u, Point w, double lu, double lw,
                  Point skip_vertex, bool has_skip, std::string& why) {
  double step = c.beta / 16.0;
  double margin = c.tol.snap * 4;
  int nu = std::max(2, std::min(c.max_probe, (int)std::ceil(lu / step)));
  int nw = std::max(2, std::min(c.max_probe, (int)std::ceil(lw / step)));
  for (int iu = 0; iu <= nu; ++iu) {
    for (int iw = 0; iw <= nw; ++iw) {
      double s = lu * iu / nu, t = lw * iw / nw;
      s = lu > 2 * margin ? std::clamp(s, margin, lu - margin) : lu / 2;
      t = lw > 2 * margin ? std::clamp(t, margin, lw - margin) : lw / 2;
      Point p = origin + s * u + t * w;
      if (has_skip && dist(p, skip_vertex) <= c.tol.snap * 8) continue;
      if (c.P.classify(p, c.tol.snap) != Containment::inside) {
        why = "probe (" + format_g17(p.x) + ", " + format_g17(p.y) + ") not interior";
        return false;
      }
    }
  }
  return true;
}

bool segment_inside(const ProbeCtx& c, Point a, Point b, bool skip_a, std::string& why) {
  double L = dist(a, b);
  double margin = c.tol.snap * 4;
  double step = c.beta / 16.0;
  int n = std::max(2, std::min(c.max_probe, (int)std::ceil(L / step)));
  Point d = (1.0 / L) * (b - a);
  for (int i = 0; i <= n; ++i) {
    double s = L * i / n;
    s = L > 2 * margin ? std::clamp(s, margin, L - margin) : L / 2;
    if (skip_a && s <= c.tol.snap * 8) continue;
    Point p = a + s * d;
    if (c.P.classify(p, c.tol.snap) != Containment::inside) {
      why = "probe (" + format_g17(p.x) + ", " + format_g17(p.y) + ") not interior";
      return false;
    }
  }
  return true;
}

}  // namespace

std::vector<VHViolation> validate_vh(const VHPolygon& P, double alpha, double beta,
                                     const Tolerance& tol, int max_probe_per_item) {
  std::vector<VHViolation> out;
  int m = P.n();
  double snap = tol.snap;
  ProbeCtx ctx{P, tol, beta, max_probe_per_item};

  // items 1-2: alternating parity
  for (int k = 0; k < m; ++k) {
    Point a = P.side_a(k), b = P.side_b(k);
    bool ok = P.side_vertical(k) ? std::abs(a.x - b.x) <= snap : std::abs(a.y - b.y) <= snap;
    if (!ok) out.push_back({P.side_vertical(k) ? 1 : 2, k, "side not axis-aligned to its parity"});
  }
  // item 3: no two adjacent zero sides
  for (int k = 0; k < m; ++k)
    if (P.side_zero(k, snap) && P.side_zero(k + 1, snap))
      out.push_back({3, k, "adjacent zero-length sides"});
  if (!out.empty()) return out;  // angle bookkeeping requires items 1-3

  // item 4: side lengths
  for (int k = 0; k < m; ++k)
    if (P.side_len(k) > alpha + snap)
      out.push_back({4, k, "length " + format_g17(P.side_len(k)) + " exceeds alpha"});

  std::vector<int> code(m);
  for (int k = 0; k < m; ++k) code[k] = angle_code(P, k, snap);

  // item 5: inward rectangle of depth beta behind every side
  for (int k = 0; k < m; ++k) {
    std::string why;
    if (P.side_len(k) > snap) {
      Point d = P.side_dir(k);
      Point inward = perp_left(d);
      if (!patch_inside(ctx, P.side_a(k), d, inward, P.side_len(k), beta, {}, false, why))
        out.push_back({5, k, why});
    } else {
      // zero side: the rectangle degenerates to an inward probe segment.
      // 180: inward normal of the collinear run; 360: continuation past the tip.
      int i = k - 1;
      while (P.side_zero(i, snap)) --i;
      Point din = axis_dir(P.side_a(i), P.side_b(i));
      Point dir = code[k] == 360 ? din : perp_left(din);
      if (!segment_inside(ctx, P.side_a(k), P.side_a(k) + beta * dir, true, why))
        out.push_back({5, k, why});
    }
  }

  // items 6-8 per geometric corner (zero sides tested at their first vertex)
  for (int k = 0; k < m; ++k) {
    if (P.side_zero(k - 1, snap)) continue;
    std::string why;
    int i = k - 1;
    int j = k;
    while (P.side_zero(j, snap)) ++j;
    Point din = axis_dir(P.side_a(i), P.side_b(i));
    Point dout = axis_dir(P.side_a(j), P.side_b(j));
    Point vk = P.vert(k);
    switch (code[k]) {
      case 90:
        break;
      case 180: {
        Point inward = perp_left(din);
        if (!segment_inside(ctx, vk, vk + beta * inward, true, why)) out.push_back({6, k, why});
        break;
      }
      case 270: {
        // boundary rays at vk are -din and dout (one horizontal, one vertical);
        // the probe square sits in the quadrant avoiding both
        Point r1 = -1.0 * din, r2 = dout;
        double sx = -(r1.x + r2.x);
        double sy = -(r1.y + r2.y);
        if (!patch_inside(ctx, vk, Point{sx, 0}, Point{0, sy}, beta, beta, vk, true, why))
          out.push_back({7, k, why});
        break;
      }
      case 360: {
        // two adjoint squares on the far side of the slit tip
        Point c = din;
        if (!patch_inside(ctx, vk, c, perp_left(c), beta, beta, vk, true, why))
          out.push_back({8, k, why});
        else if (!patch_inside(ctx, vk, c, perp_right(c), beta, beta, vk, true, why))
          out.push_back({8, k, why});
        break;
      }
      default:
        out.push_back({1, k, "unexpected angle code"});
    }
  }
  return out;
}

VHPolygon canonicalize(const std::vector<Point>& raw, const Tolerance& tol) {
  require(raw.size() >= 3, ErrorKind::input_rejection, "canonicalize: need >= 3 vertices");
  double snap = tol.snap;

  // collapse consecutive duplicates (slits of the form A,B,A survive)
  std::vector<Point> pts;
  for (auto& p : raw)
    if (pts.empty() || dist(pts.back(), p) > snap) pts.push_back(p);
  while (pts.size() > 1 && dist(pts.front(), pts.back()) <= snap) pts.pop_back();
  require(pts.size() >= 3, ErrorKind::input_rejection, "canonicalize: degenerate input");

  int n = (int)pts.size();
  std::vector<bool> vert(n);
  for (int k = 0; k < n; ++k) {
    Point a = pts[k], b = pts[(k + 1) % n];
    bool v = std::abs(a.x - b.x) <= snap;
    bool h = std::abs(a.y - b.y) <= snap;
    require(v || h, ErrorKind::input_rejection,
            "canonicalize: side " + std::to_string(k) + " is not axis-parallel");
    vert[k] = v && !h;
  }

  // Pure relabeling first: if some start index alternates all the way around,
  // no zero side is needed.
  if (n % 2 == 0) {
    bool alternates = true;
    for (int k = 0; k + 1 < n; ++k)
      if (vert[k] == vert[k + 1]) {
        alternates = false;
        break;
      }
    if (alternates) {
      VHPolygon P;
      P.first_vertical = vert[0];
      P.v = pts;
      P.assert_parity(snap);
      return P;
    }
  }

  VHPolygon P;
  P.first_vertical = vert[0];
  bool want_vertical = vert[0];
  for (int k = 0; k < n; ++k) {
    if (vert[k] != want_vertical) {
      P.v.push_back(pts[k]);  // zero side in the expected parity slot
      want_vertical = !want_vertical;
    }
    P.v.push_back(pts[k]);
    want_vertical = !want_vertical;
  }
  if (P.n() % 2 != 0) P.v.push_back(pts[0]);  // parity seam at the wrap-around
  P.assert_parity(snap);
  return P;
}

ReducedPoly reduce(const VHPolygon& P, double snap) {
  // Corner list: 180-degree vertices dropped, collinear runs merged. Slit tips
  // appear once, with angle code 360 and geometrically overlapping sides.
  ReducedPoly R;
  int m = P.n();
  for (int k = 0; k < m; ++k) {
    if (P.side_zero(k - 1, snap)) continue;  // duplicate vertex of a zero side
    int code = angle_code(P, k, snap);
    if (code == 180) continue;
    R.v.push_back(P.vert(k));
    R.code.push_back(code);
  }
  int rn = (int)R.v.size();
  require(rn >= 2, ErrorKind::internal_invariant, "reduce: degenerate polygon");
  R.len.resize(rn);
  for (int k = 0; k < rn; ++k) {
    double L = dist(R.v[k], R.v[(k + 1) % rn]);
    R.len[k] = L <= snap ? 0.0 : L;
  }
  return R;
}

Point ReducedPoly::side_dir(int k) const {
  Point d = side_b(k) - side_a(k);
  double L = norm(d);
  require(L > 0, ErrorKind::internal_invariant, "reduced side_dir on zero side");
  return (1.0 / L) * d;
}

}  // namespace decomp
