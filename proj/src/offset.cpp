#include "decomp/offset.hpp"
#include <cstdio>
#include <cstdlib>

#include <algorithm>
#include <cmath>
#include <limits>

namespace decomp {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kTwoPi = 2.0 * kPi;

struct Cand {
  Primitive prim;
  int anchor;
};

void side_stadium(const ReducedPoly& R, int k, double eps, std::vector<Cand>& out) {
  Point a = R.side_a(k), b = R.side_b(k);
  Point d = R.side_dir(k);
  Point nl = perp_left(d);
  out.push_back({Primitive::make_segment(a + eps * nl, b + eps * nl, k), k});
  out.push_back({Primitive::make_segment(a - eps * nl, b - eps * nl, k), k});
  double ad = angle_of(d);
  out.push_back(
      {Primitive::make_arc(a, eps, norm_angle(ad + kPi / 2), norm_angle(ad - kPi / 2), true, k),
       k});
  out.push_back(
      {Primitive::make_arc(b, eps, norm_angle(ad - kPi / 2), norm_angle(ad + kPi / 2), true, k),
       k});
}

void circle_line_hits(Point c, double r, Point p0, Point dir, std::vector<double>& us) {
  // |p0 + u*dir - c|^2 = r^2
  double A = norm2(dir);
  if (A <= 0) return;
  Point f = p0 - c;
  double B = 2 * dot(f, dir);
  double C = norm2(f) - r * r;
  double disc = B * B - 4 * A * C;
  double scale = std::max({std::abs(p0.x), std::abs(p0.y), std::abs(c.x), std::abs(c.y), r, 1.0});
  if (disc < 0 && disc > -1e-10 * (B * B + std::abs(4 * A * C)) - 1e-12 * 4 * A * r * scale)
    disc = 0;
  if (disc < 0) return;
  double sq = std::sqrt(disc);
  us.push_back((-B - sq) / (2 * A));
  us.push_back((-B + sq) / (2 * A));
}

void clip_segment_breaks(const Primitive& seg, Point w0, Point w1, double eps,
                         std::vector<double>& ts) {
  Point d = w1 - w0;
  double L = norm(d);
  Point sd = seg.b - seg.a;
  if (L > 0) {
    Point n = perp_left((1.0 / L) * d);
    for (double s : {+1.0, -1.0}) {
      Point p0 = w0 + (s * eps) * n;
      double denom = cross(sd, d);
      if (std::abs(denom) > 1e-14 * L * norm(sd)) ts.push_back(cross(p0 - seg.a, d) / denom);
    }
  }
  circle_segment_hits(w0, eps, seg.a, seg.b, ts);
  circle_segment_hits(w1, eps, seg.a, seg.b, ts);
}

void clip_arc_breaks(const Primitive& arc, Point w0, Point w1, double eps,
                     std::vector<double>& angs) {
  Point d = w1 - w0;
  double L = norm(d);
  if (L > 0) {
    Point n = perp_left((1.0 / L) * d);
    for (double s : {+1.0, -1.0}) {
      Point p0 = w0 + (s * eps) * n;
      std::vector<double> us;
      circle_line_hits(arc.center, arc.radius, p0, d, us);
      for (double u : us) angs.push_back(angle_of((p0 + u * d) - arc.center));
    }
  }
  std::vector<Point> hits;
  circle_circle_hits(arc.center, arc.radius, w0, eps, hits);
  circle_circle_hits(arc.center, arc.radius, w1, eps, hits);
  for (Point h : hits) angs.push_back(angle_of(h - arc.center));
}

struct Interval {
  double lo, hi;
  int anchor;
};

void union_intervals(std::vector<Interval>& iv, double tol) {
  std::sort(iv.begin(), iv.end(), [](const Interval& a, const Interval& b) {
    return a.lo < b.lo || (a.lo == b.lo && a.hi < b.hi);
  });
  std::vector<Interval> out;
  for (auto& x : iv) {
    if (!out.empty() && x.lo <= out.back().hi + tol) {
      out.back().hi = std::max(out.back().hi, x.hi);
      out.back().anchor = std::min(out.back().anchor, x.anchor);
    } else {
      out.push_back(x);
    }
  }
  iv = std::move(out);
}

}  // namespace

void OffsetCurve::build_cum() {
  cum_len.assign(loop.prims.size() + 1, 0.0);
  for (size_t i = 0; i < loop.prims.size(); ++i)
    cum_len[i + 1] = cum_len[i] + loop.prims[i].length();
  total_len = cum_len.back();
}

double OffsetCurve::along_dist(int pi, double ti, int pj, double tj) const {
  double si = cum_len[pi] + ti * loop.prims[pi].length();
  double sj = cum_len[pj] + tj * loop.prims[pj].length();
  double d = std::abs(si - sj);
  return std::min(d, total_len - d);
}

OffsetCurve inner_offset(const ReducedPoly& R, double eps, const Tolerance& tol) {
  require(eps > 0 && std::isfinite(eps), ErrorKind::input_rejection,
          "offset depth must be positive");
  double snap = tol.snap;
  double cliptol = std::max(10 * snap, 1e-7 * eps);
  int n = R.n();

  BBox box;
  for (auto& p : R.v) box.add(p);
  box.inflate(2 * eps + 1);
  SegGrid grid(box, std::max(box.diag() / 512, 2 * eps));
  for (int k = 0; k < n; ++k)
    if (!R.side_zero(k)) grid.insert(k, R.side_a(k), R.side_b(k));

  std::vector<Cand> cands;
  for (int k = 0; k < n; ++k)
    if (!R.side_zero(k)) side_stadium(R, k, eps, cands);

  std::vector<Primitive> pieces;
  for (auto& cand : cands) {
    const Primitive& pr = cand.prim;
    BBox qb = pr.bbox();
    qb.inflate(2 * eps);
    auto near = grid.query(qb);
    auto forbidden_at = [&](Point mid) {
      for (int s : near) {
        if (s == cand.anchor) continue;
        if (dist_point_segment(mid, R.side_a(s), R.side_b(s)) < eps - cliptol) return true;
      }
      return point_in_polygon(mid, R.v, snap) != Containment::inside;
    };

    if (pr.kind == PrimKind::segment) {
      std::vector<double> ts{0.0, 1.0};
      for (int s : near) {
        if (s == cand.anchor) continue;
        clip_segment_breaks(pr, R.side_a(s), R.side_b(s), eps, ts);
      }
      std::sort(ts.begin(), ts.end());
      double len = pr.length();
      for (size_t i = 0; i + 1 < ts.size(); ++i) {
        double t0 = std::clamp(ts[i], 0.0, 1.0), t1 = std::clamp(ts[i + 1], 0.0, 1.0);
        if ((t1 - t0) * len <= cliptol) continue;
        if (forbidden_at(pr.point_at(0.5 * (t0 + t1)))) continue;
        pieces.push_back(Primitive::make_segment(pr.point_at(t0), pr.point_at(t1), cand.anchor));
      }
    } else {
      std::vector<double> angs;
      for (int s : near) {
        if (s == cand.anchor) continue;
        clip_arc_breaks(pr, R.side_a(s), R.side_b(s), eps, angs);
      }
      double sweep = ccw_sweep(pr.a0, pr.a1);
      std::vector<double> offs{0.0, sweep};
      for (double a : angs) {
        double off = norm_angle(a - pr.a0);
        if (off <= sweep) offs.push_back(off);
      }
      std::sort(offs.begin(), offs.end());
      double angtol = cliptol / eps;
      for (size_t i = 0; i + 1 < offs.size(); ++i) {
        double o0 = offs[i], o1 = offs[i + 1];
        if (o1 - o0 <= angtol) continue;
        double am = pr.a0 + 0.5 * (o0 + o1);
        if (forbidden_at(pr.center + Point{eps * std::cos(am), eps * std::sin(am)})) continue;
        pieces.push_back(Primitive::make_arc(pr.center, eps, norm_angle(pr.a0 + o0),
                                             norm_angle(pr.a0 + o1), true, cand.anchor));
      }
    }
  }
  require(!pieces.empty(), ErrorKind::internal_invariant,
          "inner offset is empty (eps too large for this polygon)");

  // dedupe coincident pieces (slit twins, shared corner caps) per carrier
  std::vector<Primitive> merged;
  {
    // straight carriers: group by orientation + fixed coordinate
    struct SegRec {
      double fixed, lo, hi;
      int anchor;
    };
    std::vector<SegRec> segs[2];  // [0]=horizontal, [1]=vertical
    for (auto& p : pieces) {
      if (p.kind != PrimKind::segment) continue;
      bool horiz = std::abs(p.b.y - p.a.y) <= std::abs(p.b.x - p.a.x);
      if (horiz)
        segs[0].push_back({p.a.y, std::min(p.a.x, p.b.x), std::max(p.a.x, p.b.x), p.anchor});
      else
        segs[1].push_back({p.a.x, std::min(p.a.y, p.b.y), std::max(p.a.y, p.b.y), p.anchor});
    }
    for (int o = 0; o < 2; ++o) {
      auto& v = segs[o];
      std::sort(v.begin(), v.end(), [](const SegRec& a, const SegRec& b) {
        return a.fixed < b.fixed || (a.fixed == b.fixed && a.lo < b.lo);
      });
      size_t i = 0;
      while (i < v.size()) {
        size_t j = i;
        while (j + 1 < v.size() && v[j + 1].fixed - v[i].fixed <= cliptol) ++j;
        std::vector<Interval> iv;
        for (size_t t = i; t <= j; ++t) iv.push_back({v[t].lo, v[t].hi, v[t].anchor});
        union_intervals(iv, cliptol);
        double fixed = v[i].fixed;
        for (auto& x : iv) {
          Point a = o == 0 ? Point{x.lo, fixed} : Point{fixed, x.lo};
          Point b = o == 0 ? Point{x.hi, fixed} : Point{fixed, x.hi};
          merged.push_back(Primitive::make_segment(a, b, x.anchor));
        }
        i = j + 1;
      }
    }
    // arc carriers: group by center, then union angular intervals around a cut
    // angle that lies outside every interval
    struct ArcRec {
      Point c;
      double a0, sweep;
      int anchor;
    };
    std::vector<ArcRec> arcs;
    for (auto& p : pieces)
      if (p.kind == PrimKind::arc) arcs.push_back({p.center, p.a0, ccw_sweep(p.a0, p.a1), p.anchor});
    std::sort(arcs.begin(), arcs.end(), [](const ArcRec& a, const ArcRec& b) {
      return a.c.x < b.c.x || (a.c.x == b.c.x && a.c.y < b.c.y);
    });
    size_t i = 0;
    while (i < arcs.size()) {
      size_t j = i;
      while (j + 1 < arcs.size() && dist(arcs[j + 1].c, arcs[i].c) <= cliptol) ++j;
      double angtol = cliptol / eps;
      double cut = 0;
      bool found = false;
      for (size_t t = i; t <= j && !found; ++t) {
        double c = norm_angle(arcs[t].a0 - 2 * angtol - 1e-7);
        bool free = true;
        for (size_t s = i; s <= j; ++s)
          if (norm_angle(c - arcs[s].a0) <= arcs[s].sweep + angtol) free = false;
        if (free) {
          cut = c;
          found = true;
        }
      }
      require(found, ErrorKind::internal_invariant, "offset arcs cover a full circle");
      std::vector<Interval> iv;
      for (size_t t = i; t <= j; ++t) {
        double off = norm_angle(arcs[t].a0 - cut);
        iv.push_back({off, off + arcs[t].sweep, arcs[t].anchor});
      }
      union_intervals(iv, angtol);
      for (auto& x : iv)
        merged.push_back(Primitive::make_arc(arcs[i].c, eps, norm_angle(cut + x.lo),
                                             norm_angle(cut + x.hi), true, x.anchor));
      i = j + 1;
    }
  }

  // stitch into closed loops by endpoint matching; sqrt-level noise from
  // tangential clips scales with eps, not with snap
  double stol = std::max(10 * snap, 1e-6 * eps);
  std::vector<Point> nodes;
  BBox nb;
  for (auto& p : merged) {
    nb.add(p.start_point());
    nb.add(p.end_point());
  }
  SegGrid node_grid(nb, std::max(nb.diag() / 1024, stol * 4));
  auto node_of = [&](Point p) {
    BBox q;
    q.add(p);
    q.inflate(stol);
    for (int id : node_grid.query(q))
      if (dist(nodes[id], p) <= stol) return id;
    int id = (int)nodes.size();
    nodes.push_back(p);
    node_grid.insert(id, p, p);
    return id;
  };
  struct End {
    int prim;
    bool at_start;
  };
  std::vector<std::pair<int, int>> prim_nodes(merged.size());
  std::vector<std::vector<End>> incid;
  for (size_t i = 0; i < merged.size(); ++i) {
    int ns = node_of(merged[i].start_point());
    int ne = node_of(merged[i].end_point());
    incid.resize(nodes.size());
    incid[ns].push_back({(int)i, true});
    incid[ne].push_back({(int)i, false});
    prim_nodes[i] = {ns, ne};
  }
  for (size_t v = 0; v < incid.size(); ++v) {
    if (incid[v].size() != 2 && std::getenv("DECOMP_DEBUG_OFFSET")) {
      std::fprintf(stderr, "bad node (%.12f, %.12f) degree %zu; nearby prims:\n", nodes[v].x,
                   nodes[v].y, incid[v].size());
      for (size_t i = 0; i < merged.size(); ++i) {
        Point s = merged[i].start_point(), e = merged[i].end_point();
        if (dist(s, nodes[v]) < 0.3 || dist(e, nodes[v]) < 0.3)
          std::fprintf(stderr, "  prim %zu %s anchor %d (%.12f,%.12f)->(%.12f,%.12f)\n", i,
                       merged[i].kind == PrimKind::arc ? "arc" : "seg", merged[i].anchor, s.x, s.y,
                       e.x, e.y);
      }
      std::fprintf(stderr, "nearby polygon sides:\n");
      for (int k = 0; k < R.n(); ++k) {
        if (R.side_zero(k)) continue;
        if (dist_point_segment(nodes[v], R.side_a(k), R.side_b(k)) < 0.3)
          std::fprintf(stderr, "  side %d (%.12f,%.12f)->(%.12f,%.12f) code %d->%d\n", k,
                       R.side_a(k).x, R.side_a(k).y, R.side_b(k).x, R.side_b(k).y, R.code[k],
                       R.code[(k + 1) % R.n()]);
      }
    }
    require(incid[v].size() == 2, ErrorKind::internal_invariant,
            "offset degeneracy: stitch node of degree " + std::to_string(incid[v].size()) +
                " at (" + format_g17(nodes[v].x) + ", " + format_g17(nodes[v].y) + ")");
  }

  std::vector<char> used(merged.size(), 0);
  std::vector<Loop> loops;
  for (size_t start = 0; start < merged.size(); ++start) {
    if (used[start]) continue;
    Loop lp;
    int cur = (int)start;
    bool forward = true;
    for (;;) {
      used[cur] = 1;
      lp.prims.push_back(forward ? merged[cur] : merged[cur].reversed());
      int exit_node = forward ? prim_nodes[cur].second : prim_nodes[cur].first;
      // the arrival entry is (cur, at_start == !forward); take the other one
      End next{-1, false};
      for (auto& e : incid[exit_node])
        if (!(e.prim == cur && e.at_start == !forward)) next = e;
      require(next.prim >= 0, ErrorKind::internal_invariant, "offset stitch walk dead end");
      if (next.prim == (int)start && next.at_start) break;  // closed
      require(!used[next.prim], ErrorKind::internal_invariant,
              "offset stitch walk re-entered a primitive");
      cur = next.prim;
      forward = next.at_start;
    }
    if (lp.area() < 0) lp = lp.reversed();
    loops.push_back(std::move(lp));
  }
  require(loops.size() == 1, ErrorKind::internal_invariant,
          "inner offset produced " + std::to_string(loops.size()) +
              " loops (offset degeneracy: eps outside the valid regime?)");
  require(loops[0].closed(stol * 2), ErrorKind::internal_invariant, "offset loop failed to close");

  OffsetCurve S;
  S.loop = std::move(loops[0]);
  S.epsilon = eps;
  S.build_cum();
  return S;
}

OffsetCurve inner_offset(const VHPolygon& P, double eps, const Tolerance& tol) {
  return inner_offset(reduce(P, tol.snap), eps, tol);
}

OffsetIndex::OffsetIndex(const ReducedPoly& R, const OffsetCurve& S, const Tolerance& t)
    : poly(&R), curve(&S), tol(t) {
  BBox box;
  for (auto& p : R.v) box.add(p);
  box.inflate(1.0);
  side_grid = SegGrid(box, std::max(box.diag() / 512, 2 * S.epsilon));
  for (int k = 0; k < R.n(); ++k)
    if (!R.side_zero(k)) side_grid.insert(k, R.side_a(k), R.side_b(k));
  prim_grid = SegGrid(box, std::max(box.diag() / 512, 2 * S.epsilon));
  for (size_t i = 0; i < S.loop.prims.size(); ++i) {
    BBox pb = S.loop.prims[i].bbox();
    prim_grid.insert((int)i, {pb.xmin, pb.ymin}, {pb.xmax, pb.ymax});
  }
}

bool OffsetIndex::visible(Point p, Point z) const {
  double snap = tol.snap;
  Point d = z - p;
  double L = norm(d);
  if (L <= 8 * snap) return true;
  Point ps = p + (6 * snap / L) * d;
  Point zs = z - (6 * snap / L) * d;
  BBox q;
  q.add(ps);
  q.add(zs);
  q.inflate(snap * 4);
  for (int k : side_grid.query(q)) {
    if (segments_intersect(ps, zs, poly->side_a(k), poly->side_b(k), snap)) return false;
  }
  return true;
}

Point OffsetIndex::nearest_visible(Point p, double reach) const {
  double best = std::numeric_limits<double>::infinity();
  Point bz{};
  for (double r = reach;; r *= 2) {
    BBox q;
    q.add(p);
    q.inflate(r);
    for (int i : prim_grid.query(q)) {
      const Primitive& pr = curve->loop.prims[i];
      Point z = closest_on_prim(p, pr);
      double d = dist(p, z);
      if (d < best && visible(p, z)) {
        best = d;
        bz = z;
      }
    }
    if (best <= r) return bz;
    if (r > curve->loop.bbox().diag() + reach) {
      require(std::isfinite(best), ErrorKind::internal_invariant,
              "no visible offset point found");
      return bz;
    }
  }
}

std::pair<int, Point> OffsetIndex::nearest_prim(Point p) const {
  double best = std::numeric_limits<double>::infinity();
  int bi = -1;
  Point bz{};
  for (double r = 4 * curve->epsilon;; r *= 2) {
    BBox q;
    q.add(p);
    q.inflate(r);
    for (int i : prim_grid.query(q)) {
      Point z = closest_on_prim(p, curve->loop.prims[i]);
      double d = dist(p, z);
      if (d < best) {
        best = d;
        bi = i;
        bz = z;
      }
    }
    if (best <= r) return {bi, bz};
    if (r > curve->loop.bbox().diag() + 1) {
      require(bi >= 0, ErrorKind::internal_invariant, "nearest_prim found nothing");
      return {bi, bz};
    }
  }
}

double OffsetIndex::arc_coord(int pi, Point p) const {
  const Primitive& pr = curve->loop.prims[pi];
  double t;
  if (pr.kind == PrimKind::segment) {
    double L2 = norm2(pr.b - pr.a);
    t = L2 > 0 ? std::clamp(dot(p - pr.a, pr.b - pr.a) / L2, 0.0, 1.0) : 0.0;
  } else {
    double off = norm_angle(angle_of(p - pr.center) - (pr.ccw ? pr.a0 : pr.a1));
    t = std::clamp(off / std::max(pr.sweep(), 1e-12), 0.0, 1.0);
    if (!pr.ccw) t = 1.0 - t;
  }
  return curve->cum_len[pi] + t * pr.length();
}

NearestSet nearest_offset_points(const OffsetIndex& idx, int side, double t) {
  NearestSet out;
  Point p = idx.poly->side_a(side) + t * (idx.poly->side_b(side) - idx.poly->side_a(side));
  out.points.push_back(idx.nearest_visible(p, 4 * idx.curve->epsilon));
  return out;
}

NearestSet nearest_offset_points_vertex(const OffsetIndex& idx, int vertex) {
  NearestSet out;
  Point p = idx.poly->v[vertex];
  for (size_t i = 0; i < idx.curve->loop.prims.size(); ++i) {
    const Primitive& pr = idx.curve->loop.prims[i];
    if (pr.kind == PrimKind::arc && dist(pr.center, p) <= 10 * idx.tol.snap) {
      out.is_arc = true;
      out.arc_prim = (int)i;
      out.points.push_back(pr.start_point());
      out.points.push_back(pr.point_at(0.5));
      out.points.push_back(pr.end_point());
    }
  }
  if (!out.is_arc) out.points.push_back(idx.nearest_visible(p, 4 * idx.curve->epsilon));
  return out;
}

int FootMap::param_slots() const { return 4 * idx->poly->n(); }

Point FootMap::boundary_point(double t) const {
  const ReducedPoly& R = *idx->poly;
  int n = R.n();
  double tt = std::fmod(t, 4.0 * n);
  if (tt < 0) tt += 4.0 * n;
  int seg = (int)(tt / 2.0);
  double frac = tt / 2.0 - seg;
  int k = seg / 2;
  if (seg % 2 == 0) return R.side_a(k) + frac * (R.side_b(k) - R.side_a(k));
  return R.v[(k + 1) % n];
}

Point FootMap::foot(double t) const {
  const ReducedPoly& R = *idx->poly;
  int n = R.n();
  double tt = std::fmod(t, 4.0 * n);
  if (tt < 0) tt += 4.0 * n;
  int seg = (int)(tt / 2.0);
  double frac = tt / 2.0 - seg;
  int k = seg / 2;
  if (seg % 2 == 0) {
    // stay strictly inside the side: the endpoints belong to the vertex dwells
    return nearest_offset_points(*idx, k, std::clamp(frac, 1e-7, 1.0 - 1e-7)).points[0];
  }
  int v = (k + 1) % n;
  NearestSet m = nearest_offset_points_vertex(*idx, v);
  if (!m.is_arc) return m.points[0];
  const Primitive& arc = idx->curve->loop.prims[m.arc_prim];
  // sweep from the endpoint the previous side's feet converge to
  Point before = nearest_offset_points(*idx, k, 1.0 - 1e-6).points[0];
  bool from_start = dist(before, arc.start_point()) <= dist(before, arc.end_point());
  return arc.point_at(from_start ? frac : 1.0 - frac);
}

FootMap foot_map(const ReducedPoly& R, const OffsetCurve& S, const Tolerance& tol) {
  FootMap fm;
  fm.idx = std::make_shared<OffsetIndex>(R, S, tol);
  return fm;
}

FootMapReport verify_foot_map(const FootMap& fm, int samples_per_side) {
  FootMapReport rep;
  int n = fm.idx->poly->n();
  double T = 4.0 * n;
  int total = 2 * n * std::max(2, samples_per_side);
  std::vector<Point> feet(total);
  for (int i = 0; i < total; ++i) feet[i] = fm.foot(T * i / total);
  double eps = fm.idx->curve->epsilon;

  for (int i = 0; i < total; ++i) {
    double gap = dist(feet[i], feet[(i + 1) % total]);
    rep.max_gap = std::max(rep.max_gap, gap);
    if (gap > eps) {
      // adaptive refinement: a genuine jump survives bisection
      double lo = T * i / total, hi = T * (i + 1) / total;
      Point flo = feet[i], fhi = feet[(i + 1) % total];
      for (int it = 0; it < 48 && dist(flo, fhi) > eps / 2; ++it) {
        double mid = 0.5 * (lo + hi);
        Point fmid = fm.foot(mid);
        if (dist(flo, fmid) >= dist(fmid, fhi)) {
          hi = mid;
          fhi = fmid;
        } else {
          lo = mid;
          flo = fmid;
        }
        if (hi - lo < 1e-11) break;
      }
      if (dist(flo, fhi) > eps / 2 && hi - lo < 1e-10) {
        rep.continuous = false;
        rep.witness = flo;
      }
    }
  }
  for (auto& pr : fm.idx->curve->loop.prims) {
    Point mid = pr.point_at(0.5);
    double best = 1e300;
    for (auto& f : feet) best = std::min(best, dist(f, mid));
    if (best > std::max(pr.length(), eps)) {
      rep.surjective = false;
      rep.witness = mid;
    }
  }
  // interval preimages: sample indices mapping near one curve point must be
  // contiguous modulo wrap-around
  for (int i = 0; i < total; ++i) {
    int j = (i + 2) % total;
    for (; j != i; j = (j + 1) % total) {
      if (dist(feet[i], feet[j]) < eps * 1e-3) {
        // everything between i and j must stay near as well
        bool near_all = true;
        for (int k = i; k != j; k = (k + 1) % total)
          if (dist(feet[k], feet[i]) > eps / 3) near_all = false;
        bool near_all_rev = true;
        for (int k = j; k != i; k = (k + 1) % total)
          if (dist(feet[k], feet[i]) > eps / 3) near_all_rev = false;
        if (!near_all && !near_all_rev) {
          rep.interval_preimages = false;
          rep.witness = feet[i];
        }
        break;
      }
    }
  }
  return rep;
}

LipschitzResult local_lipschitz_ratio(const OffsetCurve& S, double mu, int n_samples,
                                      uint64_t seed) {
  LipschitzResult res;
  struct Pt {
    int prim;
    double t;
    Point p;
  };
  std::vector<Pt> pts;
  int m = (int)S.loop.prims.size();
  for (int i = 0; i < m; ++i) pts.push_back({i, 0.0, S.loop.prims[i].start_point()});
  Rng rng(seed);
  for (int s = 0; s < n_samples; ++s) {
    double at = rng.uniform(0.0, S.total_len);
    int lo = 0, hi = m;
    while (lo + 1 < hi) {
      int mid = (lo + hi) / 2;
      if (S.cum_len[mid] <= at)
        lo = mid;
      else
        hi = mid;
    }
    double t = (at - S.cum_len[lo]) / std::max(S.loop.prims[lo].length(), 1e-300);
    pts.push_back({lo, std::clamp(t, 0.0, 1.0), S.loop.prims[lo].point_at(std::clamp(t, 0.0, 1.0))});
  }
  BBox box = S.loop.bbox();
  SegGrid grid(box, std::max(mu, box.diag() / 1024));
  for (size_t i = 0; i < pts.size(); ++i) grid.insert((int)i, pts[i].p, pts[i].p);
  for (size_t i = 0; i < pts.size(); ++i) {
    BBox q;
    q.add(pts[i].p);
    q.inflate(mu);
    for (int j : grid.query(q)) {
      if (j <= (int)i) continue;
      double d = dist(pts[i].p, pts[j].p);
      if (d > mu || d <= 1e-14) continue;
      double along = S.along_dist(pts[i].prim, pts[i].t, pts[j].prim, pts[j].t);
      double ratio = along / d;
      if (ratio > res.max_ratio) {
        res.max_ratio = ratio;
        res.witness_a = pts[i].p;
        res.witness_b = pts[j].p;
      }
    }
  }
  return res;
}

double clipped_length(const OffsetCurve& S, Point a, double r) {
  double total = 0;
  for (auto& pr : S.loop.prims) {
    if (pr.kind == PrimKind::segment) {
      std::vector<double> ts{0.0, 1.0};
      circle_segment_hits(a, r, pr.a, pr.b, ts);
      std::sort(ts.begin(), ts.end());
      double len = pr.length();
      for (size_t i = 0; i + 1 < ts.size(); ++i) {
        double t0 = std::clamp(ts[i], 0.0, 1.0), t1 = std::clamp(ts[i + 1], 0.0, 1.0);
        if (t1 <= t0) continue;
        if (dist(pr.point_at(0.5 * (t0 + t1)), a) < r) total += (t1 - t0) * len;
      }
    } else {
      std::vector<Point> hits;
      circle_circle_hits(pr.center, pr.radius, a, r, hits);
      double sweep = ccw_sweep(pr.a0, pr.a1);
      std::vector<double> offs{0.0, sweep};
      for (Point h : hits) {
        double off = norm_angle(angle_of(h - pr.center) - pr.a0);
        if (off <= sweep) offs.push_back(off);
      }
      std::sort(offs.begin(), offs.end());
      for (size_t i = 0; i + 1 < offs.size(); ++i) {
        double o0 = offs[i], o1 = offs[i + 1];
        if (o1 <= o0) continue;
        double am = pr.a0 + 0.5 * (o0 + o1);
        Point mid = pr.center + Point{pr.radius * std::cos(am), pr.radius * std::sin(am)};
        if (dist(mid, a) < r) total += (o1 - o0) * pr.radius;
      }
    }
  }
  return total;
}

}  // namespace decomp
