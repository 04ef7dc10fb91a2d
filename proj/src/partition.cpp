#include "decomp/partition.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "decomp/inscribe.hpp"

namespace decomp {

namespace {

// split a primitive at an interior point; assumes p lies on it
std::pair<Primitive, Primitive> split_prim(const Primitive& pr, Point p) {
  if (pr.kind == PrimKind::segment) {
    Primitive a = Primitive::make_segment(pr.a, p, pr.anchor);
    Primitive b = Primitive::make_segment(p, pr.b, pr.anchor);
    return {a, b};
  }
  double ang = angle_of(p - pr.center);
  Primitive a = pr, b = pr;
  a.a1 = ang;
  b.a0 = ang;
  if (!pr.ccw) {
    // reversed arcs keep their traversal order: start half first
    a = pr;
    a.a0 = pr.a0;
    a.a1 = ang;
    b = pr;
    b.a0 = ang;
    b.a1 = pr.a1;
  }
  return {a, b};
}

struct LoopPos {
  int prim = -1;
  Point p;
};

// two loops obtained by cutting `lp` along the chord between two boundary
// positions; the chord is tagged `chord_tag`
std::pair<Loop, Loop> cut_loop(const Loop& lp, LoopPos u, LoopPos v, int chord_tag, double tol) {
  int m = (int)lp.prims.size();
  auto emit = [&](Loop& out, const Primitive& pr) {
    if (pr.length() > tol) out.prims.push_back(pr);
  };
  Loop first, second;
  if (u.prim == v.prim) {
    // order the two points along the primitive
    const Primitive& pr = lp.prims[u.prim];
    double tu, tv;
    if (pr.kind == PrimKind::segment) {
      double L2 = std::max(norm2(pr.b - pr.a), 1e-300);
      tu = dot(u.p - pr.a, pr.b - pr.a) / L2;
      tv = dot(v.p - pr.a, pr.b - pr.a) / L2;
    } else {
      tu = norm_angle(angle_of(u.p - pr.center) - (pr.ccw ? pr.a0 : pr.a1));
      tv = norm_angle(angle_of(v.p - pr.center) - (pr.ccw ? pr.a0 : pr.a1));
      if (!pr.ccw) {
        tu = -tu;
        tv = -tv;
      }
    }
    LoopPos a = u, b = v;
    if (tu > tv) std::swap(a, b);
    auto [h1, rest] = split_prim(pr, a.p);
    auto [mid, h2] = split_prim(rest, b.p);
    emit(first, mid);
    first.prims.push_back(Primitive::make_segment(b.p, a.p, chord_tag));
    emit(second, h2);
    for (int t = 1; t < m; ++t) emit(second, lp.prims[(a.prim + t) % m]);
    emit(second, h1);
    second.prims.push_back(Primitive::make_segment(a.p, b.p, chord_tag));
    return {first, second};
  }
  auto [ua, ub] = split_prim(lp.prims[u.prim], u.p);
  auto [va, vb] = split_prim(lp.prims[v.prim], v.p);
  // loop 1: from u.p forward to v.p, close with [v.p -> u.p]
  emit(first, ub);
  for (int t = (u.prim + 1) % m; t != v.prim; t = (t + 1) % m) emit(first, lp.prims[t]);
  emit(first, va);
  first.prims.push_back(Primitive::make_segment(v.p, u.p, chord_tag));
  // loop 2: from v.p forward to u.p, close with [u.p -> v.p]
  emit(second, vb);
  for (int t = (v.prim + 1) % m; t != u.prim; t = (t + 1) % m) emit(second, lp.prims[t]);
  emit(second, ua);
  second.prims.push_back(Primitive::make_segment(u.p, v.p, chord_tag));
  return {first, second};
}

}  // namespace

void Piece::recompute_basics(double sample_step) {
  area = 0;
  box = BBox{};
  std::vector<Point> samples;
  for (auto& lp : loops) {
    area += lp.area();
    box.add(lp.bbox());
    auto s = lp.sample(sample_step);
    samples.insert(samples.end(), s.begin(), s.end());
  }
  auto hull = convex_hull(std::move(samples));
  diameter = hull_diameter(hull);
}

bool Piece::contains(Point p, double snap) const {
  if (!box.contains(p)) return false;
  // boundary proximity counts as boundary, not interior
  for (auto& lp : loops)
    if (lp.distance_to(p) <= snap) return false;
  int crossings = 0;
  double px = p.x + snap * 0.2718281828459045;
  for (auto& lp : loops) {
    for (auto& pr : lp.prims) {
      if (pr.kind == PrimKind::segment) {
        Point a = pr.a, b = pr.b;
        if ((a.x > px) == (b.x > px)) continue;
        double t = (px - a.x) / (b.x - a.x);
        if (a.y + t * (b.y - a.y) > p.y) ++crossings;
      } else {
        // vertical line through px vs the arc
        double dx = px - pr.center.x;
        if (std::abs(dx) > pr.radius) continue;
        double dy = std::sqrt(std::max(0.0, pr.radius * pr.radius - dx * dx));
        for (double y : {pr.center.y + dy, pr.center.y - dy}) {
          if (y <= p.y) continue;
          double ang = angle_of(Point{dx, y - pr.center.y});
          double lo = pr.ccw ? pr.a0 : pr.a1;
          double hi = pr.ccw ? pr.a1 : pr.a0;
          if (!angle_in_ccw_arc(ang, lo, hi, 0)) continue;
          // crossing parity only counts transversal passes; the arc crosses
          // x = px at this y unless tangent, which the nudge avoids
          ++crossings;
        }
      }
    }
  }
  return (crossings & 1) != 0;
}

Point deepest_point(const DomainPolygon& dom) {
  Tolerance tol = Tolerance::for_bbox(dom.bbox());
  DomainIndex idx(dom, tol);
  BBox b = dom.bbox();
  Point best{};
  double bestd = -1;
  double x0 = b.xmin, y0 = b.ymin, w = b.width(), h = b.height();
  int n = 64;
  for (int rep = 0; rep < 4; ++rep) {
    Point local_best = best;
    double local_d = bestd;
    for (int i = 0; i <= n; ++i)
      for (int j = 0; j <= n; ++j) {
        Point p{x0 + w * i / n, y0 + h * j / n};
        if (idx.classify(p) != Containment::inside) continue;
        double d = idx.boundary_distance(p);
        if (d > local_d) {
          local_d = d;
          local_best = p;
        }
      }
    best = local_best;
    bestd = local_d;
    // refine around the best point
    w = w / n * 8;
    h = h / n * 8;
    x0 = best.x - w / 2;
    y0 = best.y - h / 2;
    n = 16;
  }
  require(bestd > 0, ErrorKind::input_rejection, "domain has no interior point");
  return best;
}

std::vector<Piece> split_large(const Piece& piece, const DecompGeometry& G, double diam_cap,
                               std::vector<Cut>* new_cuts) {
  std::vector<Piece> done;
  std::vector<Piece> work{piece};
  double step = G.eps / 8;
  int guard = 4096;
  while (!work.empty()) {
    require(--guard > 0, ErrorKind::internal_invariant, "split_large did not converge");
    Piece pc = std::move(work.back());
    work.pop_back();
    pc.recompute_basics(step);
    if (pc.diameter <= diam_cap || pc.loops.size() != 1) {
      done.push_back(std::move(pc));
      continue;
    }
    const Loop& lp = pc.loops[0];
    // projection axis from the polygon-boundary run of the piece
    Point axis{0, 0};
    for (auto& pr : lp.prims)
      if (pr.anchor & wall_polygon) axis = axis + (pr.end_point() - pr.start_point());
    if (norm(axis) < 1e-9) {
      BBox bb = lp.bbox();
      axis = bb.width() > bb.height() ? Point{1, 0} : Point{0, 1};
    }
    axis = (1.0 / norm(axis)) * axis;
    double lo = 1e300, hi = -1e300;
    for (Point s : lp.sample(step)) {
      double t = dot(s, axis);
      lo = std::min(lo, t);
      hi = std::max(hi, t);
    }
    // witnesses on the piece's boundary run, projected onto the axis
    struct Cand {
      LoopPos pos;
      double proj;
    };
    std::vector<Cand> cands;
    for (size_t pi = 0; pi < lp.prims.size(); ++pi) {
      const Primitive& pr = lp.prims[pi];
      if (!(pr.anchor & wall_polygon) || pr.kind != PrimKind::segment) continue;
      for (auto& [s, w] : boundary_contacts(*G.idx, pr.a, pr.b, 20 * G.tol.snap)) {
        Point u = pr.b - pr.a;
        double L = norm(u);
        if (L <= 0) continue;
        Point proj_pt = pr.a + std::clamp(s, 0.0, L) / L * u;
        if (dist(proj_pt, pr.a) < 1e-6 || dist(proj_pt, pr.b) < 1e-6) continue;
        cands.push_back({{(int)pi, proj_pt}, dot(proj_pt, axis)});
      }
    }
    auto pick = [&](double target) -> const Cand* {
      const Cand* best = nullptr;
      for (auto& c : cands) {
        if (std::abs(c.proj - target) > 10.0) continue;  // the +-10 margin window
        if (!best || std::abs(c.proj - target) < std::abs(best->proj - target)) best = &c;
      }
      return best;
    };
    const Cand* chosen = pick(hi - 50.0);
    if (!chosen) chosen = pick(lo + 50.0);
    require(chosen != nullptr, ErrorKind::internal_invariant,
            "no boundary witness in the splitting window of an oversized piece");

    // cut to the nearest curve point across the band
    auto [zprim_idx, z] = G.oidx->nearest_prim(chosen->pos.p);
    (void)zprim_idx;
    // locate z on the piece's own loop
    LoopPos zpos;
    double bd = 1e300;
    for (size_t pi = 0; pi < lp.prims.size(); ++pi) {
      if (!(lp.prims[pi].anchor & wall_offset)) continue;
      Point c = closest_on_prim(z, lp.prims[pi]);
      if (dist(c, z) < bd) {
        bd = dist(c, z);
        zpos = {(int)pi, c};
      }
    }
    require(zpos.prim >= 0 && bd <= 1e-6, ErrorKind::internal_invariant,
            "split target does not lie on the piece's offset boundary");

    if (new_cuts) {
      Cut c;
      c.kind = CutKind::split_45;
      c.pts = {chosen->pos.p, zpos.p};
      c.outer = {CarrierRef::boundary, -1, chosen->pos.p};
      c.inner = {CarrierRef::offset_curve, -1, zpos.p};
      new_cuts->push_back(c);
    }
    auto [l1, l2] = cut_loop(lp, chosen->pos, zpos, wall_cut, G.tol.snap * 4);
    Piece p1 = pc, p2 = pc;
    p1.loops = {l1};
    p2.loops = {l2};
    work.push_back(std::move(p1));
    work.push_back(std::move(p2));
  }
  return done;
}

namespace {

struct WallBuild {
  std::vector<Wall> walls;
  double jointol;
};

// split a carrier segment at every registry point lying on it
void emit_split_segments(Point a, Point b, int tag, const SegGrid& reg_grid,
                         const std::vector<Point>& reg_pts, double jointol,
                         std::vector<Wall>& out) {
  Point d = b - a;
  double L = norm(d);
  if (L <= jointol) return;
  Point u = (1.0 / L) * d;
  std::vector<double> ss{0.0, L};
  BBox q;
  q.add(a);
  q.add(b);
  q.inflate(jointol * 2);
  for (int id : reg_grid.query(q)) {
    Point p = reg_pts[id];
    double s = dot(p - a, u);
    if (s <= 2 * jointol || s >= L - 2 * jointol) continue;
    if (dist(a + s * u, p) <= jointol * 2) ss.push_back(s);
  }
  std::sort(ss.begin(), ss.end());
  for (size_t i = 0; i + 1 < ss.size(); ++i) {
    if (ss[i + 1] - ss[i] <= jointol) continue;
    out.push_back({Primitive::make_segment(a + ss[i] * u, a + ss[i + 1] * u), tag});
  }
}

void emit_split_prim(const Primitive& pr, int tag, const SegGrid& reg_grid,
                     const std::vector<Point>& reg_pts, double jointol, std::vector<Wall>& out) {
  if (pr.kind == PrimKind::segment) {
    emit_split_segments(pr.a, pr.b, tag, reg_grid, reg_pts, jointol, out);
    return;
  }
  double sweep = pr.sweep();
  std::vector<double> ts{0.0, 1.0};
  BBox q = pr.bbox();
  q.inflate(jointol * 2);
  for (int id : reg_grid.query(q)) {
    Point p = reg_pts[id];
    if (std::abs(dist(p, pr.center) - pr.radius) > jointol * 2) continue;
    double off = norm_angle(angle_of(p - pr.center) - (pr.ccw ? pr.a0 : pr.a1));
    double t = off / std::max(sweep, 1e-12);
    if (!pr.ccw) t = 1.0 - t;
    if (t <= 0.0 || t >= 1.0) continue;
    if (t * sweep * pr.radius <= 2 * jointol) continue;
    if ((1 - t) * sweep * pr.radius <= 2 * jointol) continue;
    ts.push_back(t);
  }
  std::sort(ts.begin(), ts.end());
  for (size_t i = 0; i + 1 < ts.size(); ++i) {
    if ((ts[i + 1] - ts[i]) * sweep * pr.radius <= jointol) continue;
    double a0 = pr.ccw ? pr.a0 + ts[i] * sweep : pr.a0 - ts[i] * sweep;
    double a1 = pr.ccw ? pr.a0 + ts[i + 1] * sweep : pr.a0 - ts[i + 1] * sweep;
    out.push_back({Primitive::make_arc(pr.center, pr.radius, norm_angle(a0), norm_angle(a1),
                                       pr.ccw, pr.anchor),
                   tag});
  }
}

}  // namespace

Partition make_partition(const DomainPolygon& dom, double eps, PartitionOptions opt) {
  Tolerance tol0 = Tolerance::for_bbox(dom.bbox());
  dom.validate(tol0);
  BBox bb = dom.bbox();
  require(eps > 0 && std::isfinite(eps), ErrorKind::input_rejection, "eps must be positive");
  require(eps < bb.diag() / 10.0, ErrorKind::input_rejection,
          "eps must be below a tenth of the domain diameter");

  double diag = bb.diag();
  int m_exp = (int)std::floor(std::log2(diag * (opt.Delta_hat + 3.0) / eps)) + 1;
  double d = diag / std::pow(2.0, m_exp);

  Point seed = opt.seed_point.value_or(deepest_point(dom));
  InscribeResult IR;
  try {
    IR = inscribe(dom, d, seed);
  } catch (const Error& e) {
    if (e.kind == ErrorKind::scale_too_coarse) {
      Tolerance t = Tolerance::for_bbox(dom.bbox());
      DomainIndex di(dom, t);
      double depth = di.boundary_distance(seed);
      double hint = depth / std::sqrt(2.0) * (opt.Delta_hat + 3.0) * 0.9;
      fail(ErrorKind::scale_too_coarse,
           std::string(e.what()) + "; eps below about " + format_g17(hint) + " is feasible");
    }
    throw;
  }

  auto internals = std::make_shared<PartitionInternals>();
  DecompGeometry& G = internals->G;
  G.dom_u = IR.domain_unit;
  G.tol = IR.tol_unit;
  G.idx = std::make_shared<DomainIndex>(G.dom_u, G.tol);
  G.P = IR.polygon_unit;
  G.R = reduce(G.P, G.tol.snap);
  G.eps = opt.eps_int;
  G.S1 = inner_offset(G.R, G.eps, G.tol);
  G.S2 = inner_offset(G.R, 2 * G.eps, G.tol);
  G.oidx = std::make_shared<OffsetIndex>(G.R, G.S1, G.tol);
  G.build_boundary_param();

  std::vector<Cut> cuts = make_cuts_region1(G);

  // core cell side: dyadic multiple of eps/16, coarsened until the cell count
  // fits the budget, capped so cell diameters stay within the piece band
  double area_u = G.P.area();
  double side = G.eps / 16.0;
  while (area_u / (side * side) > opt.core_cell_budget && side * 2.0 <= opt.max_core_cell)
    side *= 2.0;
  bool fine_rule = side == G.eps / 16.0;
  internals->core = dyadic_core(G, side, fine_rule, 30.0);
  const Core& core = internals->core;

  {
    auto cuts2 = make_cuts_region2(G, core);
    cuts.insert(cuts.end(), cuts2.begin(), cuts2.end());
  }
  for (size_t i = 0; i < cuts.size(); ++i)
    regular_check(G, cuts[i], opt.eta_tilde, 16, opt.seed + i);

  // ---- wall assembly ----
  double jointol = std::max(100 * G.tol.snap, 1e-6);
  std::vector<Point> reg_pts;
  for (auto& c : cuts) {
    reg_pts.push_back(c.pts.front());
    reg_pts.push_back(c.pts.back());
  }
  for (int k = 0; k < G.R.n(); ++k)
    for (auto& [s, p] : boundary_contacts(*G.idx, G.R.side_a(k), G.R.side_b(k), 20 * G.tol.snap)) {
      Point u = G.R.len[k] > 0 ? G.R.side_dir(k) : Point{1, 0};
      Point on_side = G.R.side_a(k) + std::clamp(s, 0.0, G.R.len[k]) * u;
      reg_pts.push_back(on_side);
    }
  BBox regbox;
  for (auto& p : reg_pts) regbox.add(p);
  for (auto& p : G.dom_u.vertices) regbox.add(p);
  regbox.inflate(1.0);
  SegGrid reg_grid(regbox, std::max(regbox.diag() / 1024, jointol * 8));
  for (size_t i = 0; i < reg_pts.size(); ++i) reg_grid.insert((int)i, reg_pts[i], reg_pts[i]);

  std::vector<Wall> walls;
  // polygon sides, split and deduplicated against slit twins
  {
    std::vector<Wall> raw;
    for (int k = 0; k < G.R.n(); ++k) {
      if (G.R.side_zero(k)) continue;
      std::vector<Wall> tmp;
      emit_split_segments(G.R.side_a(k), G.R.side_b(k), wall_polygon, reg_grid, reg_pts, jointol,
                          tmp);
      for (auto& w : tmp) {
        w.prim.anchor = k;
        raw.push_back(w);
      }
    }
    // twin detection: midpoint lies on another side
    SegGrid pg(regbox, std::max(regbox.diag() / 1024, 4 * jointol));
    for (int k = 0; k < G.R.n(); ++k)
      if (!G.R.side_zero(k)) pg.insert(k, G.R.side_a(k), G.R.side_b(k));
    for (auto& w : raw) {
      Point mid = w.prim.point_at(0.5);
      BBox q;
      q.add(mid);
      q.inflate(jointol * 2);
      int covered_by = -1;
      for (int k2 : pg.query(q)) {
        if (k2 == w.prim.anchor) continue;
        if (dist_point_segment(mid, G.R.side_a(k2), G.R.side_b(k2)) <= jointol)
          covered_by = std::max(covered_by, k2);
      }
      if (covered_by > w.prim.anchor) continue;  // the twin with the larger index emits
      if (covered_by >= 0) w.tag |= 32;          // doubled slit edge: interior on both sides
      if (G.idx->boundary_distance(mid) <= jointol) w.tag |= wall_domain;
      walls.push_back(w);
    }
  }
  // domain edges not already represented by polygon sides
  {
    SegGrid pg(regbox, std::max(regbox.diag() / 1024, 4 * jointol));
    for (int k = 0; k < G.R.n(); ++k)
      if (!G.R.side_zero(k)) pg.insert(k, G.R.side_a(k), G.R.side_b(k));
    for (int e = 0; e < G.idx->edge_count(); ++e) {
      std::vector<Wall> tmp;
      emit_split_segments(G.idx->edge_a(e), G.idx->edge_b(e), wall_domain, reg_grid, reg_pts,
                          jointol, tmp);
      for (auto& w : tmp) {
        Point mid = w.prim.point_at(0.5);
        BBox q;
        q.add(mid);
        q.inflate(jointol * 2);
        bool covered = false;
        for (int k2 : pg.query(q))
          if (dist_point_segment(mid, G.R.side_a(k2), G.R.side_b(k2)) <= jointol) covered = true;
        if (!covered) walls.push_back(w);
      }
    }
  }
  // offset curve
  for (auto& pr : G.S1.loop.prims) emit_split_prim(pr, wall_offset, reg_grid, reg_pts, jointol, walls);
  // core boundary loops
  if (!core.empty())
    for (auto& lp : core.loops) {
      int m = (int)lp.size();
      for (int t = 0; t < m; ++t)
        emit_split_segments(lp[t], lp[(t + 1) % m], wall_core, reg_grid, reg_pts, jointol, walls);
    }
  // cuts
  for (auto& c : cuts)
    for (size_t i = 0; i + 1 < c.pts.size(); ++i)
      walls.push_back({Primitive::make_segment(c.pts[i], c.pts[i + 1]), wall_cut});

  Arrangement arr;
  arr.build(walls, jointol);

  // ---- face labels ----
  enum Label { L_outside = 0, L_b = 1, L_region1 = 2, L_band = 3, L_coreblob = 4 };
  for (size_t f = 0; f < arr.faces.size(); ++f) {
    auto& face = arr.faces[f];
    int lab = -1;
    bool s1f = false, s1r = false, coref = false, corer = false;
    bool pf = false, prv = false, domf = false, domr = false;
    for (int he : face.cycle) {
      auto& H = arr.half_edges[he];
      if (H.tag & wall_offset) (H.forward ? s1f : s1r) = true;
      if (H.tag & wall_core) (H.forward ? coref : corer) = true;
      if ((H.tag & wall_polygon) && !(H.tag & 32)) (H.forward ? pf : prv) = true;
      if (H.tag & wall_domain) (H.forward ? domf : domr) = true;
    }
    if (s1f || s1r) {
      require(!(s1f && s1r), ErrorKind::internal_invariant, "face on both sides of the offset curve");
      if (s1f)
        lab = (coref && !corer) ? L_coreblob : L_band;
      else
        lab = L_region1;
    } else if (coref || corer) {
      lab = coref ? L_coreblob : L_band;
    } else if (pf || prv) {
      require(!(pf && prv), ErrorKind::internal_invariant, "face on both sides of the polygon");
      if (pf)
        lab = L_region1;
      else
        lab = domf ? L_b : L_outside;
    } else if (domf || domr) {
      lab = domf ? L_b : L_outside;
    }
    require(lab >= 0, ErrorKind::internal_invariant, "unlabeled arrangement face");
    if ((int)f == arr.outer_cycle_face)
      require(lab == L_outside, ErrorKind::internal_invariant, "outer face mislabeled");
    face.label = lab;
  }

  // ---- pieces ----
  double sample_step = std::max(G.eps / 8, G.tol.snap * 1e4);
  std::vector<Piece> a_pieces;
  for (size_t f = 0; f < arr.faces.size(); ++f) {
    int lab = arr.faces[f].label;
    if (lab != L_region1 && lab != L_band) continue;
    Piece pc;
    Loop lp = arr.face_loop((int)f);
    for (size_t i = 0; i < lp.prims.size(); ++i)
      lp.prims[i].anchor = arr.half_edges[arr.faces[f].cycle[i]].tag;
    pc.loops = {std::move(lp)};
    pc.cls = 'A';
    pc.host = lab == L_region1 ? 1 : 2;
    pc.recompute_basics(sample_step);
    a_pieces.push_back(std::move(pc));
  }
  // deep core cells
  double blob_area = 0;
  for (auto& face : arr.faces)
    if (face.label == L_coreblob) blob_area += face.area;
  double cells_area = 0;
  if (!core.empty()) {
    const CellGrid& cg = *core.cells;
    for (int j = 0; j < cg.ny(); ++j)
      for (int i = 0; i < cg.nx(); ++i) {
        if (!cg.get(i, j)) continue;
        Point lo = cg.corner(i, j);
        double s = core.cell_side;
        Piece pc;
        Loop lp;
        lp.prims.push_back(Primitive::make_segment(lo, {lo.x + s, lo.y}, wall_core));
        lp.prims.push_back(Primitive::make_segment({lo.x + s, lo.y}, {lo.x + s, lo.y + s}, wall_core));
        lp.prims.push_back(Primitive::make_segment({lo.x + s, lo.y + s}, {lo.x, lo.y + s}, wall_core));
        lp.prims.push_back(Primitive::make_segment({lo.x, lo.y + s}, lo, wall_core));
        pc.loops = {std::move(lp)};
        pc.cls = 'A';
        pc.host = 3;
        pc.area = s * s;
        pc.diameter = s * std::sqrt(2.0);
        pc.box.add(lo);
        pc.box.add(Point{lo.x + s, lo.y + s});
        cells_area += s * s;
        a_pieces.push_back(std::move(pc));
      }
  }
  require(std::abs(blob_area - cells_area) <= 1e-6 * std::max(1.0, cells_area) + 1e-9,
          ErrorKind::internal_invariant, "core cells do not tile the deep faces");

  // oversized pieces split along their boundary runs
  {
    std::vector<Cut> extra;
    std::vector<Piece> rebuilt;
    for (auto& pc : a_pieces) {
      if (pc.diameter > opt.piece_diam_cap) {
        auto frags = split_large(pc, G, opt.piece_diam_cap, &extra);
        for (auto& fr : frags) {
          fr.recompute_basics(sample_step);
          rebuilt.push_back(std::move(fr));
        }
      } else {
        rebuilt.push_back(std::move(pc));
      }
    }
    for (auto& c : extra) cuts.push_back(c);
    a_pieces = std::move(rebuilt);
  }

  // deterministic ordering
  std::sort(a_pieces.begin(), a_pieces.end(), [](const Piece& x, const Piece& y) {
    if (x.box.xmin != y.box.xmin) return x.box.xmin < y.box.xmin;
    if (x.box.ymin != y.box.ymin) return x.box.ymin < y.box.ymin;
    if (x.box.xmax != y.box.xmax) return x.box.xmax < y.box.xmax;
    return x.box.ymax < y.box.ymax;
  });

  // ---- B faces: group by their unique attached A piece ----
  // match each B face's polygon edge to the A piece owning the reversed edge
  SegGrid amid_grid(regbox, std::max(regbox.diag() / 1024, 4 * jointol));
  std::vector<std::pair<int, Point>> amids;  // (a piece, midpoint of polygon-edge)
  for (size_t ai = 0; ai < a_pieces.size(); ++ai) {
    if (a_pieces[ai].host != 1) continue;
    for (auto& pr : a_pieces[ai].loops[0].prims) {
      if (!(pr.anchor & wall_polygon)) continue;
      Point mid = pr.point_at(0.5);
      amid_grid.insert((int)amids.size(), mid, mid);
      amids.push_back({(int)ai, mid});
    }
  }
  std::vector<Piece> b_pieces;
  std::map<int, std::vector<int>> b_groups;  // a piece -> b faces
  for (size_t f = 0; f < arr.faces.size(); ++f) {
    if (arr.faces[f].label != L_b) continue;
    int owner = -1;
    for (int he : arr.faces[f].cycle) {
      auto& H = arr.half_edges[he];
      if (!(H.tag & wall_polygon)) continue;
      Point mid = H.geom.point_at(0.5);
      BBox q;
      q.add(mid);
      q.inflate(2 * jointol);
      for (int id : amid_grid.query(q)) {
        if (dist(amids[id].second, mid) <= 2 * jointol) {
          int cand = amids[id].first;
          require(owner < 0 || owner == cand, ErrorKind::internal_invariant,
                  "component outside the polygon touches two different pieces");
          owner = cand;
        }
      }
    }
    require(owner >= 0, ErrorKind::internal_invariant,
            "component outside the polygon touches no piece");
    b_groups[owner].push_back((int)f);
  }
  for (auto& [owner, fs] : b_groups) {
    Piece pc;
    pc.cls = 'B';
    pc.host = 0;
    pc.b_to_a = owner;
    for (int f : fs) {
      Loop lp = arr.face_loop(f);
      for (size_t i = 0; i < lp.prims.size(); ++i)
        lp.prims[i].anchor = arr.half_edges[arr.faces[f].cycle[i]].tag;
      pc.loops.push_back(std::move(lp));
    }
    pc.recompute_basics(sample_step);
    b_pieces.push_back(std::move(pc));
  }
  std::sort(b_pieces.begin(), b_pieces.end(), [](const Piece& x, const Piece& y) {
    if (x.box.xmin != y.box.xmin) return x.box.xmin < y.box.xmin;
    if (x.box.ymin != y.box.ymin) return x.box.ymin < y.box.ymin;
    if (x.box.xmax != y.box.xmax) return x.box.xmax < y.box.xmax;
    return x.box.ymax < y.box.ymax;
  });

  // ---- adjacency through shared boundary nodes inside the domain ----
  std::vector<std::vector<int>> adjacency(a_pieces.size());
  {
    std::vector<Point> npts;
    std::vector<std::vector<int>> npieces;
    SegGrid ngrid(regbox, std::max(regbox.diag() / 1024, 4 * jointol));
    auto node_id = [&](Point p) {
      BBox q;
      q.add(p);
      q.inflate(jointol);
      for (int id : ngrid.query(q))
        if (dist(npts[id], p) <= jointol) return id;
      int id = (int)npts.size();
      npts.push_back(p);
      npieces.push_back({});
      ngrid.insert(id, p, p);
      return id;
    };
    for (size_t ai = 0; ai < a_pieces.size(); ++ai)
      for (auto& lp : a_pieces[ai].loops)
        for (auto& pr : lp.prims) {
          int id = node_id(pr.start_point());
          if (npieces[id].empty() || npieces[id].back() != (int)ai) npieces[id].push_back((int)ai);
        }
    for (size_t v = 0; v < npts.size(); ++v) {
      if (npieces[v].size() < 2) continue;
      if (G.idx->boundary_distance(npts[v]) <= jointol) continue;  // closure meets only on dOmega
      auto& lst = npieces[v];
      std::sort(lst.begin(), lst.end());
      lst.erase(std::unique(lst.begin(), lst.end()), lst.end());
      for (size_t i = 0; i < lst.size(); ++i)
        for (size_t j = i + 1; j < lst.size(); ++j) {
          adjacency[lst[i]].push_back(lst[j]);
          adjacency[lst[j]].push_back(lst[i]);
        }
    }
    for (auto& lst : adjacency) {
      std::sort(lst.begin(), lst.end());
      lst.erase(std::unique(lst.begin(), lst.end()), lst.end());
    }
  }

  // b_to_a refers to sorted A order already (owners were recorded pre-B-sort
  // on sorted a_pieces)

  // ---- rescale to original units ----
  Partition part;
  part.epsilon = eps;
  part.d = d;
  part.domain = dom;
  part.adjacency = std::move(adjacency);
  auto scale_loop = [&](Loop& lp) {
    for (auto& pr : lp.prims) {
      pr.a = d * pr.a;
      pr.b = d * pr.b;
      pr.center = d * pr.center;
      pr.radius *= d;
    }
  };
  auto scale_piece = [&](Piece pc) {
    for (auto& lp : pc.loops) scale_loop(lp);
    pc.area *= d * d;
    pc.diameter *= d;
    BBox nb;
    nb.add(Point{pc.box.xmin * d, pc.box.ymin * d});
    nb.add(Point{pc.box.xmax * d, pc.box.ymax * d});
    pc.box = nb;
    return pc;
  };
  for (auto& pc : a_pieces) part.a_pieces.push_back(scale_piece(std::move(pc)));
  for (auto& pc : b_pieces) part.b_pieces.push_back(scale_piece(std::move(pc)));
  for (auto c : cuts) {
    for (auto& p : c.pts) p = d * p;
    c.outer.p = d * c.outer.p;
    c.inner.p = d * c.inner.p;
    part.cuts.push_back(std::move(c));
  }
  internals->cuts_unit = std::move(cuts);
  part.unit = internals;
  return part;
}

}  // namespace decomp
