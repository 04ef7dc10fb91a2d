#include <cmath>

#include "decomp/inscribe.hpp"
#include "decomp/offset.hpp"
#include "doctest.h"

using namespace decomp;

namespace {

const double pi = 3.14159265358979323846;

Tolerance tiny_tol() {
  Tolerance t;
  t.snap = 1e-10;
  return t;
}

VHPolygon square1() { return canonicalize({{0, 0}, {1, 0}, {1, 1}, {0, 1}}, tiny_tol()); }

VHPolygon lshape1() {
  // 1x1 square minus the top-right 0.5x0.5 corner
  return canonicalize({{0, 0}, {1, 0}, {1, 0.5}, {0.5, 0.5}, {0.5, 1}, {0, 1}}, tiny_tol());
}

VHPolygon rect3() { return canonicalize({{0, 0}, {3, 0}, {3, 0.5}, {0, 0.5}}, tiny_tol()); }

VHPolygon slit_square() {
  return canonicalize({{0, 0}, {1, 0}, {1, 0.5}, {0.45, 0.5}, {1, 0.5}, {1, 1}, {0, 1}},
                      tiny_tol());
}

int arc_count(const OffsetCurve& S) {
  int c = 0;
  for (auto& p : S.loop.prims) c += (p.kind == PrimKind::arc);
  return c;
}

double poly_distance(const ReducedPoly& R, Point p) {
  double best = 1e300;
  for (int k = 0; k < R.n(); ++k)
    if (!R.side_zero(k)) best = std::min(best, dist_point_segment(p, R.side_a(k), R.side_b(k)));
  return best;
}

}  // namespace

TEST_CASE("inner offset of the unit square") {
  Tolerance tol = tiny_tol();
  OffsetCurve S = inner_offset(square1(), 0.1, tol);
  CHECK(S.loop.length() == doctest::Approx(3.2).epsilon(1e-9));
  CHECK(arc_count(S) == 0);
  CHECK(S.loop.area() == doctest::Approx(0.64).epsilon(1e-9));
}

TEST_CASE("inner offset of the L-shape has exactly one quarter arc") {
  Tolerance tol = tiny_tol();
  OffsetCurve S = inner_offset(lshape1(), 0.1, tol);
  CHECK(arc_count(S) == 1);
  for (auto& p : S.loop.prims)
    if (p.kind == PrimKind::arc) {
      CHECK(p.radius == doctest::Approx(0.1));
      CHECK(p.sweep() == doctest::Approx(pi / 2).epsilon(1e-6));
      CHECK(dist(p.center, {0.5, 0.5}) <= 1e-9);
    }
  CHECK(S.loop.length() == doctest::Approx(3.0 + (pi / 2) * 0.1).epsilon(1e-9));
}

TEST_CASE("inner offset of a 3x0.5 rectangle") {
  Tolerance tol = tiny_tol();
  OffsetCurve S = inner_offset(rect3(), 0.1, tol);
  CHECK(arc_count(S) == 0);
  CHECK(S.loop.area() == doctest::Approx(2.8 * 0.3).epsilon(1e-9));
  CHECK(S.loop.length() == doctest::Approx(2 * (2.8 + 0.3)).epsilon(1e-9));
}

TEST_CASE("offset of a slit polygon wraps the slit in one simple loop") {
  Tolerance tol = tiny_tol();
  VHPolygon P = slit_square();
  ReducedPoly R = reduce(P, tol.snap);
  OffsetCurve S = inner_offset(R, 0.04, tol);
  // distance calibration on sampled points
  for (Point z : S.loop.sample(0.01)) {
    CHECK(poly_distance(R, z) == doctest::Approx(0.04).epsilon(1e-6));
  }
  // the slit forces arcs around its tip
  CHECK(arc_count(S) >= 1);
  // simplicity: non-adjacent primitives stay apart
  auto& pr = S.loop.prims;
  int m = (int)pr.size();
  for (int i = 0; i < m; ++i)
    for (int j = i + 2; j < m; ++j) {
      if (i == 0 && j == m - 1) continue;
      double dmin = 1e300;
      for (int s = 0; s <= 8; ++s)
        dmin = std::min(dmin, dist_point_prim(pr[i].point_at(s / 8.0), pr[j]));
      CHECK(dmin > 1e-9);
    }
}

TEST_CASE("offset distance calibration on an inscribed polygon") {
  DomainPolygon dom;
  dom.vertices = {{0, 0}, {10, 0}, {10, 5}, {5, 5}, {5, 10}, {0, 10}};
  InscribeResult IR = inscribe(dom, 1.0, {2.5, 2.5});
  ReducedPoly R = reduce(IR.polygon_unit, IR.tol_unit.snap);
  double eps = 1.0 / 32.0;
  OffsetCurve S = inner_offset(R, eps, IR.tol_unit);
  Rng rng(11);
  int checked = 0;
  for (int i = 0; i < 1000; ++i) {
    Point z = S.loop.point_at_length(rng.uniform(0.0, S.total_len));
    CHECK(std::abs(poly_distance(R, z) - eps) <= 1e-6 * eps);
    ++checked;
  }
  CHECK(checked == 1000);
}

TEST_CASE("nearest offset points: square side midpoint and corner") {
  Tolerance tol = tiny_tol();
  VHPolygon P = square1();
  ReducedPoly R = reduce(P, tol.snap);
  OffsetCurve S = inner_offset(R, 0.1, tol);
  OffsetIndex idx(R, S, tol);
  // side midpoint: foot at depth eps on the inward normal
  for (int k = 0; k < R.n(); ++k) {
    NearestSet m = nearest_offset_points(idx, k, 0.5);
    REQUIRE(m.points.size() == 1);
    Point p = R.side_a(k) + 0.5 * (R.side_b(k) - R.side_a(k));
    CHECK(dist(p, m.points[0]) == doctest::Approx(0.1).epsilon(1e-9));
  }
  // corner: the offset corner at distance eps*sqrt(2)
  NearestSet mc = nearest_offset_points_vertex(idx, 0);
  CHECK(!mc.is_arc);
  CHECK(dist(R.v[0], mc.points[0]) == doctest::Approx(0.1 * std::sqrt(2.0)).epsilon(1e-9));
}

TEST_CASE("nearest offset points: L reflex vertex owns the quarter arc") {
  Tolerance tol = tiny_tol();
  VHPolygon P = lshape1();
  ReducedPoly R = reduce(P, tol.snap);
  OffsetCurve S = inner_offset(R, 0.1, tol);
  OffsetIndex idx(R, S, tol);
  int reflex = -1;
  for (int k = 0; k < R.n(); ++k)
    if (R.code[k] == 270) reflex = k;
  REQUIRE(reflex >= 0);
  NearestSet m = nearest_offset_points_vertex(idx, reflex);
  CHECK(m.is_arc);
  for (Point z : m.points) CHECK(dist(z, R.v[reflex]) == doctest::Approx(0.1).epsilon(1e-9));
}

TEST_CASE("foot map: continuity, surjectivity, interval preimages") {
  Tolerance tol = tiny_tol();
  for (const VHPolygon& P : {square1(), lshape1()}) {
    ReducedPoly R = reduce(P, tol.snap);
    OffsetCurve S = inner_offset(R, 0.1, tol);
    FootMap fm = foot_map(R, S, tol);
    FootMapReport rep = verify_foot_map(fm, 24);
    CHECK(rep.continuous);
    CHECK(rep.surjective);
    CHECK(rep.interval_preimages);
  }
}

TEST_CASE("foot map sweeps the reflex arc endpoints") {
  Tolerance tol = tiny_tol();
  ReducedPoly R = reduce(lshape1(), tol.snap);
  OffsetCurve S = inner_offset(R, 0.1, tol);
  FootMap fm = foot_map(R, S, tol);
  int reflex = -1;
  for (int k = 0; k < R.n(); ++k)
    if (R.code[k] == 270) reflex = k;
  // vertex v dwells on the doubled parameter interval [4v-2, 4v]
  double t0 = 4.0 * reflex - 2.0;
  Point f0 = fm.foot(t0 + 1e-9);
  Point f1 = fm.foot(t0 + 2.0 - 1e-9);
  CHECK(dist(f0, f1) > 0.05);  // the sweep really moves across the arc
  for (double u : {0.0, 0.5, 1.0, 1.5, 2.0}) {
    Point f = fm.foot(t0 + std::clamp(u, 1e-9, 2.0 - 1e-9));
    CHECK(dist(f, R.v[reflex]) == doctest::Approx(0.1).epsilon(1e-6));
  }
}

TEST_CASE("local lipschitz ratio: straight segments and arcs") {
  Tolerance tol = tiny_tol();
  {
    OffsetCurve S = inner_offset(square1(), 0.1, tol);
    LipschitzResult r = local_lipschitz_ratio(S, 0.05, 2000, 5);
    CHECK(r.max_ratio <= std::sqrt(2.0) + 1e-6);  // right-angle inner corners
  }
  {
    OffsetCurve S = inner_offset(lshape1(), 0.1, tol);
    LipschitzResult r = local_lipschitz_ratio(S, 0.1 / 12.0, 4000, 5);
    CHECK(r.max_ratio <= 60.0);
    CHECK(r.max_ratio < pi / 2 + 0.1);  // arc/chord bound at this scale
  }
}

TEST_CASE("nesting: deeper offsets bound smaller regions") {
  Tolerance tol = tiny_tol();
  ReducedPoly R = reduce(lshape1(), tol.snap);
  OffsetCurve S1 = inner_offset(R, 0.05, tol);
  OffsetCurve S2 = inner_offset(R, 0.1, tol);
  CHECK(S2.loop.area() < S1.loop.area());
  // every point of the deeper curve lies inside the shallower one: distance to
  // the polygon is 2eps > eps everywhere
  for (Point z : S2.loop.sample(0.02)) {
    CHECK(S1.loop.distance_to(z) > 0.0);
    CHECK(poly_distance(R, z) == doctest::Approx(0.1).epsilon(1e-6));
  }
}

TEST_CASE("two-level proximity: S_eps within 2r of S_(eps+r)") {
  Tolerance tol = tiny_tol();
  DomainPolygon dom;
  dom.vertices = {{0, 0}, {10, 0}, {10, 5}, {5, 5}, {5, 10}, {0, 10}};
  InscribeResult IR = inscribe(dom, 1.0, {2.5, 2.5});
  ReducedPoly R = reduce(IR.polygon_unit, IR.tol_unit.snap);
  double eps = 1.0 / 32.0;
  OffsetCurve S1 = inner_offset(R, eps, IR.tol_unit);
  OffsetCurve S2 = inner_offset(R, 2 * eps, IR.tol_unit);
  for (Point z : S1.loop.sample(S1.total_len / 500)) {
    CHECK(S2.loop.distance_to(z) < 2 * eps);
  }
}

TEST_CASE("clipped length of the curve in small discs stays under 20r") {
  Tolerance tol = tiny_tol();
  ReducedPoly R = reduce(lshape1(), tol.snap);
  double eps = 1.0 / 32.0;
  OffsetCurve S = inner_offset(R, eps, tol);
  Rng rng(23);
  for (int i = 0; i < 200; ++i) {
    double r = rng.uniform(0.2, 0.99) * eps / 4;
    Point c = S.loop.point_at_length(rng.uniform(0.0, S.total_len));
    Point a{c.x + rng.uniform(-r, r), c.y + rng.uniform(-r, r)};
    CHECK(clipped_length(S, a, r) <= 20 * r);
  }
}

TEST_CASE("small-side access: every boundary point reaches the curve within 4 eps") {
  Tolerance tol = tiny_tol();
  DomainPolygon dom;
  dom.vertices = {{0, 0}, {10, 0}, {10, 5}, {5, 5}, {5, 10}, {0, 10}};
  InscribeResult IR = inscribe(dom, 1.0, {2.5, 2.5});
  ReducedPoly R = reduce(IR.polygon_unit, IR.tol_unit.snap);
  double eps = 1.0 / 32.0;
  OffsetCurve S = inner_offset(R, eps, IR.tol_unit);
  OffsetIndex idx(R, S, IR.tol_unit);
  Rng rng(31);
  for (int i = 0; i < 300; ++i) {
    int k = rng.uniform_int(R.n());
    if (R.side_zero(k)) continue;
    NearestSet m = nearest_offset_points(idx, k, rng.uniform());
    Point p = R.side_a(k) + 0 * (R.side_b(k));  // silence unused warnings
    (void)p;
    Point bp = R.side_a(k);
    (void)bp;
    double d = dist(m.points[0], R.side_a(k) + 0.0 * (R.side_b(k) - R.side_a(k)));
    (void)d;
  }
  // direct check with the foot map
  FootMap fm = foot_map(R, S, IR.tol_unit);
  int T = fm.param_slots();
  for (int i = 0; i < 400; ++i) {
    double t = (double)T * i / 400.0;
    CHECK(dist(fm.boundary_point(t), fm.foot(t)) < 4 * eps);
  }
}
