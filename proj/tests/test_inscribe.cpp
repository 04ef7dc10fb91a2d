#include <cmath>

#include "decomp/inscribe.hpp"
#include "doctest.h"

using namespace decomp;

namespace {

DomainPolygon box(double x0, double y0, double x1, double y1) {
  DomainPolygon d;
  d.vertices = {{x0, y0}, {x1, y0}, {x1, y1}, {x0, y1}};
  return d;
}

DomainPolygon lshape10() {
  // 10x10 square minus the top-right 5x5 corner
  DomainPolygon d;
  d.vertices = {{0, 0}, {10, 0}, {10, 5}, {5, 5}, {5, 10}, {0, 10}};
  return d;
}

DomainPolygon dumbbell(double corridor_w) {
  // two 3x3 bulbs joined by a corridor of the given width, length 2
  double h0 = 1.5 - corridor_w / 2, h1 = 1.5 + corridor_w / 2;
  DomainPolygon d;
  d.vertices = {{0, 0}, {3, 0},  {3, h0}, {5, h0}, {5, 0},  {8, 0},
                {8, 3}, {5, 3},  {5, h1}, {3, h1}, {3, 3},  {0, 3}};
  return d;
}

// brute-force oracle: contained d-lattice cells by dense sampling
bool cell_contained_oracle(const DomainPolygon& dom, double d, int i, int j) {
  Tolerance tol = Tolerance::for_bbox(dom.bbox());
  for (int a = 0; a <= 8; ++a)
    for (int b = 0; b <= 8; ++b) {
      Point p{(i + a / 8.0) * d, (j + b / 8.0) * d};
      if (point_in_domain(p, dom, tol) != Containment::inside) return false;
    }
  return true;
}

double polygon_min_side_boundary_dist(const VHPolygon& P, const DomainPolygon& dom, int samples) {
  Loop bd = dom.boundary_loop();
  double worst = 0;
  for (int k = 0; k < P.n(); ++k) {
    double best = 1e300;
    for (int s = 0; s <= samples; ++s) {
      Point p = P.side_a(k) + (double(s) / samples) * (P.side_b(k) - P.side_a(k));
      best = std::min(best, bd.distance_to(p));
      if (best < 1e-7) break;
    }
    worst = std::max(worst, best);
  }
  return worst;
}

}  // namespace

TEST_CASE("lattice_seed: unit square at d=0.3 gives the single 2x2 block") {
  VHPolygon P = lattice_seed(box(0, 0, 1, 1), 0.3, {0.5, 0.5});
  BBox b = P.bbox();
  CHECK(b.xmin == doctest::Approx(0.3).epsilon(1e-6));
  CHECK(b.ymin == doctest::Approx(0.3).epsilon(1e-6));
  CHECK(b.xmax == doctest::Approx(0.9).epsilon(1e-6));
  CHECK(b.ymax == doctest::Approx(0.9).epsilon(1e-6));
  CHECK(P.area() == doctest::Approx(0.36).epsilon(1e-6));
}

TEST_CASE("lattice_seed: too coarse a step fails") {
  CHECK_THROWS_AS(lattice_seed(box(0, 0, 1, 1), 0.8, {0.5, 0.5}), Error);
}

TEST_CASE("lattice_seed: dumbbell corridor narrower than d confines the seed") {
  DomainPolygon dom = dumbbell(0.4);
  double d = 0.5;
  VHPolygon P = lattice_seed(dom, d, {1.5, 1.5});
  BBox b = P.bbox();
  CHECK(b.xmax <= 3.0 + 1e-9);  // stays in the left bulb

  // oracle: flood over brute-force contained cells from the seed cell
  int reach_right = 0;
  for (int i = 0; i < 16; ++i)
    for (int j = 0; j < 6; ++j)
      if (cell_contained_oracle(dom, d, i, j) && (i + 1) * d > 5.0) reach_right = 1;
  // contained cells exist on the right, but are not 4-connected to the left
  CHECK(reach_right == 1);
  CHECK(!cell_contained_oracle(dom, d, 6, 2));  // corridor cells not contained
  CHECK(!cell_contained_oracle(dom, d, 7, 2));
}

TEST_CASE("lattice_seed: dyadic refinement nests") {
  DomainPolygon dom = lshape10();
  VHPolygon coarse = lattice_seed(dom, 1.0, {2.5, 2.5});
  VHPolygon fine = lattice_seed(dom, 0.5, {2.5, 2.5});
  Tolerance tol = Tolerance::for_bbox(dom.bbox());
  Rng rng(3);
  BBox cb = coarse.bbox();
  int tested = 0;
  while (tested < 300) {
    Point p{rng.uniform(cb.xmin, cb.xmax), rng.uniform(cb.ymin, cb.ymax)};
    if (coarse.classify(p, tol.snap) != Containment::inside) continue;
    ++tested;
    CHECK(fine.classify(p, tol.snap) != Containment::outside);
  }
}

TEST_CASE("grow_rectangle: open strip grows to the boundary") {
  DomainPolygon dom = box(0, 0, 10, 10);
  Tolerance tol = Tolerance::for_bbox(dom.bbox());
  DomainIndex idx(dom, tol);
  // interior rectangle whose bottom side runs (2,3)->(5,3), interior above
  VHPolygon P = canonicalize({{2, 3}, {5, 3}, {5, 6}, {2, 6}}, tol);
  int bottom = -1;
  for (int k = 0; k < P.n(); ++k)
    if (!P.side_zero(k, tol.snap) && P.side_a(k).y == 3 && P.side_b(k).y == 3 &&
        P.side_dir(k).x > 0)
      bottom = k;
  REQUIRE(bottom >= 0);
  GrowthRect g = grow_rectangle(idx, P, bottom);
  CHECK(!g.empty);
  CHECK(g.height == doctest::Approx(3.0));
  CHECK(g.p.y == doctest::Approx(0.0));  // top lands on the domain boundary
}

TEST_CASE("grow_rectangle: side on the boundary degenerates") {
  DomainPolygon dom = box(0, 0, 10, 10);
  Tolerance tol = Tolerance::for_bbox(dom.bbox());
  DomainIndex idx(dom, tol);
  VHPolygon P = canonicalize({{2, 0}, {5, 0}, {5, 6}, {2, 6}}, tol);
  int bottom = -1;
  for (int k = 0; k < P.n(); ++k)
    if (!P.side_zero(k, tol.snap) && P.side_a(k).y == 0 && P.side_b(k).y == 0) bottom = k;
  REQUIRE(bottom >= 0);
  GrowthRect g = grow_rectangle(idx, P, bottom);
  CHECK(g.empty);
}

TEST_CASE("grow_rectangle: notch blocks before the outer wall") {
  // L-shaped domain; a strip facing the inner notch must stop at the notch edge
  DomainPolygon dom = lshape10();
  Tolerance tol = Tolerance::for_bbox(dom.bbox());
  DomainIndex idx(dom, tol);
  // rectangle under the notch, top side (6,2)->(9,2)... its top faces up toward
  // y=5 (the notch floor), not y=10
  VHPolygon P = canonicalize({{6, 1}, {9, 1}, {9, 2}, {6, 2}}, tol);
  int top = -1;
  for (int k = 0; k < P.n(); ++k)
    if (!P.side_zero(k, tol.snap) && P.side_a(k).y == 2 && P.side_b(k).y == 2 &&
        P.side_dir(k).x < 0)
      top = k;
  REQUIRE(top >= 0);
  GrowthRect g = grow_rectangle(idx, P, top);
  CHECK(!g.empty);
  // ray-march oracle for the clearance
  double oracle = 1e9;
  for (int s = 0; s <= 300; ++s) {
    double x = 6 + 3.0 * s / 300;
    for (double h = 0.01; h < 9; h += 0.01) {
      if (point_in_domain({x, 2 + h}, dom, tol) != Containment::inside) {
        oracle = std::min(oracle, h);
        break;
      }
    }
  }
  CHECK(g.height == doctest::Approx(3.0).epsilon(0.02));
  CHECK(std::abs(g.height - oracle) <= 0.02);
}

TEST_CASE("grow_rectangle rejects zero-length sides") {
  DomainPolygon dom = box(0, 0, 4, 4);
  Tolerance tol = Tolerance::for_bbox(dom.bbox());
  DomainIndex idx(dom, tol);
  VHPolygon P = canonicalize({{1, 1}, {2, 1}, {3, 1}, {3, 3}, {1, 3}}, tol);
  int zero = -1;
  for (int k = 0; k < P.n(); ++k)
    if (P.side_zero(k, tol.snap)) zero = k;
  REQUIRE(zero >= 0);
  CHECK_THROWS_AS(grow_rectangle(idx, P, zero), Error);
}

TEST_CASE("expand_step: seed strips grow to both walls") {
  DomainPolygon dom = box(0.3, 0.4, 9.5, 9.6);
  Tolerance tol = Tolerance::for_bbox(dom.bbox());
  DomainIndex idx(dom, tol);
  VHPolygon seed = lattice_seed(dom, 1.0, {5, 5});
  auto [P1, rects1] = expand_step(idx, seed, Axis::horizontal);
  BBox b = P1.bbox();
  CHECK(b.ymin == doctest::Approx(0.4).epsilon(1e-9));
  CHECK(b.ymax == doctest::Approx(9.6).epsilon(1e-9));
  auto [P2, rects2] = expand_step(idx, P1, Axis::vertical);
  CHECK(P2.area() == doctest::Approx(dom.area()).epsilon(1e-9));
  // fixed point: every further rectangle is degenerate
  auto [P3, rects3] = expand_step(idx, P2, Axis::horizontal);
  for (auto& r : rects3) CHECK(r.empty);
  CHECK(P3.area() == doctest::Approx(P2.area()));
}

TEST_CASE("inscribe: axis-aligned square domain reaches the fixed point") {
  DomainPolygon dom = box(0, 0, 10, 10);
  InscribeResult R = inscribe(dom, 1.0, {5, 5});
  CHECK(R.polygon.area() == doctest::Approx(100.0).epsilon(1e-5));
  // every side on the domain boundary
  CHECK(polygon_min_side_boundary_dist(R.polygon, dom, 16) <= 1e-5);
  // membership in VH(3,1/2) at unit scale
  auto viol = validate_vh(R.polygon_unit, 3.0, 0.5, R.tol_unit, 64);
  CHECK(viol.empty());
  for (int k = 0; k < R.polygon_unit.n(); ++k) {
    double maxlen = R.polygon_unit.side_len(k);
    CHECK(maxlen <= 3.0 + 1e-6);
  }
}

TEST_CASE("inscribe: L-shaped domain reaches the L itself") {
  DomainPolygon dom = lshape10();
  InscribeResult R = inscribe(dom, 1.0, {2.5, 2.5});
  CHECK(R.polygon.area() == doctest::Approx(75.0).epsilon(1e-5));
  CHECK(polygon_min_side_boundary_dist(R.polygon, dom, 16) <= 1e-5);
  int reflex = 0;
  for (int k = 0; k < R.polygon_unit.n(); ++k) {
    if (R.polygon_unit.side_zero(k - 1, R.tol_unit.snap)) continue;
    if (angle_code(R.polygon_unit, k, R.tol_unit.snap) == 270) ++reflex;
  }
  CHECK(reflex >= 1);
  auto viol = validate_vh(R.polygon_unit, 3.0, 0.5, R.tol_unit, 64);
  CHECK(viol.empty());
}

TEST_CASE("inscribe: step bound and monotone areas") {
  DomainPolygon dom = box(0, 0, 10, 10);
  InscribeResult R = inscribe(dom, 1.0, {5, 5});
  CHECK((int)R.trace.stages.size() <= 402);
  double prev = 0;
  for (auto& st : R.trace.stages) {
    CHECK(st.polygon_area >= prev - 1e-9);
    prev = st.polygon_area;
  }
  CHECK(R.trace.stop_step == (int)R.trace.stages.size());
}

TEST_CASE("inscribe: stage polygons stay in VH(1,1/2)") {
  DomainPolygon dom = lshape10();
  InscribeResult R = inscribe(dom, 1.0, {2.5, 2.5}, /*validate_stages=*/true);
  CHECK(R.trace.stop_step >= 1);
}

TEST_CASE("inscribe: non-lattice polygon domain") {
  // irregular hexagon-ish rectilinear domain with non-integer coordinates
  DomainPolygon dom;
  dom.vertices = {{0.13, 0.21}, {7.4, 0.21}, {7.4, 3.7}, {4.9, 3.7}, {4.9, 6.3}, {0.13, 6.3}};
  InscribeResult R = inscribe(dom, 0.5, {2, 2});
  CHECK(R.polygon.area() == doctest::Approx(dom.area()).epsilon(1e-4));
  auto viol = validate_vh(R.polygon_unit, 3.0, 0.5, R.tol_unit, 64);
  CHECK(viol.empty());
}

TEST_CASE("inscribe: dumbbell with fat corridor is recovered whole") {
  DomainPolygon dom = dumbbell(1.6);
  InscribeResult R = inscribe(dom, 0.25, {1.5, 1.5});
  CHECK(R.polygon.area() == doctest::Approx(dom.area()).epsilon(1e-3));
}

TEST_CASE("inscribe: dumbbell with thin corridor stays one-sided") {
  DomainPolygon dom = dumbbell(0.3);
  InscribeResult R = inscribe(dom, 0.5, {1.5, 1.5});
  BBox b = R.polygon.bbox();
  CHECK(b.xmax <= 3.0 + 1e-6);
  auto viol = validate_vh(R.polygon_unit, 3.0, 0.5, R.tol_unit, 64);
  CHECK(viol.empty());
}
