#include <cmath>

#include "decomp/geom.hpp"
#include "doctest.h"

using namespace decomp;

namespace {

DomainPolygon unit_square() {
  DomainPolygon d;
  d.vertices = {{0, 0}, {1, 0}, {1, 1}, {0, 1}};
  return d;
}

Loop square_loop(double side) {
  Loop lp;
  lp.prims.push_back(Primitive::make_segment({0, 0}, {side, 0}));
  lp.prims.push_back(Primitive::make_segment({side, 0}, {side, side}));
  lp.prims.push_back(Primitive::make_segment({side, side}, {0, side}));
  lp.prims.push_back(Primitive::make_segment({0, side}, {0, 0}));
  return lp;
}

Loop circle_loop(double r) {
  const double pi = 3.14159265358979323846;
  Loop lp;
  lp.prims.push_back(Primitive::make_arc({0, 0}, r, 0, pi, true));
  lp.prims.push_back(Primitive::make_arc({0, 0}, r, pi, 2 * pi, true));
  return lp;
}

}  // namespace

TEST_CASE("point_in_domain basics") {
  DomainPolygon sq = unit_square();
  Tolerance tol = Tolerance::for_bbox(sq.bbox());
  CHECK(point_in_domain({0.5, 0.5}, sq, tol) == Containment::inside);
  CHECK(point_in_domain({0, 0}, sq, tol) == Containment::boundary);
  CHECK(point_in_domain({2, 2}, sq, tol) == Containment::outside);
}

TEST_CASE("classification of interior points is orientation independent") {
  DomainPolygon sq = unit_square();
  DomainPolygon rev;
  rev.vertices = {sq.vertices[0], sq.vertices[3], sq.vertices[2], sq.vertices[1]};
  Tolerance tol = Tolerance::for_bbox(sq.bbox());
  Rng rng(7);
  for (int i = 0; i < 200; ++i) {
    Point p{rng.uniform(0.05, 0.95), rng.uniform(0.05, 0.95)};
    CHECK(point_in_polygon(p, sq.vertices, tol.snap) == point_in_polygon(p, rev.vertices, tol.snap));
  }
}

TEST_CASE("boundary_distance on simple shapes") {
  Loop sq = square_loop(1.0);
  CHECK(sq.distance_to({0.5, 0.5}) == doctest::Approx(0.5));
  CHECK(sq.distance_to({0.0, 0.5}) == doctest::Approx(0.0));
  CHECK(sq.distance_to({0.2, 0.3}) == doctest::Approx(0.2));
}

TEST_CASE("loop_metrics: unit square, circle, 3x0.5 rectangle") {
  Tolerance tol;
  tol.snap = 1e-12;
  {
    auto m = loop_metrics(square_loop(1.0), tol);
    CHECK(m.area == doctest::Approx(1.0));
    CHECK(m.length == doctest::Approx(4.0));
    CHECK(m.diameter == doctest::Approx(std::sqrt(2.0)).epsilon(1e-6));
  }
  {
    auto m = loop_metrics(circle_loop(1.0), tol);
    CHECK(m.area == doctest::Approx(3.14159265358979));
    CHECK(m.length == doctest::Approx(2 * 3.14159265358979));
    CHECK(m.diameter == doctest::Approx(2.0).epsilon(1e-6));
  }
  {
    Loop lp;
    lp.prims.push_back(Primitive::make_segment({0, 0}, {3, 0}));
    lp.prims.push_back(Primitive::make_segment({3, 0}, {3, 0.5}));
    lp.prims.push_back(Primitive::make_segment({3, 0.5}, {0, 0.5}));
    lp.prims.push_back(Primitive::make_segment({0, 0.5}, {0, 0}));
    auto m = loop_metrics(lp, tol);
    CHECK(m.area == doctest::Approx(1.5));
    CHECK(m.length == doctest::Approx(7.0));
    CHECK(m.diameter == doctest::Approx(std::sqrt(9.25)).epsilon(1e-6));
  }
}

TEST_CASE("non-closed loop is rejected") {
  Loop lp;
  lp.prims.push_back(Primitive::make_segment({0, 0}, {1, 0}));
  lp.prims.push_back(Primitive::make_segment({1, 1}, {0, 1}));
  Tolerance tol;
  CHECK_THROWS_AS(loop_metrics(lp, tol), Error);
}

TEST_CASE("sampled points of a loop lie on it") {
  Loop c = circle_loop(2.0);
  Tolerance tol;
  tol.snap = 1e-9;
  for (Point p : c.sample(0.05)) CHECK(c.distance_to(p) <= tol.snap);
}

TEST_CASE("convex loops satisfy diameter >= length/pi") {
  Tolerance tol;
  tol.snap = 1e-12;
  for (const Loop& lp : {square_loop(1.0), square_loop(3.0), circle_loop(1.5)}) {
    auto m = loop_metrics(lp, tol);
    CHECK(m.diameter >= m.length / 3.14159265358979 - 1e-9);
  }
}

TEST_CASE("domain validation rejects bowties and wrong orientation") {
  DomainPolygon bow;
  bow.vertices = {{0, 0}, {1, 1}, {1, 0}, {0, 1}};
  Tolerance tol = Tolerance::for_bbox(bow.bbox());
  CHECK_THROWS_AS(bow.validate(tol), Error);

  DomainPolygon cw;
  cw.vertices = {{0, 0}, {0, 1}, {1, 1}, {1, 0}};
  CHECK_THROWS_AS(cw.validate(tol), Error);
}

TEST_CASE("arc primitives: geometry") {
  const double pi = 3.14159265358979323846;
  Primitive a = Primitive::make_arc({0, 0}, 1.0, 0, pi / 2, true);
  CHECK(a.length() == doctest::Approx(pi / 2));
  Point s = a.start_point(), e = a.end_point();
  CHECK(s.x == doctest::Approx(1.0));
  CHECK(e.y == doctest::Approx(1.0));
  Point mid = a.point_at(0.5);
  CHECK(mid.x == doctest::Approx(std::cos(pi / 4)));
  // reversal flips direction but keeps the point set
  Primitive r = a.reversed();
  CHECK(dist(r.start_point(), e) == doctest::Approx(0.0));
  CHECK(r.length() == doctest::Approx(a.length()));
}

TEST_CASE("deterministic rng is stable") {
  Rng a(42), b(42);
  for (int i = 0; i < 100; ++i) CHECK(a.next() == b.next());
}
