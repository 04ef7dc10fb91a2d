#include <cmath>

#include "decomp/vh_polygon.hpp"
#include "doctest.h"

using namespace decomp;

namespace {

Tolerance tiny_tol() {
  Tolerance t;
  t.snap = 1e-9;
  return t;
}

VHPolygon square(double s) {
  return canonicalize({{0, 0}, {s, 0}, {s, s}, {0, s}}, tiny_tol());
}

// 1x1 square with a 0.5-deep horizontal slit entering from the right edge at
// mid-height: boundary ..., (1,0.5), (0.5,0.5), (1,0.5), ... gives a fold whose
// tip has a 360-degree angle.
VHPolygon slit_square() {
  return canonicalize({{0, 0}, {1, 0}, {1, 0.5}, {0.5, 0.5}, {1, 0.5}, {1, 1}, {0, 1}},
                      tiny_tol());
}

VHPolygon lshape() {
  // 2x2 square minus the top-right 1x1 corner
  return canonicalize({{0, 0}, {2, 0}, {2, 1}, {1, 1}, {1, 2}, {0, 2}}, tiny_tol());
}

}  // namespace

TEST_CASE("angle codes: square corners, L reflex, slit tip") {
  Tolerance tol = tiny_tol();
  VHPolygon sq = square(1.0);
  for (int k = 0; k < sq.n(); ++k)
    if (!sq.side_zero(k - 1, tol.snap)) CHECK(angle_code(sq, k, tol.snap) == 90);

  VHPolygon L = lshape();
  int reflex = 0;
  for (int k = 0; k < L.n(); ++k) {
    if (L.side_zero(k - 1, tol.snap)) continue;
    int c = angle_code(L, k, tol.snap);
    if (c == 270) ++reflex;
  }
  CHECK(reflex == 1);

  VHPolygon S = slit_square();
  int folds = 0;
  for (int k = 0; k < S.n(); ++k) {
    if (S.side_zero(k - 1, tol.snap)) continue;
    if (angle_code(S, k, tol.snap) == 360) ++folds;
  }
  CHECK(folds == 1);
}

TEST_CASE("turning number: sum of (180 - code) is 360") {
  Tolerance tol = tiny_tol();
  for (const VHPolygon& P : {square(2.0), lshape(), slit_square()}) {
    int sum = 0;
    for (int k = 0; k < P.n(); ++k) {
      if (P.side_zero(k - 1, tol.snap)) continue;
      sum += 180 - angle_code(P, k, tol.snap);
    }
    CHECK(sum == 360);
  }
}

TEST_CASE("validate_vh: unit square memberships") {
  Tolerance tol = tiny_tol();
  VHPolygon sq = square(1.0);
  CHECK(validate_vh(sq, 1.0, 1.0, tol).empty());

  auto viol = validate_vh(sq, 0.5, 1.0, tol);
  int item4 = 0;
  for (auto& v : viol) item4 += (v.item == 4);
  CHECK(item4 == 4);  // every nonzero side too long
}

TEST_CASE("validate_vh: shallow rectangle fails the depth probe") {
  Tolerance tol = tiny_tol();
  VHPolygon r = canonicalize({{0, 0}, {1, 0}, {1, 0.25}, {0, 0.25}}, tol);
  auto viol = validate_vh(r, 1.0, 0.5, tol);
  bool item5_on_long_side = false;
  for (auto& v : viol)
    if (v.item == 5) item5_on_long_side = true;
  CHECK(item5_on_long_side);
}

TEST_CASE("validate_vh monotonicity in alpha and beta") {
  Tolerance tol = tiny_tol();
  VHPolygon L = lshape();
  CHECK(validate_vh(L, 2.0, 0.5, tol).empty());
  CHECK(validate_vh(L, 3.0, 0.25, tol).empty());  // weaker on both axes
}

TEST_CASE("canonicalize: idempotence and parity") {
  Tolerance tol = tiny_tol();
  VHPolygon sq = square(1.0);
  VHPolygon sq2 = canonicalize(sq.v, tol);
  CHECK(sq2.n() == sq.n());
  for (int i = 0; i < sq.n(); ++i) {
    CHECK(sq2.v[i].x == doctest::Approx(sq.v[i].x));
    CHECK(sq2.v[i].y == doctest::Approx(sq.v[i].y));
  }
  CHECK(sq2.first_vertical == sq.first_vertical);
}

TEST_CASE("canonicalize: staircase stays unchanged up to phase") {
  Tolerance tol = tiny_tol();
  std::vector<Point> stair = {{0, 0}, {1, 0}, {1, 1}, {2, 1}, {2, 3}, {0, 3}};
  VHPolygon P = canonicalize(stair, tol);
  CHECK(P.n() == 6);  // pure relabeling, no zero sides
  P.assert_parity(tol.snap);
}

TEST_CASE("canonicalize: collinear corners become zero-side separators") {
  Tolerance tol = tiny_tol();
  // bottom edge split at x=1: two collinear horizontal sides
  VHPolygon P = canonicalize({{0, 0}, {1, 0}, {2, 0}, {2, 2}, {0, 2}}, tol);
  P.assert_parity(tol.snap);
  int zero_sides = 0;
  for (int k = 0; k < P.n(); ++k) zero_sides += P.side_zero(k, tol.snap);
  CHECK(zero_sides == 1);
  // and the polygon region is unchanged
  CHECK(shoelace(P.v) == doctest::Approx(4.0));
  // idempotent
  VHPolygon Q = canonicalize(P.v, tol);
  CHECK(Q.n() == P.n());
}

TEST_CASE("canonicalize rejects non-axis-parallel input") {
  Tolerance tol = tiny_tol();
  CHECK_THROWS_AS(canonicalize({{0, 0}, {1, 1}, {0, 2}}, tol), Error);
}

TEST_CASE("slit square passes VH with small beta") {
  Tolerance tol = tiny_tol();
  VHPolygon S = slit_square();
  auto viol = validate_vh(S, 1.0, 0.2, tol);
  CHECK(viol.empty());
}

TEST_CASE("reduce merges collinear runs and keeps fold tips") {
  Tolerance tol = tiny_tol();
  VHPolygon P = canonicalize({{0, 0}, {1, 0}, {2, 0}, {2, 2}, {0, 2}}, tol);
  ReducedPoly R = reduce(P, tol.snap);
  CHECK(R.n() == 4);  // collinear bottom merged

  ReducedPoly S = reduce(slit_square(), tol.snap);
  int folds = 0;
  for (int c : S.code) folds += (c == 360);
  CHECK(folds == 1);
}
