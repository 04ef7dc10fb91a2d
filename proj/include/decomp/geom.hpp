#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace decomp {

// Error taxonomy; kinds map 1:1 to CLI exit codes.
enum class ErrorKind {
  input_rejection,     // exit 2
  scale_too_coarse,    // exit 3
  internal_invariant,  // exit 4
};

struct Error : std::runtime_error {
  ErrorKind kind;
  Error(ErrorKind k, const std::string& msg) : std::runtime_error(msg), kind(k) {}
};

[[noreturn]] inline void fail(ErrorKind k, const std::string& msg) { throw Error(k, msg); }

inline void require(bool ok, ErrorKind k, const std::string& msg) {
  if (!ok) fail(k, msg);
}

struct Point {
  double x = 0.0;
  double y = 0.0;
};

inline Point operator+(Point a, Point b) { return {a.x + b.x, a.y + b.y}; }
inline Point operator-(Point a, Point b) { return {a.x - b.x, a.y - b.y}; }
inline Point operator*(double s, Point a) { return {s * a.x, s * a.y}; }
inline double dot(Point a, Point b) { return a.x * b.x + a.y * b.y; }
inline double cross(Point a, Point b) { return a.x * b.y - a.y * b.x; }
inline double norm2(Point a) { return dot(a, a); }
inline double norm(Point a) { return std::sqrt(norm2(a)); }
inline double dist(Point a, Point b) { return norm(a - b); }
inline Point perp_left(Point a) { return {-a.y, a.x}; }
inline Point perp_right(Point a) { return {a.y, -a.x}; }
inline bool finite(Point p) { return std::isfinite(p.x) && std::isfinite(p.y); }

struct BBox {
  double xmin = 0, ymin = 0, xmax = 0, ymax = 0;
  bool empty = true;
  void add(Point p) {
    if (empty) {
      xmin = xmax = p.x;
      ymin = ymax = p.y;
      empty = false;
    } else {
      xmin = std::min(xmin, p.x);
      xmax = std::max(xmax, p.x);
      ymin = std::min(ymin, p.y);
      ymax = std::max(ymax, p.y);
    }
  }
  void add(const BBox& o) {
    if (o.empty) return;
    add(Point{o.xmin, o.ymin});
    add(Point{o.xmax, o.ymax});
  }
  void inflate(double r) {
    xmin -= r;
    ymin -= r;
    xmax += r;
    ymax += r;
  }
  double diag() const { return empty ? 0.0 : std::hypot(xmax - xmin, ymax - ymin); }
  double width() const { return xmax - xmin; }
  double height() const { return ymax - ymin; }
  bool contains(Point p) const {
    return !empty && p.x >= xmin && p.x <= xmax && p.y >= ymin && p.y <= ymax;
  }
};

// Global tolerance policy: `snap` is the absolute coincidence distance,
// `rel` the relative comparison slack.
struct Tolerance {
  double snap = 1e-12;
  double rel = 1e-9;
  static Tolerance for_bbox(const BBox& b) {
    Tolerance t;
    t.snap = 1e-9 * std::max(b.diag(), 1e-12);
    return t;
  }
};

enum class PrimKind { segment, arc };

// One boundary primitive: a straight segment or a circular arc, traversed
// from start_point() to end_point(). Arcs store the traversal direction in
// `ccw`; `a0`/`a1` are the start/end angles with sweep in (0, 2pi].
struct Primitive {
  PrimKind kind = PrimKind::segment;
  Point a, b;          // segment endpoints
  Point center;        // arc
  double radius = 0.0;
  double a0 = 0.0, a1 = 0.0;
  bool ccw = true;
  int anchor = -1;     // producer back-reference (side or vertex index)

  static Primitive make_segment(Point a, Point b, int anchor = -1) {
    Primitive p;
    p.kind = PrimKind::segment;
    p.a = a;
    p.b = b;
    p.anchor = anchor;
    return p;
  }
  static Primitive make_arc(Point c, double r, double a0, double a1, bool ccw, int anchor = -1) {
    Primitive p;
    p.kind = PrimKind::arc;
    p.center = c;
    p.radius = r;
    p.a0 = a0;
    p.a1 = a1;
    p.ccw = ccw;
    p.anchor = anchor;
    return p;
  }

  double sweep() const;  // positive angular extent of an arc
  double length() const;
  Point start_point() const;
  Point end_point() const;
  Point point_at(double t) const;    // t in [0,1] along traversal
  Point tangent_at(double t) const;  // unit tangent in traversal direction
  Primitive reversed() const;
  BBox bbox() const;
};

double angle_of(Point v);
double norm_angle(double a);                       // into [0, 2pi)
double ccw_sweep(double from, double to);          // in (0, 2pi]
bool angle_in_ccw_arc(double a, double a0, double a1, double tol_angle);

double dist_point_segment(Point p, Point a, Point b);
Point closest_on_segment(Point p, Point a, Point b);
double dist_point_prim(Point p, const Primitive& pr);
Point closest_on_prim(Point p, const Primitive& pr);

// Proper + touching intersection test for closed segments, with tolerance.
bool segments_intersect(Point a, Point b, Point c, Point d, double tol);
// Intersection of open segment interiors (touching at endpoints excluded).
bool segments_cross_open(Point a, Point b, Point c, Point d, double tol);

// circle (c,r) vs segment/line and circle: intersection points appended.
void circle_segment_hits(Point c, double r, Point a, Point b, std::vector<double>& ts);
void circle_circle_hits(Point c0, double r0, Point c1, double r1, std::vector<Point>& out);

// A closed loop of primitives (endpoint of i coincides with start of i+1).
struct Loop {
  std::vector<Primitive> prims;

  double length() const;
  double area() const;  // signed; arcs contribute their circular-segment bulge
  bool closed(double tol) const;
  BBox bbox() const;
  // Dense boundary sample: primitive endpoints, arc axis-extremal points, and
  // points at spacing <= step.
  std::vector<Point> sample(double step) const;
  double diameter(double step) const;  // convex hull + rotating calipers over sample()
  double distance_to(Point p) const;   // min distance to the union of primitives
  Point point_at_length(double s) const;
  Loop reversed() const;
};

struct LoopMetrics {
  double area = 0, diameter = 0, length = 0;
};
LoopMetrics loop_metrics(const Loop& lp, const Tolerance& tol);

enum class Containment { inside, boundary, outside };

// The input domain Omega: a simple, positively oriented polygon.
struct DomainPolygon {
  std::vector<Point> vertices;

  int size() const { return (int)vertices.size(); }
  Point vertex(int i) const { return vertices[((i % size()) + size()) % size()]; }
  BBox bbox() const;
  double area() const;  // shoelace, positive for ccw
  Loop boundary_loop() const;
  void validate(const Tolerance& tol) const;  // simplicity, orientation, >= 3 vertices
};

double shoelace(const std::vector<Point>& v);

Containment point_in_polygon(Point p, const std::vector<Point>& poly, double snap);
Containment point_in_domain(Point p, const DomainPolygon& dom, const Tolerance& tol);

double dist_to_polyline_cycle(Point p, const std::vector<Point>& poly);

std::vector<Point> convex_hull(std::vector<Point> pts);
double hull_diameter(const std::vector<Point>& hull);

// Uniform grid over segment-shaped items for proximity queries.
class SegGrid {
 public:
  SegGrid() = default;
  SegGrid(BBox box, double cell);
  void insert(int id, Point a, Point b);
  // ids of items whose inflated bbox intersects the query box (deduplicated)
  std::vector<int> query(const BBox& q) const;
  void clear_marks() const;

 private:
  BBox box_;
  double cell_ = 1.0;
  int nx_ = 0, ny_ = 0;
  std::vector<std::vector<int>> bins_;
  mutable std::vector<uint32_t> mark_;
  mutable uint32_t stamp_ = 0;
  std::vector<std::pair<Point, Point>> items_;
  int bin_of(int ix, int iy) const { return iy * nx_ + ix; }
  friend class DomainIndex;
};

// Domain edges + accelerated containment / distance / clearance queries.
class DomainIndex {
 public:
  DomainIndex(const DomainPolygon& dom, const Tolerance& tol);

  const DomainPolygon& domain() const { return dom_; }
  const Tolerance& tol() const { return tol_; }
  Containment classify(Point p) const;
  double boundary_distance(Point p) const;
  // Edge ids with bbox within `r` of `q`.
  std::vector<int> edges_near(const BBox& q, double r) const;
  std::vector<int> edges_near(Point p, double r) const;
  Point edge_a(int id) const;
  Point edge_b(int id) const;
  int edge_count() const { return (int)dom_.vertices.size(); }
  BBox bbox() const { return box_; }

 private:
  DomainPolygon dom_;
  Tolerance tol_;
  BBox box_;
  SegGrid grid_;
};

// Deterministic RNG (SplitMix64); identical sequences on every platform.
struct Rng {
  uint64_t state;
  explicit Rng(uint64_t seed) : state(seed) {}
  uint64_t next() {
    uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }
  double uniform() { return (next() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  int uniform_int(int n) { return (int)(next() % (uint64_t)n); }
};

std::string format_g17(double v);

}  // namespace decomp
