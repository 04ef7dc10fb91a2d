#include "decomp/geom.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>

namespace decomp {

namespace {
constexpr double kPi = 3.14159265358979323846;
constexpr double kTwoPi = 2.0 * kPi;
}  // namespace

double angle_of(Point v) { return std::atan2(v.y, v.x); }

double norm_angle(double a) {
  a = std::fmod(a, kTwoPi);
  if (a < 0) a += kTwoPi;
  return a;
}

double ccw_sweep(double from, double to) {
  double s = norm_angle(to - from);
  if (s == 0) s = kTwoPi;
  return s;
}

bool angle_in_ccw_arc(double a, double a0, double a1, double tol_angle) {
  double sweep = ccw_sweep(a0, a1);
  double off = norm_angle(a - a0);
  return off <= sweep + tol_angle || off >= kTwoPi - tol_angle;
}

double Primitive::sweep() const {
  if (kind == PrimKind::segment) return 0.0;
  return ccw ? ccw_sweep(a0, a1) : ccw_sweep(a1, a0);
}

double Primitive::length() const {
  if (kind == PrimKind::segment) return dist(a, b);
  return radius * sweep();
}

Point Primitive::start_point() const {
  if (kind == PrimKind::segment) return a;
  return center + Point{radius * std::cos(a0), radius * std::sin(a0)};
}

Point Primitive::end_point() const {
  if (kind == PrimKind::segment) return b;
  return center + Point{radius * std::cos(a1), radius * std::sin(a1)};
}

Point Primitive::point_at(double t) const {
  if (kind == PrimKind::segment) return a + t * (b - a);
  double s = sweep();
  double ang = ccw ? a0 + t * s : a0 - t * s;
  return center + Point{radius * std::cos(ang), radius * std::sin(ang)};
}

Point Primitive::tangent_at(double t) const {
  if (kind == PrimKind::segment) {
    Point d = b - a;
    double n = norm(d);
    return n > 0 ? (1.0 / n) * d : Point{1, 0};
  }
  double s = sweep();
  double ang = ccw ? a0 + t * s : a0 - t * s;
  Point radial{std::cos(ang), std::sin(ang)};
  return ccw ? perp_left(radial) : perp_right(radial);
}

Primitive Primitive::reversed() const {
  Primitive r = *this;
  if (kind == PrimKind::segment) {
    r.a = b;
    r.b = a;
  } else {
    r.a0 = a1;
    r.a1 = a0;
    r.ccw = !ccw;
  }
  return r;
}

BBox Primitive::bbox() const {
  BBox box;
  if (kind == PrimKind::segment) {
    box.add(a);
    box.add(b);
    return box;
  }
  box.add(start_point());
  box.add(end_point());
  // axis-extremal points of the swept arc
  const double axes[4] = {0, kPi / 2, kPi, 3 * kPi / 2};
  double lo = ccw ? a0 : a1;
  double hi = ccw ? a1 : a0;
  for (double ax : axes)
    if (angle_in_ccw_arc(ax, lo, hi, 0))
      box.add(center + Point{radius * std::cos(ax), radius * std::sin(ax)});
  return box;
}

double dist_point_segment(Point p, Point a, Point b) {
  return dist(p, closest_on_segment(p, a, b));
}

Point closest_on_segment(Point p, Point a, Point b) {
  Point d = b - a;
  double L2 = norm2(d);
  if (L2 <= 0) return a;
  double t = dot(p - a, d) / L2;
  t = std::clamp(t, 0.0, 1.0);
  return a + t * d;
}

double dist_point_prim(Point p, const Primitive& pr) {
  return dist(p, closest_on_prim(p, pr));
}

Point closest_on_prim(Point p, const Primitive& pr) {
  if (pr.kind == PrimKind::segment) return closest_on_segment(p, pr.a, pr.b);
  Point d = p - pr.center;
  double n = norm(d);
  double lo = pr.ccw ? pr.a0 : pr.a1;
  double hi = pr.ccw ? pr.a1 : pr.a0;
  if (n > 0) {
    double ang = angle_of(d);
    if (angle_in_ccw_arc(ang, lo, hi, 0))
      return pr.center + (pr.radius / n) * d;
  }
  Point s = pr.start_point(), e = pr.end_point();
  return dist(p, s) <= dist(p, e) ? s : e;
}

namespace {
int orient_sign(Point a, Point b, Point c, double tol) {
  double v = cross(b - a, c - a);
  double scale = std::max({std::abs(b.x - a.x), std::abs(b.y - a.y),
                           std::abs(c.x - a.x), std::abs(c.y - a.y), 1.0});
  if (std::abs(v) <= tol * scale) return 0;
  return v > 0 ? 1 : -1;
}
}  // namespace

bool segments_intersect(Point a, Point b, Point c, Point d, double tol) {
  int o1 = orient_sign(a, b, c, tol), o2 = orient_sign(a, b, d, tol);
  int o3 = orient_sign(c, d, a, tol), o4 = orient_sign(c, d, b, tol);
  if (o1 != o2 && o3 != o4 && o1 && o2 && o3 && o4) return true;
  if (dist_point_segment(c, a, b) <= tol) return true;
  if (dist_point_segment(d, a, b) <= tol) return true;
  if (dist_point_segment(a, c, d) <= tol) return true;
  if (dist_point_segment(b, c, d) <= tol) return true;
  return false;
}

bool segments_cross_open(Point a, Point b, Point c, Point d, double tol) {
  if (!segments_intersect(a, b, c, d, tol * 0.5)) return false;
  // Discount contacts that only involve endpoints.
  auto near_end = [&](Point p, Point u, Point v) {
    return dist(p, u) <= tol || dist(p, v) <= tol;
  };
  int o1 = orient_sign(a, b, c, tol), o2 = orient_sign(a, b, d, tol);
  int o3 = orient_sign(c, d, a, tol), o4 = orient_sign(c, d, b, tol);
  if (o1 != o2 && o3 != o4 && o1 && o2 && o3 && o4) return true;
  if (dist_point_segment(c, a, b) <= tol && !near_end(c, a, b)) return true;
  if (dist_point_segment(d, a, b) <= tol && !near_end(d, a, b)) return true;
  if (dist_point_segment(a, c, d) <= tol && !near_end(a, c, d)) return true;
  if (dist_point_segment(b, c, d) <= tol && !near_end(b, c, d)) return true;
  return false;
}

void circle_segment_hits(Point c, double r, Point a, Point b, std::vector<double>& ts) {
  Point d = b - a;
  double A = norm2(d);
  if (A <= 0) return;
  Point f = a - c;
  double B = 2 * dot(f, d);
  double C = norm2(f) - r * r;
  double disc = B * B - 4 * A * C;
  // near-tangency: the discriminant cancels catastrophically; the tolerance
  // scales with the coordinate magnitude feeding the cancellation
  double scale = std::max({std::abs(a.x), std::abs(a.y), std::abs(b.x), std::abs(b.y),
                           std::abs(c.x), std::abs(c.y), r, 1.0});
  if (disc < 0 && disc > -1e-10 * (B * B + std::abs(4 * A * C)) - 1e-12 * 4 * A * r * scale)
    disc = 0;
  if (disc < 0) return;
  double sq = std::sqrt(disc);
  ts.push_back((-B - sq) / (2 * A));
  ts.push_back((-B + sq) / (2 * A));
}

void circle_circle_hits(Point c0, double r0, Point c1, double r1, std::vector<Point>& out) {
  double d = dist(c0, c1);
  if (d <= 0) return;
  double scale = std::max({std::abs(c0.x), std::abs(c0.y), std::abs(c1.x), std::abs(c1.y), 1.0});
  double tang = 1e-12 * (r0 + r1 + scale);
  if (d > r0 + r1 + tang || d < std::abs(r0 - r1) - tang) return;
  double a = (r0 * r0 - r1 * r1 + d * d) / (2 * d);
  double h2 = r0 * r0 - a * a;
  double h = h2 > 0 ? std::sqrt(h2) : 0.0;
  Point u = (1.0 / d) * (c1 - c0);
  Point m = c0 + a * u;
  Point v = perp_left(u);
  out.push_back(m + h * v);
  if (h > 0) out.push_back(m - h * v);
}

double Loop::length() const {
  double L = 0;
  for (const auto& p : prims) L += p.length();
  return L;
}

double Loop::area() const {
  // chord shoelace plus circular-segment bulges
  double A = 0;
  for (const auto& p : prims) {
    Point s = p.start_point(), e = p.end_point();
    A += 0.5 * cross(s, e);
    if (p.kind == PrimKind::arc) {
      double th = p.sweep();
      double seg = 0.5 * p.radius * p.radius * (th - std::sin(th));
      A += p.ccw ? seg : -seg;
    }
  }
  return A;
}

bool Loop::closed(double tol) const {
  if (prims.empty()) return false;
  for (size_t i = 0; i < prims.size(); ++i) {
    Point e = prims[i].end_point();
    Point s = prims[(i + 1) % prims.size()].start_point();
    if (dist(e, s) > tol) return false;
  }
  return true;
}

BBox Loop::bbox() const {
  BBox b;
  for (const auto& p : prims) b.add(p.bbox());
  return b;
}

std::vector<Point> Loop::sample(double step) const {
  std::vector<Point> out;
  for (const auto& p : prims) {
    double L = p.length();
    int n = std::max(1, (int)std::ceil(L / std::max(step, 1e-300)));
    n = std::min(n, 1 << 20);
    for (int i = 0; i < n; ++i) out.push_back(p.point_at((double)i / n));
    if (p.kind == PrimKind::arc) {
      const double axes[4] = {0, kPi / 2, kPi, 3 * kPi / 2};
      double lo = p.ccw ? p.a0 : p.a1;
      double hi = p.ccw ? p.a1 : p.a0;
      for (double ax : axes)
        if (angle_in_ccw_arc(ax, lo, hi, 0))
          out.push_back(p.center + Point{p.radius * std::cos(ax), p.radius * std::sin(ax)});
    }
  }
  return out;
}

double Loop::diameter(double step) const {
  auto pts = sample(step);
  auto hull = convex_hull(std::move(pts));
  return hull_diameter(hull);
}

double Loop::distance_to(Point p) const {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& pr : prims) best = std::min(best, dist_point_prim(p, pr));
  return best;
}

Point Loop::point_at_length(double s) const {
  double total = length();
  if (total <= 0) return prims.empty() ? Point{} : prims[0].start_point();
  s = std::fmod(s, total);
  if (s < 0) s += total;
  for (const auto& p : prims) {
    double L = p.length();
    if (s <= L) return p.point_at(L > 0 ? s / L : 0.0);
    s -= L;
  }
  return prims.back().end_point();
}

Loop Loop::reversed() const {
  Loop r;
  for (auto it = prims.rbegin(); it != prims.rend(); ++it) r.prims.push_back(it->reversed());
  return r;
}

LoopMetrics loop_metrics(const Loop& lp, const Tolerance& tol) {
  require(lp.closed(tol.snap * 100), ErrorKind::input_rejection, "loop_metrics: loop not closed");
  LoopMetrics m;
  m.length = lp.length();
  m.area = lp.area();
  double step = std::max(tol.snap * 1e4, lp.bbox().diag() * 1e-4);
  m.diameter = lp.diameter(step);
  return m;
}

double shoelace(const std::vector<Point>& v) {
  double A = 0;
  int n = (int)v.size();
  for (int i = 0; i < n; ++i) A += cross(v[i], v[(i + 1) % n]);
  return 0.5 * A;
}

BBox DomainPolygon::bbox() const {
  BBox b;
  for (auto& p : vertices) b.add(p);
  return b;
}

double DomainPolygon::area() const { return shoelace(vertices); }

Loop DomainPolygon::boundary_loop() const {
  Loop lp;
  int n = (int)vertices.size();
  for (int i = 0; i < n; ++i)
    lp.prims.push_back(Primitive::make_segment(vertices[i], vertices[(i + 1) % n], i));
  return lp;
}

void DomainPolygon::validate(const Tolerance& tol) const {
  int n = (int)vertices.size();
  require(n >= 3, ErrorKind::input_rejection, "domain polygon needs >= 3 vertices");
  for (auto& p : vertices)
    require(finite(p), ErrorKind::input_rejection, "domain polygon has non-finite vertex");
  for (int i = 0; i < n; ++i)
    require(dist(vertices[i], vertices[(i + 1) % n]) > tol.snap, ErrorKind::input_rejection,
            "domain polygon has coincident consecutive vertices");
  require(area() > 0, ErrorKind::input_rejection, "domain polygon must be counterclockwise");
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (j == i || (j + 1) % n == i || (i + 1) % n == j) continue;
      if (segments_cross_open(vertices[i], vertices[(i + 1) % n], vertices[j],
                              vertices[(j + 1) % n], tol.snap))
        fail(ErrorKind::input_rejection, "domain polygon self-intersects at edges " +
                                             std::to_string(i) + " and " + std::to_string(j));
    }
  }
}

Containment point_in_polygon(Point p, const std::vector<Point>& poly, double snap) {
  int n = (int)poly.size();
  for (int i = 0; i < n; ++i)
    if (dist_point_segment(p, poly[i], poly[(i + 1) % n]) <= snap) return Containment::boundary;
  // crossing parity with a deterministic nudge against vertex grazing
  double px = p.x + snap * 0.3183098861837907;
  int crossings = 0;
  for (int i = 0; i < n; ++i) {
    Point a = poly[i], b = poly[(i + 1) % n];
    if ((a.x > px) == (b.x > px)) continue;
    double t = (px - a.x) / (b.x - a.x);
    double y = a.y + t * (b.y - a.y);
    if (y > p.y) ++crossings;
  }
  return (crossings & 1) ? Containment::inside : Containment::outside;
}

Containment point_in_domain(Point p, const DomainPolygon& dom, const Tolerance& tol) {
  return point_in_polygon(p, dom.vertices, tol.snap);
}

double dist_to_polyline_cycle(Point p, const std::vector<Point>& poly) {
  double best = std::numeric_limits<double>::infinity();
  int n = (int)poly.size();
  for (int i = 0; i < n; ++i)
    best = std::min(best, dist_point_segment(p, poly[i], poly[(i + 1) % n]));
  return best;
}

std::vector<Point> convex_hull(std::vector<Point> pts) {
  if (pts.size() < 3) return pts;
  std::sort(pts.begin(), pts.end(), [](Point a, Point b) {
    return a.x < b.x || (a.x == b.x && a.y < b.y);
  });
  pts.erase(std::unique(pts.begin(), pts.end(),
                        [](Point a, Point b) { return a.x == b.x && a.y == b.y; }),
            pts.end());
  int n = (int)pts.size();
  if (n < 3) return pts;
  std::vector<Point> h(2 * n);
  int k = 0;
  for (int i = 0; i < n; ++i) {
    while (k >= 2 && cross(h[k - 1] - h[k - 2], pts[i] - h[k - 2]) <= 0) --k;
    h[k++] = pts[i];
  }
  int lower = k + 1;
  for (int i = n - 2; i >= 0; --i) {
    while (k >= lower && cross(h[k - 1] - h[k - 2], pts[i] - h[k - 2]) <= 0) --k;
    h[k++] = pts[i];
  }
  h.resize(k - 1);
  return h;
}

double hull_diameter(const std::vector<Point>& hull) {
  int n = (int)hull.size();
  if (n == 0) return 0;
  if (n == 1) return 0;
  if (n == 2) return dist(hull[0], hull[1]);
  double best = 0;
  int j = 1;
  for (int i = 0; i < n; ++i) {
    Point e = hull[(i + 1) % n] - hull[i];
    while (cross(e, hull[(j + 1) % n] - hull[j]) > 0) j = (j + 1) % n;
    best = std::max(best, dist(hull[i], hull[j]));
    best = std::max(best, dist(hull[(i + 1) % n], hull[j]));
  }
  return best;
}

SegGrid::SegGrid(BBox box, double cell) : box_(box), cell_(std::max(cell, 1e-300)) {
  nx_ = std::max(1, (int)std::ceil(box_.width() / cell_));
  ny_ = std::max(1, (int)std::ceil(box_.height() / cell_));
  nx_ = std::min(nx_, 4096);
  ny_ = std::min(ny_, 4096);
  bins_.resize((size_t)nx_ * ny_);
}

void SegGrid::insert(int id, Point a, Point b) {
  if ((int)items_.size() <= id) items_.resize(id + 1);
  items_[id] = {a, b};
  if ((int)mark_.size() <= id) mark_.resize(id + 1, 0);
  BBox q;
  q.add(a);
  q.add(b);
  int ix0 = std::clamp((int)std::floor((q.xmin - box_.xmin) / (box_.width() / nx_)), 0, nx_ - 1);
  int ix1 = std::clamp((int)std::floor((q.xmax - box_.xmin) / (box_.width() / nx_)), 0, nx_ - 1);
  int iy0 = std::clamp((int)std::floor((q.ymin - box_.ymin) / (box_.height() / ny_)), 0, ny_ - 1);
  int iy1 = std::clamp((int)std::floor((q.ymax - box_.ymin) / (box_.height() / ny_)), 0, ny_ - 1);
  for (int iy = iy0; iy <= iy1; ++iy)
    for (int ix = ix0; ix <= ix1; ++ix) bins_[bin_of(ix, iy)].push_back(id);
}

std::vector<int> SegGrid::query(const BBox& q) const {
  std::vector<int> out;
  if (bins_.empty()) return out;
  ++stamp_;
  int ix0 = std::clamp((int)std::floor((q.xmin - box_.xmin) / (box_.width() / nx_)), 0, nx_ - 1);
  int ix1 = std::clamp((int)std::floor((q.xmax - box_.xmin) / (box_.width() / nx_)), 0, nx_ - 1);
  int iy0 = std::clamp((int)std::floor((q.ymin - box_.ymin) / (box_.height() / ny_)), 0, ny_ - 1);
  int iy1 = std::clamp((int)std::floor((q.ymax - box_.ymin) / (box_.height() / ny_)), 0, ny_ - 1);
  for (int iy = iy0; iy <= iy1; ++iy)
    for (int ix = ix0; ix <= ix1; ++ix)
      for (int id : bins_[bin_of(ix, iy)]) {
        if (mark_[id] == stamp_) continue;
        mark_[id] = stamp_;
        out.push_back(id);
      }
  return out;
}

DomainIndex::DomainIndex(const DomainPolygon& dom, const Tolerance& tol)
    : dom_(dom), tol_(tol), box_(dom.bbox()) {
  int n = dom_.size();
  double cell = std::max(box_.diag() / 256.0, 1e-12);
  grid_ = SegGrid(box_, cell);
  for (int i = 0; i < n; ++i) grid_.insert(i, dom_.vertices[i], dom_.vertices[(i + 1) % n]);
}

Containment DomainIndex::classify(Point p) const {
  // local boundary test first, then global parity (domains are small; the
  // parity pass over all edges is fine for the polygon sizes seen here)
  return point_in_polygon(p, dom_.vertices, tol_.snap);
}

double DomainIndex::boundary_distance(Point p) const {
  double r = std::max(box_.diag() / 256.0, tol_.snap * 100);
  for (;; r *= 4) {
    BBox q;
    q.add(p);
    q.inflate(r);
    auto ids = grid_.query(q);
    double best = std::numeric_limits<double>::infinity();
    for (int id : ids) best = std::min(best, dist_point_segment(p, edge_a(id), edge_b(id)));
    if (best <= r) return best;
    if (r > box_.diag() * 2.5) {
      for (int id = 0; id < edge_count(); ++id)
        best = std::min(best, dist_point_segment(p, edge_a(id), edge_b(id)));
      return best;
    }
  }
}

std::vector<int> DomainIndex::edges_near(const BBox& q, double r) const {
  BBox qq = q;
  qq.inflate(r);
  return grid_.query(qq);
}

std::vector<int> DomainIndex::edges_near(Point p, double r) const {
  BBox q;
  q.add(p);
  return edges_near(q, r);
}

Point DomainIndex::edge_a(int id) const { return dom_.vertices[id]; }
Point DomainIndex::edge_b(int id) const { return dom_.vertices[(id + 1) % dom_.size()]; }

std::string format_g17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace decomp
