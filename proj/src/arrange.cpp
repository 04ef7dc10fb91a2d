#include "decomp/arrange.hpp"

#include <algorithm>
#include <cmath>

namespace decomp {

void Arrangement::build(const std::vector<Wall>& walls, double join_tol) {
  nodes.clear();
  half_edges.clear();
  faces.clear();

  BBox box;
  for (auto& w : walls) box.add(w.prim.bbox());
  box.inflate(join_tol * 8 + 1e-12);
  SegGrid node_grid(box, std::max(box.diag() / 2048, join_tol * 8));
  auto node_of = [&](Point p) {
    BBox q;
    q.add(p);
    q.inflate(join_tol);
    for (int id : node_grid.query(q))
      if (dist(nodes[id], p) <= join_tol) return id;
    int id = (int)nodes.size();
    nodes.push_back(p);
    node_grid.insert(id, p, p);
    return id;
  };

  for (auto& w : walls) {
    int a = node_of(w.prim.start_point());
    int b = node_of(w.prim.end_point());
    if (a == b && w.prim.length() <= 4 * join_tol) continue;  // collapsed fragment
    require(a != b, ErrorKind::internal_invariant,
            "arrangement: wall with coincident endpoints but positive length");
    HalfEdge f;
    f.from = a;
    f.to = b;
    f.geom = w.prim;
    f.tag = w.tag;
    f.forward = true;
    HalfEdge r;
    r.from = b;
    r.to = a;
    r.geom = w.prim.reversed();
    r.tag = w.tag;
    r.forward = false;
    int fi = (int)half_edges.size();
    f.twin = fi + 1;
    r.twin = fi;
    half_edges.push_back(f);
    half_edges.push_back(r);
  }

  // outgoing half-edges per node, counterclockwise by (tangent angle, curvature)
  std::vector<std::vector<int>> out(nodes.size());
  for (size_t h = 0; h < half_edges.size(); ++h) out[half_edges[h].from].push_back((int)h);
  auto sort_key = [&](int h) {
    const Primitive& g = half_edges[h].geom;
    Point t = g.tangent_at(0.0);
    double ang = norm_angle(angle_of(t));
    double curv = 0;
    if (g.kind == PrimKind::arc) curv = (g.ccw ? 1.0 : -1.0) / g.radius;
    return std::make_pair(ang, curv);
  };
  for (auto& lst : out)
    std::sort(lst.begin(), lst.end(), [&](int a, int b) { return sort_key(a) < sort_key(b); });

  std::vector<int> pos(half_edges.size(), -1);
  for (auto& lst : out)
    for (size_t i = 0; i < lst.size(); ++i) pos[lst[i]] = (int)i;

  for (size_t h = 0; h < half_edges.size(); ++h) {
    int v = half_edges[h].to;
    int tw = half_edges[h].twin;
    auto& lst = out[v];
    require(!lst.empty(), ErrorKind::internal_invariant, "arrangement: dead-end node");
    int idx = pos[tw];
    half_edges[h].next = lst[(idx - 1 + (int)lst.size()) % lst.size()];
  }

  // face orbits
  std::vector<char> seen(half_edges.size(), 0);
  std::vector<std::pair<double, int>> negatives;  // (area, face idx)
  for (size_t h0 = 0; h0 < half_edges.size(); ++h0) {
    if (seen[h0]) continue;
    Face f;
    int h = (int)h0;
    int guard = (int)half_edges.size() + 4;
    do {
      require(--guard > 0, ErrorKind::internal_invariant, "arrangement: orbit runaway");
      seen[h] = 1;
      f.cycle.push_back(h);
      h = half_edges[h].next;
    } while (h != (int)h0);
    Loop lp;
    for (int he : f.cycle) lp.prims.push_back(half_edges[he].geom);
    f.area = lp.area();
    int fi = (int)faces.size();
    for (int he : f.cycle) half_edges[he].face = fi;
    if (f.area < 0) negatives.push_back({f.area, fi});
    faces.push_back(std::move(f));
  }
  require(negatives.size() == 1, ErrorKind::internal_invariant,
          "arrangement: expected exactly one unbounded cycle, found " +
              std::to_string(negatives.size()));
  outer_cycle_face = negatives[0].second;
}

Loop Arrangement::face_loop(int f) const {
  Loop lp;
  for (int he : faces[f].cycle) lp.prims.push_back(half_edges[he].geom);
  return lp;
}

std::vector<std::vector<int>> Arrangement::node_faces() const {
  std::vector<std::vector<int>> nf(nodes.size());
  for (auto& he : half_edges) {
    auto& lst = nf[he.from];
    if (std::find(lst.begin(), lst.end(), he.face) == lst.end()) lst.push_back(he.face);
  }
  return nf;
}

}  // namespace decomp
