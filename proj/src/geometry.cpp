#include "ufem/geometry.hpp"

#include <algorithm>
#include <cmath>

namespace ufem {

namespace {

constexpr int kIntervalsPerPiece = 512;

double box_distance(const Rect& r, const Vec2& p) {
  double dx = std::max({r.x0 - p.x(), 0.0, p.x() - r.x1});
  double dy = std::max({r.y0 - p.y(), 0.0, p.y() - r.y1});
  return std::hypot(dx, dy);
}

}  // namespace

InterfaceCurve::InterfaceCurve(std::vector<std::vector<PieceDef>> loops, double domain_diameter,
                               bool omega1_inside)
    : tol_(1e-12 * domain_diameter), diam_(domain_diameter), omega1_inside_(omega1_inside) {
  for (auto& loop : loops) {
    if (loop.empty()) throw Error(ErrorKind::BadInput, "empty interface loop");
    int first = num_pieces();
    int l = num_loops();
    loop_first_.push_back(first);
    int n = static_cast<int>(loop.size());
    for (int k = 0; k < n; ++k) {
      pieces_.push_back(loop[k]);
      loop_.push_back(l);
      next_.push_back(first + (k + 1) % n);
      prev_.push_back(first + (k + n - 1) % n);
    }
  }
  for (int j = 0; j < num_pieces(); ++j) {
    const auto& pc = pieces_[j];
    const auto& nx = pieces_[next_[j]];
    if ((pc.x(pc.t1) - nx.x(nx.t0)).norm() > 1e-12 * diam_)
      throw Error(ErrorKind::BadInput, "interface loop is not closed");
    if (pc.corner_at_end) singular_.push_back({pc.x(pc.t1), j});
  }

  // orientation from the signed area of each loop
  sign_.assign(num_loops(), 1.0);
  for (int l = 0; l < num_loops(); ++l) {
    double area = 0;
    for (int j = 0; j < num_pieces(); ++j) {
      if (loop_[j] != l) continue;
      const auto& pc = pieces_[j];
      const int m = 2000;
      for (int k = 0; k < m; ++k) {
        Vec2 a = pc.x(pc.t0 + (pc.t1 - pc.t0) * k / m);
        Vec2 b = pc.x(pc.t0 + (pc.t1 - pc.t0) * (k + 1) / m);
        area += 0.5 * cross(a, b);
      }
    }
    double s = area > 0 ? 1.0 : -1.0;
    sign_[l] = omega1_inside_ ? s : -s;
  }

  bbox_ = {1e300, 1e300, -1e300, -1e300};
  for (int j = 0; j < num_pieces(); ++j) {
    const auto& pc = pieces_[j];
    double dt = (pc.t1 - pc.t0) / kIntervalsPerPiece;
    for (int k = 0; k < kIntervalsPerPiece; ++k)
      intervals_.push_back({j, pc.t0 + k * dt, (k + 1 == kIntervalsPerPiece) ? pc.t1 : pc.t0 + (k + 1) * dt,
                            k + 1 == kIntervalsPerPiece});
  }
  nodes_.reserve(2 * intervals_.size());
  root_ = build(0, static_cast<int>(intervals_.size()));
  bbox_ = nodes_[root_].box;
}

int InterfaceCurve::build(int lo, int hi) {
  Node node;
  if (hi - lo == 1) {
    const auto& iv = intervals_[lo];
    const auto& pc = pieces_[iv.piece];
    Vec2 a = pc.x(iv.ta), b = pc.x(iv.tb);
    double mx = 0, my = 0;
    for (int k = 0; k <= 4; ++k) {
      Vec2 dd = pc.ddx(iv.ta + (iv.tb - iv.ta) * k / 4.0);
      mx = std::max(mx, std::abs(dd.x()));
      my = std::max(my, std::abs(dd.y()));
    }
    double dt = iv.tb - iv.ta;
    double ex = 1.5 * mx * dt * dt / 8 + 1e-12 * diam_;
    double ey = 1.5 * my * dt * dt / 8 + 1e-12 * diam_;
    node.box = {std::min(a.x(), b.x()) - ex, std::min(a.y(), b.y()) - ey, std::max(a.x(), b.x()) + ex,
                std::max(a.y(), b.y()) + ey};
    node.interval = lo;
  } else {
    int mid = (lo + hi) / 2;
    node.left = build(lo, mid);
    node.right = build(mid, hi);
    node.box = bounding_union(nodes_[node.left].box, nodes_[node.right].box);
  }
  nodes_.push_back(node);
  return static_cast<int>(nodes_.size()) - 1;
}

void InterfaceCurve::query(int node, const Rect& box, std::vector<CurveSegment>& out) const {
  const Node& n = nodes_[node];
  if (!n.box.overlaps(box)) return;
  if (n.interval >= 0) {
    const auto& iv = intervals_[n.interval];
    out.push_back({iv.piece, iv.ta, iv.tb});
    return;
  }
  query(n.left, box, out);
  query(n.right, box, out);
}

void InterfaceCurve::candidates(const Rect& box, std::vector<CurveSegment>& out) const {
  out.clear();
  if (root_ >= 0) query(root_, box, out);
}

std::vector<SideHit> InterfaceCurve::crossings(const Vec2& a, const Vec2& b,
                                               const std::vector<CurveSegment>& intervals) const {
  std::vector<SideHit> hits;
  Vec2 d = b - a;
  double len = d.norm();
  if (len == 0) return hits;
  Vec2 dh = d / len;
  for (const auto& iv : intervals) {
    const auto& pc = pieces_[iv.piece];
    auto f = [&](double t) { return cross(dh, pc.x(t) - a); };
    auto g = [&](double t) { return cross(dh, pc.dx(t)); };
    bool last = iv.tb == pc.t1;
    double f_end = last ? cross(dh, point(next_[iv.piece], pieces_[next_[iv.piece]].t0) - a) : f(iv.tb);

    double cuts[3] = {iv.ta, iv.tb, iv.tb};
    int ncut = 2;
    double ga = g(iv.ta), gb = g(iv.tb);
    if ((ga > 0 && gb < 0) || (ga < 0 && gb > 0)) {
      double lo = iv.ta, hi = iv.tb;
      for (int it = 0; it < 60; ++it) {
        double m = 0.5 * (lo + hi);
        if ((g(m) > 0) == (ga > 0)) lo = m;
        else hi = m;
      }
      cuts[1] = 0.5 * (lo + hi);
      cuts[2] = iv.tb;
      ncut = 3;
    }
    for (int k = 0; k + 1 < ncut; ++k) {
      double u = cuts[k], v = cuts[k + 1];
      double fu = f(u);
      double fv = (v == iv.tb) ? f_end : f(v);
      if ((fu > 0) == (fv > 0)) continue;
      double lo = u, hi = v;
      bool flo = fu > 0;
      for (int it = 0; it < 200; ++it) {
        double m = 0.5 * (lo + hi);
        if (m <= lo || m >= hi) break;
        if ((f(m) > 0) == flo) lo = m;
        else hi = m;
      }
      double t = 0.5 * (lo + hi);
      Vec2 p = pc.x(t);
      double s = (p - a).dot(dh) / len;
      if (!(s > 0.0 && s < 1.0)) continue;
      Vec2 tg = pc.dx(t);
      if (std::abs(cross(dh, tg)) < 1e-8 * tg.norm())
        throw Error(ErrorKind::NonTransversal, "interface tangent to a segment");
      hits.push_back({p, iv.piece, t, s});
    }
  }
  std::sort(hits.begin(), hits.end(), [](const SideHit& x, const SideHit& y) { return x.s < y.s; });
  return hits;
}

double InterfaceCurve::distance(const Vec2& p, CurveParam* where) const {
  double best = 1e300;
  CurveParam arg;
  std::vector<int> stack{root_};
  while (!stack.empty()) {
    int id = stack.back();
    stack.pop_back();
    const Node& n = nodes_[id];
    if (box_distance(n.box, p) >= best) continue;
    if (n.interval < 0) {
      stack.push_back(n.left);
      stack.push_back(n.right);
      continue;
    }
    const auto& iv = intervals_[n.interval];
    const auto& pc = pieces_[iv.piece];
    double tb = iv.ta;
    double db = 1e300;
    for (int k = 0; k <= 8; ++k) {
      double t = iv.ta + (iv.tb - iv.ta) * k / 8.0;
      double dd = (pc.x(t) - p).norm();
      if (dd < db) db = dd, tb = t;
    }
    double t = tb;
    for (int it = 0; it < 30; ++it) {
      Vec2 r = pc.x(t) - p, d1 = pc.dx(t), d2 = pc.ddx(t);
      double h = r.dot(d1), hp = d1.squaredNorm() + r.dot(d2);
      if (hp <= 0) break;
      double tn = std::clamp(t - h / hp, iv.ta, iv.tb);
      if (std::abs(tn - t) < 1e-16 * std::max(1.0, std::abs(t))) {
        t = tn;
        break;
      }
      t = tn;
    }
    double dn = (pc.x(t) - p).norm();
    if (dn < db) db = dn, tb = t;
    if (db < best) {
      best = db;
      arg = {iv.piece, tb};
    }
  }
  if (where) *where = arg;
  return best;
}

std::vector<std::vector<Vec2>> InterfaceCurve::polylines(int samples_per_piece) const {
  std::vector<std::vector<Vec2>> out(num_loops());
  for (int j = 0; j < num_pieces(); ++j) {
    const auto& pc = pieces_[j];
    auto& pl = out[loop_[j]];
    for (int k = 0; k < samples_per_piece; ++k) pl.push_back(pc.x(pc.t0 + (pc.t1 - pc.t0) * k / samples_per_piece));
  }
  for (auto& pl : out)
    if (!pl.empty()) pl.push_back(pl.front());
  return out;
}

PointClass classify_point(const InterfaceCurve& curve, const Vec2& p) {
  double tol = curve.tol();
  std::vector<CurveSegment> cand;
  curve.candidates({p.x() - 10 * tol, p.y() - 10 * tol, p.x() + 10 * tol, p.y() + 10 * tol}, cand);
  if (!cand.empty() && curve.distance(p) <= tol) return PointClass::OnInterface;

  static const Vec2 dirs[] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}, {0.8, 0.6}, {-0.6, 0.8}, {0.28, -0.96}};
  Rect bb = curve.bbox();
  double reach = (p - bb.center()).norm() + bb.diameter() + 1.0;
  int parity = 0;
  for (const auto& dir : dirs) {
    Vec2 far = p + reach * dir;
    Rect box{std::min(p.x(), far.x()), std::min(p.y(), far.y()), std::max(p.x(), far.x()),
             std::max(p.y(), far.y())};
    curve.candidates(box, cand);
    try {
      parity = static_cast<int>(curve.crossings(p, far, cand).size()) % 2;
      break;
    } catch (const Error&) {
      continue;
    }
  }
  bool inside = parity == 1;
  return (inside == curve.omega1_inside()) ? PointClass::Omega1 : PointClass::Omega2;
}

std::vector<SideHit> intersect_side(const InterfaceCurve& curve, const Vec2& a, const Vec2& b) {
  double tol = curve.tol();
  Rect box{std::min(a.x(), b.x()) - tol, std::min(a.y(), b.y()) - tol, std::max(a.x(), b.x()) + tol,
           std::max(a.y(), b.y()) + tol};
  std::vector<CurveSegment> cand;
  curve.candidates(box, cand);
  return curve.crossings(a, b, cand);
}

int CutTopology::vertices_in(int i) const {
  int n = 0;
  for (int c : corner) n += (c == i);
  return n;
}

double arc_parameter_length(const Arc& arc) {
  double s = 0;
  for (const auto& sg : arc) s += std::abs(sg.tb - sg.ta);
  return s;
}

Vec2 arc_point_at(const InterfaceCurve& curve, const Arc& arc, double frac) {
  double target = frac * arc_parameter_length(arc);
  for (const auto& sg : arc) {
    double l = std::abs(sg.tb - sg.ta);
    if (target <= l || &sg == &arc.back()) {
      double u = l > 0 ? std::min(target / l, 1.0) : 0.0;
      return curve.point(sg.piece, sg.ta + u * (sg.tb - sg.ta));
    }
    target -= l;
  }
  return curve.point(arc.front().piece, arc.front().ta);
}

namespace {

Arc walk_forward(const InterfaceCurve& c, int j0, double t0, int j1, double t1) {
  Arc arc;
  if (j0 == j1 && t1 > t0) {
    arc.push_back({j0, t0, t1});
    return arc;
  }
  arc.push_back({j0, t0, c.piece(j0).t1});
  int j = c.next(j0);
  int guard = 0;
  while (j != j1 && guard++ <= c.num_pieces()) {
    arc.push_back({j, c.piece(j).t0, c.piece(j).t1});
    j = c.next(j);
  }
  arc.push_back({j1, c.piece(j1).t0, t1});
  // slivers left by a crossing that sits on a junction
  Arc out;
  for (const auto& s : arc)
    if (std::abs(s.tb - s.ta) > 1e-10 * (c.piece(s.piece).t1 - c.piece(s.piece).t0)) out.push_back(s);
  return out;
}

[[noreturn]] void violated(const std::string& why) { throw Error(ErrorKind::AssumptionViolated, why); }

}  // namespace

CutTopology cut_rectangle(const InterfaceCurve& curve, const Rect& K) {
  CutTopology cut;
  const double tol = curve.tol();
  std::vector<CurveSegment> cand;
  curve.candidates({K.x0 - tol, K.y0 - tol, K.x1 + tol, K.y1 + tol}, cand);

  auto uncut = [&]() {
    PointClass pc = classify_point(curve, K.center());
    if (pc == PointClass::OnInterface) pc = classify_point(curve, K.corner(0));
    int i = pc == PointClass::Omega1 ? 1 : 2;
    cut.cls = i == 1 ? CellClass::Interior1 : CellClass::Interior2;
    cut.corner = {i, i, i, i};
    return cut;
  };
  if (cand.empty()) return uncut();

  for (int k = 0; k < 4; ++k) {
    auto sd = K.side(k);
    for (const auto& h : curve.crossings(sd[0], sd[1], cand)) cut.crossings.push_back({h.point, h.piece, h.t, k});
  }
  int n_sing = 0;
  for (const auto& sp : curve.singular_points())
    if (K.strictly_contains(sp.point, 1e-9 * K.diameter())) ++n_sing;
  if (n_sing > 1) violated("more than one singular point in element");

  if (cut.crossings.empty()) {
    if (n_sing > 0) violated("singular point inside element without crossings");
    for (const auto& iv : cand)
      if (K.strictly_contains(curve.point(iv.piece, iv.ta))) violated("interface loop inside element");
    return uncut();
  }
  if (cut.crossings.size() != 2) violated("interface crosses element boundary more than twice");
  if (cut.crossings[0].side == cut.crossings[1].side) violated("interface crosses one side twice");
  if (curve.loop_of(cut.crossings[0].piece) != curve.loop_of(cut.crossings[1].piece))
    violated("crossings belong to different loops");

  const Crossing c0 = cut.crossings[0], c1 = cut.crossings[1];
  Arc fwd = walk_forward(curve, c0.piece, c0.t, c1.piece, c1.t);
  Arc bwd = walk_forward(curve, c1.piece, c1.t, c0.piece, c0.t);
  double ktol = 1e-9 * K.diameter();
  bool in_f = K.strictly_contains(arc_point_at(curve, fwd, 0.5), -ktol);
  bool in_b = K.strictly_contains(arc_point_at(curve, bwd, 0.5), -ktol);
  if (in_f == in_b) violated("cannot identify the interface arc inside the element");
  Arc arc = in_f ? fwd : bwd;
  if (!in_f) std::swap(cut.crossings[0], cut.crossings[1]);

  for (const auto& sg : arc)
    for (int k = 1; k < 16; ++k) {
      Vec2 p = curve.point(sg.piece, sg.ta + (sg.tb - sg.ta) * k / 16.0);
      if (!K.contains(p, ktol)) violated("interface arc leaves the element");
    }
  for (const auto& iv : cand) {
    if (curve.loop_of(iv.piece) == curve.loop_of(c0.piece)) continue;
    if (K.strictly_contains(curve.point(iv.piece, iv.ta))) violated("second loop inside element");
  }

  int n_arc_sing = 0;
  size_t split = arc.size();
  for (size_t k = 0; k + 1 < arc.size(); ++k)
    if (curve.singular_end(arc[k].piece)) {
      ++n_arc_sing;
      split = k + 1;
    }
  if (n_arc_sing > 1) violated("more than one singular point on the element arc");
  if (n_arc_sing != n_sing) violated("singular point inconsistent with element arc");

  cut.cls = CellClass::Cut;
  const Vec2 pa = cut.crossings[0].point, pb = cut.crossings[1].point;
  if (n_arc_sing == 1) {
    Vec2 q = curve.point(arc[split - 1].piece, arc[split - 1].tb);
    cut.singular = q;
    cut.arcs.push_back(Arc(arc.begin(), arc.begin() + split));
    cut.arcs.push_back(Arc(arc.begin() + split, arc.end()));
    cut.chords.push_back({pa, q});
    cut.chords.push_back({q, pb});
  } else {
    cut.arcs.push_back(arc);
    cut.chords.push_back({pa, pb});
  }

  // region left of the arc: arc pa->pb followed by the ccw walk pb->pa
  const int sa = cut.crossings[0].side, sb = cut.crossings[1].side;
  double sgn = curve.normal_sign(c0.piece);
  int left_dom = sgn > 0 ? 1 : 2;
  int right_dom = 3 - left_dom;
  for (int k = (sb + 1) % 4;; k = (k + 1) % 4) {
    cut.corner[k] = left_dom;
    if (k == sa) break;
  }
  for (int k = (sa + 1) % 4;; k = (k + 1) % 4) {
    cut.corner[k] = right_dom;
    if (k == sb) break;
  }

  auto straight_walk = [&](const Vec2& from, int sfrom, const Vec2& to, int sto, CurvedPolygon& poly) {
    Vec2 cur = from;
    for (int k = (sfrom + 1) % 4;; k = (k + 1) % 4) {
      Vec2 c = K.corner(k);
      poly.edges.push_back({false, cur, c, {-1, 0, 0}});
      poly.chord_polygon.push_back(c);
      cur = c;
      if (k == sto) break;
    }
    poly.edges.push_back({false, cur, to, {-1, 0, 0}});
  };

  CurvedPolygon left, right;
  left.chord_polygon.push_back(pa);
  for (const auto& a : cut.arcs)
    for (const auto& sg : a)
      left.edges.push_back({true, curve.point(sg.piece, sg.ta), curve.point(sg.piece, sg.tb), sg});
  if (cut.singular) left.chord_polygon.push_back(*cut.singular);
  left.chord_polygon.push_back(pb);
  straight_walk(pb, sb, pa, sa, left);

  right.chord_polygon.push_back(pb);
  for (auto a = cut.arcs.rbegin(); a != cut.arcs.rend(); ++a)
    for (auto sg = a->rbegin(); sg != a->rend(); ++sg) {
      CurveSegment r{sg->piece, sg->tb, sg->ta};
      right.edges.push_back({true, curve.point(r.piece, r.ta), curve.point(r.piece, r.tb), r});
    }
  if (cut.singular) right.chord_polygon.push_back(*cut.singular);
  right.chord_polygon.push_back(pa);
  straight_walk(pa, sa, pb, sb, right);

  cut.region[left_dom - 1] = std::move(left);
  cut.region[right_dom - 1] = std::move(right);
  return cut;
}

int deviation_samples(int p) { return std::max(32, 8 * (p + 1)); }

namespace {

double max_arc_chord_distance(const InterfaceCurve& curve, const Arc& arc, const Vec2& a, const Vec2& b,
                              int samples) {
  double total = arc_parameter_length(arc);
  double best = 0;
  for (int k = 0; k < samples; ++k) {
    Vec2 p = arc_point_at(curve, arc, total > 0 ? double(k) / (samples - 1) : 0.0);
    best = std::max(best, dist_point_segment(p, a, b));
  }
  return best;
}

}  // namespace

Deviation interface_deviation(const InterfaceCurve& curve, const Rect& K, const CutTopology& cut,
                              int samples) {
  Deviation dev;
  if (!cut.is_cut()) return dev;
  for (const auto& ch : cut.chords)
    if ((ch[1] - ch[0]).norm() < curve.tol()) throw Error(ErrorKind::DegenerateChord, "chord too short");

  for (int i = 1; i <= 2; ++i) {
    int nv = cut.vertices_in(i);
    if (nv == 0) throw Error(ErrorKind::BadInput, "no vertex of the element lies in the subdomain");
    bool irregular = nv == 1 && cut.singular.has_value();
    double eta_i = 0;
    int apex = -1;
    if (!irregular) {
      const Vec2 a = cut.crossings[0].point, b = cut.crossings[1].point;
      double best = -1;
      for (int k = 0; k < 4; ++k) {
        if (cut.corner[k] != i) continue;
        double d = dist_point_segment(K.corner(k), a, b);
        if (d > best) best = d, apex = k;
      }
      double dh = 0;
      for (const auto& arc : cut.arcs) dh = std::max(dh, max_arc_chord_distance(curve, arc, a, b, samples));
      eta_i = dh / best;
    } else {
      for (int k = 0; k < 4; ++k)
        if (cut.corner[k] == i) apex = k;
      Vec2 A = K.corner(apex);
      for (size_t j = 0; j < cut.arcs.size(); ++j) {
        const auto& ch = cut.chords[j];
        double dh = max_arc_chord_distance(curve, cut.arcs[j], ch[0], ch[1], samples);
        eta_i = std::max(eta_i, dh / dist_point_segment(A, ch[0], ch[1]));
      }
    }
    dev.eta_i[i - 1] = eta_i;
    dev.apex[i - 1] = apex;
    dev.regular[i - 1] = !irregular;
  }
  dev.eta = std::max(dev.eta_i[0], dev.eta_i[1]);
  return dev;
}

Largeness is_large(const Rect& K, const CutTopology& cut, int i, double delta0) {
  Largeness res;
  if (!cut.is_cut()) {
    res.large = (i == 1) == (cut.cls == CellClass::Interior1);
    return res;
  }
  for (int k = 0; k < 4; ++k) {
    auto sd = K.side(k);
    double len = K.side_length(k);
    double in_i = 0;
    const Crossing* c = nullptr;
    for (const auto& cr : cut.crossings)
      if (cr.side == k) c = &cr;
    if (c) {
      double first = (c->point - sd[0]).norm();
      if (cut.corner[k] == i) in_i += first;
      if (cut.corner[(k + 1) % 4] == i) in_i += len - first;
    } else if (cut.corner[k] == i) {
      in_i = len;
    }
    if (in_i > 0 && in_i < delta0 * len) return res;
  }
  if (cut.vertices_in(i) == 1 && cut.singular) {
    res.regular = false;
    int apex = 0;
    for (int k = 0; k < 4; ++k)
      if (cut.corner[k] == i) apex = k;
    auto e1 = K.side(apex), e2 = K.side((apex + 3) % 4);
    double m = std::min(K.side_length(apex), K.side_length((apex + 3) % 4));
    const Vec2& q = *cut.singular;
    if (dist_point_segment(q, e1[0], e1[1]) < 0.5 * delta0 * m) return res;
    if (dist_point_segment(q, e2[0], e2[1]) < 0.5 * delta0 * m) return res;
  }
  res.large = true;
  return res;
}

Frame curve_frame(const InterfaceCurve& curve, int piece, double t) {
  const auto& pc = curve.piece(piece);
  double eps = 1e-14 * std::max(1.0, std::abs(pc.t1 - pc.t0));
  if ((curve.singular_end(piece) && std::abs(t - pc.t1) <= eps) ||
      (curve.singular_end(curve.prev(piece)) && std::abs(t - pc.t0) <= eps))
    throw Error(ErrorKind::SingularParameter, "frame requested at a singular junction");
  Vec2 d = curve.deriv(piece, t);
  double n = d.norm();
  if (n == 0) throw Error(ErrorKind::SingularParameter, "vanishing tangent");
  Vec2 tau = d / n;
  double s = curve.normal_sign(piece);
  return {tau, s * Vec2(tau.y(), -tau.x())};
}

}  // namespace ufem
