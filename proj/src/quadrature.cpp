#include "ufem/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>

namespace ufem {

double QuadRule2D::sum() const {
  double s = 0;
  for (double v : w) s += v;
  return s;
}

void QuadRule2D::append(const QuadRule2D& o) {
  x.insert(x.end(), o.x.begin(), o.x.end());
  w.insert(w.end(), o.w.begin(), o.w.end());
}

double LineRule::sum() const {
  double s = 0;
  for (double v : w) s += v;
  return s;
}

namespace {

// L_n and L_n' by the three-term recurrence
void legendre_pair(int n, double x, double& p, double& dp) {
  double p0 = 1, p1 = x;
  if (n == 0) {
    p = 1;
    dp = 0;
    return;
  }
  for (int k = 2; k <= n; ++k) {
    double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
    p0 = p1;
    p1 = p2;
  }
  p = p1;
  dp = n * (x * p1 - p0) / (x * x - 1);
}

QuadRule1D compute_gauss(int n) {
  QuadRule1D r;
  r.x.resize(n);
  r.w.resize(n);
  for (int k = 0; k < (n + 1) / 2; ++k) {
    double x = std::cos(M_PI * (k + 0.75) / (n + 0.5));
    double p = 0, dp = 1;
    for (int it = 0; it < 100; ++it) {
      legendre_pair(n, x, p, dp);
      double dx = p / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    legendre_pair(n, x, p, dp);
    double w = 2.0 / ((1 - x * x) * dp * dp);
    r.x[k] = -x;
    r.x[n - 1 - k] = x;
    r.w[k] = w;
    r.w[n - 1 - k] = w;
  }
  if (n % 2 == 1) r.x[n / 2] = 0.0;
  return r;
}

}  // namespace

QuadRule1D gauss_legendre(int n) {
  if (n < 1 || n > 64) throw Error(ErrorKind::BadInput, "gauss_legendre supports 1..64 points");
  static std::vector<QuadRule1D> cache;
  static std::once_flag flag;
  std::call_once(flag, [] {
    cache.resize(65);
    for (int m = 1; m <= 64; ++m) cache[m] = compute_gauss(m);
  });
  return cache[n];
}

std::vector<double> gll_points(int p) {
  if (p < 1) throw Error(ErrorKind::BadInput, "gll_points requires p >= 1");
  std::vector<double> x(p + 1);
  x[0] = -1;
  x[p] = 1;
  for (int k = 1; k < p; ++k) {
    double t = -std::cos(M_PI * k / p);
    for (int it = 0; it < 100; ++it) {
      double l = 0, dl = 0;
      legendre_pair(p, t, l, dl);
      double ddl = (2 * t * dl - p * (p + 1) * l) / (1 - t * t);
      double dt = dl / ddl;
      t -= dt;
      if (std::abs(dt) < 1e-16) break;
    }
    x[k] = t;
  }
  for (int k = 0; k <= p / 2; ++k) {
    double s = 0.5 * (x[p - k] - x[k]);
    x[k] = -s;
    x[p - k] = s;
  }
  if (p % 2 == 0) x[p / 2] = 0.0;
  return x;
}

QuadRule2D tensor_rule(const Rect& K, int q) {
  QuadRule1D g = gauss_legendre(q);
  QuadRule2D r;
  double hx = 0.5 * K.width(), hy = 0.5 * K.height();
  Vec2 c = K.center();
  for (int j = 0; j < q; ++j)
    for (int i = 0; i < q; ++i) {
      r.x.push_back({c.x() + hx * g.x[i], c.y() + hy * g.x[j]});
      r.w.push_back(g.w[i] * g.w[j] * hx * hy);
    }
  return r;
}

QuadRule2D triangle_rule(const Vec2& a, const Vec2& b, const Vec2& c, int q) {
  QuadRule1D g = gauss_legendre(q);
  QuadRule2D r;
  double area2 = std::abs(cross(b - a, c - a));
  for (int j = 0; j < q; ++j) {
    double v = 0.5 * (g.x[j] + 1);
    for (int i = 0; i < q; ++i) {
      double u = 0.5 * (g.x[i] + 1);
      Vec2 e = b + u * (c - b);
      r.x.push_back(a + v * (e - a));
      r.w.push_back(0.25 * g.w[i] * g.w[j] * v * area2);
    }
  }
  return r;
}

namespace {

struct EdgeMap {
  const InterfaceCurve* curve;
  const RegionEdge* edge;
  Vec2 at(double u) const {
    if (!edge->curved) return edge->a + u * (edge->b - edge->a);
    const auto& s = edge->seg;
    return curve->point(s.piece, s.ta + u * (s.tb - s.ta));
  }
  Vec2 d(double u) const {
    if (!edge->curved) return edge->b - edge->a;
    const auto& s = edge->seg;
    return curve->deriv(s.piece, s.ta + u * (s.tb - s.ta)) * (s.tb - s.ta);
  }
};

double polygon_area(const std::vector<Vec2>& p) {
  double a = 0;
  for (size_t k = 0; k < p.size(); ++k) a += cross(p[k], p[(k + 1) % p.size()]);
  return 0.5 * a;
}

Vec2 polygon_centroid(const std::vector<Vec2>& p) {
  double a = 0;
  Vec2 c(0, 0);
  for (size_t k = 0; k < p.size(); ++k) {
    const Vec2& u = p[k];
    const Vec2& v = p[(k + 1) % p.size()];
    double w = cross(u, v);
    a += w;
    c += w * (u + v);
  }
  if (std::abs(a) < 1e-300) {
    for (const auto& v : p) c += v;
    return c / double(p.size());
  }
  return c / (3 * a);
}

bool segments_cross(const Vec2& a, const Vec2& b, const Vec2& c, const Vec2& d) {
  double d1 = cross(b - a, c - a), d2 = cross(b - a, d - a);
  double d3 = cross(d - c, a - c), d4 = cross(d - c, b - c);
  return ((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) && ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0));
}

bool simple_polygon(const std::vector<Vec2>& p) {
  size_t n = p.size();
  for (size_t i = 0; i < n; ++i)
    for (size_t j = i + 2; j < n; ++j) {
      if (i == 0 && j == n - 1) continue;
      if (segments_cross(p[i], p[(i + 1) % n], p[j], p[(j + 1) % n])) return false;
    }
  return true;
}

bool anchor_valid(const InterfaceCurve& curve, const CurvedPolygon& region, const Vec2& A, double scale) {
  for (const auto& e : region.edges) {
    EdgeMap m{&curve, &e};
    int ns = e.curved ? 33 : 1;
    for (int k = 0; k < ns; ++k) {
      double u = e.curved ? double(k) / (ns - 1) : 0.5;
      double j = cross(m.at(u) - A, m.d(u));
      if (e.curved ? j <= 1e-14 * scale : j < -1e-14 * scale) return false;
    }
  }
  return true;
}

}  // namespace

QuadRule2D cut_region_rule(const InterfaceCurve& curve, const CurvedPolygon& region, int q) {
  const auto& cp = region.chord_polygon;
  if (cp.size() < 3 || !simple_polygon(cp) || polygon_area(cp) <= 0)
    throw Error(ErrorKind::DegenerateRegion, "chord polygon is not a simple ccw polygon");

  double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
  for (const auto& v : cp) {
    xmin = std::min(xmin, v.x());
    xmax = std::max(xmax, v.x());
    ymin = std::min(ymin, v.y());
    ymax = std::max(ymax, v.y());
  }
  double scale = (xmax - xmin) * (ymax - ymin);

  std::vector<Vec2> anchors;
  anchors.push_back(polygon_centroid(cp));
  // chord midpoint pushed towards the region
  {
    Vec2 a = region.edges.front().a;
    Vec2 b = a;
    for (const auto& e : region.edges)
      if (e.curved) b = e.b;
    for (const auto& e : region.edges)
      if (e.curved) {
        a = e.a;
        break;
      }
    Vec2 mid = 0.5 * (a + b);
    Vec2 d = b - a;
    if (d.norm() > 0) {
      Vec2 n(-d.y(), d.x());
      n.normalize();
      double apex = 0;
      for (const auto& v : cp) apex = std::max(apex, n.dot(v - a));
      anchors.push_back(mid + 0.25 * apex * n);
    }
  }
  for (int j = 1; j < 8; ++j)
    for (int i = 1; i < 8; ++i)
      anchors.push_back({xmin + (xmax - xmin) * i / 8.0, ymin + (ymax - ymin) * j / 8.0});

  const Vec2* anchor = nullptr;
  for (const auto& A : anchors)
    if (anchor_valid(curve, region, A, scale)) {
      anchor = &A;
      break;
    }
  if (!anchor) throw Error(ErrorKind::DegenerateRegion, "no star-shaped anchor for the curved region");
  const Vec2 A = *anchor;

  QuadRule1D g = gauss_legendre(q);
  QuadRule2D r;
  for (const auto& e : region.edges) {
    EdgeMap m{&curve, &e};
    if (!e.curved && std::abs(cross(e.a - A, e.b - e.a)) <= 1e-14 * scale) continue;
    for (int i = 0; i < q; ++i) {
      double u = 0.5 * (g.x[i] + 1);
      Vec2 eu = m.at(u);
      double jac = cross(eu - A, m.d(u));
      for (int j = 0; j < q; ++j) {
        double v = 0.5 * (g.x[j] + 1);
        r.x.push_back(A + v * (eu - A));
        r.w.push_back(0.25 * g.w[i] * g.w[j] * v * jac);
      }
    }
  }
  for (double w : r.w)
    if (!(w > 0)) throw Error(ErrorKind::DegenerateRegion, "nonpositive quadrature weight");
  return r;
}

LineRule arc_rule(const InterfaceCurve& curve, const Arc& arc, int q) {
  QuadRule1D g = gauss_legendre(q);
  LineRule r;
  double acc = 0;
  for (const auto& s : arc) {
    double half = 0.5 * (s.tb - s.ta);
    double dir = half >= 0 ? 1.0 : -1.0;
    auto speed = [&](double t) { return curve.deriv(s.piece, t).norm(); };
    for (int i = 0; i < q; ++i) {
      double t = s.ta + half * (g.x[i] + 1);
      Vec2 d = curve.deriv(s.piece, t);
      double sp = d.norm();
      r.x.push_back(curve.point(s.piece, t));
      r.w.push_back(g.w[i] * std::abs(half) * sp);
      r.tangent.push_back(dir * d / sp);
      double part = 0, hh = 0.5 * (t - s.ta);
      for (int k = 0; k < q; ++k) part += g.w[k] * std::abs(hh) * speed(s.ta + hh * (g.x[k] + 1));
      r.arclength.push_back(acc + part);
    }
    double len = 0;
    for (int k = 0; k < q; ++k) len += g.w[k] * std::abs(half) * speed(s.ta + half * (g.x[k] + 1));
    acc += len;
  }
  return r;
}

double region_area(const InterfaceCurve& curve, const CurvedPolygon& region, int q) {
  QuadRule1D g = gauss_legendre(q);
  double area = 0;
  if (region.edges.empty()) return 0;
  const Vec2 o = region.edges.front().a;  // local origin against cancellation on small regions
  for (const auto& e : region.edges) {
    if (!e.curved) {
      area += 0.5 * cross(e.a - o, e.b - o);
      continue;
    }
    const auto& s = e.seg;
    double sign = (curve.point(s.piece, s.ta) - e.a).norm() <= (curve.point(s.piece, s.tb) - e.a).norm() ? 1 : -1;
    double half = 0.5 * (s.tb - s.ta), part = 0;
    for (int i = 0; i < q; ++i) {
      double t = s.ta + half * (g.x[i] + 1);
      Vec2 x = curve.point(s.piece, t) - o, d = curve.deriv(s.piece, t);
      part += g.w[i] * half * 0.5 * cross(x, d);
    }
    area += sign * part;
  }
  return area;
}

LineRule segment_rule(const Vec2& a, const Vec2& b, int q) {
  QuadRule1D g = gauss_legendre(q);
  LineRule r;
  double len = (b - a).norm();
  Vec2 t = len > 0 ? Vec2((b - a) / len) : Vec2(1, 0);
  for (int i = 0; i < q; ++i) {
    double u = 0.5 * (g.x[i] + 1);
    r.x.push_back(a + u * (b - a));
    r.w.push_back(0.5 * g.w[i] * len);
    r.tangent.push_back(t);
    r.arclength.push_back(u * len);
  }
  return r;
}

}  // namespace ufem
