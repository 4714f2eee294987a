#include "ufem/verify.hpp"

#include "ufem/adapt.hpp"
#include "ufem/basis.hpp"
#include "ufem/ldg.hpp"
#include "ufem/quadrature.hpp"

#include <cmath>
#include <random>

namespace ufem {

namespace {

void record(SuiteReport& r, double lhs, double rhs) {
  ++r.trials;
  double m = rhs > 0 ? 1 - lhs / rhs : (lhs <= 0 ? 1.0 : -1.0);
  r.worst_margin = std::min(r.worst_margin, m);
  if (!(lhs <= rhs)) ++r.violations;
}

double T(double t) { return t + std::sqrt(t * t - 1); }

// sum_{i,j} c_ij L_i L_j on a bounding box; `total` restricts to i + j <= p
struct RandomPoly {
  Rect box;
  int p;
  bool total;
  std::vector<double> c;
  double operator()(const Vec2& x) const {
    double xi = 2 * (x.x() - box.x0) / box.width() - 1, et = 2 * (x.y() - box.y0) / box.height() - 1;
    double s = 0;
    for (int j = 0; j <= p; ++j)
      for (int i = 0; i <= p; ++i)
        if (!total || i + j <= p) s += c[i + (p + 1) * j] * legendre_eval(i, xi) * legendre_eval(j, et);
    return s;
  }
};

RandomPoly random_poly(std::mt19937_64& rng, const std::vector<Vec2>& pts, int p, bool total) {
  std::uniform_real_distribution<double> U(-1, 1);
  RandomPoly v;
  v.box = {1e300, 1e300, -1e300, -1e300};
  for (const auto& x : pts) {
    v.box.x0 = std::min(v.box.x0, x.x());
    v.box.y0 = std::min(v.box.y0, x.y());
    v.box.x1 = std::max(v.box.x1, x.x());
    v.box.y1 = std::max(v.box.y1, x.y());
  }
  v.p = p;
  v.total = total;
  v.c.resize((p + 1) * (p + 1));
  for (auto& x : v.c) x = U(rng);
  return v;
}

double tri_norm2(const RandomPoly& v, const Vec2& a, const Vec2& b, const Vec2& c, int q) {
  QuadRule2D r = triangle_rule(a, b, c, q);
  double s = 0;
  for (int k = 0; k < r.size(); ++k) s += r.w[k] * v(r.x[k]) * v(r.x[k]);
  return s;
}

Vec2 random_point(std::mt19937_64& rng, double scale) {
  std::uniform_real_distribution<double> U(-scale, scale);
  return {U(rng), U(rng)};
}

double tri_area(const Vec2& a, const Vec2& b, const Vec2& c) { return 0.5 * std::abs(cross(b - a, c - a)); }

}  // namespace

SuiteReport suite_laplace(int n_max, int n_t) {
  SuiteReport r;
  r.name = "laplace_integral";
  const double tol = 1e-9;
  double worst_imag = 0;
  for (int n = 0; n <= n_max; ++n)
    for (int k = 0; k < n_t; ++k) {
      double t = -2 + 4.0 * k / (n_t - 1);
      auto z = legendre_laplace_complex(n, t, 0);
      double ref = legendre_eval(n, t);
      double err = std::abs(z.real() - ref) / std::max(1.0, std::abs(ref));
      if (std::abs(t) < 1) worst_imag = std::max(worst_imag, std::abs(z.imag()));
      record(r, err, tol);
      if (std::abs(t) < 1 && std::abs(z.imag()) > 1e-10) ++r.violations;
    }
  r.note = "max imaginary part for |t|<1: " + std::to_string(worst_imag);
  return r;
}

double legendre_tightness(int p, double lambda) {
  QuadRule1D g = gauss_legendre(p + 2);
  double ext = 0;
  for (int k = 0; k < g.size(); ++k) {
    double t = 1 + 0.5 * (lambda - 1) * (g.x[k] + 1);
    double v = legendre_eval(p, t);
    ext += 2 * 0.5 * (lambda - 1) * g.w[k] * v * v;
  }
  double in = 1 / (p + 0.5);
  double bound = 0.5 * (std::pow(T(lambda), 2 * p + 1) - 1);
  return ext / in / bound;
}

SuiteReport suite_domain_inverse_1d(int trials, std::uint64_t seed) {
  SuiteReport r;
  r.name = "domain_inverse_1d";
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(-1, 1), L(0, std::log(8.0));
  std::uniform_int_distribution<int> P(0, 8);
  for (int k = 0; k < trials; ++k) {
    int p = P(rng);
    double lambda = 1 + std::expm1(L(rng)) + 1e-6;
    std::vector<double> a(p + 1);
    for (auto& x : a) x = U(rng);
    double in = 0;
    for (int n = 0; n <= p; ++n) in += a[n] * a[n] / (n + 0.5);
    QuadRule1D g = gauss_legendre(p + 2);
    double ext = 0;
    for (int s = -1; s <= 1; s += 2)
      for (int q = 0; q < g.size(); ++q) {
        double t = s * (1 + 0.5 * (lambda - 1) * (g.x[q] + 1)), v = 0;
        for (int n = 0; n <= p; ++n) v += a[n] * legendre_eval(n, t);
        ext += 0.5 * (lambda - 1) * g.w[q] * v * v;
      }
    record(r, ext, 0.5 * (std::pow(T(lambda), 2 * p + 1) - 1) * in);
  }
  r.note = "L_p quotient at lambda=50: p=1 " + std::to_string(legendre_tightness(1, 50)) + ", p=4 " +
           std::to_string(legendre_tightness(4, 50));
  return r;
}

SuiteReport suite_triangle_inverse(int trials, std::uint64_t seed) {
  SuiteReport r;
  r.name = "triangle_strip_inverse";
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(0, 1);
  std::uniform_int_distribution<int> P(1, 6);
  for (int k = 0; k < trials; ++k) {
    int p = P(rng);
    double c1 = 0.5 + 1.5 * U(rng), a2 = 0.2 + 1.8 * U(rng), a1 = c1 * (0.05 + 0.9 * U(rng));
    double d = a2 * (0.01 + 0.9 * U(rng));
    Vec2 A(a1, a2), B(0, 0), C(c1, 0);
    double s = d / a2;
    Vec2 Bd = B + s * (A - B), Cd = C + s * (A - C);
    RandomPoly v = random_poly(rng, {A, B, C}, p, false);
    int q = 2 * p + 4;
    double lhs = std::sqrt(tri_norm2(v, A, B, C, q));
    double rhs = std::pow(T((1 + s) / (1 - s)), 2 * p + 1.5) * std::sqrt(tri_norm2(v, A, Bd, Cd, q));
    record(r, lhs, rhs);
  }
  return r;
}

SuiteReport suite_inscribed_inverse(int trials, std::uint64_t seed) {
  SuiteReport r;
  r.name = "inscribed_inverse";
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(0, 1);
  std::uniform_int_distribution<int> P(1, 6);
  for (int k = 0; k < trials; ++k) {
    int p = P(rng);
    Vec2 a = random_point(rng, 1), b = random_point(rng, 1), c = random_point(rng, 1);
    double area = tri_area(a, b, c);
    if (area < 1e-3) {
      --k;
      continue;
    }
    double la = (b - c).norm(), lb = (c - a).norm(), lc = (a - b).norm(), per = la + lb + lc;
    Vec2 O = (la * a + lb * b + lc * c) / per;
    double rho = 2 * area / per, d = rho * (0.01 + 0.48 * U(rng)), s = 1 - d / rho;
    RandomPoly v = random_poly(rng, {a, b, c}, p, false);
    int q = 2 * p + 4;
    double lhs = std::sqrt(tri_norm2(v, a, b, c, q));
    double rhs = std::pow(1 + 7 * std::sqrt(d / rho), 2 * p + 1.5) *
                 std::sqrt(tri_norm2(v, O + s * (a - O), O + s * (b - O), O + s * (c - O), q));
    record(r, lhs, rhs);
  }
  return r;
}

SuiteReport suite_trace(int trials, std::uint64_t seed) {
  SuiteReport r;
  r.name = "trace_inverse";
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(0, 1);
  std::uniform_int_distribution<int> P(1, 6);
  for (int k = 0; k < trials; ++k) {
    int p = P(rng);
    Vec2 a = random_point(rng, 1), b = random_point(rng, 1), c = random_point(rng, 1);
    if (k % 10 == 0) c = a + (b - a) * U(rng) + 1e-3 * Vec2(-(b - a).y(), (b - a).x());  // thin
    double area = tri_area(a, b, c);
    if (area < 1e-8) {
      --k;
      continue;
    }
    RandomPoly v = random_poly(rng, {a, b, c}, p, true);
    double per = (b - a).norm() + (c - b).norm() + (a - c).norm();
    double bd = 0;
    const Vec2 V[3] = {a, b, c};
    for (int e = 0; e < 3; ++e) {
      LineRule lr = segment_rule(V[e], V[(e + 1) % 3], p + 2);
      for (int q = 0; q < lr.size(); ++q) bd += lr.w[q] * v(lr.x[q]) * v(lr.x[q]);
    }
    double lhs = std::sqrt(bd);
    double rhs = std::sqrt((p + 1) * (p + 2) / 2.0 * per / area * tri_norm2(v, a, b, c, p + 3));
    record(r, lhs, rhs);
  }
  return r;
}

std::vector<SuiteReport> suite_lifting_and_coercivity(int p, int trials, std::uint64_t seed) {
  ProblemSpec pb = example1();
  QuadMesh mesh(pb.domain, pb.nx, pb.ny);
  InducedOptions io;
  io.p = p;
  InducedResult res = build_induced(mesh, pb.curve, io);
  LdgOptions lo;
  lo.p = p;
  LdgContext ctx(res.induced, res.mesh, pb, lo);
  SparseSystem sys = assemble(ctx);
  const int N = ctx.ndofs(), n = ctx.dofs().n_loc;
  std::vector<Eigen::MatrixXd> mass;
  for (const auto& pc : ctx.pieces())
    mass.push_back(pc.V.transpose() * Eigen::Map<const Eigen::VectorXd>(pc.rule.w.data(), pc.rule.w.size())
                                          .asDiagonal() * pc.V);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(-1, 1);
  auto random_v = [&] {
    Eigen::VectorXd v(N);
    for (int k = 0; k < N; ++k) v[k] = U(rng);
    return v;
  };
  auto lift_ratio = [&](const Eigen::VectorXd& v) {
    auto L = lifting(ctx, v);
    double num = 0, den = 0;
    for (size_t P = 0; P < L.size(); ++P)
      num += ctx.pieces()[P].a * (L[P][0].dot(mass[P] * L[P][0]) + L[P][1].dot(mass[P] * L[P][1]));
    for (const auto& f : ctx.flux_faces()) {
      Eigen::VectorXd j = f.Vm * v.segment(ctx.pieces()[f.minus].offset, n);
      if (f.plus >= 0) j -= f.Vp * v.segment(ctx.pieces()[f.plus].offset, n);
      for (int k = 0; k < j.size(); ++k) den += f.alpha * f.w[k] * j[k] * j[k];
    }
    return std::sqrt(num / den);
  };
  SuiteReport lift;
  lift.name = "lifting_constant";
  double cL = 0;
  for (int k = 0; k < trials; ++k) {
    cL = std::max(cL, lift_ratio(random_v()));
    ++lift.trials;
  }
  lift.worst_margin = 1;
  lift.note = "measured c_L = " + std::to_string(cL);
  if (!std::isfinite(cL)) ++lift.violations;

  SuiteReport coer;
  coer.name = "coercivity";
  for (int k = 0; k < trials; ++k) {
    Eigen::VectorXd v = random_v();
    double ah = v.dot(sys.A * v);
    double dg = dg_norm(ctx, v).total();
    record(coer, dg * dg / (4 + cL * cL), ah);
  }
  coer.note = "bound (4 + c_L^2)^-1 with c_L = " + std::to_string(cL);
  return {lift, coer};
}

std::vector<std::string> suite_names() {
  return {"laplace", "inverse1d", "strip", "inscribed", "trace", "coercivity"};
}

std::vector<SuiteReport> run_suite(const std::string& name, std::uint64_t seed) {
  if (name == "laplace") return {suite_laplace()};
  if (name == "inverse1d") return {suite_domain_inverse_1d(3000, seed)};
  if (name == "strip") return {suite_triangle_inverse(2000, seed + 1)};
  if (name == "inscribed") return {suite_inscribed_inverse(2000, seed + 2)};
  if (name == "trace") return {suite_trace(2000, seed + 3)};
  if (name == "coercivity") return suite_lifting_and_coercivity(1, 200, seed + 4);
  throw Error(ErrorKind::BadInput, "unknown suite '" + name + "'");
}

}  // namespace ufem
