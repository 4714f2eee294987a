#include "ufem/problems.hpp"

#include <cctype>
#include <cmath>
#include <sstream>

namespace ufem {

namespace {

const double kDomainDiam = 4 * std::sqrt(2.0);

PieceDef circle_piece(const Vec2& c, double r) {
  PieceDef p;
  p.x = [c, r](double t) { return Vec2(c.x() + r * std::cos(t), c.y() + r * std::sin(t)); };
  p.dx = [r](double t) { return Vec2(-r * std::sin(t), r * std::cos(t)); };
  p.ddx = [r](double t) { return Vec2(-r * std::cos(t), -r * std::sin(t)); };
  p.t0 = 0;
  p.t1 = 2 * M_PI;
  return p;
}

double ipow(double x, int n) {
  if (n < 0) return 0;
  double r = 1;
  for (int k = 0; k < n; ++k) r *= x;
  return r;
}

}  // namespace

InterfaceCurve circle_interface(const Vec2& center, double r, double domain_diam) {
  return InterfaceCurve({{circle_piece(center, r)}}, domain_diam);
}

InterfaceCurve two_circles_interface(const Vec2& c1, const Vec2& c2, double r, double domain_diam) {
  return InterfaceCurve({{circle_piece(c1, r)}, {circle_piece(c2, r)}}, domain_diam);
}

InterfaceCurve lens_interface(double A, double B, double w, double domain_diam) {
  if (!(A > 0 && std::abs(B) < A && w > 0)) throw Error(ErrorKind::BadInput, "lens parameters need A > |B|, w > 0");
  double xs = std::acos(-B / A) / w;
  auto b = [=](double x) { return A * std::cos(w * x) + B; };
  auto db = [=](double x) { return -A * w * std::sin(w * x); };
  auto ddb = [=](double x) { return -A * w * w * std::cos(w * x); };
  PieceDef up, lo;
  up.x = [=](double t) { return Vec2(-t, b(t)); };
  up.dx = [=](double t) { return Vec2(-1, db(t)); };
  up.ddx = [=](double t) { return Vec2(0, ddb(t)); };
  lo.x = [=](double t) { return Vec2(t, -b(t)); };
  lo.dx = [=](double t) { return Vec2(1, -db(t)); };
  lo.ddx = [=](double t) { return Vec2(0, -ddb(t)); };
  up.t0 = lo.t0 = -xs;
  up.t1 = lo.t1 = xs;
  up.corner_at_end = lo.corner_at_end = true;
  return InterfaceCurve({{up, lo}}, domain_diam);
}

InterfaceCurve lens_interface(double domain_diam) {
  return lens_interface(4 * std::sqrt(2.0) / 9, 2 * std::sqrt(2.0) / 9, std::sqrt(2.0) * M_PI / 3, domain_diam);
}

ProblemSpec example1() {
  ProblemSpec pb;
  pb.name = "example1";
  const double r = 1.1;
  pb.curve = circle_interface({0, 0}, r, kDomainDiam);
  pb.a1 = 10;
  pb.a2 = 1;
  ExactSolution ex;
  ex.u[0] = [r](const Vec2& x) { return std::exp(x.squaredNorm() - r * r) + 10 * r * r - 1; };
  ex.u[1] = [](const Vec2& x) { return 10 * x.squaredNorm(); };
  ex.grad[0] = [r](const Vec2& x) { return Vec2(2 * std::exp(x.squaredNorm() - r * r) * x); };
  ex.grad[1] = [](const Vec2& x) { return Vec2(20 * x); };
  pb.f[0] = [r](const Vec2& x) {
    double s = x.squaredNorm();
    return -10 * (4 * s + 4) * std::exp(s - r * r);
  };
  pb.f[1] = [](const Vec2&) { return -40.0; };
  pb.g = ex.u[1];
  pb.g_grad = ex.grad[1];
  pb.exact = ex;
  return pb;
}

ProblemSpec example2() {
  ProblemSpec pb;
  pb.name = "example2";
  const double r = 0.51, d = 0.02;
  pb.curve = two_circles_interface({-(r + d / 2), 0}, {r + d / 2, 0}, r, kDomainDiam);
  pb.a1 = 100;
  pb.a2 = 1;
  pb.f[0] = pb.f[1] = [](const Vec2&) { return 1.0; };
  pb.g = [](const Vec2&) { return 0.0; };
  pb.g_grad = [](const Vec2&) { return Vec2(0, 0); };
  return pb;
}

ProblemSpec example3() {
  ProblemSpec pb;
  pb.name = "example3";
  pb.curve = lens_interface(kDomainDiam);
  pb.a1 = 10;
  pb.a2 = 1;
  pb.f[0] = pb.f[1] = [](const Vec2&) { return 1.0; };
  pb.g = [](const Vec2&) { return 0.0; };
  pb.g_grad = [](const Vec2&) { return Vec2(0, 0); };
  return pb;
}

ProblemSpec patch_problem(double a) {
  ProblemSpec pb;
  pb.name = "patch";
  pb.curve = circle_interface({0, 0}, 1.1, kDomainDiam);
  pb.a1 = pb.a2 = a;
  ExactSolution ex;
  ex.u[0] = ex.u[1] = [](const Vec2& x) { return x.x() + x.y(); };
  ex.grad[0] = ex.grad[1] = [](const Vec2&) { return Vec2(1, 1); };
  pb.f[0] = pb.f[1] = [](const Vec2&) { return 0.0; };
  pb.g = ex.u[0];
  pb.g_grad = ex.grad[0];
  pb.exact = ex;
  return pb;
}

ProblemSpec problem_by_name(const std::string& name) {
  if (name == "example1" || name == "1") return example1();
  if (name == "example2" || name == "2") return example2();
  if (name == "example3" || name == "3") return example3();
  if (name == "patch") return patch_problem();
  throw Error(ErrorKind::BadInput, "unknown problem '" + name + "'");
}

namespace {

std::string strip(const std::string& s) {
  std::string out;
  for (char c : s)
    if (!std::isspace(static_cast<unsigned char>(c))) out += c;
  return out;
}

double parse_number(const std::string& s) {
  size_t pos = 0;
  double v = 0;
  try {
    v = std::stod(s, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos != s.size() || s.empty()) throw Error(ErrorKind::BadInput, "bad number '" + s + "' in expression");
  return v;
}

std::vector<std::string> split_top(const std::string& s, char sep) {
  std::vector<std::string> out;
  int depth = 0;
  std::string cur;
  for (char c : s) {
    if (c == '(') ++depth;
    if (c == ')') --depth;
    if (c == sep && depth == 0) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

Expr::Term parse_term(const std::string& text) {
  Expr::Term t;
  t.c = 1;
  std::string s = text;
  if (!s.empty() && (s[0] == '+' || s[0] == '-')) {
    if (s[0] == '-') t.c = -1;
    s = s.substr(1);
  }
  for (const auto& f : split_top(s, '*')) {
    if (f.empty()) throw Error(ErrorKind::BadInput, "empty factor in '" + text + "'");
    if (f[0] == 'x' || f[0] == 'y') {
      int e = 1;
      if (f.size() > 1) {
        if (f[1] != '^') throw Error(ErrorKind::BadInput, "bad factor '" + f + "'");
        e = static_cast<int>(parse_number(f.substr(2)));
      }
      (f[0] == 'x' ? t.i : t.j) += e;
    } else if (f.rfind("exp(", 0) == 0 && f.back() == ')') {
      std::string in = f.substr(4, f.size() - 5);
      size_t r = in.find("r2");
      if (r == std::string::npos) {
        t.c *= std::exp(parse_number(in));
      } else if (in == "r2") {
        t.k += 1;
      } else if (in == "-r2") {
        t.k -= 1;
      } else {
        auto parts = split_top(in, '*');
        if (parts.size() != 2) throw Error(ErrorKind::BadInput, "bad exponent '" + in + "'");
        t.k += parse_number(parts[0] == "r2" ? parts[1] : parts[0]);
      }
    } else {
      t.c *= parse_number(f);
    }
  }
  return t;
}

}  // namespace

Expr Expr::parse(const std::string& text) {
  std::string s = strip(text);
  if (s.empty()) throw Error(ErrorKind::BadInput, "empty expression");
  std::vector<Term> terms;
  int depth = 0;
  size_t start = 0;
  for (size_t k = 1; k <= s.size(); ++k) {
    char c = k < s.size() ? s[k] : '\0';
    if (s[k - 1] == '(') ++depth;
    if (s[k - 1] == ')') --depth;
    bool split = k == s.size() ||
                 ((c == '+' || c == '-') && depth == 0 && s[k - 1] != 'e' && s[k - 1] != 'E' && s[k - 1] != '*');
    if (split) {
      terms.push_back(parse_term(s.substr(start, k - start)));
      start = k;
    }
  }
  return Expr(terms);
}

double Expr::value(const Vec2& x) const {
  double r2 = x.squaredNorm(), s = 0;
  for (const auto& t : terms_) s += t.c * ipow(x.x(), t.i) * ipow(x.y(), t.j) * std::exp(t.k * r2);
  return s;
}

Vec2 Expr::grad(const Vec2& x) const {
  double r2 = x.squaredNorm();
  Vec2 g(0, 0);
  for (const auto& t : terms_) {
    double E = std::exp(t.k * r2), m = ipow(x.x(), t.i) * ipow(x.y(), t.j);
    double mx = t.i * ipow(x.x(), t.i - 1) * ipow(x.y(), t.j);
    double my = t.j * ipow(x.x(), t.i) * ipow(x.y(), t.j - 1);
    g.x() += t.c * E * (mx + 2 * t.k * x.x() * m);
    g.y() += t.c * E * (my + 2 * t.k * x.y() * m);
  }
  return g;
}

double Expr::laplacian(const Vec2& x) const {
  double r2 = x.squaredNorm(), s = 0;
  for (const auto& t : terms_) {
    double E = std::exp(t.k * r2), m = ipow(x.x(), t.i) * ipow(x.y(), t.j);
    double lm = t.i * (t.i - 1) * ipow(x.x(), t.i - 2) * ipow(x.y(), t.j) +
                t.j * (t.j - 1) * ipow(x.x(), t.i) * ipow(x.y(), t.j - 2);
    s += t.c * E * (lm + 4 * t.k * (t.i + t.j) * m + m * (4 * t.k + 4 * t.k * t.k * r2));
  }
  return s;
}

ProblemSpec custom_problem(const std::map<std::string, std::string>& kv) {
  auto get = [&](const std::string& k, const std::string& def) {
    auto it = kv.find(k);
    return it == kv.end() ? def : it->second;
  };
  auto num = [&](const std::string& k, double def) {
    auto it = kv.find(k);
    return it == kv.end() ? def : parse_number(strip(it->second));
  };
  ProblemSpec pb;
  pb.name = get("name", "custom");
  pb.domain = {num("x0", -2), num("y0", -2), num("x1", 2), num("y1", 2)};
  pb.nx = static_cast<int>(num("nx", 8));
  pb.ny = static_cast<int>(num("ny", 8));
  double diam = pb.domain.diameter();
  std::string shape = get("interface", "circle");
  if (shape == "circle") {
    pb.curve = circle_interface({num("center_x", 0), num("center_y", 0)}, num("radius", 1.1), diam);
  } else if (shape == "two_circles") {
    double r = num("radius", 0.51), d = num("gap", 0.02);
    pb.curve = two_circles_interface({-(r + d / 2), 0}, {r + d / 2, 0}, r, diam);
  } else if (shape == "cosine") {
    pb.curve = lens_interface(num("amplitude", 4 * std::sqrt(2.0) / 9), num("offset", 2 * std::sqrt(2.0) / 9),
                              num("frequency", std::sqrt(2.0) * M_PI / 3), diam);
  } else {
    throw Error(ErrorKind::BadInput, "unknown interface '" + shape + "'");
  }
  pb.a1 = num("a1", 1);
  pb.a2 = num("a2", 1);
  if (!(pb.a1 > 0 && pb.a2 > 0)) throw Error(ErrorKind::BadInput, "coefficients must be positive");

  bool has_u = kv.count("u1") && kv.count("u2");
  std::array<Expr, 2> u;
  if (has_u) {
    u = {Expr::parse(kv.at("u1")), Expr::parse(kv.at("u2"))};
    ExactSolution ex;
    for (int c = 0; c < 2; ++c) {
      Expr e = u[c];
      ex.u[c] = [e](const Vec2& x) { return e.value(x); };
      ex.grad[c] = [e](const Vec2& x) { return e.grad(x); };
    }
    pb.exact = ex;
  }
  for (int c = 0; c < 2; ++c) {
    std::string key = c == 0 ? "f1" : "f2";
    if (kv.count(key) || kv.count("f")) {
      Expr e = Expr::parse(kv.count(key) ? kv.at(key) : kv.at("f"));
      pb.f[c] = [e](const Vec2& x) { return e.value(x); };
    } else if (has_u) {
      Expr e = u[c];
      double a = pb.a(c + 1);
      pb.f[c] = [e, a](const Vec2& x) { return -a * e.laplacian(x); };
    } else {
      throw Error(ErrorKind::BadInput, "custom problem needs f or an exact solution");
    }
  }
  if (kv.count("g")) {
    Expr e = Expr::parse(kv.at("g"));
    pb.g = [e](const Vec2& x) { return e.value(x); };
    pb.g_grad = [e](const Vec2& x) { return e.grad(x); };
  } else if (has_u) {
    // Omega_2 touches the boundary for every built-in interface shape
    Expr e = u[1];
    pb.g = [e](const Vec2& x) { return e.value(x); };
    pb.g_grad = [e](const Vec2& x) { return e.grad(x); };
  } else {
    pb.g = [](const Vec2&) { return 0.0; };
    pb.g_grad = [](const Vec2&) { return Vec2(0, 0); };
  }
  return pb;
}

InterfaceAudit audit_problem(const ProblemSpec& pb, int samples) {
  InterfaceAudit out;
  if (!pb.exact) return out;
  const auto& ex = *pb.exact;
  const auto& C = pb.curve;
  for (int j = 0; j < C.num_pieces(); ++j) {
    const auto& pc = C.piece(j);
    for (int k = 0; k < samples; ++k) {
      double t = pc.t0 + (pc.t1 - pc.t0) * (k + 0.5) / samples;
      Vec2 x = C.point(j, t), d = C.deriv(j, t).normalized();
      Vec2 nu = C.normal_sign(j) * Vec2(d.y(), -d.x());
      out.max_value_jump = std::max(out.max_value_jump, std::abs(ex.u[0](x) - ex.u[1](x)));
      double flux = pb.a1 * ex.grad[0](x).dot(nu) - pb.a2 * ex.grad[1](x).dot(nu);
      out.max_flux_jump = std::max(out.max_flux_jump, std::abs(flux));
    }
  }
  const Rect& D = pb.domain;
  for (int s = 0; s < 4; ++s) {
    auto sd = D.side(s);
    for (int k = 0; k < samples; ++k) {
      Vec2 x = sd[0] + (k + 0.5) / samples * (sd[1] - sd[0]);
      int c = classify_point(C, x) == PointClass::Omega1 ? 0 : 1;
      out.max_boundary_mismatch = std::max(out.max_boundary_mismatch, std::abs(pb.g(x) - ex.u[c](x)));
    }
  }
  return out;
}

}  // namespace ufem
