#pragma once

#include "ufem/geometry.hpp"

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace ufem {

using ScalarFn = std::function<double(const Vec2&)>;
using VectorFn = std::function<Vec2(const Vec2&)>;

struct ExactSolution {
  std::array<ScalarFn, 2> u;     // per subdomain, extended smoothly beyond it
  std::array<VectorFn, 2> grad;
};

struct ProblemSpec {
  std::string name;
  Rect domain{-2, -2, 2, 2};
  int nx = 8, ny = 8;
  std::vector<bool> active;  // root cells kept in the domain (empty: all)
  InterfaceCurve curve;
  double a1 = 1, a2 = 1;
  std::array<ScalarFn, 2> f;
  ScalarFn g;
  VectorFn g_grad;
  std::optional<ExactSolution> exact;

  double a(int comp) const { return comp == 1 ? a1 : a2; }
};

InterfaceCurve circle_interface(const Vec2& center, double r, double domain_diam);
InterfaceCurve two_circles_interface(const Vec2& c1, const Vec2& c2, double r, double domain_diam);
/// Lens |y| = A cos(w x) + B closed at the two roots, both junctions singular.
InterfaceCurve lens_interface(double A, double B, double w, double domain_diam);
InterfaceCurve lens_interface(double domain_diam);

ProblemSpec example1();
ProblemSpec example2();
ProblemSpec example3();
/// a1 = a2 = 1, u = x + y across the Example 1 interface.
ProblemSpec patch_problem(double a = 1.0);
ProblemSpec problem_by_name(const std::string& name);

/// Sum of terms c * x^i * y^j * exp(k |x|^2), the documented expression subset.
class Expr {
 public:
  struct Term {
    double c = 0;
    int i = 0, j = 0;
    double k = 0;
  };
  Expr() = default;
  explicit Expr(std::vector<Term> terms) : terms_(std::move(terms)) {}
  static Expr parse(const std::string& text);

  double value(const Vec2& x) const;
  Vec2 grad(const Vec2& x) const;
  double laplacian(const Vec2& x) const;
  const std::vector<Term>& terms() const { return terms_; }

 private:
  std::vector<Term> terms_;
};

/// Custom problem from key = value pairs (see README for the keys).
ProblemSpec custom_problem(const std::map<std::string, std::string>& kv);

struct InterfaceAudit {
  double max_value_jump = 0, max_flux_jump = 0, max_boundary_mismatch = 0;
  bool ok(double tol = 1e-9) const {
    return max_value_jump <= tol && max_flux_jump <= tol && max_boundary_mismatch <= tol;
  }
};
/// Samples [[u]], [[a grad u . nu]] on the interface and g - u on the boundary.
InterfaceAudit audit_problem(const ProblemSpec& pb, int samples = 100);

}  // namespace ufem
