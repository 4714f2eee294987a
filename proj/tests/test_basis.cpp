#include "ufem/basis.hpp"
#include "ufem/quadrature.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace ufem;

TEST_CASE("legendre values") {
  CHECK(legendre_eval(2, 0.5) == doctest::Approx(-0.125).epsilon(1e-15));
  CHECK(legendre_eval(3, 2.0) == doctest::Approx(17.0).epsilon(1e-15));
  CHECK(legendre_eval(5, 1.0) == doctest::Approx(1.0));
  CHECK(legendre_eval(4, -1.0) == doctest::Approx(1.0));
  CHECK(legendre_deriv(3, 1.0) == doctest::Approx(6.0));
  // derivative against a central difference
  for (double t : {-0.7, 0.1, 1.3}) {
    double fd = (legendre_eval(6, t + 1e-6) - legendre_eval(6, t - 1e-6)) / 2e-6;
    CHECK(legendre_deriv(6, t) == doctest::Approx(fd).epsilon(1e-7));
  }
}

TEST_CASE("laplace integral reproduces legendre polynomials") {
  CHECK(legendre_laplace(3, 2.0, 64) == doctest::Approx(17.0).epsilon(1e-13));
  for (int n = 0; n <= 8; ++n)
    for (double t : {-0.9, 0.0, 0.4, 1.0, 1.7, 3.0})
      CHECK(legendre_laplace(n, t, 64) == doctest::Approx(legendre_eval(n, t)).epsilon(1e-12).scale(1));
}

TEST_CASE("legendre orthogonality on an interval") {
  auto g = gauss_legendre(10);
  for (int m = 0; m < 6; ++m)
    for (int n = 0; n < 6; ++n) {
      double s = 0;
      for (int k = 0; k < g.size(); ++k) s += g.w[k] * legendre_eval(m, g.x[k]) * legendre_eval(n, g.x[k]);
      CHECK(s == doctest::Approx(m == n ? 2.0 / (2 * n + 1) : 0.0).scale(1).epsilon(1e-13));
    }
}

TEST_CASE("lagrange basis at gll nodes") {
  for (int p = 1; p <= 4; ++p) {
    TensorBasis B(p);
    std::vector<double> v(B.size()), gx(B.size()), gy(B.size());
    for (int k = 0; k < B.size(); ++k) {
      B.eval(B.node(k), v.data());
      for (int m = 0; m < B.size(); ++m) CHECK(v[m] == doctest::Approx(m == k ? 1.0 : 0.0).scale(1));
    }
    // partition of unity and vanishing gradient sum
    Vec2 xi(0.31, -0.47);
    B.eval(xi, v.data());
    B.grad(xi, gx.data(), gy.data());
    double s = 0, sx = 0, sy = 0;
    for (int k = 0; k < B.size(); ++k) s += v[k], sx += gx[k], sy += gy[k];
    CHECK(s == doctest::Approx(1.0));
    CHECK(std::abs(sx) < 1e-12);
    CHECK(std::abs(sy) < 1e-12);
  }
}

TEST_CASE("physical derivatives on a rectangle") {
  Rect K{1, 2, 1.5, 2.25};
  TensorBasis B(3);
  int n = B.size();
  std::vector<double> v(n), gx(n), gy(n), lap(n);
  // interpolate x^2 y^3 and differentiate
  std::vector<double> c(n);
  for (int k = 0; k < n; ++k) {
    Vec2 xi = B.node(k);
    Vec2 x(K.x0 + 0.5 * (xi.x() + 1) * K.width(), K.y0 + 0.5 * (xi.y() + 1) * K.height());
    c[k] = x.x() * x.x() * std::pow(x.y(), 3);
  }
  Vec2 x(1.2, 2.1);
  B.eval_physical(K, x, v.data(), gx.data(), gy.data(), lap.data());
  double u = 0, ux = 0, uy = 0, l = 0;
  for (int k = 0; k < n; ++k) u += c[k] * v[k], ux += c[k] * gx[k], uy += c[k] * gy[k], l += c[k] * lap[k];
  CHECK(u == doctest::Approx(1.44 * std::pow(2.1, 3)).epsilon(1e-12));
  CHECK(ux == doctest::Approx(2.4 * std::pow(2.1, 3)).epsilon(1e-11));
  CHECK(uy == doctest::Approx(1.44 * 3 * 2.1 * 2.1).epsilon(1e-11));
  CHECK(l == doctest::Approx(2 * std::pow(2.1, 3) + 1.44 * 6 * 2.1).epsilon(1e-10));
}

TEST_CASE("l2 projection") {
  auto g = gauss_legendre(12);
  std::vector<Vec2> pts;
  std::vector<double> w;
  Eigen::VectorXd f(g.size());
  for (int k = 0; k < g.size(); ++k) {
    double x = 0.5 * (g.x[k] + 1);
    pts.emplace_back(x, 0.5);
    w.push_back(0.5 * g.w[k]);
    f[k] = std::sin(x);
  }
  Rect K{0, 0, 1, 1};
  auto c = l2_project(legendre_tensor_values(K, 0, pts), w, f);
  CHECK(c[0] * legendre_tensor_values(K, 0, {Vec2(0.3, 0.5)})(0, 0) == doctest::Approx(1 - std::cos(1.0)));

  // a polynomial in the space is reproduced
  auto t = tensor_rule(K, 6);
  Eigen::VectorXd q(t.size());
  for (int k = 0; k < t.size(); ++k) q[k] = 1 + 2 * t.x[k].x() - t.x[k].x() * t.x[k].y();
  Eigen::MatrixXd Phi = legendre_tensor_values(K, 1, t.x);
  Eigen::VectorXd r = Phi * l2_project(Phi, t.w, q) - q;
  CHECK(r.lpNorm<Eigen::Infinity>() < 1e-13);
}
