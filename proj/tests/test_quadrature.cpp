#include "ufem/problems.hpp"
#include "ufem/quadrature.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace ufem;

TEST_CASE("gauss legendre") {
  auto g = gauss_legendre(5);
  double s = 0, m8 = 0;
  for (int k = 0; k < g.size(); ++k) {
    s += g.w[k];
    m8 += g.w[k] * std::pow(g.x[k], 8);
  }
  CHECK(s == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(m8 == doctest::Approx(2.0 / 9).epsilon(1e-13));
  auto g2 = gauss_legendre(2);
  CHECK(std::abs(std::abs(g2.x[0]) - 1 / std::sqrt(3.0)) < 1e-14);
}

TEST_CASE("gll points") {
  auto x = gll_points(4);
  REQUIRE(x.size() == 5);
  CHECK(x.front() == doctest::Approx(-1.0));
  CHECK(x.back() == doctest::Approx(1.0));
  CHECK(std::abs(x[2]) < 1e-14);
  CHECK(x[3] == doctest::Approx(std::sqrt(3.0 / 7)).epsilon(1e-13));
}

TEST_CASE("tensor rule integrates polynomials on a rectangle") {
  Rect K{0.5, -1, 2, 0.25};
  auto r = tensor_rule(K, 4);
  double s = 0;
  for (int k = 0; k < r.size(); ++k) s += r.w[k] * r.x[k].x() * r.x[k].x() * r.x[k].y();
  double ex = (8.0 - 0.125) / 3 * (0.0625 - 1) / 2;
  CHECK(s == doctest::Approx(ex).epsilon(1e-13));
  CHECK(r.sum() == doctest::Approx(K.area()).epsilon(1e-14));
}

TEST_CASE("quarter disk") {
  auto curve = circle_interface({0, 0}, 1.1, 4 * std::sqrt(2.0));
  auto cut = cut_rectangle(curve, {0, 0, 2, 2});
  REQUIRE(cut.is_cut());
  double quarter = M_PI * 1.21 / 4;
  CHECK(std::abs(region_area(curve, cut.region[0]) - quarter) < 1e-8);
  auto q = cut_region_rule(curve, cut.region[0], 12);
  CHECK(std::abs(q.sum() - quarter) < 1e-8);
  CHECK(std::abs(region_area(curve, cut.region[1]) - (4 - quarter)) < 1e-8);
  // int_{quarter disk} x = r^3 / 3
  double mx = 0;
  for (int k = 0; k < q.size(); ++k) mx += q.w[k] * q.x[k].x();
  CHECK(mx == doctest::Approx(std::pow(1.1, 3) / 3).epsilon(1e-9));
}

TEST_CASE("cut rules are additive over random rectangles") {
  auto curve = circle_interface({0, 0}, 1.1, 4 * std::sqrt(2.0));
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> ang(0, 2 * M_PI), u(0.05, 0.4), off(0.1, 0.9);
  int tested = 0;
  while (tested < 50) {
    Vec2 c = curve.point(0, ang(rng));
    double w = u(rng), h = u(rng);
    Rect K{c.x() - off(rng) * w, c.y() - off(rng) * h, 0, 0};
    K.x1 = K.x0 + w;
    K.y1 = K.y0 + h;
    CutTopology cut;
    try {
      cut = cut_rectangle(curve, K);
    } catch (const Error&) {
      continue;
    }
    if (!cut.is_cut() || cut.crossings.size() != 2) continue;
    double a0 = cut_region_rule(curve, cut.region[0], 8).sum();
    double a1 = cut_region_rule(curve, cut.region[1], 8).sum();
    CHECK(std::abs(a0 + a1 - K.area()) < 1e-12 * K.area() + 1e-14);
    CHECK(std::abs(a0 - region_area(curve, cut.region[0])) < 1e-10 * K.area());
    ++tested;
  }
}

TEST_CASE("arc and segment rules") {
  auto curve = circle_interface({0, 0}, 1.1, 4 * std::sqrt(2.0));
  Arc full{{0, 0.0, 2 * M_PI}};
  CHECK(arc_rule(curve, full, 16).sum() == doctest::Approx(2 * M_PI * 1.1).epsilon(1e-12));
  Arc quarter{{0, 0.0, M_PI / 2}};
  auto r = arc_rule(curve, quarter, 10);
  double mx = 0;
  for (int k = 0; k < r.size(); ++k) mx += r.w[k] * r.x[k].x();
  CHECK(mx == doctest::Approx(1.21).epsilon(1e-12));
  for (int k = 0; k < r.size(); ++k) CHECK(std::abs(r.tangent[k].norm() - 1) < 1e-14);

  auto s = segment_rule({0, 0}, {3, 4}, 3);
  CHECK(s.sum() == doctest::Approx(5.0));
  double m = 0;
  for (int k = 0; k < s.size(); ++k) m += s.w[k] * s.x[k].x() * s.x[k].x();
  CHECK(m == doctest::Approx(5.0 * 3.0).epsilon(1e-13));
}
