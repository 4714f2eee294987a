#include "ufem/geometry.hpp"
#include "ufem/problems.hpp"

#include <doctest.h>

#include <cmath>

using namespace ufem;

namespace {

const InterfaceCurve& circle() {
  static InterfaceCurve c = circle_interface({0, 0}, 1.1, 4 * std::sqrt(2.0));
  return c;
}

double hausdorff_dense(const InterfaceCurve& c, const Arc& arc, const Vec2& a, const Vec2& b, int n) {
  std::vector<Vec2> pts;
  for (int k = 0; k <= n; ++k) pts.push_back(arc_point_at(c, arc, double(k) / n));
  double d1 = 0, d2 = 0;
  for (const auto& p : pts) d1 = std::max(d1, dist_point_segment(p, a, b));
  for (int k = 0; k <= n; ++k) {
    Vec2 q = a + (b - a) * (double(k) / n);
    double m = 1e300;
    for (const auto& p : pts) m = std::min(m, (p - q).norm());
    d2 = std::max(d2, m);
  }
  return std::max(d1, d2);
}

}  // namespace

TEST_CASE("classify points against the circle") {
  CHECK(classify_point(circle(), {0, 0}) == PointClass::Omega1);
  CHECK(classify_point(circle(), {2, 2}) == PointClass::Omega2);
  CHECK(classify_point(circle(), {1.1, 0}) == PointClass::OnInterface);
}

TEST_CASE("side intersections") {
  auto h = intersect_side(circle(), {1.0, 0}, {1.5, 0});
  REQUIRE(h.size() == 1);
  CHECK(h[0].point.x() == doctest::Approx(1.1).epsilon(1e-12));
  CHECK(std::abs(h[0].point.y()) < 1e-12);
  CHECK(intersect_side(circle(), {0, 0}, {0.5, 0}).empty());
  auto v = intersect_side(circle(), {1.0, 0}, {1.0, 1.0});
  REQUIRE(v.size() == 1);
  CHECK(v[0].point.y() == doctest::Approx(std::sqrt(1.21 - 1.0)).epsilon(1e-12));
}

TEST_CASE("cut topology of rectangles") {
  auto in = cut_rectangle(circle(), {0, 0, 0.5, 0.5});
  CHECK(in.cls == CellClass::Interior1);
  auto c = cut_rectangle(circle(), {0.5, 0.5, 1.5, 1.5});
  CHECK(c.is_cut());
  CHECK(c.crossings.size() == 2);
  CHECK(c.corner[0] == 1);
  CHECK(c.corner[2] == 2);
  CHECK(c.vertices_in(1) == 1);
  CHECK(c.vertices_in(2) == 3);
}

TEST_CASE("lens element around the tip splits the arc at the singular point") {
  auto pb = example3();
  const double s2 = std::sqrt(2.0);
  auto c = cut_rectangle(pb.curve, {s2 - 0.1, -0.07, s2 + 0.1, 0.13});
  REQUIRE(c.is_cut());
  REQUIRE(c.singular.has_value());
  CHECK((*c.singular - Vec2(s2, 0)).norm() < 1e-12);
  CHECK(c.arcs.size() == 2);
}

TEST_CASE("interface deviation") {
  Rect R{0.5, 0.5, 1.5, 1.5};
  auto cc = cut_rectangle(circle(), R);
  Deviation d = interface_deviation(circle(), R, cc, 64);
  double dh = hausdorff_dense(circle(), cc.arcs[0], cc.crossings[0].point, cc.crossings[1].point, 10000);
  double d1 = dist_point_segment(R.corner(0), cc.crossings[0].point, cc.crossings[1].point);
  double d2 = dist_point_segment(R.corner(2), cc.crossings[0].point, cc.crossings[1].point);
  double oracle = std::max(dh / d1, dh / d2);
  CHECK(d.eta == doctest::Approx(oracle).epsilon(0.01));
}

TEST_CASE("deviation is first order in h on the circle") {
  std::vector<double> ratio;
  for (int L = 3; L <= 6; ++L) {
    double h = std::ldexp(1.0, -L);
    Vec2 p = circle().point(0, 0.3);
    Rect K{p.x() - 0.37 * h, p.y() - 0.41 * h, p.x() + 0.63 * h, p.y() + 0.59 * h};
    auto cut = cut_rectangle(circle(), K);
    REQUIRE(cut.is_cut());
    ratio.push_back(interface_deviation(circle(), K, cut, 32).eta / h);
  }
  for (size_t k = 1; k < ratio.size(); ++k) CHECK(ratio[k] == doctest::Approx(ratio[0]).epsilon(0.25));
}

TEST_CASE("large elements") {
  CHECK(is_large({0, 0, 0.5, 0.5}, cut_rectangle(circle(), {0, 0, 0.5, 0.5}), 1, 0.25).large);
  CHECK_FALSE(is_large({0, 0, 0.5, 0.5}, cut_rectangle(circle(), {0, 0, 0.5, 0.5}), 2, 0.25).large);
  // only a corner sliver of K lies inside the circle
  Rect K{0.77, 0.77, 1.77, 1.77};
  auto cut = cut_rectangle(circle(), K);
  REQUIRE(cut.is_cut());
  CHECK_FALSE(is_large(K, cut, 1, 0.25).large);

  Rect R{0.5, 0.5, 1.5, 1.5};
  auto cr = cut_rectangle(circle(), R);
  CHECK(is_large(R, cr, 1, 0.25).large);
  CHECK(is_large(R, cr, 2, 0.25).large);
}

TEST_CASE("irregular large element around the lens tip") {
  auto pb = example3();
  const double s2 = std::sqrt(2.0);
  Rect K{s2 - 0.3, -0.1, s2 + 0.1, 0.3};
  auto cut = cut_rectangle(pb.curve, K);
  REQUIRE(cut.is_cut());
  REQUIRE(cut.singular.has_value());
  int one = cut.vertices_in(1) == 1 ? 1 : 2;
  REQUIRE(cut.vertices_in(one) == 1);
  auto L = is_large(K, cut, one, 0.25);
  CHECK(L.large);
  CHECK_FALSE(L.regular);
}

TEST_CASE("normals") {
  Frame f = curve_frame(circle(), 0, 0.0);
  Vec2 p = circle().point(0, 0.0);
  CHECK((f.normal - p / p.norm()).norm() < 1e-12);
  auto pb = example3();
  // upper branch at x = 0
  Frame g = curve_frame(pb.curve, 0, 0.0);
  CHECK(pb.curve.point(0, 0.0).y() == doctest::Approx(6 * std::sqrt(2.0) / 9));
  CHECK((g.normal - Vec2(0, 1)).norm() < 1e-12);
}
