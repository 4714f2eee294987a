#include "ufem/problems.hpp"

#include <doctest.h>

#include <cmath>

using namespace ufem;

TEST_CASE("manufactured problems satisfy the interface conditions") {
  CHECK(audit_problem(example1()).ok());
  CHECK(audit_problem(example2()).ok());
  CHECK(audit_problem(patch_problem()).ok());
}

TEST_CASE("example 1 data") {
  auto pb = example1();
  CHECK(pb.a1 == 10);
  CHECK(pb.a2 == 1);
  const auto& ex = *pb.exact;
  Vec2 on(1.1 * std::cos(0.4), 1.1 * std::sin(0.4));
  CHECK(ex.u[0](on) == doctest::Approx(ex.u[1](on)));
  CHECK(ex.u[1](Vec2(1, 1)) == doctest::Approx(20.0));
  CHECK(pb.f[1](Vec2(0.3, 2)) == -40.0);
}

TEST_CASE("example 2 geometry") {
  auto pb = example2();
  CHECK(pb.curve.num_loops() == 2);
  CHECK(classify_point(pb.curve, {0, 0}) == PointClass::Omega2);
  CHECK(classify_point(pb.curve, {0.53, 0}) == PointClass::Omega1);
  CHECK(classify_point(pb.curve, {-0.53, 0}) == PointClass::Omega1);
  // centers 2 r + d apart
  Vec2 c1 = pb.curve.point(0, 0.0) - Vec2(0.51, 0);
  Vec2 c2 = pb.curve.point(1, 0.0) - Vec2(0.51, 0);
  CHECK((c1 - c2).norm() == doctest::Approx(1.04));
}

TEST_CASE("example 3 lens") {
  auto pb = example3();
  CHECK(pb.curve.singular_points().size() == 2);
  for (const auto& s : pb.curve.singular_points()) {
    CHECK(std::abs(std::abs(s.point.x()) - std::sqrt(2.0)) < 1e-12);
    CHECK(std::abs(s.point.y()) < 1e-12);
  }
  CHECK(pb.curve.point(0, 0.0).y() == doctest::Approx(6 * std::sqrt(2.0) / 9));
  CHECK(classify_point(pb.curve, {0, 0}) == PointClass::Omega1);
  CHECK(classify_point(pb.curve, {0, 1}) == PointClass::Omega2);
  CHECK_FALSE(pb.exact.has_value());
}

TEST_CASE("problem lookup") {
  CHECK(problem_by_name("example2").name == "example2");
  CHECK(problem_by_name("patch").name == "patch");
  CHECK_THROWS_AS(problem_by_name("nope"), Error);
  CHECK_THROWS_AS(lens_interface(0.1, 0.5, 1.0, 5.0), Error);
}

TEST_CASE("expression parser") {
  auto e = Expr::parse("2*x^2*y - 3 + 0.5*exp(-r2)");
  Vec2 p(0.5, 2);
  CHECK(e.value(p) == doctest::Approx(2 * 0.25 * 2 - 3 + 0.5 * std::exp(-4.25)));
  auto q = Expr::parse("x^2 + y^2");
  CHECK(q.laplacian(p) == doctest::Approx(4.0));
  CHECK(q.grad(p).x() == doctest::Approx(1.0));
  CHECK(q.grad(p).y() == doctest::Approx(4.0));
  auto g = Expr::parse("exp(2*r2)");
  // Laplacian of exp(k r^2) is (4 k + 4 k^2 r^2) exp(k r^2)
  CHECK(g.laplacian(p) == doctest::Approx((8 + 16 * 4.25) * std::exp(8.5)));
  CHECK(Expr::parse("1e-3*x").value(p) == doctest::Approx(5e-4));
  CHECK_THROWS_AS(Expr::parse(""), Error);
  CHECK_THROWS_AS(Expr::parse("x^2 + sin(x)"), Error);
}

TEST_CASE("custom problem") {
  std::map<std::string, std::string> kv{{"interface", "circle"}, {"radius", "0.8"}, {"a1", "2"},
                                        {"a2", "1"}, {"u1", "x^2 + y^2"}, {"u2", "2*x^2 + 2*y^2 - 0.64"}};
  auto pb = custom_problem(kv);
  REQUIRE(pb.exact.has_value());
  CHECK(audit_problem(pb).ok());
  CHECK(pb.f[0](Vec2(0.1, 0.1)) == doctest::Approx(-8.0));
  CHECK(pb.f[1](Vec2(1.5, 0.1)) == doctest::Approx(-8.0));
  kv["a1"] = "-1";
  CHECK_THROWS_AS(custom_problem(kv), Error);
  kv["a1"] = "2";
  kv["interface"] = "square";
  CHECK_THROWS_AS(custom_problem(kv), Error);
}
