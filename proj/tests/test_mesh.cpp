#include "ufem/mesh.hpp"
#include "ufem/problems.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace ufem;

namespace {

int corner_leaf(const QuadMesh& m) {
  for (int k = 0; k < m.size(); ++k)
    if (m.leaf(k).i == 0 && m.leaf(k).j == 0) return k;
  return -1;
}

// largest level jump across any edge
int max_level_jump(const QuadMesh& m) {
  int jump = 0;
  for (int k = 0; k < m.size(); ++k)
    for (int d = 0; d < 4; ++d)
      for (int n : m.neighbors(k, d)) jump = std::max(jump, std::abs(m.leaf(n).level - m.leaf(k).level));
  return jump;
}

QuadMesh random_mesh(std::uint64_t seed, int rounds) {
  std::mt19937_64 rng(seed);
  QuadMesh m({-2, -2, 2, 2}, 4, 4);
  for (int r = 0; r < rounds; ++r) {
    std::uniform_int_distribution<int> pick(0, m.size() - 1);
    m = refine(m, {pick(rng), pick(rng)});
  }
  return m;
}

}  // namespace

TEST_CASE("refinement counts") {
  QuadMesh m({0, 0, 1, 1}, 4, 4);
  CHECK(m.size() == 16);
  auto r = refine(m, {corner_leaf(m)});
  CHECK(r.size() == 19);
  QuadMesh one({0, 0, 1, 1}, 1, 1);
  auto s = refine(one, {0});
  CHECK(s.size() == 4);
  CHECK(s.max_level() == 1);
  CHECK(s.domain_area() == doctest::Approx(1.0));
}

TEST_CASE("neighbours and hanging nodes") {
  QuadMesh m({0, 0, 1, 1}, 2, 2);
  auto r = refine(m, {corner_leaf(m)});
  int e = -1;
  for (int k = 0; k < r.size(); ++k)
    if (r.leaf(k).level == 0 && r.leaf(k).i == 1 && r.leaf(k).j == 0) e = k;
  REQUIRE(e >= 0);
  CHECK(r.neighbors(e, West).size() == 2);
  CHECK(r.hanging_nodes(e, West) == 1);
  CHECK(r.neighbors(e, South).empty());
  CHECK(max_hanging_nodes(r) == 1);
  CHECK(r.locate({0.1, 0.1}) >= 0);
  CHECK(r.leaf(r.locate({0.1, 0.1})).level == 1);
}

TEST_CASE("sides of a 2x2 mesh") {
  QuadMesh m({0, 0, 1, 1}, 2, 2);
  auto sides = build_sides(m);
  int interior = 0, boundary = 0;
  for (const auto& s : sides) (s.plus >= 0 ? interior : boundary)++;
  CHECK(interior == 4);
  CHECK(boundary == 8);
  for (const auto& s : sides) {
    CHECK(s.length() == doctest::Approx(0.5));
    CHECK(std::abs(s.normal.norm() - 1) < 1e-15);
  }
}

TEST_CASE("sides partition every leaf boundary") {
  auto m = random_mesh(3, 12);
  auto sides = build_sides(m);
  std::vector<double> perim(m.size(), 0);
  for (const auto& s : sides) {
    perim[s.minus] += s.length();
    if (s.plus >= 0) perim[s.plus] += s.length();
  }
  for (int k = 0; k < m.size(); ++k) {
    const Rect& R = m.leaf(k).rect;
    CHECK(perim[k] == doctest::Approx(2 * (R.width() + R.height())).epsilon(1e-13));
  }
}

TEST_CASE("hanging node limit") {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    auto m = random_mesh(seed, 15);
    for (int N0 : {1, 2, 3}) {
      auto e = enforce_hanging_limit(m, N0);
      CHECK(max_hanging_nodes(e) <= N0);
      CHECK(e.domain_area() == doctest::Approx(16.0));
    }
    // N0 = 1 is the usual 2:1 balance
    CHECK(max_level_jump(enforce_hanging_limit(m, 1)) <= 1);
  }
}

TEST_CASE("inactive root cells") {
  std::vector<bool> active(9, true);
  active[4] = false;
  QuadMesh m({0, 0, 3, 3}, 3, 3, active);
  CHECK(m.size() == 8);
  CHECK(m.domain_area() == doctest::Approx(8.0));
  auto sides = build_sides(m);
  int boundary = 0;
  for (const auto& s : sides) boundary += s.plus < 0;
  CHECK(boundary == 16);
}
