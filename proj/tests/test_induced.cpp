#include "ufem/mesh.hpp"
#include "ufem/problems.hpp"

#include <doctest.h>

#include <cmath>

using namespace ufem;

namespace {

InducedResult build(const ProblemSpec& pb, int p, int N0 = 3) {
  QuadMesh m(pb.domain, pb.nx, pb.ny, pb.active);
  InducedOptions o;
  o.p = p;
  o.N0 = N0;
  return build_induced(m, pb.curve, o);
}

void check_structure(const InducedResult& r) {
  const auto& im = r.induced;
  REQUIRE(im.leaf_to_element.size() == size_t(r.mesh.size()));
  std::vector<int> seen(r.mesh.size(), 0);
  for (size_t e = 0; e < im.elements.size(); ++e) {
    const auto& el = im.elements[e];
    double a = 0;
    for (int m : el.members) {
      ++seen[m];
      CHECK(im.leaf_to_element[m] == int(e));
      CHECK(r.mesh.leaf(m).level == el.level);
      a += r.mesh.leaf(m).rect.area();
    }
    CHECK(a == doctest::Approx(el.rect.area()).epsilon(1e-14));
    if (el.is_cut()) {
      CHECK(el.large1);
      CHECK(el.large2);
    }
  }
  for (int s : seen) CHECK(s == 1);
  CHECK(im.total_area() == doctest::Approx(r.mesh.domain_area()).epsilon(1e-12));
}

}  // namespace

TEST_CASE("interface outside the domain gives an uncut mesh") {
  auto pb = example1();
  pb.curve = circle_interface({5, 5}, 0.5, 4 * std::sqrt(2.0));
  auto r = build(pb, 1);
  CHECK(r.stats.merges == 0);
  CHECK(r.induced.num_cut() == 0);
  CHECK(r.induced.elements.size() == 64);
  for (const auto& el : r.induced.elements) CHECK(el.cut.cls == CellClass::Interior2);
}

TEST_CASE("circle on the 8x8 initial mesh") {
  for (int p = 1; p <= 3; ++p) {
    auto pb = example1();
    auto r = build(pb, p);
    CHECK(r.induced.num_cut() > 0);
    check_structure(r);
    auto audit = audit_induced(r.induced, r.mesh, pb.curve, 0.25);
    CHECK(audit.ok(0.25, 3));
    CHECK(audit.max_eta <= hh_bound(0.25));
    CHECK(audit.max_hanging <= 3);
    CHECK(audit.area_error <= 1e-10);
  }
}

TEST_CASE("two circles and the lens") {
  for (auto pb : {example2(), example3()}) {
    auto r = build(pb, 2);
    check_structure(r);
    CHECK(audit_induced(r.induced, r.mesh, pb.curve, 0.25).ok(0.25, 3));
  }
}

TEST_CASE("construction is idempotent") {
  auto pb = example1();
  auto r = build(pb, 2);
  InducedOptions o;
  o.p = 2;
  auto again = build_induced(r.mesh, pb.curve, o);
  CHECK(again.stats.refinements == 0);
  CHECK(again.mesh.size() == r.mesh.size());
  CHECK(again.induced.elements.size() == r.induced.elements.size());
  CHECK(again.induced.sides.size() == r.induced.sides.size());
}

TEST_CASE("refined meshes keep the invariants") {
  auto pb = example1();
  auto r = build(pb, 1);
  QuadMesh m = r.mesh;
  for (int round = 0; round < 3; ++round) {
    std::vector<int> marked;
    for (int k = 0; k < m.size(); ++k) {
      Rect R = m.leaf(k).rect;
      if (cut_rectangle(pb.curve, R).is_cut()) marked.push_back(k);
    }
    m = refine(m, marked);
    InducedOptions o;
    auto rr = build_induced(m, pb.curve, o);
    check_structure(rr);
    CHECK(audit_induced(rr.induced, rr.mesh, pb.curve, 0.25).ok(0.25, 3));
    m = rr.mesh;
  }
}

TEST_CASE("deviation bound") {
  CHECK(hh_bound(0.25) <= 0.6);
  CHECK(hh_bound(0.25) > 0);
}
