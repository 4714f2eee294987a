#include "ufem/estimator.hpp"

#include <doctest.h>

#include <cmath>

using namespace ufem;

namespace {

struct Setup {
  ProblemSpec pb;
  InducedResult r;
  std::unique_ptr<LdgContext> ctx;
};

std::unique_ptr<Setup> setup(ProblemSpec pb, int p) {
  auto s = std::make_unique<Setup>();
  s->pb = std::move(pb);
  QuadMesh m(s->pb.domain, s->pb.nx, s->pb.ny, s->pb.active);
  InducedOptions io;
  io.p = p;
  s->r = build_induced(m, s->pb.curve, io);
  LdgOptions o;
  o.p = p;
  s->ctx = std::make_unique<LdgContext>(s->r.induced, s->r.mesh, s->pb, o);
  return s;
}

Eigen::VectorXd solved(const Setup& s) {
  auto sys = assemble(*s.ctx);
  return solve(sys, s.ctx->dofs().n_loc, 1e-12, -1, nullptr, Preconditioner::Cholesky);
}

}  // namespace

TEST_CASE("estimator vanishes on the patch test") {
  for (int p = 1; p <= 2; ++p) {
    auto s = setup(patch_problem(), p);
    auto U = solved(*s);
    auto est = estimate(*s->ctx, U);
    CHECK(est.eta <= 1e-8);
    CHECK(est.osc <= 1e-8);
    CHECK(est.total.size() == s->r.induced.elements.size());
  }
}

TEST_CASE("element residual of a quadratic") {
  auto pb = patch_problem(2.0);
  pb.f[0] = pb.f[1] = [](const Vec2&) { return 1.0; };
  auto s = setup(pb, 2);
  int P = -1;
  for (size_t k = 0; k < s->ctx->pieces().size(); ++k)
    if (!s->r.induced.elements[s->ctx->pieces()[k].elem].is_cut()) {
      P = int(k);
      break;
    }
  REQUIRE(P >= 0);
  const auto& piece = s->ctx->pieces()[P];
  Eigen::VectorXd f(piece.rule.size());
  for (int k = 0; k < piece.rule.size(); ++k) f[k] = piece.rule.x[k].x() * piece.rule.x[k].x();
  Eigen::VectorXd U = Eigen::VectorXd::Zero(s->ctx->ndofs());
  U.segment(piece.offset, piece.V.cols()) = piece.V.colPivHouseholderQr().solve(f);
  CHECK((piece.V * U.segment(piece.offset, piece.V.cols()) - f).norm() < 1e-10);
  auto r = element_residual(*s->ctx, U, P);
  for (int k = 0; k < r.size(); ++k) CHECK(r[k] == doctest::Approx(5.0).epsilon(1e-9));
}

TEST_CASE("lambda factors") {
  auto s = setup(example1(), 1);
  auto lam = lambda_factors(*s->ctx);
  REQUIRE(lam.size() == s->r.induced.elements.size());
  bool inflated = false;
  for (size_t e = 0; e < lam.size(); ++e) {
    CHECK(lam[e] >= 1.0);
    CHECK(lam[e] <= std::sqrt(10.0) + 1e-12);
    inflated = inflated || lam[e] > 1.0;
  }
  CHECK(inflated);
  // elements far from the interface
  int far = s->r.mesh.locate({-1.9, -1.9});
  CHECK(lam[s->r.induced.leaf_to_element[far]] == 1.0);
}

TEST_CASE("estimator on example 1") {
  auto s = setup(example1(), 1);
  auto U = solved(*s);
  auto est = estimate(*s->ctx, U);
  double total = 0;
  for (size_t e = 0; e < est.total.size(); ++e) {
    CHECK(est.total[e] >= 0);
    CHECK(est.total[e] == doctest::Approx(est.residual[e] + est.jump[e] + est.penalty[e] + est.tangential[e]));
    total += est.total[e];
  }
  CHECK(est.eta == doctest::Approx(std::sqrt(total)));
  auto err = dg_error(*s->ctx, U).total();
  CHECK(err > 0);
  // reliability up to a moderate constant on a coarse mesh
  CHECK(est.eta >= 0.5 * err);
  // jump residual of the solution is finite on every face
  for (const auto& f : s->ctx->flux_faces()) CHECK(jump_residual(*s->ctx, U, f).allFinite());
}
