#include "ufem/estimator.hpp"

#include <cmath>

namespace ufem {

double EstimatorBreakdown::sum(const std::vector<double>& part) const {
  double s = 0;
  for (double x : part) s += x;
  return s;
}

std::vector<double> lambda_factors(const LdgContext& ctx) {
  const auto& im = ctx.mesh();
  const auto& pb = ctx.problem();
  auto amax = [&](int e) {
    const auto& el = im.elements[e];
    return el.is_cut() ? std::max(pb.a1, pb.a2) : pb.a(el.has(1) ? 1 : 2);
  };
  auto amin = [&](int e) {
    const auto& el = im.elements[e];
    return el.is_cut() ? std::min(pb.a1, pb.a2) : pb.a(el.has(1) ? 1 : 2);
  };
  std::vector<double> lam(im.elements.size());
  for (size_t e = 0; e < im.elements.size(); ++e) {
    double m = amin(static_cast<int>(e));
    for (int k : im.vertex_patch[e]) m = std::min(m, amin(k));
    lam[e] = std::sqrt(amax(static_cast<int>(e)) / m);
  }
  return lam;
}

Eigen::VectorXd element_residual(const LdgContext& ctx, const Eigen::VectorXd& U, int P) {
  const Piece& pc = ctx.pieces()[P];
  Eigen::VectorXd r = pc.a * (pc.Lap * U.segment(pc.offset, ctx.dofs().n_loc));
  for (int k = 0; k < r.size(); ++k) r[k] += ctx.problem().f[pc.comp - 1](pc.rule.x[k]);
  return r;
}

Eigen::VectorXd jump_residual(const LdgContext& ctx, const Eigen::VectorXd& U, const Face& f) {
  const int n = ctx.dofs().n_loc;
  const auto& pcs = ctx.pieces();
  Eigen::VectorXd j = pcs[f.minus].a * (f.Gm * U.segment(pcs[f.minus].offset, n));
  if (f.plus >= 0) j -= pcs[f.plus].a * (f.Gp * U.segment(pcs[f.plus].offset, n));
  return j;
}

namespace {

double wsum(const std::vector<double>& w, const Eigen::VectorXd& v) {
  double s = 0;
  for (int k = 0; k < v.size(); ++k) s += w[k] * v[k] * v[k];
  return s;
}

double projection_defect(const Eigen::MatrixXd& Phi, const std::vector<double>& w, const Eigen::VectorXd& f) {
  Eigen::VectorXd c = l2_project(Phi, w, f);
  return wsum(w, f - Phi * c);
}

}  // namespace

EstimatorBreakdown estimate(const LdgContext& ctx, const Eigen::VectorXd& U) {
  const auto& im = ctx.mesh();
  const auto& pcs = ctx.pieces();
  const auto& pb = ctx.problem();
  const int n = ctx.dofs().n_loc, p = ctx.options().p;
  const size_t ne = im.elements.size();
  EstimatorBreakdown out;
  out.residual.assign(ne, 0);
  out.jump.assign(ne, 0);
  out.penalty.assign(ne, 0);
  out.tangential.assign(ne, 0);
  out.total.assign(ne, 0);
  std::vector<double> lam = lambda_factors(ctx);
  auto elem = [&](int piece) { return pcs[piece].elem; };

  for (size_t P = 0; P < pcs.size(); ++P) {
    const Piece& pc = pcs[P];
    const auto& el = im.elements[pc.elem];
    double hp = el.h / p;
    Eigen::VectorXd r = element_residual(ctx, U, static_cast<int>(P));
    out.residual[pc.elem] += hp * hp * lam[pc.elem] * lam[pc.elem] / pc.a * wsum(pc.rule.w, r);

    Eigen::VectorXd fv(pc.rule.size());
    for (int k = 0; k < fv.size(); ++k) fv[k] = pb.f[pc.comp - 1](pc.rule.x[k]);
    Eigen::MatrixXd Phi = legendre_tensor_values(el.rect, p - 1, pc.rule.x);
    out.osc_volume += hp * hp / pc.a * projection_defect(Phi, pc.rule.w, fv);
  }

  for (const auto& f : ctx.flux_faces()) {
    if (f.kind == FaceKind::Boundary) continue;
    int em = elem(f.minus), ep = elem(f.plus);
    double ahat = std::max(ctx.a_elem(em), ctx.a_elem(ep));
    double lhat = std::max(lam[em], lam[ep]);
    Eigen::VectorXd J = jump_residual(ctx, U, f);
    double term = f.h / p * lhat * lhat / ahat * wsum(f.w, J);
    if (f.kind == FaceKind::Interface) {
      out.jump[em] += term;
    } else {
      out.jump[em] += 0.5 * term;
      out.jump[ep] += 0.5 * term;
    }
    Eigen::MatrixXd Phi = legendre_line_values(f.length(), p, f.s);
    out.osc_jump += f.h / p / ahat * projection_defect(Phi, f.w, J);
  }

  for (const auto& f : ctx.penalty_faces()) {
    int em = elem(f.minus);
    Eigen::VectorXd Um = U.segment(pcs[f.minus].offset, n);
    if (f.kind == FaceKind::Boundary) {
      Eigen::VectorXd d = f.Vm * Um, dt = f.Tm * Um;
      for (int k = 0; k < d.size(); ++k) {
        d[k] -= pb.g(f.x[k]);
        dt[k] -= pb.g_grad(f.x[k]).dot(f.tangent[k]);
      }
      out.penalty[em] += f.alpha * wsum(f.w, d);
      out.tangential[em] += ctx.a_elem(em) * f.h / (double(p) * p) * wsum(f.w, dt);
      continue;
    }
    int ep = elem(f.plus);
    Eigen::VectorXd Up = U.segment(pcs[f.plus].offset, n);
    Eigen::VectorXd d = f.Vm * Um - f.Vp * Up;
    if (f.kind == FaceKind::Interface) {
      out.penalty[em] += f.alpha * lam[em] * lam[em] * wsum(f.w, d);
      Eigen::VectorXd dt = f.Tm * Um - f.Tp * Up;
      out.tangential[em] += ctx.a_elem(em) * f.h / (double(p) * p) * wsum(f.w, dt);
    } else {
      double lhat = std::max(lam[em], lam[ep]);
      double term = f.alpha * lhat * lhat * wsum(f.w, d);
      out.penalty[em] += 0.5 * term;
      out.penalty[ep] += 0.5 * term;
    }
  }

  double eta2 = 0;
  for (size_t e = 0; e < ne; ++e) {
    out.total[e] = out.residual[e] + out.jump[e] + out.penalty[e] + out.tangential[e];
    eta2 += out.total[e];
  }
  out.eta = std::sqrt(eta2);
  out.osc = std::sqrt(out.osc_volume) + std::sqrt(out.osc_jump);
  return out;
}

}  // namespace ufem
