#include "ufem/adapt.hpp"

#include <algorithm>
#include <numeric>

namespace ufem {

std::vector<int> dorfler_mark(const std::vector<double>& xi2, double theta) {
  std::vector<int> order(xi2.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return xi2[a] > xi2[b]; });
  double total = std::accumulate(xi2.begin(), xi2.end(), 0.0), target = theta * theta * total, s = 0;
  std::vector<int> out;
  for (int k : order) {
    if (!out.empty() && s >= target) break;
    out.push_back(k);
    s += xi2[k];
  }
  std::sort(out.begin(), out.end());
  return out;
}

AdaptState adapt_loop(const ProblemSpec& pb, const AdaptOptions& opt,
                      const std::function<void(const IterationView&)>& on_iteration) {
  AdaptState st;
  QuadMesh mesh(pb.domain, pb.nx, pb.ny, pb.active);
  CutCache cache;
  InducedOptions iopt;
  iopt.delta0 = opt.delta0;
  iopt.N0 = opt.N0;
  iopt.p = opt.p;
  LdgOptions lopt;
  lopt.p = opt.p;
  lopt.alpha0 = opt.alpha0;
  lopt.quad_offset = opt.quad_offset;
  lopt.beta = opt.beta;

  for (int iter = 1;; ++iter) {
    try {
      InducedResult res = build_induced(mesh, pb.curve, iopt, &cache);
      LdgContext ctx(res.induced, res.mesh, pb, lopt);
      SparseSystem sys = assemble(ctx);
      SolveStats ss;
      Eigen::VectorXd U = solve(sys, ctx.dofs().n_loc, opt.solver_tol, -1, &ss, opt.preconditioner);
      EstimatorBreakdown est = estimate(ctx, U);

      HistoryRow row;
      row.iter = iter;
      row.n_leaves = res.mesh.size();
      row.n_elements = static_cast<int>(res.induced.elements.size());
      row.n_dofs = ctx.ndofs();
      row.eta = est.eta;
      row.xi_residual = std::sqrt(est.sum(est.residual));
      row.xi_jump = std::sqrt(est.sum(est.jump));
      row.xi_penalty = std::sqrt(est.sum(est.penalty));
      row.xi_tangential = std::sqrt(est.sum(est.tangential));
      row.osc = est.osc;
      if (pb.exact) {
        row.err_dg = dg_error(ctx, U).total();
        row.eff = *row.err_dg > 0 ? est.eta / *row.err_dg : 0.0;
      }
      row.cg_iterations = ss.iterations;
      row.cg_residual = ss.residual;
      row.asymmetry = sys.asymmetry();
      row.merges = res.stats.merges;
      row.max_level = res.mesh.max_level();
      if (opt.audit) {
        row.audit = audit_induced(res.induced, res.mesh, pb.curve, opt.delta0);
        row.audit_ok = row.audit->ok(opt.delta0, opt.N0);
      }
      st.history.push_back(row);

      bool stop = true;
      if (est.eta <= opt.tol) st.stop_reason = "tolerance";
      else if (row.n_dofs >= opt.max_dofs) st.stop_reason = "dof budget";
      else if (iter >= opt.max_iters) st.stop_reason = "iteration budget";
      else stop = false;

      std::vector<int> marked;
      if (!stop) marked = dorfler_mark(est.total, opt.theta);
      if (on_iteration) on_iteration({res, ctx, U, est, st.history.back(), marked});
      if (stop) {
        st.mesh = std::move(res.mesh);
        return st;
      }
      std::vector<int> leaves;
      for (int e : marked)
        for (int m : res.induced.elements[e].members) leaves.push_back(m);
      mesh = enforce_hanging_limit(res.mesh.refined(leaves), opt.N0);
    } catch (const Error& e) {
      throw Error(e.kind(), "iteration " + std::to_string(iter) + ": " + e.detail());
    }
  }
}

}  // namespace ufem
