#pragma once

#include "ufem/estimator.hpp"

#include <functional>
#include <optional>
#include <vector>

namespace ufem {

struct AdaptOptions {
  int p = 1;
  double alpha0 = 1.0;
  double delta0 = 0.25;
  int N0 = 3;
  int quad_offset = 3;
  int beta = 1;
  double theta = 0.5;
  double tol = 0;
  int max_dofs = 200000;
  int max_iters = 40;
  double solver_tol = 1e-10;
  Preconditioner preconditioner = Preconditioner::Cholesky;
  bool audit = true;
};

struct HistoryRow {
  int iter = 0, n_leaves = 0, n_elements = 0, n_dofs = 0;
  double eta = 0;
  double xi_residual = 0, xi_jump = 0, xi_penalty = 0, xi_tangential = 0;
  double osc = 0;
  std::optional<double> err_dg, eff;
  // diagnostics
  int cg_iterations = 0;
  double cg_residual = 0, asymmetry = 0;
  int merges = 0, max_level = 0;
  std::optional<MeshAudit> audit;
  bool audit_ok = true;
};

struct IterationView {
  const InducedResult& induced;
  const LdgContext& ctx;
  const Eigen::VectorXd& U;
  const EstimatorBreakdown& est;
  const HistoryRow& row;
  const std::vector<int>& marked;  // empty on the final iteration
};

struct AdaptState {
  QuadMesh mesh;  // leaf mesh of the last iteration
  std::vector<HistoryRow> history;
  std::string stop_reason;
};

/// Minimal prefix of elements sorted by xi^2 (descending, ties by id) with sum >= theta^2 eta^2.
std::vector<int> dorfler_mark(const std::vector<double>& xi2, double theta);

AdaptState adapt_loop(const ProblemSpec& pb, const AdaptOptions& opt,
                      const std::function<void(const IterationView&)>& on_iteration = {});

}  // namespace ufem
