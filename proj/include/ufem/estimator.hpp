#pragma once

#include "ufem/ldg.hpp"

#include <vector>

namespace ufem {

/// Squared contributions per induced element.
struct EstimatorBreakdown {
  std::vector<double> residual, jump, penalty, tangential, total;
  double eta = 0;
  double osc = 0, osc_volume = 0, osc_jump = 0;

  double sum(const std::vector<double>& part) const;
};

/// Lambda per element from the vertex patch; 1 away from the interface.
std::vector<double> lambda_factors(const LdgContext& ctx);

/// Values of f + a Laplacian(U) at the rule points of piece P.
Eigen::VectorXd element_residual(const LdgContext& ctx, const Eigen::VectorXd& U, int P);
/// a_- grad U_- . n - a_+ grad U_+ . n at the points of a flux face.
Eigen::VectorXd jump_residual(const LdgContext& ctx, const Eigen::VectorXd& U, const Face& f);

EstimatorBreakdown estimate(const LdgContext& ctx, const Eigen::VectorXd& U);

}  // namespace ufem
