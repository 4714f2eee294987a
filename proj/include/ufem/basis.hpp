#pragma once

#include "ufem/common.hpp"

#include <complex>
#include <vector>

namespace ufem {

double legendre_eval(int n, double t);
double legendre_deriv(int n, double t);
std::complex<double> legendre_laplace_complex(int n, double t, int m);
/// First Laplace integral of L_n; the imaginary part must vanish (checked to 1e-10).
double legendre_laplace(int n, double t, int m);

/// 1D Lagrange basis on given nodes of (-1,1).
class Lagrange1D {
 public:
  explicit Lagrange1D(std::vector<double> nodes);
  int size() const { return static_cast<int>(nodes_.size()); }
  const std::vector<double>& nodes() const { return nodes_; }
  void eval(double x, double* v, double* d = nullptr, double* dd = nullptr) const;

 private:
  std::vector<double> nodes_, denom_;
};

/// Tensor-product Q_p Lagrange basis at GLL points of (-1,1)^2.
/// Basis index k = i + (p+1) j, node (x_i, y_j).
class TensorBasis {
 public:
  explicit TensorBasis(int p);
  int degree() const { return p_; }
  int size() const { return (p_ + 1) * (p_ + 1); }
  Vec2 node(int k) const;
  void eval(const Vec2& xi, double* v) const;
  void grad(const Vec2& xi, double* gx, double* gy) const;
  /// Values, physical gradients and Laplacians on rectangle K at physical point x.
  void eval_physical(const Rect& K, const Vec2& x, double* v, double* gx, double* gy,
                     double* lap = nullptr) const;
  Vec2 to_reference(const Rect& K, const Vec2& x) const;

 private:
  int p_;
  Lagrange1D l1d_;
};

/// Tensor Legendre polynomials of degree <= deg per variable on rectangle K.
Eigen::MatrixXd legendre_tensor_values(const Rect& K, int deg, const std::vector<Vec2>& pts);
/// Legendre polynomials of degree <= deg in s on (0, len).
Eigen::MatrixXd legendre_line_values(double len, int deg, const std::vector<double>& s);

/// Weighted least-squares (L2) projection: Phi is npts x nbasis.
Eigen::VectorXd l2_project(const Eigen::MatrixXd& Phi, const std::vector<double>& w,
                           const Eigen::VectorXd& f, double* cond = nullptr);

}  // namespace ufem
