#include "ufem/basis.hpp"

#include "ufem/quadrature.hpp"

#include <cmath>

namespace ufem {

double legendre_eval(int n, double t) {
  if (n == 0) return 1.0;
  double p0 = 1, p1 = t;
  for (int k = 2; k <= n; ++k) {
    double p2 = ((2 * k - 1) * t * p1 - (k - 1) * p0) / k;
    p0 = p1;
    p1 = p2;
  }
  return p1;
}

double legendre_deriv(int n, double t) {
  // L'_n = sum over k = n-1, n-3, ... of (2k+1) L_k
  double s = 0;
  for (int k = n - 1; k >= 0; k -= 2) s += (2 * k + 1) * legendre_eval(k, t);
  return s;
}

std::complex<double> legendre_laplace_complex(int n, double t, int m) {
  if (m < 4 * n) m = 4 * n;
  if (m < 1) m = 1;
  QuadRule1D g = gauss_legendre(std::min(m, 64));
  std::complex<double> root = std::sqrt(std::complex<double>(t * t - 1.0, 0.0));
  int panels = (m + 63) / 64;
  std::complex<double> sum = 0;
  double h = M_PI / panels;
  for (int k = 0; k < panels; ++k)
    for (int i = 0; i < g.size(); ++i) {
      double phi = h * (k + 0.5 * (g.x[i] + 1));
      sum += 0.5 * h * g.w[i] * std::pow(t + root * std::cos(phi), n);
    }
  return sum / M_PI;
}

double legendre_laplace(int n, double t, int m) {
  auto z = legendre_laplace_complex(n, t, m);
  if (std::abs(z.imag()) > 1e-10 * std::max(1.0, std::abs(z.real())))
    throw Error(ErrorKind::BadInput, "Laplace integral has a nonvanishing imaginary part");
  return z.real();
}

Lagrange1D::Lagrange1D(std::vector<double> nodes) : nodes_(std::move(nodes)), denom_(nodes_.size()) {
  for (size_t j = 0; j < nodes_.size(); ++j) {
    double d = 1;
    for (size_t m = 0; m < nodes_.size(); ++m)
      if (m != j) d *= nodes_[j] - nodes_[m];
    denom_[j] = d;
  }
}

void Lagrange1D::eval(double x, double* v, double* d, double* dd) const {
  const int n = size();
  double diff[16];
  for (int m = 0; m < n; ++m) diff[m] = x - nodes_[m];
  for (int j = 0; j < n; ++j) {
    double val = 1, der = 0, der2 = 0;
    // product rule accumulated factor by factor
    for (int m = 0; m < n; ++m) {
      if (m == j) continue;
      double f = diff[m];
      der2 = der2 * f + 2 * der;
      der = der * f + val;
      val *= f;
    }
    v[j] = val / denom_[j];
    if (d) d[j] = der / denom_[j];
    if (dd) dd[j] = der2 / denom_[j];
  }
}

TensorBasis::TensorBasis(int p) : p_(p), l1d_(gll_points(p)) {
  if (p < 1 || p > 12) throw Error(ErrorKind::BadInput, "polynomial degree must be in 1..12");
}

Vec2 TensorBasis::node(int k) const {
  int n = p_ + 1;
  return {l1d_.nodes()[k % n], l1d_.nodes()[k / n]};
}

void TensorBasis::eval(const Vec2& xi, double* v) const {
  double a[16], b[16];
  l1d_.eval(xi.x(), a);
  l1d_.eval(xi.y(), b);
  int n = p_ + 1;
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) v[i + n * j] = a[i] * b[j];
}

void TensorBasis::grad(const Vec2& xi, double* gx, double* gy) const {
  double a[16], da[16], b[16], db[16];
  l1d_.eval(xi.x(), a, da);
  l1d_.eval(xi.y(), b, db);
  int n = p_ + 1;
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      gx[i + n * j] = da[i] * b[j];
      gy[i + n * j] = a[i] * db[j];
    }
}

Vec2 TensorBasis::to_reference(const Rect& K, const Vec2& x) const {
  return {2 * (x.x() - K.x0) / K.width() - 1, 2 * (x.y() - K.y0) / K.height() - 1};
}

void TensorBasis::eval_physical(const Rect& K, const Vec2& x, double* v, double* gx, double* gy,
                                double* lap) const {
  Vec2 xi = to_reference(K, x);
  double a[16], da[16], dda[16], b[16], db[16], ddb[16];
  l1d_.eval(xi.x(), a, da, dda);
  l1d_.eval(xi.y(), b, db, ddb);
  double sx = 2 / K.width(), sy = 2 / K.height();
  int n = p_ + 1;
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      int k = i + n * j;
      if (v) v[k] = a[i] * b[j];
      if (gx) gx[k] = sx * da[i] * b[j];
      if (gy) gy[k] = sy * a[i] * db[j];
      if (lap) lap[k] = sx * sx * dda[i] * b[j] + sy * sy * a[i] * ddb[j];
    }
}

Eigen::MatrixXd legendre_tensor_values(const Rect& K, int deg, const std::vector<Vec2>& pts) {
  int n = deg + 1;
  Eigen::MatrixXd Phi(pts.size(), n * n);
  for (size_t q = 0; q < pts.size(); ++q) {
    double xi = 2 * (pts[q].x() - K.x0) / K.width() - 1;
    double et = 2 * (pts[q].y() - K.y0) / K.height() - 1;
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i) Phi(q, i + n * j) = legendre_eval(i, xi) * legendre_eval(j, et);
  }
  return Phi;
}

Eigen::MatrixXd legendre_line_values(double len, int deg, const std::vector<double>& s) {
  Eigen::MatrixXd Phi(s.size(), deg + 1);
  for (size_t q = 0; q < s.size(); ++q)
    for (int i = 0; i <= deg; ++i) Phi(q, i) = legendre_eval(i, 2 * s[q] / len - 1);
  return Phi;
}

Eigen::VectorXd l2_project(const Eigen::MatrixXd& Phi, const std::vector<double>& w,
                           const Eigen::VectorXd& f, double* cond) {
  Eigen::VectorXd wv = Eigen::Map<const Eigen::VectorXd>(w.data(), w.size());
  Eigen::MatrixXd G = Phi.transpose() * wv.asDiagonal() * Phi;
  Eigen::VectorXd rhs = Phi.transpose() * wv.asDiagonal() * f;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(G, Eigen::EigenvaluesOnly);
  double lmin = es.eigenvalues().minCoeff(), lmax = es.eigenvalues().maxCoeff();
  double c = lmin > 0 ? lmax / lmin : std::numeric_limits<double>::infinity();
  if (cond) *cond = c;
  if (!(c <= 1e14)) throw Error(ErrorKind::IllConditioned, "Gram matrix condition estimate exceeds 1e14");
  return G.ldlt().solve(rhs);
}

}  // namespace ufem
