#pragma once

#include "ufem/basis.hpp"
#include "ufem/mesh.hpp"
#include "ufem/problems.hpp"
#include "ufem/quadrature.hpp"

#include <Eigen/Sparse>

#include <string>
#include <vector>

namespace ufem {

using SpMat = Eigen::SparseMatrix<double, Eigen::RowMajor>;

double theta_T(double t);
double compute_theta(double eta, int p);

struct LdgOptions {
  int p = 1;
  double alpha0 = 1.0;
  int quad_offset = 3;     // q = p + offset Gauss points per direction
  int cut_quad_extra = 4;  // additional points on curved pieces
  int beta = 1;            // 1: minus trace in the lifting flux, 0: plus trace
};

/// One block of (p+1)^2 unknowns: element K restricted to component i.
struct Piece {
  int elem = -1, comp = 1;
  int offset = 0;
  double a = 1;
  QuadRule2D rule;
  Eigen::MatrixXd C;     // tensor Legendre coefficients of the local basis
  Eigen::MatrixXd Minv;  // Minv Minv^T is the inverse piece mass matrix
  Eigen::MatrixXd V, Gx, Gy, Lap;  // basis data at rule points
};

enum class FaceKind { Side, SideComponent, Interface, Boundary };

/// Quadrature data on a flux or penalty face. Jump is minus trace minus plus trace.
struct Face {
  FaceKind kind = FaceKind::Side;
  int minus = -1, plus = -1;  // piece indices (plus = -1 on the boundary)
  int entity = -1;            // index into sides / boundary, or element for the interface
  int comp = 0;
  double alpha = 0, h = 0;
  std::vector<Vec2> x, n, tangent;
  std::vector<double> w, s;
  Eigen::MatrixXd Vm, Vp, Gm, Gp;  // values and normal derivatives, points x basis
  Eigen::MatrixXd Tm, Tp;          // tangential derivatives
  double length() const;
};

struct DofMap {
  int n_loc = 0;
  std::vector<std::array<int, 2>> piece_of;  // per element and component, -1 if absent
  int num_pieces = 0;
  int size() const { return num_pieces * n_loc; }
};

/// Everything derived from an induced mesh that assembly and estimation share.
class LdgContext {
 public:
  LdgContext(const InducedMesh& im, const QuadMesh& leaves, const ProblemSpec& pb, const LdgOptions& opt);

  const InducedMesh& mesh() const { return *im_; }
  const QuadMesh& leaves() const { return *leaves_; }
  const ProblemSpec& problem() const { return *pb_; }
  const LdgOptions& options() const { return opt_; }
  const TensorBasis& basis() const { return basis_; }
  const DofMap& dofs() const { return dofs_; }
  const std::vector<Piece>& pieces() const { return pieces_; }
  const std::vector<Face>& flux_faces() const { return flux_; }
  const std::vector<Face>& penalty_faces() const { return penalty_; }
  double theta(int elem) const { return theta_[elem]; }
  double a_elem(int elem) const { return aK_[elem]; }
  double side_penalty(int side) const { return side_alpha_[side]; }
  int ndofs() const { return dofs_.size(); }

  /// Component used at x inside element e.
  int comp_at(int elem, const Vec2& x) const;

 private:
  void build_pieces();
  void build_faces();
  void local_bases();
  Face make_face(FaceKind kind, int minus, int plus, LineRule rule, const std::vector<Vec2>& normals) const;

  const InducedMesh* im_;
  const QuadMesh* leaves_;
  const ProblemSpec* pb_;
  LdgOptions opt_;
  TensorBasis basis_;
  DofMap dofs_;
  std::vector<Piece> pieces_;
  std::vector<Face> flux_, penalty_;
  std::vector<double> theta_, aK_, side_alpha_;
};

struct SparseSystem {
  SpMat A;
  Eigen::VectorXd b;
  double asymmetry() const;  // max |A - A^T| / max |A|
};

SparseSystem assemble(const LdgContext& ctx);

enum class Preconditioner { BlockJacobi, Cholesky };

struct SolveStats {
  int iterations = 0;
  double residual = 0;
};
/// Preconditioned CG. Cholesky uses a sparse LDL^T factorization of A.
Eigen::VectorXd solve(const SparseSystem& sys, int block, double tol = 1e-10, int max_it = -1,
                      SolveStats* stats = nullptr, Preconditioner pc = Preconditioner::BlockJacobi);

/// Lifting L(v) per piece, coefficients (x-component, y-component) in the local basis.
std::vector<std::array<Eigen::VectorXd, 2>> lifting(const LdgContext& ctx, const Eigen::VectorXd& v);

struct DgNorm {
  double volume = 0, jump = 0;
  double total() const { return std::sqrt(volume + jump); }
};
/// ||v||_DG of a discrete function (boundary jump is v itself).
DgNorm dg_norm(const LdgContext& ctx, const Eigen::VectorXd& v);
/// ||u - U||_DG against the exact solution (boundary jump is g - U).
DgNorm dg_error(const LdgContext& ctx, const Eigen::VectorXd& U);

double eval_solution(const LdgContext& ctx, const Eigen::VectorXd& U, const Vec2& x);

void write_matrix(const SpMat& A, const std::string& path);

}  // namespace ufem
