#include "ufem/ldg.hpp"

#include <Eigen/SparseCholesky>

#include <cmath>
#include <functional>
#include <fstream>
#include <map>

namespace ufem {

double theta_T(double t) { return t + std::sqrt(std::max(0.0, t * t - 1)); }

double compute_theta(double eta, int p) {
  if (!(eta >= 0) || eta >= 1) throw Error(ErrorKind::EtaOutOfRange, "interface deviation must lie in [0,1)");
  return std::pow(theta_T((1 + 3 * eta) / (1 - eta)), 4 * p);
}

double Face::length() const {
  double s = 0;
  for (double x : w) s += x;
  return s;
}

namespace {

int elem_comp(const InducedElement& el) { return el.cut.cls == CellClass::Interior2 ? 2 : 1; }

// arc of Gamma_K traversed so that Omega_1 lies on the left
Arc interface_arc(const InducedElement& el) {
  const auto& edges = el.cut.region[0].edges;
  int n = static_cast<int>(edges.size()), start = -1;
  for (int k = 0; k < n; ++k)
    if (edges[k].curved && !edges[(k + n - 1) % n].curved) start = k;
  Arc arc;
  if (start < 0) return arc;
  for (int k = 0; k < n && edges[(start + k) % n].curved; ++k) arc.push_back(edges[(start + k) % n].seg);
  return arc;
}

}  // namespace

LdgContext::LdgContext(const InducedMesh& im, const QuadMesh& leaves, const ProblemSpec& pb, const LdgOptions& opt)
    : im_(&im), leaves_(&leaves), pb_(&pb), opt_(opt), basis_(opt.p) {
  if (opt.p < 1) throw Error(ErrorKind::BadInput, "p must be at least 1");
  const int ne = static_cast<int>(im.elements.size());
  theta_.resize(ne);
  aK_.resize(ne);
  for (int e = 0; e < ne; ++e) {
    const auto& el = im.elements[e];
    theta_[e] = el.is_cut() ? compute_theta(el.dev.eta, opt.p) : 1.0;
    aK_[e] = el.is_cut() ? 0.5 * (pb.a1 + pb.a2) : pb.a(elem_comp(el));
  }
  double p2 = double(opt.p) * opt.p;
  side_alpha_.resize(im.sides.size());
  for (size_t s = 0; s < im.sides.size(); ++s) {
    const auto& sd = im.sides[s];
    side_alpha_[s] = opt.alpha0 * std::max(aK_[sd.minus], aK_[sd.plus]) *
                     std::max(theta_[sd.minus], theta_[sd.plus]) * p2 / sd.h;
  }
  build_pieces();
  build_faces();
  local_bases();
}

int LdgContext::comp_at(int elem, const Vec2& x) const {
  const auto& el = im_->elements[elem];
  if (!el.is_cut()) return elem_comp(el);
  return classify_point(pb_->curve, x) == PointClass::Omega2 ? 2 : 1;
}

void LdgContext::build_pieces() {
  const int n = basis_.size();
  const int q = opt_.p + opt_.quad_offset;
  dofs_.n_loc = n;
  dofs_.piece_of.assign(im_->elements.size(), {-1, -1});
  for (size_t e = 0; e < im_->elements.size(); ++e) {
    const auto& el = im_->elements[e];
    for (int c = 1; c <= 2; ++c) {
      if (el.is_cut() ? false : elem_comp(el) != c) continue;
      Piece P;
      P.elem = static_cast<int>(e);
      P.comp = c;
      P.a = pb_->a(c);
      P.rule = el.is_cut() ? cut_region_rule(pb_->curve, el.cut.region[c - 1], q + opt_.cut_quad_extra)
                           : tensor_rule(el.rect, q);
      int nq = P.rule.size();
      P.V.resize(nq, n);
      P.Gx.resize(nq, n);
      P.Gy.resize(nq, n);
      P.Lap.resize(nq, n);
      std::vector<double> v(n), gx(n), gy(n), lap(n);
      for (int k = 0; k < nq; ++k) {
        basis_.eval_physical(el.rect, P.rule.x[k], v.data(), gx.data(), gy.data(), lap.data());
        for (int b = 0; b < n; ++b) {
          P.V(k, b) = v[b];
          P.Gx(k, b) = gx[b];
          P.Gy(k, b) = gy[b];
          P.Lap(k, b) = lap[b];
        }
      }
      dofs_.piece_of[e][c - 1] = static_cast<int>(pieces_.size());
      P.offset = static_cast<int>(pieces_.size()) * n;
      pieces_.push_back(std::move(P));
    }
  }
  dofs_.num_pieces = static_cast<int>(pieces_.size());
}

Face LdgContext::make_face(FaceKind kind, int minus, int plus, LineRule rule,
                           const std::vector<Vec2>& normals) const {
  Face f;
  f.kind = kind;
  f.minus = minus;
  f.plus = plus;
  f.x = std::move(rule.x);
  f.w = std::move(rule.w);
  f.tangent = std::move(rule.tangent);
  f.s = std::move(rule.arclength);
  f.n = normals;
  const int n = basis_.size(), nq = static_cast<int>(f.x.size());
  std::vector<double> v(n), gx(n), gy(n);
  auto fill = [&](int piece, Eigen::MatrixXd& V, Eigen::MatrixXd& G, Eigen::MatrixXd& T) {
    const Rect& K = im_->elements[pieces_[piece].elem].rect;
    V.resize(nq, n);
    G.resize(nq, n);
    T.resize(nq, n);
    for (int k = 0; k < nq; ++k) {
      basis_.eval_physical(K, f.x[k], v.data(), gx.data(), gy.data());
      for (int b = 0; b < n; ++b) {
        V(k, b) = v[b];
        G(k, b) = gx[b] * f.n[k].x() + gy[b] * f.n[k].y();
        T(k, b) = gx[b] * f.tangent[k].x() + gy[b] * f.tangent[k].y();
      }
    }
  };
  fill(minus, f.Vm, f.Gm, f.Tm);
  if (plus >= 0) fill(plus, f.Vp, f.Gp, f.Tp);
  return f;
}

void LdgContext::build_faces() {
  const int q = opt_.p + opt_.quad_offset;
  const double p2 = double(opt_.p) * opt_.p;
  auto piece = [&](int e, int c) {
    int id = dofs_.piece_of[e][c - 1];
    if (id < 0) throw Error(ErrorKind::AssumptionViolated, "side part borders an element without that subdomain");
    return id;
  };
  for (size_t si = 0; si < im_->sides.size(); ++si) {
    const auto& sd = im_->sides[si];
    for (const auto& part : sd.parts) {
      LineRule r = segment_rule(part.a, part.b, q);
      std::vector<Vec2> nn(r.size(), sd.normal);
      Face f = make_face(FaceKind::Side, piece(sd.minus, part.comp), piece(sd.plus, part.comp), std::move(r), nn);
      f.entity = static_cast<int>(si);
      f.comp = part.comp;
      f.alpha = side_alpha_[si];
      f.h = sd.h;
      flux_.push_back(std::move(f));
    }
  }
  for (int c = 1; c <= 2; ++c)
    for (int si : im_->side_in[c - 1]) {
      const auto& sd = im_->sides[si];
      LineRule r = segment_rule(sd.a, sd.b, q);
      std::vector<Vec2> nn(r.size(), sd.normal);
      Face f = make_face(FaceKind::SideComponent, piece(sd.minus, c), piece(sd.plus, c), std::move(r), nn);
      f.entity = si;
      f.comp = c;
      f.alpha = side_alpha_[si];
      f.h = sd.h;
      penalty_.push_back(std::move(f));
    }
  for (size_t e = 0; e < im_->elements.size(); ++e) {
    const auto& el = im_->elements[e];
    if (!el.is_cut()) continue;
    Arc arc = interface_arc(el);
    if (arc.empty()) throw Error(ErrorKind::DegenerateRegion, "cut element without interface arc");
    LineRule r = arc_rule(pb_->curve, arc, q + opt_.cut_quad_extra);
    std::vector<Vec2> nn;
    for (const auto& t : r.tangent) nn.push_back(Vec2(t.y(), -t.x()));
    Face f = make_face(FaceKind::Interface, piece(e, 1), piece(e, 2), std::move(r), nn);
    f.entity = static_cast<int>(e);
    f.h = el.h;
    f.alpha = opt_.alpha0 * aK_[e] * theta_[e] * p2 / el.h;
    flux_.push_back(f);
    penalty_.push_back(std::move(f));
  }
  for (size_t bi = 0; bi < im_->boundary.size(); ++bi) {
    const auto& sd = im_->boundary[bi];
    for (const auto& part : sd.parts) {
      LineRule r = segment_rule(part.a, part.b, q);
      std::vector<Vec2> nn(r.size(), sd.normal);
      Face f = make_face(FaceKind::Boundary, piece(sd.minus, part.comp), -1, std::move(r), nn);
      f.entity = static_cast<int>(bi);
      f.comp = part.comp;
      f.h = sd.h;
      f.alpha = opt_.alpha0 * aK_[sd.minus] * theta_[sd.minus] * p2 / sd.h;
      flux_.push_back(f);
      penalty_.push_back(std::move(f));
    }
  }
}

namespace {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;

Vec weights(const std::vector<double>& w) { return Eigen::Map<const Vec>(w.data(), w.size()); }

// B_P blocks: for each piece P, map column piece -> (2n x n) matrix
struct LiftData {
  std::vector<std::map<int, Mat>> B;
  std::vector<const Mat*> C;  // M^{-1} = C C^T
  std::vector<Vec> G;  // boundary data term, 2n per piece
};

int flux_piece(const Face& f, int beta) { return (beta == 1 || f.plus < 0) ? f.minus : f.plus; }

LiftData lift_data(const LdgContext& ctx, bool with_data) {
  const auto& pieces = ctx.pieces();
  const int n = ctx.dofs().n_loc, np = static_cast<int>(pieces.size());
  LiftData L;
  L.B.resize(np);
  L.C.resize(np);
  if (with_data) L.G.assign(np, Vec::Zero(2 * n));
  for (int P = 0; P < np; ++P) L.C[P] = &pieces[P].Minv;
  for (const auto& f : ctx.flux_faces()) {
    int s = flux_piece(f, ctx.options().beta);
    const Mat& Vs = s == f.minus ? f.Vm : f.Vp;
    Vec w = weights(f.w), wx(w.size()), wy(w.size());
    for (int k = 0; k < w.size(); ++k) {
      wx[k] = w[k] * f.n[k].x();
      wy[k] = w[k] * f.n[k].y();
    }
    auto add = [&](int col, const Mat& Vc, double sign) {
      Mat& B = L.B[s][col];
      if (B.size() == 0) B = Mat::Zero(2 * n, n);
      B.topRows(n) += sign * Vs.transpose() * wx.asDiagonal() * Vc;
      B.bottomRows(n) += sign * Vs.transpose() * wy.asDiagonal() * Vc;
    };
    add(f.minus, f.Vm, 1.0);
    if (f.plus >= 0) add(f.plus, f.Vp, -1.0);
    if (with_data && f.kind == FaceKind::Boundary) {
      Vec gx(w.size()), gy(w.size());
      for (int k = 0; k < w.size(); ++k) {
        double g = ctx.problem().g(f.x[k]);
        gx[k] = wx[k] * g;
        gy[k] = wy[k] * g;
      }
      L.G[s].head(n) += Vs.transpose() * gx;
      L.G[s].tail(n) += Vs.transpose() * gy;
    }
  }
  return L;
}

// C^T applied to both lifting components
Mat ct2(const Mat& C, const Mat& B) {
  int n = static_cast<int>(B.rows() / 2);
  Mat out(B.rows(), B.cols());
  out.topRows(n) = C.transpose() * B.topRows(n);
  out.bottomRows(n) = C.transpose() * B.bottomRows(n);
  return out;
}

Mat minv2(const Mat& C, const Mat& B) {
  int n = static_cast<int>(B.rows() / 2);
  Mat out = ct2(C, B);
  out.topRows(n) = C * out.topRows(n);
  out.bottomRows(n) = C * out.bottomRows(n);
  return out;
}

class BlockAccumulator {
 public:
  explicit BlockAccumulator(int n) : n_(n) {}
  void add(int r, int c, const Mat& m) {
    Mat& b = blocks_[{r, c}];
    if (b.size() == 0) b = Mat::Zero(n_, n_);
    b += m;
  }
  SpMat build(int N) const {
    std::vector<Eigen::Triplet<double>> t;
    t.reserve(blocks_.size() * n_ * n_);
    for (const auto& [rc, m] : blocks_)
      for (int i = 0; i < n_; ++i)
        for (int j = 0; j < n_; ++j)
          if (m(i, j) != 0) t.emplace_back(rc.first * n_ + i, rc.second * n_ + j, m(i, j));
    SpMat A(N, N);
    A.setFromTriplets(t.begin(), t.end());
    return A;
  }

 private:
  int n_;
  std::map<std::pair<int, int>, Mat> blocks_;
};

}  // namespace

SparseSystem assemble(const LdgContext& ctx) {
  const auto& pieces = ctx.pieces();
  const int n = ctx.dofs().n_loc, np = static_cast<int>(pieces.size()), N = ctx.ndofs();
  const auto& pb = ctx.problem();
  BlockAccumulator acc(n);
  SparseSystem sys;
  sys.b = Vec::Zero(N);

  for (int P = 0; P < np; ++P) {
    const Piece& pc = pieces[P];
    Vec w = weights(pc.rule.w);
    acc.add(P, P, pc.a * (pc.Gx.transpose() * w.asDiagonal() * pc.Gx + pc.Gy.transpose() * w.asDiagonal() * pc.Gy));
    Vec fw(w.size());
    for (int k = 0; k < w.size(); ++k) fw[k] = w[k] * pb.f[pc.comp - 1](pc.rule.x[k]);
    sys.b.segment(pc.offset, n) += pc.V.transpose() * fw;
  }

  for (const auto& f : ctx.flux_faces()) {
    int s = flux_piece(f, ctx.options().beta);
    double as = pieces[s].a;
    const Mat& Gs = s == f.minus ? f.Gm : f.Gp;
    Vec w = weights(f.w);
    Mat Cm = -as * Gs.transpose() * w.asDiagonal() * f.Vm;
    acc.add(s, f.minus, Cm);
    acc.add(f.minus, s, Cm.transpose());
    if (f.plus >= 0) {
      Mat Cp = as * Gs.transpose() * w.asDiagonal() * f.Vp;
      acc.add(s, f.plus, Cp);
      acc.add(f.plus, s, Cp.transpose());
    } else {
      Vec gw(w.size());
      for (int k = 0; k < w.size(); ++k) gw[k] = w[k] * pb.g(f.x[k]);
      sys.b.segment(pieces[s].offset, n) -= as * Gs.transpose() * gw;
    }
  }

  LiftData L = lift_data(ctx, true);
  for (int P = 0; P < np; ++P) {
    double a = pieces[P].a;
    std::map<int, Mat> CB;
    for (const auto& [Q, B] : L.B[P]) CB[Q] = ct2(*L.C[P], B);
    for (const auto& [Q, CBQ] : CB)
      for (const auto& [R, CBR] : CB) acc.add(Q, R, a * CBQ.transpose() * CBR);
    Vec CG = ct2(*L.C[P], L.G[P]);
    for (const auto& [Q, CBQ] : CB) sys.b.segment(pieces[Q].offset, n) += a * CBQ.transpose() * CG;
  }

  for (const auto& f : ctx.penalty_faces()) {
    Vec w = weights(f.w) * f.alpha;
    acc.add(f.minus, f.minus, f.Vm.transpose() * w.asDiagonal() * f.Vm);
    if (f.plus >= 0) {
      Mat C = -f.Vm.transpose() * w.asDiagonal() * f.Vp;
      acc.add(f.minus, f.plus, C);
      acc.add(f.plus, f.minus, C.transpose());
      acc.add(f.plus, f.plus, f.Vp.transpose() * w.asDiagonal() * f.Vp);
    } else {
      Vec gw(w.size());
      for (int k = 0; k < w.size(); ++k) gw[k] = w[k] * pb.g(f.x[k]);
      sys.b.segment(pieces[f.minus].offset, n) += f.Vm.transpose() * gw;
    }
  }
  sys.A = acc.build(N);
  return sys;
}

namespace {

// R^{-1} from a QR factorization of the stacked rows
Mat upper_inverse(const Mat& rows, double rel) {
  const int n = static_cast<int>(rows.cols());
  Eigen::HouseholderQR<Mat> qr(rows);
  Mat R = qr.matrixQR().topRows(n).triangularView<Eigen::Upper>();
  for (int b = 0; b < n; ++b)
    if (R(b, b) < 0) R.row(b) *= -1;
  double dmax = R.diagonal().maxCoeff(), dmin = R.diagonal().minCoeff();
  if (!(dmin > rel * dmax)) throw Error(ErrorKind::SingularLocalMass, "local basis is degenerate on a piece");
  return R.triangularView<Eigen::Upper>().solve(Mat::Identity(n, n));
}

}  // namespace

void LdgContext::local_bases() {
  // rows sampling the local energy of each piece: gradients, scaled values, face values
  const int n = basis_.size();
  const int np = static_cast<int>(pieces_.size());
  std::vector<std::vector<Mat>> rows(np);
  for (auto& P : pieces_) {
    const double h = im_->elements[P.elem].h;
    Vec sw = weights(P.rule.w).cwiseSqrt();
    rows[&P - pieces_.data()].push_back(std::sqrt(P.a) * sw.asDiagonal() * P.Gx);
    rows[&P - pieces_.data()].push_back(std::sqrt(P.a) * sw.asDiagonal() * P.Gy);
    rows[&P - pieces_.data()].push_back((std::sqrt(P.a) / h) * sw.asDiagonal() * P.V);
  }
  for (const auto& f : penalty_) {
    Vec sw = (weights(f.w) * f.alpha).cwiseSqrt();
    rows[f.minus].push_back(sw.asDiagonal() * f.Vm);
    if (f.plus >= 0) rows[f.plus].push_back(sw.asDiagonal() * f.Vp);
  }
  for (int P = 0; P < np; ++P) {
    int m = 0;
    for (const auto& r : rows[P]) m += static_cast<int>(r.rows());
    Mat st(m, n);
    m = 0;
    for (const auto& r : rows[P]) {
      st.middleRows(m, r.rows()) = r;
      m += static_cast<int>(r.rows());
    }
    Mat C = upper_inverse(st, 1e-15);
    auto& pc = pieces_[P];
    pc.C = C;
    pc.V = pc.V * C;
    pc.Gx = pc.Gx * C;
    pc.Gy = pc.Gy * C;
    pc.Lap = pc.Lap * C;
    pc.Minv = upper_inverse(weights(pc.rule.w).cwiseSqrt().asDiagonal() * pc.V, 1e-15);
  }
  for (auto* faces : {&flux_, &penalty_})
    for (auto& f : *faces) {
      const Mat& Cm = pieces_[f.minus].C;
      f.Vm = f.Vm * Cm;
      f.Gm = f.Gm * Cm;
      f.Tm = f.Tm * Cm;
      if (f.plus >= 0) {
        const Mat& Cp = pieces_[f.plus].C;
        f.Vp = f.Vp * Cp;
        f.Gp = f.Gp * Cp;
        f.Tp = f.Tp * Cp;
      }
    }
}

double SparseSystem::asymmetry() const {
  SpMat D = A - SpMat(A.transpose());
  double m = 0, d = 0;
  for (int k = 0; k < A.outerSize(); ++k)
    for (SpMat::InnerIterator it(A, k); it; ++it) m = std::max(m, std::abs(it.value()));
  for (int k = 0; k < D.outerSize(); ++k)
    for (SpMat::InnerIterator it(D, k); it; ++it) d = std::max(d, std::abs(it.value()));
  return m > 0 ? d / m : 0.0;
}

Eigen::VectorXd solve(const SparseSystem& sys, int block, double tol, int max_it, SolveStats* stats,
                      Preconditioner pc) {
  const SpMat& A = sys.A;
  const int N = static_cast<int>(A.rows());
  if (max_it < 0) max_it = static_cast<int>(20 * std::sqrt(double(N))) + 1000;
  if (N % block != 0) throw Error(ErrorKind::BadInput, "block size does not divide the system size");
  std::function<Vec(const Vec&)> precond;
  std::vector<Eigen::LLT<Mat>> inv;
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt;
  if (pc == Preconditioner::Cholesky) {
    ldlt.compute(Eigen::SparseMatrix<double>(A));
    if (ldlt.info() != Eigen::Success) throw Error(ErrorKind::NoConvergence, "sparse factorization failed");
    if (ldlt.vectorD().minCoeff() <= 0) throw Error(ErrorKind::NoConvergence, "matrix is not positive definite");
    precond = [&](const Vec& r) -> Vec { return ldlt.solve(r); };
  } else {
    const int nb = N / block;
    inv.resize(nb);
    for (int b = 0; b < nb; ++b) {
      Mat D = Mat::Zero(block, block);
      for (int i = 0; i < block; ++i)
        for (SpMat::InnerIterator it(A, b * block + i); it; ++it) {
          int j = static_cast<int>(it.col()) - b * block;
          if (j >= 0 && j < block) D(i, j) = it.value();
        }
      inv[b].compute(D);
      if (inv[b].info() != Eigen::Success)
        throw Error(ErrorKind::NoConvergence, "diagonal block is not positive definite");
    }
    precond = [&inv, nb, block, N](const Vec& r) {
      Vec z(N);
      for (int b = 0; b < nb; ++b) z.segment(b * block, block) = inv[b].solve(r.segment(b * block, block));
      return z;
    };
  }
  Vec x = Vec::Zero(N);
  double bn = sys.b.norm();
  SolveStats st;
  if (bn == 0) {
    if (stats) *stats = st;
    return x;
  }
  Vec r = sys.b, z = precond(r), p = z;
  double rz = r.dot(z);
  st.residual = 1;
  for (int it = 1; it <= max_it; ++it) {
    Vec Ap = A * p;
    double pAp = p.dot(Ap);
    if (!(pAp > 0) || !(rz > 0)) break;
    double alpha = rz / pAp;
    x += alpha * p;
    r -= alpha * Ap;
    st.iterations = it;
    bool restart = false;
    if (r.norm() / bn <= tol) {
      // confirm with the true residual, restart from it otherwise
      r = sys.b - A * x;
      st.residual = r.norm() / bn;
      if (st.residual <= tol) {
        if (stats) *stats = st;
        return x;
      }
      restart = true;
    }
    z = precond(r);
    double rz2 = r.dot(z);
    p = restart ? z : Vec(z + (rz2 / rz) * p);
    rz = rz2;
  }
  st.residual = (sys.b - A * x).norm() / bn;
  if (stats) *stats = st;
  throw Error(ErrorKind::NoConvergence,
              "conjugate gradients stopped at relative residual " + std::to_string(st.residual));
}

std::vector<std::array<Eigen::VectorXd, 2>> lifting(const LdgContext& ctx, const Eigen::VectorXd& v) {
  const int n = ctx.dofs().n_loc, np = static_cast<int>(ctx.pieces().size());
  LiftData L = lift_data(ctx, false);
  std::vector<std::array<Vec, 2>> out(np);
  for (int P = 0; P < np; ++P) {
    Vec rhs = Vec::Zero(2 * n);
    for (const auto& [Q, B] : L.B[P]) rhs += B * v.segment(ctx.pieces()[Q].offset, n);
    Vec c = minv2(*L.C[P], rhs);
    out[P] = {c.head(n), c.tail(n)};
  }
  return out;
}

DgNorm dg_norm(const LdgContext& ctx, const Eigen::VectorXd& v) {
  const int n = ctx.dofs().n_loc;
  DgNorm out;
  for (const auto& pc : ctx.pieces()) {
    Vec c = v.segment(pc.offset, n), gx = pc.Gx * c, gy = pc.Gy * c;
    for (int k = 0; k < gx.size(); ++k) out.volume += pc.a * pc.rule.w[k] * (gx[k] * gx[k] + gy[k] * gy[k]);
  }
  for (const auto& f : ctx.penalty_faces()) {
    Vec j = f.Vm * v.segment(ctx.pieces()[f.minus].offset, n);
    if (f.plus >= 0) j -= f.Vp * v.segment(ctx.pieces()[f.plus].offset, n);
    for (int k = 0; k < j.size(); ++k) out.jump += f.alpha * f.w[k] * j[k] * j[k];
  }
  return out;
}

DgNorm dg_error(const LdgContext& ctx, const Eigen::VectorXd& U) {
  const auto& pb = ctx.problem();
  if (!pb.exact) throw Error(ErrorKind::BadInput, "problem has no exact solution");
  const int n = ctx.dofs().n_loc;
  DgNorm out;
  for (const auto& pc : ctx.pieces()) {
    Vec c = U.segment(pc.offset, n), gx = pc.Gx * c, gy = pc.Gy * c;
    for (int k = 0; k < gx.size(); ++k) {
      Vec2 du = pb.exact->grad[pc.comp - 1](pc.rule.x[k]) - Vec2(gx[k], gy[k]);
      out.volume += pc.a * pc.rule.w[k] * du.squaredNorm();
    }
  }
  for (const auto& f : ctx.penalty_faces()) {
    Vec j = f.Vm * U.segment(ctx.pieces()[f.minus].offset, n);
    if (f.plus >= 0) j -= f.Vp * U.segment(ctx.pieces()[f.plus].offset, n);
    for (int k = 0; k < j.size(); ++k) {
      double d = f.plus >= 0 ? j[k] : j[k] - pb.g(f.x[k]);
      out.jump += f.alpha * f.w[k] * d * d;
    }
  }
  return out;
}

double eval_solution(const LdgContext& ctx, const Eigen::VectorXd& U, const Vec2& x) {
  int leaf = ctx.leaves().locate(x);
  if (leaf < 0) throw Error(ErrorKind::BadInput, "point outside the mesh");
  int e = ctx.mesh().leaf_to_element[leaf];
  int c = ctx.comp_at(e, x);
  int P = ctx.dofs().piece_of[e][c - 1];
  std::vector<double> v(ctx.dofs().n_loc);
  ctx.basis().eval_physical(ctx.mesh().elements[e].rect, x, v.data(), nullptr, nullptr);
  const auto& piece = ctx.pieces()[P];
  Eigen::Map<const Eigen::RowVectorXd> row(v.data(), ctx.dofs().n_loc);
  return (row * piece.C).dot(U.segment(piece.offset, ctx.dofs().n_loc));
}

void write_matrix(const SpMat& A, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::BadInput, "cannot write " + path);
  out.precision(17);
  for (int k = 0; k < A.outerSize(); ++k)
    for (SpMat::InnerIterator it(A, k); it; ++it) out << it.row() << ' ' << it.col() << ' ' << it.value() << '\n';
}

}  // namespace ufem
