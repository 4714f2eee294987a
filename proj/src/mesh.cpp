#include "ufem/mesh.hpp"

#include <algorithm>
#include <cmath>

namespace ufem {

QuadMesh::QuadMesh(const Rect& box, int nx, int ny, std::vector<bool> active)
    : box_(box), nx_(nx), ny_(ny), active_(std::move(active)) {
  if (nx < 1 || ny < 1) throw Error(ErrorKind::BadInput, "root grid must be at least 1x1");
  if (active_.empty()) active_.assign(nx * ny, true);
  if (static_cast<int>(active_.size()) != nx * ny) throw Error(ErrorKind::BadInput, "active mask size");
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i)
      if (active_[i + nx * j]) leaves_.push_back({0, i, j, cell_rect(0, i, j)});
  rebuild_index();
}

int QuadMesh::max_level() const {
  int m = 0;
  for (const auto& l : leaves_) m = std::max(m, l.level);
  return m;
}

Rect QuadMesh::cell_rect(int level, int i, int j) const {
  double hx = box_.width() / (double(nx_) * double(1u << level));
  double hy = box_.height() / (double(ny_) * double(1u << level));
  return {box_.x0 + i * hx, box_.y0 + j * hy, box_.x0 + (i + 1) * hx, box_.y0 + (j + 1) * hy};
}

bool QuadMesh::cell_in_domain(int level, int i, int j) const {
  if (i < 0 || j < 0 || i >= (nx_ << level) || j >= (ny_ << level)) return false;
  return active_[(i >> level) + nx_ * (j >> level)];
}

int QuadMesh::find(int level, int i, int j) const {
  if (i < 0 || j < 0) return -1;
  auto it = index_.find(key(level, i, j));
  return it == index_.end() ? -1 : it->second;
}

void QuadMesh::rebuild_index() {
  index_.clear();
  index_.reserve(leaves_.size() * 2);
  for (int k = 0; k < size(); ++k) index_[key(leaves_[k].level, leaves_[k].i, leaves_[k].j)] = k;
}

void QuadMesh::collect_adjacent(int level, int i, int j, int dir, std::vector<int>& out) const {
  if (level > 50) return;
  // children touching side `dir` of cell (level,i,j), in increasing coordinate order
  int ci[2], cj[2];
  switch (dir) {
    case East: ci[0] = ci[1] = 2 * i + 1; cj[0] = 2 * j; cj[1] = 2 * j + 1; break;
    case West: ci[0] = ci[1] = 2 * i; cj[0] = 2 * j; cj[1] = 2 * j + 1; break;
    case North: cj[0] = cj[1] = 2 * j + 1; ci[0] = 2 * i; ci[1] = 2 * i + 1; break;
    default: cj[0] = cj[1] = 2 * j; ci[0] = 2 * i; ci[1] = 2 * i + 1; break;
  }
  for (int k = 0; k < 2; ++k) {
    int id = find(level + 1, ci[k], cj[k]);
    if (id >= 0) out.push_back(id);
    else collect_adjacent(level + 1, ci[k], cj[k], dir, out);
  }
}

std::vector<int> QuadMesh::neighbors(int id, int dir) const {
  static const int di[4] = {1, 0, -1, 0}, dj[4] = {0, 1, 0, -1};
  const Leaf& L = leaves_[id];
  int ni = L.i + di[dir], nj = L.j + dj[dir];
  std::vector<int> out;
  if (!cell_in_domain(L.level, ni, nj)) return out;
  int f = find(L.level, ni, nj);
  if (f >= 0) return {f};
  for (int k = L.level - 1; k >= 0; --k) {
    int s = L.level - k;
    f = find(k, ni >> s, nj >> s);
    if (f >= 0) return {f};
  }
  collect_adjacent(L.level, ni, nj, (dir + 2) % 4, out);
  return out;
}

int QuadMesh::hanging_nodes(int id, int dir) const {
  auto nb = neighbors(id, dir);
  return nb.size() >= 2 ? static_cast<int>(nb.size()) - 1 : 0;
}

int QuadMesh::locate(const Vec2& p) const {
  for (int l = 0; l <= 50; ++l) {
    double hx = box_.width() / (double(nx_) * double(1u << l));
    double hy = box_.height() / (double(ny_) * double(1u << l));
    int i = static_cast<int>(std::floor((p.x() - box_.x0) / hx));
    int j = static_cast<int>(std::floor((p.y() - box_.y0) / hy));
    i = std::clamp(i, 0, (nx_ << l) - 1);
    j = std::clamp(j, 0, (ny_ << l) - 1);
    if (!cell_in_domain(l, i, j)) return -1;
    int f = find(l, i, j);
    if (f >= 0) return f;
  }
  return -1;
}

double QuadMesh::domain_area() const {
  double a = 0;
  for (int j = 0; j < ny_; ++j)
    for (int i = 0; i < nx_; ++i)
      if (active_[i + nx_ * j]) a += cell_rect(0, i, j).area();
  return a;
}

QuadMesh QuadMesh::refined(const std::vector<int>& marked) const {
  std::vector<char> mark(leaves_.size(), 0);
  for (int m : marked) mark.at(m) = 1;
  QuadMesh out;
  out.box_ = box_;
  out.nx_ = nx_;
  out.ny_ = ny_;
  out.active_ = active_;
  out.leaves_.reserve(leaves_.size() + 3 * marked.size());
  for (size_t k = 0; k < leaves_.size(); ++k) {
    const Leaf& L = leaves_[k];
    if (!mark[k]) {
      out.leaves_.push_back(L);
      continue;
    }
    for (int c = 0; c < 4; ++c) {
      int i = 2 * L.i + (c & 1), j = 2 * L.j + (c >> 1);
      out.leaves_.push_back({L.level + 1, i, j, cell_rect(L.level + 1, i, j)});
    }
  }
  out.rebuild_index();
  return out;
}

QuadMesh refine(const QuadMesh& mesh, const std::vector<int>& marked) { return mesh.refined(marked); }

QuadMesh enforce_hanging_limit(const QuadMesh& mesh, int N0) {
  if (N0 < 1) throw Error(ErrorKind::BadInput, "N0 must be at least 1");
  QuadMesh cur = mesh;
  for (;;) {
    std::vector<int> marked;
    for (int k = 0; k < cur.size(); ++k)
      for (int d = 0; d < 4; ++d)
        if (cur.hanging_nodes(k, d) > N0) {
          marked.push_back(k);
          break;
        }
    if (marked.empty()) return cur;
    cur = cur.refined(marked);
  }
}

int max_hanging_nodes(const QuadMesh& mesh) {
  int m = 0;
  for (int k = 0; k < mesh.size(); ++k)
    for (int d = 0; d < 4; ++d) m = std::max(m, mesh.hanging_nodes(k, d));
  return m;
}

namespace {

std::array<Vec2, 2> leaf_side(const Rect& r, int dir) {
  switch (dir) {
    case East: return {Vec2(r.x1, r.y0), Vec2(r.x1, r.y1)};
    case West: return {Vec2(r.x0, r.y0), Vec2(r.x0, r.y1)};
    case North: return {Vec2(r.x0, r.y1), Vec2(r.x1, r.y1)};
    default: return {Vec2(r.x0, r.y0), Vec2(r.x1, r.y0)};
  }
}

const Vec2 kOutward[4] = {Vec2(1, 0), Vec2(0, 1), Vec2(-1, 0), Vec2(0, -1)};

}  // namespace

std::vector<SideEntity> build_sides(const QuadMesh& mesh) {
  std::vector<SideEntity> out;
  for (int k = 0; k < mesh.size(); ++k) {
    const Leaf& L = mesh.leaf(k);
    for (int d = 0; d < 4; ++d) {
      auto nb = mesh.neighbors(k, d);
      auto seg = leaf_side(L.rect, d);
      SideEntity s;
      s.a = seg[0];
      s.b = seg[1];
      if (nb.empty()) {
        s.kind = SideKind::Boundary;
        s.minus = k;
        s.normal = kOutward[d];
        s.h = L.rect.diameter();
        out.push_back(s);
        continue;
      }
      if (nb.size() != 1) continue;
      const Leaf& N = mesh.leaf(nb[0]);
      bool emit = N.level < L.level || (N.level == L.level && (d == East || d == North));
      if (!emit) continue;
      s.kind = SideKind::Side;
      if (d == East || d == North) {
        s.minus = k;
        s.plus = nb[0];
        s.normal = kOutward[d];
      } else {
        s.minus = nb[0];
        s.plus = k;
        s.normal = -kOutward[d];
      }
      s.h = 0.5 * (L.rect.diameter() + N.rect.diameter());
      out.push_back(s);
    }
  }
  return out;
}

double InducedMesh::total_area() const {
  double a = 0;
  for (const auto& e : elements) a += e.rect.area();
  return a;
}

int InducedMesh::num_cut() const {
  int n = 0;
  for (const auto& e : elements) n += e.is_cut();
  return n;
}

}  // namespace ufem
