#include "ufem/mesh.hpp"
#include "ufem/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace ufem {

double hh_bound(double delta0) { return std::max(0.5, (1 - delta0) / (1 + delta0)); }

namespace {

// 2x2 blocks and slabs are only formed below this deviation
constexpr double kWideMergeEta = 0.1;

}  // namespace

const CutCache::Entry& CutCache::get(const InterfaceCurve& curve, const QuadMesh& mesh, int level, int i,
                                     int j, int wi, int wj, double delta0, int samples) {
  std::array<int, 5> k{level, i, j, wi, wj};
  auto it = map_.find(k);
  if (it != map_.end()) return it->second;
  Entry e;
  Rect a = mesh.cell_rect(level, i, j), b = mesh.cell_rect(level, i + wi - 1, j + wj - 1);
  Rect r = bounding_union(a, b);
  try {
    e.cut = cut_rectangle(curve, r);
    for (int s = 1; s <= 2; ++s) e.large[s - 1] = is_large(r, e.cut, s, delta0);
    if (e.cut.is_cut()) {
      e.dev = interface_deviation(curve, r, e.cut, samples);
      e.has_dev = true;
    }
    e.ok = true;
  } catch (const Error& err) {
    if (err.kind() != ErrorKind::AssumptionViolated && err.kind() != ErrorKind::NonTransversal &&
        err.kind() != ErrorKind::DegenerateChord)
      throw;
    e.ok = false;
  }
  return map_.emplace(k, std::move(e)).first->second;
}

namespace {

struct Group {
  std::vector<int> members;
  int level, i, j, wi, wj;
};

double subdomain_area(const InterfaceCurve& curve, const Rect& r, const CutTopology& cut, int comp) {
  if (!cut.is_cut()) return cut.cls == (comp == 1 ? CellClass::Interior1 : CellClass::Interior2) ? r.area() : 0.0;
  return cut_region_rule(curve, cut.region[comp - 1], 6).sum();
}

int side_dir(int side) {
  // rectangle side index -> quadtree direction
  static const int m[4] = {South, East, North, West};
  return m[side];
}

// subdomain of the point x lying on side `side` of element rect r
int comp_on_side(const Rect& r, const CutTopology& cut, int side, const Vec2& x) {
  if (!cut.is_cut()) return cut.cls == CellClass::Interior1 ? 1 : 2;
  auto sd = r.side(side);
  for (const auto& c : cut.crossings)
    if (c.side == side) {
      double dp = (c.point - sd[0]).norm(), dx = (x - sd[0]).norm();
      return dx < dp ? cut.corner[side] : cut.corner[(side + 1) % 4];
    }
  return cut.corner[side];
}

void split_parts(SideEntity& s, const InducedElement& el, int side) {
  s.parts.clear();
  std::vector<Vec2> cuts;
  if (el.is_cut()) {
    for (const auto& c : el.cut.crossings) {
      if (c.side != side) continue;
      Vec2 d = s.b - s.a;
      double t = (c.point - s.a).dot(d) / d.squaredNorm();
      if (t > 1e-12 && t < 1 - 1e-12) cuts.push_back(c.point);
    }
  }
  std::vector<Vec2> pts{s.a};
  for (const auto& c : cuts) pts.push_back(c);
  pts.push_back(s.b);
  for (size_t k = 0; k + 1 < pts.size(); ++k) {
    Vec2 mid = 0.5 * (pts[k] + pts[k + 1]);
    s.parts.push_back({pts[k], pts[k + 1], comp_on_side(el.rect, el.cut, side, mid)});
  }
}

int normal_side(const Vec2& n) {
  if (n.x() > 0.5) return 1;
  if (n.y() > 0.5) return 2;
  if (n.x() < -0.5) return 3;
  return 0;
}

InducedMesh assemble_induced(const QuadMesh& T, const InterfaceCurve& curve, const std::vector<Group>& groups,
                             const std::vector<int>& group_of, CutCache& cache, const InducedOptions& opt) {
  InducedMesh im;
  const int samples = deviation_samples(opt.p);
  im.leaf_to_element.assign(T.size(), -1);
  for (int k = 0; k < T.size(); ++k) {
    if (im.leaf_to_element[k] >= 0) continue;
    InducedElement el;
    const CutCache::Entry* e;
    if (group_of[k] >= 0) {
      const Group& g = groups[group_of[k]];
      e = &cache.get(curve, T, g.level, g.i, g.j, g.wi, g.wj, opt.delta0, samples);
      el.members = g.members;
      el.level = g.level;
      el.rect = bounding_union(T.cell_rect(g.level, g.i, g.j), T.cell_rect(g.level, g.i + g.wi - 1, g.j + g.wj - 1));
    } else {
      const Leaf& L = T.leaf(k);
      e = &cache.get(curve, T, L.level, L.i, L.j, 1, 1, opt.delta0, samples);
      el.members = {k};
      el.level = L.level;
      el.rect = L.rect;
    }
    el.cut = e->cut;
    el.dev = e->dev;
    el.large1 = e->large[0].large;
    el.large2 = e->large[1].large;
    el.h = el.rect.diameter();
    int id = static_cast<int>(im.elements.size());
    for (int m : el.members) im.leaf_to_element[m] = id;
    im.elements.push_back(std::move(el));
  }

  // merge leaf facets into maximal element sides
  struct Key {
    int minus, plus, axis;
    double line;
    bool operator<(const Key& o) const {
      return std::tie(minus, plus, axis, line) < std::tie(o.minus, o.plus, o.axis, o.line);
    }
  };
  std::map<Key, std::vector<std::pair<double, double>>> inner, outer;
  std::map<Key, Vec2> normals;
  for (const auto& f : build_sides(T)) {
    int axis = std::abs(f.normal.x()) > 0.5 ? 0 : 1;  // 0: vertical facet
    double line = axis == 0 ? f.a.x() : f.a.y();
    double lo = axis == 0 ? f.a.y() : f.a.x(), hi = axis == 0 ? f.b.y() : f.b.x();
    int em = im.leaf_to_element[f.minus];
    if (f.kind == SideKind::Boundary) {
      Key k{em, normal_side(f.normal), axis, line};
      outer[k].push_back({lo, hi});
      normals[k] = f.normal;
      continue;
    }
    int ep = im.leaf_to_element[f.plus];
    if (em == ep) continue;
    inner[{em, ep, axis, line}].push_back({lo, hi});
  }
  auto merged = [](std::vector<std::pair<double, double>> iv) {
    std::sort(iv.begin(), iv.end());
    std::vector<std::pair<double, double>> out;
    for (const auto& x : iv) {
      if (!out.empty() && std::abs(x.first - out.back().second) <= 1e-12 * std::max(1.0, std::abs(x.first)))
        out.back().second = x.second;
      else
        out.push_back(x);
    }
    return out;
  };
  auto make_seg = [](int axis, double line, double lo, double hi, SideEntity& s) {
    if (axis == 0) {
      s.a = {line, lo};
      s.b = {line, hi};
    } else {
      s.a = {lo, line};
      s.b = {hi, line};
    }
  };
  for (const auto& [k, iv] : inner)
    for (const auto& x : merged(iv)) {
      SideEntity s;
      s.kind = SideKind::Side;
      s.minus = k.minus;
      s.plus = k.plus;
      s.normal = k.axis == 0 ? Vec2(1, 0) : Vec2(0, 1);
      make_seg(k.axis, k.line, x.first, x.second, s);
      s.h = 0.5 * (im.elements[s.minus].h + im.elements[s.plus].h);
      split_parts(s, im.elements[s.minus], normal_side(s.normal));
      int idx = static_cast<int>(im.sides.size());
      for (int c = 1; c <= 2; ++c)
        if (im.elements[s.minus].has(c) && im.elements[s.plus].has(c)) im.side_in[c - 1].push_back(idx);
      im.sides.push_back(std::move(s));
    }
  for (const auto& [k, iv] : outer)
    for (const auto& x : merged(iv)) {
      SideEntity s;
      s.kind = SideKind::Boundary;
      s.minus = k.minus;
      s.normal = normals[k];
      make_seg(k.axis, k.line, x.first, x.second, s);
      s.h = im.elements[s.minus].h;
      split_parts(s, im.elements[s.minus], k.plus);
      im.boundary.push_back(std::move(s));
    }

  // vertex patches
  im.vertex_patch.assign(im.elements.size(), {});
  for (size_t e = 0; e < im.elements.size(); ++e) im.vertex_patch[e].push_back(static_cast<int>(e));
  for (const auto& s : im.sides) {
    im.vertex_patch[s.minus].push_back(s.plus);
    im.vertex_patch[s.plus].push_back(s.minus);
  }
  for (size_t e = 0; e < im.elements.size(); ++e) {
    const Rect& r = im.elements[e].rect;
    double eps = 1e-7 * std::min(r.width(), r.height());
    for (int c = 0; c < 4; ++c)
      for (int sx = -1; sx <= 1; sx += 2)
        for (int sy = -1; sy <= 1; sy += 2) {
          int leaf = T.locate(r.corner(c) + Vec2(sx * eps, sy * eps));
          if (leaf >= 0) im.vertex_patch[e].push_back(im.leaf_to_element[leaf]);
        }
    auto& vp = im.vertex_patch[e];
    std::sort(vp.begin(), vp.end());
    vp.erase(std::unique(vp.begin(), vp.end()), vp.end());
  }
  return im;
}

}  // namespace

InducedResult build_induced(const QuadMesh& mesh, const InterfaceCurve& curve, const InducedOptions& opt,
                            CutCache* cache) {
  if (!(opt.delta0 > 0 && opt.delta0 < 0.5)) throw Error(ErrorKind::BadInput, "delta0 must lie in (0,1/2)");
  CutCache local;
  CutCache& C = cache ? *cache : local;
  const int samples = deviation_samples(opt.p);
  const double bound = hh_bound(opt.delta0);
  InducedResult res;
  QuadMesh T = enforce_hanging_limit(mesh, opt.N0);
  if (T.size() != mesh.size()) res.stats.refinements += T.size() - mesh.size();

  for (int iter = 0; iter < opt.max_merge_iters; ++iter) {
    res.stats.iterations = iter + 1;
    const int n = T.size();
    std::vector<const CutCache::Entry*> info(n);
    std::set<int> refine;
    for (int k = 0; k < n; ++k) {
      const Leaf& L = T.leaf(k);
      info[k] = &C.get(curve, T, L.level, L.i, L.j, 1, 1, opt.delta0, samples);
      if (!info[k]->ok) refine.insert(k);
    }
    std::vector<Group> groups;
    std::vector<int> group_of(n, -1);
    int merges = 0;

    if (refine.empty()) {
      auto large = [&](int k, int i) { return info[k]->large[i - 1].large; };
      auto is_cut = [&](int k) { return info[k]->cut.is_cut(); };
      auto small = [&](int k) { return is_cut(k) && !(large(k, 1) && large(k, 2)); };
      auto inside = [&](int k, int i) {
        return info[k]->cut.cls == (i == 1 ? CellClass::Interior1 : CellClass::Interior2);
      };
      auto group_entry = [&](const Group& g) -> const CutCache::Entry& {
        return C.get(curve, T, g.level, g.i, g.j, g.wi, g.wj, opt.delta0, samples);
      };
      auto group_ok = [&](const Group& g) {
        const auto& e = group_entry(g);
        if (!e.ok) return false;
        if (!e.cut.is_cut()) return true;
        return e.large[0].large && e.large[1].large && e.dev.eta <= bound;
      };
      auto make_group = [&](std::vector<int> members) {
        Group g;
        g.level = T.leaf(members[0]).level;
        int i0 = 1 << 30, j0 = 1 << 30, i1 = -1, j1 = -1;
        for (int m : members) {
          i0 = std::min(i0, T.leaf(m).i);
          j0 = std::min(j0, T.leaf(m).j);
          i1 = std::max(i1, T.leaf(m).i);
          j1 = std::max(j1, T.leaf(m).j);
        }
        g.i = i0;
        g.j = j0;
        g.wi = i1 - i0 + 1;
        g.wj = j1 - j0 + 1;
        std::sort(members.begin(), members.end());
        g.members = members;
        return g;
      };
      auto commit = [&](const Group& g) {
        int id = static_cast<int>(groups.size());
        groups.push_back(g);
        for (int m : g.members) group_of[m] = id;
        ++merges;
      };
      auto same_level_nb = [&](int k, int dir) {
        auto nb = T.neighbors(k, dir);
        if (nb.size() != 1 || T.leaf(nb[0]).level != T.leaf(k).level) return -1;
        return nb[0];
      };

      // step 2: small cut elements. Valid unions are collected first; elements with
      // fewer options claim their neighbours first.
      struct Option {
        Group g;
        double area;
      };
      auto unions = [&](int k, bool wide) {
        static const int narrow_shapes[][2] = {{2, 1}, {1, 2}};
        static const int wide_shapes[][2] = {{2, 2}, {3, 1}, {1, 3}, {4, 1}, {1, 4}};
        const Leaf& L = T.leaf(k);
        std::vector<Group> out;
        auto try_shape = [&](int wi, int wj) {
          for (int a = 0; a < wi; ++a)
            for (int b = 0; b < wj; ++b) {
              std::vector<int> ms;
              for (int x = 0; x < wi && ms.size() == size_t(x * wj); ++x)
                for (int y = 0; y < wj; ++y) {
                  int m = T.find(L.level, L.i - a + x, L.j - b + y);
                  if (m < 0) break;
                  ms.push_back(m);
                }
              if (ms.size() == size_t(wi * wj)) out.push_back(make_group(ms));
            }
        };
        if (wide)
          for (const auto& s : wide_shapes) try_shape(s[0], s[1]);
        else
          for (const auto& s : narrow_shapes) try_shape(s[0], s[1]);
        return out;
      };
      auto admissible = [&](const Group& g) {
        return group_ok(g) && (g.members.size() == 2 || group_entry(g).dev.eta <= kWideMergeEta);
      };
      std::vector<std::pair<int, std::vector<Option>>> todo;
      for (int k = 0; k < n; ++k) {
        if (!small(k)) continue;
        int i = large(k, 1) ? 2 : 1;
        std::vector<Option> opts;
        for (bool wide : {false, true}) {
          for (const auto& g : unions(k, wide)) {
            if (!admissible(g)) continue;
            Rect r = bounding_union(T.cell_rect(g.level, g.i, g.j),
                                    T.cell_rect(g.level, g.i + g.wi - 1, g.j + g.wj - 1));
            opts.push_back({g, subdomain_area(curve, r, group_entry(g).cut, i)});
          }
          if (!opts.empty()) break;
        }
        std::stable_sort(opts.begin(), opts.end(), [](const Option& x, const Option& y) { return x.area > y.area; });
        todo.push_back({k, std::move(opts)});
      }
      std::stable_sort(todo.begin(), todo.end(), [](const auto& x, const auto& y) {
        auto rank = [](const auto& t) { return t.second.empty() ? 1 << 20 : static_cast<int>(t.second.size()); };
        return rank(x) < rank(y);
      });
      for (const auto& [k, opts] : todo) {
        if (group_of[k] >= 0) continue;
        bool done = false;
        for (const auto& o : opts) {
          bool free = true;
          for (int m : o.g.members) free = free && group_of[m] < 0;
          if (free) {
            commit(o.g);
            done = true;
            break;
          }
        }
        // wide unions may swallow groups that lie entirely inside them
        if (!done)
          for (const auto& g : unions(k, true)) {
            std::set<int> absorbed;
            bool fits = true;
            for (int m : g.members) {
              if (group_of[m] < 0) continue;
              for (int q : groups[group_of[m]].members)
                fits = fits && std::binary_search(g.members.begin(), g.members.end(), q);
              absorbed.insert(group_of[m]);
            }
            if (!fits || !admissible(g)) continue;
            for (int id : absorbed) {
              groups[id].members.clear();
              --merges;
            }
            commit(g);
            done = true;
            break;
          }
        if (done) continue;
        const Leaf& L = T.leaf(k);
        int i = large(k, 1) ? 2 : 1;
        bool coarser = false;
        for (int d = 0; d < 4; ++d)
          for (int m : T.neighbors(k, d))
            if (T.leaf(m).level < L.level && large(m, i)) {
              refine.insert(m);
              coarser = true;
            }
        if (!coarser) refine.insert(k);
      }

      // step 3: deviation bound on the remaining cut elements
      for (int k = 0; k < n; ++k) {
        if (!is_cut(k) || small(k) || group_of[k] >= 0) continue;
        const auto& dev = info[k]->dev;
        if (dev.eta <= bound) continue;
        const auto& cut = info[k]->cut;
        const Leaf& L = T.leaf(k);
        bool handled = false;
        for (int i = 1; i <= 2 && !handled; ++i) {
          if (dev.eta_i[i - 1] <= bound) continue;
          handled = true;
          if (!cut.singular || !info[k]->large[i - 1].regular) {
            refine.insert(k);
            continue;
          }
          int nv = cut.vertices_in(i);
          std::vector<int> members;
          if (nv == 2) {
            for (int s = 0; s < 4; ++s)
              if (cut.corner[s] == i && cut.corner[(s + 1) % 4] == i) {
                int m = same_level_nb(k, side_dir(s));
                if (m >= 0 && group_of[m] < 0 && inside(m, i)) members = {k, m};
              }
          } else if (nv == 3) {
            int c = 0;
            for (int s = 0; s < 4; ++s)
              if (cut.corner[s] != i) c = s;
            int dx = (c == 0 || c == 3) ? 1 : -1;
            int dy = (c == 0 || c == 1) ? 1 : -1;
            int a = T.find(L.level, L.i + dx, L.j), b = T.find(L.level, L.i, L.j + dy),
                d = T.find(L.level, L.i + dx, L.j + dy);
            if (a >= 0 && b >= 0 && d >= 0 && group_of[a] < 0 && group_of[b] < 0 && group_of[d] < 0 &&
                inside(a, i) && inside(b, i) && inside(d, i))
              members = {k, a, b, d};
          }
          if (!members.empty()) {
            Group g = make_group(members);
            if (group_ok(g)) {
              commit(g);
              continue;
            }
          }
          // refine the largest among K and its neighbours
          int lmin = L.level;
          std::vector<int> nbrs;
          for (int d = 0; d < 4; ++d)
            for (int m : T.neighbors(k, d)) {
              nbrs.push_back(m);
              lmin = std::min(lmin, T.leaf(m).level);
            }
          if (L.level == lmin) refine.insert(k);
          for (int m : nbrs)
            if (T.leaf(m).level == lmin) refine.insert(m);
        }
      }
    }

    if (refine.empty()) {
      res.stats.merges = merges;
      res.induced = assemble_induced(T, curve, groups, group_of, C, opt);
      res.mesh = std::move(T);
      return res;
    }
    std::vector<int> marked(refine.begin(), refine.end());
    int before = T.size();
    T = enforce_hanging_limit(T.refined(marked), opt.N0);
    res.stats.refinements += (T.size() - before) / 3;
  }
  throw Error(ErrorKind::MergeLoopBudget, "induced mesh construction did not settle");
}

bool MeshAudit::ok(double delta0, int N0) const {
  return all_large && max_eta <= hh_bound(delta0) && max_hanging <= N0 && area_error <= 1e-10 &&
         max_merge_ratio <= 4.0;
}

MeshAudit audit_induced(const InducedMesh& im, const QuadMesh& mesh, const InterfaceCurve& curve, double delta0,
                        double area_tol) {
  (void)area_tol;
  MeshAudit a;
  a.max_hanging = max_hanging_nodes(mesh);
  double dom = mesh.domain_area();
  a.area_error = std::abs(im.total_area() - dom) / dom;
  double pieces = 0;  // sum of |K ∩ Omega_i| over elements and subdomains
  for (const auto& el : im.elements) {
    if (!el.is_cut()) pieces += el.rect.area();
    double hmin = 1e300;
    for (int m : el.members) hmin = std::min(hmin, mesh.leaf(m).rect.diameter());
    a.max_merge_ratio = std::max(a.max_merge_ratio, el.rect.diameter() / hmin);
    if (!el.is_cut()) continue;
    CutTopology cut = cut_rectangle(curve, el.rect);
    if (!cut.is_cut()) {
      a.all_large = false;
      continue;
    }
    for (int i = 1; i <= 2; ++i)
      if (!is_large(el.rect, cut, i, delta0).large) a.all_large = false;
    Deviation dev = interface_deviation(curve, el.rect, cut, 32);
    a.max_eta = std::max(a.max_eta, std::max(dev.eta, el.dev.eta));
    pieces += region_area(curve, cut.region[0]) + region_area(curve, cut.region[1]);
  }
  a.area_error = std::max(a.area_error, std::abs(pieces - dom) / dom);
  return a;
}

}  // namespace ufem
