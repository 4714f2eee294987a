#pragma once

#include "ufem/geometry.hpp"

#include <cstdint>
#include <map>
#include <memory>
#include <unordered_map>
#include <vector>

namespace ufem {

enum Dir { East = 0, North = 1, West = 2, South = 3 };

struct Leaf {
  int level = 0;
  int i = 0, j = 0;  // cell index on the level grid
  Rect rect;
};

/// Quadtree leaves over a root grid of nx x ny cells (some root cells may be inactive).
class QuadMesh {
 public:
  QuadMesh() = default;
  QuadMesh(const Rect& box, int nx, int ny, std::vector<bool> active = {});

  const std::vector<Leaf>& leaves() const { return leaves_; }
  int size() const { return static_cast<int>(leaves_.size()); }
  const Leaf& leaf(int id) const { return leaves_[id]; }
  const Rect& box() const { return box_; }
  int nx() const { return nx_; }
  int ny() const { return ny_; }
  int max_level() const;

  Rect cell_rect(int level, int i, int j) const;
  bool cell_in_domain(int level, int i, int j) const;
  int find(int level, int i, int j) const;
  /// Leaves adjacent across side `dir`, ordered along the side.
  std::vector<int> neighbors(int id, int dir) const;
  int hanging_nodes(int id, int dir) const;
  int locate(const Vec2& p) const;
  double domain_area() const;

  QuadMesh refined(const std::vector<int>& marked) const;

 private:
  static std::uint64_t key(int level, int i, int j) {
    return (std::uint64_t(level) << 58) | (std::uint64_t(i) << 29) | std::uint64_t(j);
  }
  void rebuild_index();
  void collect_adjacent(int level, int i, int j, int dir, std::vector<int>& out) const;

  Rect box_;
  int nx_ = 1, ny_ = 1;
  std::vector<bool> active_;
  std::vector<Leaf> leaves_;
  std::unordered_map<std::uint64_t, int> index_;
};

QuadMesh refine(const QuadMesh& mesh, const std::vector<int>& marked);
QuadMesh enforce_hanging_limit(const QuadMesh& mesh, int N0);
int max_hanging_nodes(const QuadMesh& mesh);

enum class SideKind { Side, Interface, Boundary };

/// Portion of a side lying in one subdomain.
struct SidePart {
  Vec2 a, b;
  int comp;
};

struct SideEntity {
  Vec2 a, b;
  int minus = -1, plus = -1;
  Vec2 normal{0, 0};
  SideKind kind = SideKind::Side;
  double h = 0;
  std::vector<SidePart> parts;
  double length() const { return (b - a).norm(); }
};

/// Leaf-level facets: each interior facet once (minus = west/south leaf), boundary facets once.
std::vector<SideEntity> build_sides(const QuadMesh& mesh);

struct InducedElement {
  Rect rect;
  std::vector<int> members;
  int level = 0;
  CutTopology cut;
  Deviation dev;
  bool large1 = true, large2 = true;
  double h = 0;

  bool is_cut() const { return cut.is_cut(); }
  bool has(int comp) const {
    return is_cut() || (comp == 1 ? cut.cls == CellClass::Interior1 : cut.cls == CellClass::Interior2);
  }
};

struct InducedMesh {
  std::vector<InducedElement> elements;
  std::vector<int> leaf_to_element;
  std::vector<SideEntity> sides;      // interior sides between induced elements
  std::vector<SideEntity> boundary;   // sides on the exterior boundary
  std::array<std::vector<int>, 2> side_in;  // indices into `sides` forming E_i^side
  std::vector<std::vector<int>> vertex_patch;

  double total_area() const;
  int num_cut() const;
};

struct InducedOptions {
  double delta0 = 0.25;
  int N0 = 3;
  int p = 1;
  int max_merge_iters = 20;
  double C0 = 4.0;
};

struct InducedStats {
  int iterations = 0;
  int merges = 0;
  int refinements = 0;
};

/// Geometry cache keyed by rectangle position on the level grid.
class CutCache {
 public:
  struct Entry {
    bool ok = false;
    CutTopology cut;
    Largeness large[2];
    Deviation dev;
    bool has_dev = false;
  };
  const Entry& get(const InterfaceCurve& curve, const QuadMesh& mesh, int level, int i, int j, int wi,
                   int wj, double delta0, int samples);
  size_t size() const { return map_.size(); }

 private:
  std::map<std::array<int, 5>, Entry> map_;
};

double hh_bound(double delta0);

struct InducedResult {
  InducedMesh induced;
  QuadMesh mesh;
  InducedStats stats;
};

InducedResult build_induced(const QuadMesh& mesh, const InterfaceCurve& curve, const InducedOptions& opt,
                            CutCache* cache = nullptr);

/// Recomputes every induced-mesh invariant independently of the construction.
struct MeshAudit {
  bool all_large = true;
  double max_eta = 0;
  int max_hanging = 0;
  double area_error = 0;
  double max_merge_ratio = 1;
  bool ok(double delta0, int N0) const;
};
MeshAudit audit_induced(const InducedMesh& im, const QuadMesh& mesh, const InterfaceCurve& curve,
                        double delta0, double area_tol = 1e-10);

}  // namespace ufem
