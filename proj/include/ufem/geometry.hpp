#pragma once

#include "ufem/common.hpp"

#include <functional>
#include <optional>
#include <vector>

namespace ufem {

enum class PointClass { OnInterface = 0, Omega1 = 1, Omega2 = 2 };
enum class CellClass { Interior1, Interior2, Cut };

/// One C^2 piece of a closed interface loop.
struct PieceDef {
  std::function<Vec2(double)> x, dx, ddx;
  double t0 = 0, t1 = 1;
  bool corner_at_end = false;  // junction with the next piece of the loop is a singular point
};

struct CurveParam {
  int piece = -1;
  double t = 0;
};

/// Portion of one piece traversed from ta to tb (tb < ta is a reversed traversal).
struct CurveSegment {
  int piece;
  double ta, tb;
};
using Arc = std::vector<CurveSegment>;

struct SideHit {
  Vec2 point;
  int piece;
  double t;
  double s;  // relative position along the segment, in (0,1)
};

struct Crossing {
  Vec2 point;
  int piece;
  double t;
  int side;
};

struct SingularPoint {
  Vec2 point;
  int piece;  // the junction sits at the end of this piece
};

struct Frame {
  Vec2 tangent, normal;
};

class InterfaceCurve {
 public:
  InterfaceCurve() = default;
  InterfaceCurve(std::vector<std::vector<PieceDef>> loops, double domain_diameter,
                 bool omega1_inside = true);

  int num_pieces() const { return static_cast<int>(pieces_.size()); }
  int num_loops() const { return static_cast<int>(loop_first_.size()); }
  const PieceDef& piece(int j) const { return pieces_[j]; }
  int loop_of(int j) const { return loop_[j]; }
  int next(int j) const { return next_[j]; }
  int prev(int j) const { return prev_[j]; }
  bool singular_end(int j) const { return pieces_[j].corner_at_end; }
  const std::vector<SingularPoint>& singular_points() const { return singular_; }

  Vec2 point(int j, double t) const { return pieces_[j].x(t); }
  Vec2 deriv(int j, double t) const { return pieces_[j].dx(t); }
  Vec2 second(int j, double t) const { return pieces_[j].ddx(t); }
  Vec2 point(const CurveParam& c) const { return point(c.piece, c.t); }

  /// +1 when the outward normal of Omega1 is the right-hand normal of the parametrization.
  double normal_sign(int j) const { return sign_[loop_[j]]; }
  double tol() const { return tol_; }
  double domain_diameter() const { return diam_; }
  bool omega1_inside() const { return omega1_inside_; }
  Rect bbox() const { return bbox_; }

  /// Parameter intervals whose inflated hull meets the box.
  void candidates(const Rect& box, std::vector<CurveSegment>& out) const;
  /// Transversal crossings with the open segment a-b, restricted to the given intervals.
  std::vector<SideHit> crossings(const Vec2& a, const Vec2& b,
                                 const std::vector<CurveSegment>& intervals) const;
  double distance(const Vec2& p, CurveParam* where = nullptr) const;
  std::vector<std::vector<Vec2>> polylines(int samples_per_piece) const;

 private:
  struct Node {
    Rect box;
    int left = -1, right = -1;
    int interval = -1;
  };
  struct Interval {
    int piece;
    double ta, tb;
    bool last;
  };
  int build(int lo, int hi);
  void query(int node, const Rect& box, std::vector<CurveSegment>& out) const;

  std::vector<PieceDef> pieces_;
  std::vector<int> loop_, next_, prev_, loop_first_;
  std::vector<double> sign_;
  std::vector<SingularPoint> singular_;
  std::vector<Interval> intervals_;
  std::vector<Node> nodes_;
  int root_ = -1;
  double tol_ = 1e-12, diam_ = 1.0;
  bool omega1_inside_ = true;
  Rect bbox_;
};

/// Quadrature-ready description of K_i = K ∩ Omega_i: a counter-clockwise
/// closed boundary made of straight pieces and interface segments.
struct RegionEdge {
  bool curved = false;
  Vec2 a, b;
  CurveSegment seg{-1, 0, 0};
};

struct CurvedPolygon {
  std::vector<RegionEdge> edges;
  std::vector<Vec2> chord_polygon;  // boundary with arcs replaced by chords, CCW
};

struct CutTopology {
  CellClass cls = CellClass::Interior1;
  std::vector<Crossing> crossings;  // arc runs from crossings[0] to crossings[1]
  std::vector<Arc> arcs;            // one arc, or two arcs meeting at the singular point
  std::vector<std::array<Vec2, 2>> chords;
  std::optional<Vec2> singular;
  std::array<int, 4> corner{1, 1, 1, 1};  // subdomain of each rectangle corner
  std::array<CurvedPolygon, 2> region;

  bool is_cut() const { return cls == CellClass::Cut; }
  int vertices_in(int i) const;
};

struct Deviation {
  std::array<double, 2> eta_i{0, 0};
  std::array<int, 2> apex{-1, -1};
  std::array<bool, 2> regular{true, true};
  double eta = 0;
};

struct Largeness {
  bool large = false;
  bool regular = true;
};

PointClass classify_point(const InterfaceCurve& curve, const Vec2& p);
std::vector<SideHit> intersect_side(const InterfaceCurve& curve, const Vec2& a, const Vec2& b);
CutTopology cut_rectangle(const InterfaceCurve& curve, const Rect& K);
int deviation_samples(int p);
Deviation interface_deviation(const InterfaceCurve& curve, const Rect& K, const CutTopology& cut,
                              int samples);
Largeness is_large(const Rect& K, const CutTopology& cut, int i, double delta0);
Frame curve_frame(const InterfaceCurve& curve, int piece, double t);

double arc_parameter_length(const Arc& arc);
Vec2 arc_point_at(const InterfaceCurve& curve, const Arc& arc, double frac);

}  // namespace ufem
