#pragma once

#include <Eigen/Dense>

#include <array>
#include <stdexcept>
#include <string>

namespace ufem {

using Vec2 = Eigen::Vector2d;

enum class ErrorKind {
  NonTransversal,
  AssumptionViolated,
  DegenerateChord,
  SingularParameter,
  MergeLoopBudget,
  DegenerateRegion,
  IllConditioned,
  EtaOutOfRange,
  SingularLocalMass,
  NoConvergence,
  BadInput,
};

const char* error_name(ErrorKind k);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what);
  ErrorKind kind() const { return kind_; }
  const std::string& detail() const { return detail_; }  // message without the kind prefix

 private:
  ErrorKind kind_;
  std::string detail_;
};

inline double cross(const Vec2& a, const Vec2& b) { return a.x() * b.y() - a.y() * b.x(); }

double dist_point_segment(const Vec2& p, const Vec2& a, const Vec2& b);

/// Axis-aligned rectangle. Corners and sides are numbered counter-clockwise
/// starting at (x0,y0); side k runs from corner k to corner k+1.
struct Rect {
  double x0 = 0, y0 = 0, x1 = 1, y1 = 1;

  double width() const { return x1 - x0; }
  double height() const { return y1 - y0; }
  double area() const { return width() * height(); }
  double diameter() const;
  Vec2 center() const { return {0.5 * (x0 + x1), 0.5 * (y0 + y1)}; }
  Vec2 corner(int k) const;
  std::array<Vec2, 2> side(int k) const;
  double side_length(int k) const { return (k % 2 == 0) ? width() : height(); }
  bool contains(const Vec2& p, double tol = 0.0) const;
  bool strictly_contains(const Vec2& p, double tol = 0.0) const;
  bool overlaps(const Rect& r) const;
};

Rect bounding_union(const Rect& a, const Rect& b);

}  // namespace ufem
