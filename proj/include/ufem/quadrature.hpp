#pragma once

#include "ufem/geometry.hpp"

#include <vector>

namespace ufem {

struct QuadRule1D {
  std::vector<double> x, w;
  int size() const { return static_cast<int>(x.size()); }
};

struct QuadRule2D {
  std::vector<Vec2> x;
  std::vector<double> w;
  int size() const { return static_cast<int>(x.size()); }
  double sum() const;
  void append(const QuadRule2D& o);
};

/// Points on a curve or segment with arclength weights and unit tangents.
struct LineRule {
  std::vector<Vec2> x;
  std::vector<double> w;
  std::vector<Vec2> tangent;
  std::vector<double> arclength;  // distance from the start of the rule's curve
  int size() const { return static_cast<int>(x.size()); }
  double sum() const;
};

QuadRule1D gauss_legendre(int n);
std::vector<double> gll_points(int p);

QuadRule2D tensor_rule(const Rect& K, int q);
QuadRule2D triangle_rule(const Vec2& a, const Vec2& b, const Vec2& c, int q);
QuadRule2D cut_region_rule(const InterfaceCurve& curve, const CurvedPolygon& region, int q);
LineRule arc_rule(const InterfaceCurve& curve, const Arc& arc, int q);
/// Signed area by the boundary integral of (x dy - y dx) / 2.
double region_area(const InterfaceCurve& curve, const CurvedPolygon& region, int q = 24);
LineRule segment_rule(const Vec2& a, const Vec2& b, int q);

}  // namespace ufem
