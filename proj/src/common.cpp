#include "ufem/common.hpp"

#include <algorithm>
#include <cmath>

namespace ufem {

const char* error_name(ErrorKind k) {
  switch (k) {
    case ErrorKind::NonTransversal: return "NonTransversal";
    case ErrorKind::AssumptionViolated: return "AssumptionViolated";
    case ErrorKind::DegenerateChord: return "DegenerateChord";
    case ErrorKind::SingularParameter: return "SingularParameter";
    case ErrorKind::MergeLoopBudget: return "MergeLoopBudget";
    case ErrorKind::DegenerateRegion: return "DegenerateRegion";
    case ErrorKind::IllConditioned: return "IllConditioned";
    case ErrorKind::EtaOutOfRange: return "EtaOutOfRange";
    case ErrorKind::SingularLocalMass: return "SingularLocalMass";
    case ErrorKind::NoConvergence: return "NoConvergence";
    case ErrorKind::BadInput: return "BadInput";
  }
  return "Unknown";
}

Error::Error(ErrorKind kind, const std::string& what)
    : std::runtime_error(std::string(error_name(kind)) + ": " + what), kind_(kind), detail_(what) {}

double dist_point_segment(const Vec2& p, const Vec2& a, const Vec2& b) {
  Vec2 d = b - a;
  double l2 = d.squaredNorm();
  if (l2 == 0.0) return (p - a).norm();
  double s = std::clamp((p - a).dot(d) / l2, 0.0, 1.0);
  return (p - (a + s * d)).norm();
}

double Rect::diameter() const { return std::hypot(width(), height()); }

Vec2 Rect::corner(int k) const {
  switch (k & 3) {
    case 0: return {x0, y0};
    case 1: return {x1, y0};
    case 2: return {x1, y1};
    default: return {x0, y1};
  }
}

std::array<Vec2, 2> Rect::side(int k) const { return {corner(k), corner(k + 1)}; }

bool Rect::contains(const Vec2& p, double tol) const {
  return p.x() >= x0 - tol && p.x() <= x1 + tol && p.y() >= y0 - tol && p.y() <= y1 + tol;
}

bool Rect::strictly_contains(const Vec2& p, double tol) const {
  return p.x() > x0 + tol && p.x() < x1 - tol && p.y() > y0 + tol && p.y() < y1 - tol;
}

bool Rect::overlaps(const Rect& r) const {
  return !(r.x1 < x0 || r.x0 > x1 || r.y1 < y0 || r.y0 > y1);
}

Rect bounding_union(const Rect& a, const Rect& b) {
  return {std::min(a.x0, b.x0), std::min(a.y0, b.y0), std::max(a.x1, b.x1), std::max(a.y1, b.y1)};
}

}  // namespace ufem
