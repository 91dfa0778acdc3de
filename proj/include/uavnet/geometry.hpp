#pragma once

#include <algorithm>
#include <cmath>

namespace uavnet {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
  Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
  Vec2 operator*(double s) const { return {x * s, y * s}; }
  bool operator==(const Vec2& o) const { return x == o.x && y == o.y; }

  double norm() const { return std::hypot(x, y); }
};

inline double distance(const Vec2& a, const Vec2& b) { return (a - b).norm(); }

inline bool in_square(const Vec2& p, double side) {
  return p.x >= 0.0 && p.x <= side && p.y >= 0.0 && p.y <= side;
}

inline Vec2 clamp_to_square(const Vec2& p, double side) {
  return {std::clamp(p.x, 0.0, side), std::clamp(p.y, 0.0, side)};
}

}  // namespace uavnet
