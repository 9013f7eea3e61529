#pragma once

#include <cmath>
#include <functional>
#include <string>

namespace ifem {

struct Point2 {
  double x = 0.0;
  double y = 0.0;

  friend constexpr Point2 operator+(Point2 a, Point2 b) { return {a.x + b.x, a.y + b.y}; }
  friend constexpr Point2 operator-(Point2 a, Point2 b) { return {a.x - b.x, a.y - b.y}; }
  friend constexpr Point2 operator*(double s, Point2 a) { return {s * a.x, s * a.y}; }
  friend constexpr Point2 operator*(Point2 a, double s) { return {s * a.x, s * a.y}; }
  friend constexpr bool operator==(Point2 a, Point2 b) = default;
};

inline constexpr double dot(Point2 a, Point2 b) { return a.x * b.x + a.y * b.y; }
inline constexpr double cross(Point2 a, Point2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Point2 a) { return std::hypot(a.x, a.y); }
inline double distance(Point2 a, Point2 b) { return norm(a - b); }

/// Which side of the interface a triangle (or a point) belongs to.
enum class RegionTag : unsigned char { Minus = 0, Plus = 1 };

inline constexpr RegionTag other(RegionTag r) {
  return r == RegionTag::Minus ? RegionTag::Plus : RegionTag::Minus;
}
const char* to_string(RegionTag r);

/// Axis-aligned rectangle [x0, x1] x [y0, y1].
struct Rect {
  double x0 = 0.0, y0 = 0.0, x1 = 1.0, y1 = 1.0;
  double width() const { return x1 - x0; }
  double height() const { return y1 - y0; }
};

/// Analytic level set: negative on the minus side, positive on the plus side.
struct LevelSet {
  std::string name;
  std::function<double(Point2)> value;
  std::function<Point2(Point2)> gradient;
};

/// phi = |z - c|^2 - r^2
LevelSet circle_level_set(Point2 center, double radius);
/// phi = r - 1/2 - sin(5 theta)/7, the five-petal flower.
LevelSet flower_level_set();
/// phi = -min(x - c.x, y - c.y): minus side is the open quadrant {x > c.x, y > c.y}.
LevelSet quadrant_level_set(Point2 corner);
/// phi = (x - c.x)(y - c.y): plus side is the first and third quadrants.
LevelSet cross_level_set(Point2 center);
/// phi = (z - p) . n for a unit normal n; plus side is where n points.
LevelSet line_level_set(Point2 p, Point2 normal);

inline constexpr double kProjectionTol = 1e-12;

struct ProjectionOptions {
  double tol = kProjectionTol;
  int max_iter = 50;
  double damping = 0.5;
};

double signed_value(const LevelSet& ls, Point2 z);

/// Newton iteration along grad(phi) from z until |phi| <= tol. Steps that
/// increase |phi| are halved. Throws NoConvergence.
Point2 project_to_interface(const LevelSet& ls, Point2 z, const ProjectionOptions& opts = {});

}  // namespace ifem
