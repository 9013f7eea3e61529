#include "ifem/geometry.hpp"

#include <algorithm>
#include <sstream>

#include "ifem/exceptions.hpp"

namespace ifem {

const char* to_string(RegionTag r) { return r == RegionTag::Minus ? "minus" : "plus"; }

LevelSet circle_level_set(Point2 center, double radius) {
  LevelSet ls;
  ls.name = "circle";
  const double r2 = radius * radius;
  ls.value = [center, r2](Point2 z) {
    const Point2 d = z - center;
    return d.x * d.x + d.y * d.y - r2;
  };
  ls.gradient = [center](Point2 z) { return 2.0 * (z - center); };
  return ls;
}

LevelSet flower_level_set() {
  LevelSet ls;
  ls.name = "flower";
  ls.value = [](Point2 z) {
    const double r = std::hypot(z.x, z.y);
    const double theta = std::atan2(z.y, z.x);
    return r - 0.5 - std::sin(5.0 * theta) / 7.0;
  };
  ls.gradient = [](Point2 z) {
    const double r2 = z.x * z.x + z.y * z.y;
    const double r = std::sqrt(r2);
    if (r == 0.0) return Point2{0.0, 0.0};
    const double theta = std::atan2(z.y, z.x);
    const double c = 5.0 / 7.0 * std::cos(5.0 * theta);
    // d(theta)/dx = -y/r^2, d(theta)/dy = x/r^2
    return Point2{z.x / r + c * z.y / r2, z.y / r - c * z.x / r2};
  };
  return ls;
}

LevelSet quadrant_level_set(Point2 corner) {
  LevelSet ls;
  ls.name = "quadrant";
  ls.value = [corner](Point2 z) { return -std::min(z.x - corner.x, z.y - corner.y); };
  ls.gradient = [corner](Point2 z) {
    return (z.x - corner.x <= z.y - corner.y) ? Point2{-1.0, 0.0} : Point2{0.0, -1.0};
  };
  return ls;
}

LevelSet cross_level_set(Point2 center) {
  LevelSet ls;
  ls.name = "cross";
  ls.value = [center](Point2 z) { return (z.x - center.x) * (z.y - center.y); };
  ls.gradient = [center](Point2 z) { return Point2{z.y - center.y, z.x - center.x}; };
  return ls;
}

LevelSet line_level_set(Point2 p, Point2 normal) {
  LevelSet ls;
  ls.name = "line";
  ls.value = [p, normal](Point2 z) { return dot(z - p, normal); };
  ls.gradient = [normal](Point2) { return normal; };
  return ls;
}

double signed_value(const LevelSet& ls, Point2 z) { return ls.value(z); }

Point2 project_to_interface(const LevelSet& ls, Point2 z, const ProjectionOptions& opts) {
  Point2 p = z;
  double phi = ls.value(p);
  for (int it = 0; it < opts.max_iter; ++it) {
    if (std::abs(phi) <= opts.tol) return p;
    const Point2 g = ls.gradient(p);
    const double g2 = dot(g, g);
    if (!(g2 > 0.0) || !std::isfinite(g2)) break;
    const Point2 step = (phi / g2) * g;
    double scale = 1.0;
    Point2 q = p - step;
    double phi_q = ls.value(q);
    // Halve the step while it overshoots.
    for (int k = 0; k < 40 && !(std::abs(phi_q) < std::abs(phi)); ++k) {
      scale *= opts.damping;
      q = p - scale * step;
      phi_q = ls.value(q);
    }
    if (!(std::abs(phi_q) < std::abs(phi))) break;
    p = q;
    phi = phi_q;
  }
  if (std::abs(phi) <= opts.tol) return p;
  std::ostringstream msg;
  msg.precision(17);
  msg << "projection onto " << ls.name << " interface did not converge from (" << z.x << ", "
      << z.y << "), |phi| = " << std::abs(phi);
  throw NoConvergence(msg.str());
}

}  // namespace ifem
