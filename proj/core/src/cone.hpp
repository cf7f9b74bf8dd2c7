#pragma once

#include <cmath>
#include <numbers>

#include "milnor/string_link.hpp"

namespace milnor::detail {

// Distance from the origin to the parallelogram corner + [0,1] p + [0,1] q.
inline double origin_to_parallelogram(const Eigen::Vector2d& corner, const Eigen::Vector2d& p,
                                      const Eigen::Vector2d& q) {
  const double cross = p.x() * q.y() - p.y() * q.x();
  if (std::abs(cross) > 1e-14 * (p.squaredNorm() + q.squaredNorm())) {
    const double a = (q.x() * corner.y() - q.y() * corner.x()) / cross;
    const double b = (corner.x() * p.y() - corner.y() * p.x()) / cross;
    if (a >= 0 && a <= 1 && b >= 0 && b <= 1) return 0.0;
  }
  auto to_edge = [](const Eigen::Vector2d& start, const Eigen::Vector2d& dir) {
    const double len2 = dir.squaredNorm();
    const double s = len2 > 0 ? std::clamp(-start.dot(dir) / len2, 0.0, 1.0) : 0.0;
    return (start + s * dir).norm();
  };
  return std::min(
      {to_edge(corner, p), to_edge(corner, q), to_edge(corner + p, q), to_edge(corner + q, p)});
}

// Conservative test: can x_b - x_a, for x_a on segment a and x_b on segment
// b, point within `angle` of the pole `pole_sign` * z?
inline bool difference_meets_cone(const Vec3& a0, const Vec3& a1, const Vec3& b0, const Vec3& b1,
                                  double angle, int pole_sign) {
  if (angle >= 0.5 * std::numbers::pi) return true;
  const Vec3 corner3 = b0 - a0;
  const Vec3 p3 = b1 - b0;
  const Vec3 q3 = a0 - a1;
  const double s = pole_sign;
  const double top = s * corner3.z() + std::max(0.0, s * p3.z()) + std::max(0.0, s * q3.z());
  if (top <= 0.0) return false;
  const double gap = origin_to_parallelogram(corner3.head<2>(), p3.head<2>(), q3.head<2>());
  return gap <= std::tan(angle) * top * (1.0 + 1e-9) + 1e-12;
}

inline double angle_between(const Vec3& a, const Vec3& b) {
  return std::atan2(a.cross(b).norm(), a.dot(b));
}

}  // namespace milnor::detail
