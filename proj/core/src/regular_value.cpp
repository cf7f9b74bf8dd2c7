#include <algorithm>
#include <cmath>
#include <numbers>

#include "cone.hpp"
#include "milnor/degree.hpp"

namespace milnor {
namespace {

constexpr double kHalfPi = 0.5 * std::numbers::pi;

double elevation(const Vec3& u) { return std::asin(std::clamp(u.z(), -1.0, 1.0)); }

// Distance to the half of the equator with x of the given sign.
double to_half_equator(const Vec3& u, int x_sign) {
  const double horizontal = std::hypot(u.x(), u.y());
  if (horizontal == 0.0) return kHalfPi;
  if (x_sign * u.x() > 0.0) return std::abs(elevation(u));
  const Vec3 end(0.0, u.y() >= 0.0 ? 1.0 : -1.0, 0.0);
  return detail::angle_between(u, end);
}

double to_upper(const Vec3& u) { return std::max(0.0, -elevation(u)); }
double to_lower(const Vec3& u) { return std::max(0.0, elevation(u)); }

}  // namespace

double degenerate_margin(const StringLink& link, const Directions& raw) {
  Directions u;
  for (int i = 0; i < 3; ++i) u[i] = raw[i].normalized();
  double margin =
      std::min({to_half_equator(u[0], +1), std::abs(elevation(u[1])), to_half_equator(u[2], -1)});
  margin = std::min(margin, std::max({to_upper(u[0]), to_upper(u[1]), to_upper(u[2])}));
  margin = std::min(margin, std::max({to_lower(u[0]), to_lower(u[1]), to_lower(u[2])}));
  // A single point escaping along a tail drives every chord through it to
  // plus or minus that tail's direction.
  for (int i = 0; i < link.k(); ++i) {
    for (const Vec3& v : {link.incoming_direction(i), link.outgoing_direction(i)}) {
      for (const Vec3& w : u) {
        margin = std::min(margin, detail::angle_between(w, v));
        margin = std::min(margin, detail::angle_between(w, -v));
      }
    }
  }
  return margin;
}

double tail_bound(const StringLink& link, const Directions& u) {
  double lowest = kHalfPi;
  for (const auto& w : u) lowest = std::min(lowest, std::abs(elevation(w.normalized())));
  return 10.0 * 2.0 * link.radius() / std::max(std::sin(lowest), 1e-3);
}

}  // namespace milnor
