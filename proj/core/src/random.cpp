#include "milnor/random.hpp"

#include <cmath>
#include <numbers>

namespace milnor {
namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const char c : s) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return h;
}

// Any unit vector orthogonal to n.
Eigen::Vector3d orthogonal_unit(const Eigen::Vector3d& n) {
  const Eigen::Vector3d trial =
      std::abs(n.x()) < 0.9 ? Eigen::Vector3d::UnitX() : Eigen::Vector3d::UnitY();
  return n.cross(trial).normalized();
}

}  // namespace

std::uint64_t substream_seed(std::uint64_t seed, std::string_view name, std::uint64_t index) {
  return splitmix64(splitmix64(seed ^ fnv1a(name)) + index);
}

Eigen::Vector3d uniform_on_cap(Rng& rng, const Eigen::Vector3d& center, double radius) {
  const double cos_max = std::cos(radius);
  const double c = 1.0 - uniform01(rng) * (1.0 - cos_max);
  const double s = std::sqrt(std::max(0.0, 1.0 - c * c));
  const double phi = 2.0 * std::numbers::pi * uniform01(rng);
  const Eigen::Vector3d n = center.normalized();
  const Eigen::Vector3d e1 = orthogonal_unit(n);
  const Eigen::Vector3d e2 = n.cross(e1);
  return c * n + s * (std::cos(phi) * e1 + std::sin(phi) * e2);
}

Eigen::Vector3d uniform_in_ball(Rng& rng, double radius) {
  for (;;) {
    const Eigen::Vector3d p(uniform(rng, -1, 1), uniform(rng, -1, 1), uniform(rng, -1, 1));
    const double n2 = p.squaredNorm();
    if (n2 < 1.0) return radius * p;
  }
}

}  // namespace milnor
