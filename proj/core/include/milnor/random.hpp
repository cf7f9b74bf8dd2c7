#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>
#include <cstdint>
#include <random>
#include <string_view>

namespace milnor {

using Rng = std::mt19937_64;

// Derives an independent seed for a named consumer of randomness, so that
// e.g. the projection stream does not shift when the sample count changes.
std::uint64_t substream_seed(std::uint64_t seed, std::string_view name, std::uint64_t index = 0);

inline Rng make_rng(std::uint64_t seed, std::string_view name, std::uint64_t index = 0) {
  return Rng{substream_seed(seed, name, index)};
}

// Uniform on [0, 1) with 53 random bits; identical across standard libraries.
inline double uniform01(Rng& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

inline double uniform(Rng& rng, double lo, double hi) { return lo + (hi - lo) * uniform01(rng); }

inline std::uint64_t uniform_index(Rng& rng, std::uint64_t n) {
  return static_cast<std::uint64_t>(uniform01(rng) * static_cast<double>(n)) % n;
}

// Uniform on the spherical cap of the given angular radius around `center`.
Eigen::Vector3d uniform_on_cap(Rng& rng, const Eigen::Vector3d& center, double radius);

// Uniform in the open ball of the given radius.
Eigen::Vector3d uniform_in_ball(Rng& rng, double radius);

}  // namespace milnor
