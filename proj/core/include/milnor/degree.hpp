#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "milnor/string_link.hpp"
#include "milnor/weights.hpp"

namespace milnor {

using Directions = std::array<Vec3, 3>;

struct DegreeOptions {
  double max_angle = 0.3;      // caps around the poles for u1, u2, u3
  double min_margin = 0.05;    // required distance from the degenerate set
  double conditioning = 1e-8;  // smallest accepted singular-value ratio
  double endpoint_tolerance = 1e-9;
  int max_retries = 64;
  unsigned threads = 1;
};

// A target point (u1, u2, u3) for the configuration maps; u1 sits near the
// north pole, u2 and u3 near the south pole.
struct RegularValue {
  Directions u;
  double margin = 0.0;
  int attempt = 0;                  // retry index that produced it
  std::string component = "N,S,S";  // pole neighbourhoods of u1, u2, u3
};

// Solution of x_head(t) = x_tail(t') + s u on one pair of pieces.
struct PairSolution {
  int head_strand = 0;  // 0-based
  int tail_strand = 0;
  int head_piece = 0;
  int tail_piece = 0;
  double head_t = 0.0;
  double tail_t = 0.0;
  double distance = 0.0;  // s > 0
  // Orientation sign of the chord map (t_head, t_tail) -> S^2.
  int sign = 0;
  double conditioning = 0.0;
};

// One preimage of a regular value under the map of diagram L, M, R or T.
// Points are listed in vertex-label order x1..x4 (T: x1..x3, x4 is free).
struct PreimageSolution {
  Diagram diagram = Diagram::T;
  std::vector<int> strands;
  std::vector<int> pieces;
  std::vector<double> params;  // local parameter on each piece, in (0, 1)
  std::vector<double> radii;   // chord lengths, or r1..r3 for T
  Vec3 free_point = Vec3::Zero();
  int sign = 0;
  double conditioning = 0.0;

  // Global strand parameter piece + t, as used by the integrands.
  double global_param(int point) const { return pieces[point] + params[point]; }
};

// Angular distance of u from the set of target points hit by infinite faces:
// u1 on the half-equator x > 0, u2 on the equator, u3 on the half-equator
// x < 0, all three in the closed upper or all in the closed lower hemisphere,
// or any factor on a limit direction (± a tail direction).
double degenerate_margin(const StringLink& link, const Directions& u);

// Length at which tails are cut: 10 * diameter / sin(min elevation of u).
double tail_bound(const StringLink& link, const Directions& u);

// Throws DegeneracyError if some relevant linear system is near-singular or
// a solution sits on a piece boundary.
RegularValue pick_regular_value(const StringLink& link, std::uint64_t seed,
                                const DegreeOptions& options = {});

// Strand labels are 1-based. Solves x_a = x_b + s u over all piece pairs.
std::vector<PairSolution> solve_pair(const StringLink& link, int strand_a, int strand_b,
                                     const Vec3& u, const DegreeOptions& options = {},
                                     std::optional<double> tail_length = std::nullopt);

std::vector<PreimageSolution> solve_T(const StringLink& link, const RegularValue& value,
                                      const DegreeOptions& options = {});

std::vector<PreimageSolution> diagram_preimages(const StringLink& link, const RegularValue& value,
                                                Diagram d, const DegreeOptions& options = {});

// Signed preimage count N_d for d in {L, M, R, T}.
std::int64_t count_diagram(const StringLink& link, const RegularValue& value, Diagram d,
                           const DegreeOptions& options = {});

// Fixed global sign relating the weighted preimage count to μ123 as read
// from the Magnus expansion.
inline constexpr int kMu123Orientation = -1;

struct DegreeResult {
  std::int64_t value = 0;
  RegularValue regular_value;
  std::array<std::int64_t, 4> counts{};  // N_L, N_M, N_R, N_T
  std::vector<PreimageSolution> solutions;
};

DegreeResult mu123_degree(const StringLink& link, std::optional<RegularValue> value,
                          std::uint64_t seed, const DegreeOptions& options = {},
                          const WeightTable& weights = mu123_weights());

// Degree of the Gauss map of strands i and j (1-based) at a direction near +z.
std::int64_t lk_degree(const StringLink& link, int i, int j, std::uint64_t seed,
                       const DegreeOptions& options = {});

std::string solutions_to_json(const std::vector<PreimageSolution>& solutions);

}  // namespace milnor
