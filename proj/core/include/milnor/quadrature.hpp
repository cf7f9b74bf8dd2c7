#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "milnor/random.hpp"
#include "milnor/string_link.hpp"
#include "milnor/weights.hpp"

namespace milnor {

// Density c (1 - (θ/ρ)²)² in the angular distance θ < ρ from `center`, zero
// beyond. c is fixed at construction so the density integrates to 1.
class BumpForm {
 public:
  BumpForm(const Vec3& center, double radius);

  double density(const Vec3& u) const;
  // Draws a direction distributed with this density.
  Vec3 sample(Rng& rng) const;

  const Vec3& center() const { return center_; }
  double radius() const { return radius_; }
  double normalization() const { return scale_; }
  double cap_area() const;

 private:
  Vec3 center_;
  double radius_;
  double scale_;
};

using FormTriple = std::array<BumpForm, 3>;

// ω1 around +z, ω2 and ω3 around -z.
FormTriple default_forms(double radius = 0.3);

// Global strand parameters: τ in [p, p + 1] lies on piece p. Tails are cut at
// `tail_length`.
class Configuration {
 public:
  Configuration(const StringLink& link, double tail_length);

  int strands() const { return static_cast<int>(pieces_.size()); }
  int piece_count(int strand) const { return static_cast<int>(pieces_[strand].size()); }
  const Segment& piece(int strand, int p) const { return pieces_[strand][p]; }
  Vec3 point(int strand, double tau) const;
  Vec3 tangent(int strand, double tau) const;
  double tail_length() const { return tail_length_; }
  double radius() const { return radius_; }

 private:
  int locate(int strand, double tau) const;
  std::vector<std::vector<Segment>> pieces_;
  double tail_length_;
  double radius_;
};

// Tail cut used for integration: beyond it no chord reaches the supports.
double integration_tail_length(const StringLink& link, const FormTriple& forms);

// Pulled-back form of diagram d at `params`: for L, M, R the four strand
// parameters of x1..x4; for T (τ1, τ2, τ3, x4).
double integrand(const Configuration& config, Diagram d, const FormTriple& forms,
                 std::span<const double> params);
double integrand(const StringLink& link, Diagram d, const FormTriple& forms,
                 std::span<const double> params);

struct IntegralEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::uint64_t samples = 0;
  std::uint64_t seed = 0;
};

enum class Sampling {
  Importance,  // cells whose chords can reach the supports, stratified
  Uniform,     // uniform over whole pieces that pass the cone test, no strata
};

struct McOptions {
  std::uint64_t samples = 100000;
  std::uint64_t seed = 0;
  unsigned threads = 0;
  std::size_t chunk = 4096;
  Sampling sampling = Sampling::Importance;
};

IntegralEstimate mc_estimate(const StringLink& link, Diagram d, const FormTriple& forms,
                             const McOptions& options);

struct IntegralResult {
  IntegralEstimate total;
  std::array<IntegralEstimate, 4> diagrams;  // L, M, R, T
};

// kMu123Orientation · Σ W(d) I_d with independent streams per diagram.
IntegralResult mu123_integral(const StringLink& link, const FormTriple& forms,
                              const McOptions& options,
                              const WeightTable& weights = mu123_weights());

// Rows "N,quantity,estimate,stderr" for each N and each of L, M, R, T, mu123.
std::string convergence_csv(const StringLink& link, const FormTriple& forms,
                            std::span<const std::uint64_t> sample_counts, const McOptions& options);

}  // namespace milnor
