#pragma once

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "milnor/diagram.hpp"
#include "milnor/string_link.hpp"

namespace milnor {

// Integer power series in non-commuting t_0..t_{k-1}, truncated above a fixed
// degree. Coefficients are stored per word, shortest words first, each length
// block in base-k lexicographic order.
class TruncatedSeries {
 public:
  TruncatedSeries(int letters, int degree);

  static TruncatedSeries one(int letters, int degree);
  // 1 + t_letter: the image of the meridian a_letter (0-based).
  static TruncatedSeries meridian(int letters, int degree, int letter);

  int letters() const { return letters_; }
  int degree() const { return degree_; }
  std::int64_t constant() const { return coeffs_[0]; }

  // Word given as 0-based letters; words longer than the degree read as 0.
  std::int64_t coefficient(std::span<const int> word) const;
  void set_coefficient(std::span<const int> word, std::int64_t value);

  std::span<const std::int64_t> raw() const { return coeffs_; }
  friend bool operator==(const TruncatedSeries&, const TruncatedSeries&) = default;

  friend TruncatedSeries series_mul(const TruncatedSeries& a, const TruncatedSeries& b);
  friend TruncatedSeries operator+(const TruncatedSeries& a, const TruncatedSeries& b);
  friend TruncatedSeries operator-(const TruncatedSeries& a, const TruncatedSeries& b);

 private:
  std::size_t offset(int length) const { return offsets_[length]; }
  std::size_t index(std::span<const int> word) const;

  int letters_;
  int degree_;
  std::vector<std::size_t> offsets_;  // offsets_[n] = first slot of length-n words
  std::vector<std::int64_t> coeffs_;
};

TruncatedSeries series_mul(const TruncatedSeries& a, const TruncatedSeries& b);
// Requires constant term 1; throws std::domain_error otherwise.
TruncatedSeries series_inv(const TruncatedSeries& a);
TruncatedSeries series_pow(const TruncatedSeries& a, int exponent);

struct ArcState {
  // arcs[strand][a]: image of the meridian of arc a.
  std::vector<std::vector<TruncatedSeries>> arcs;
  int sweeps = 0;  // sweeps run, including the final unchanged one
};

// Wirtinger propagation: crossing an undercrossing of sign ε under an arc
// with element g maps the incoming element m to g^-ε m g^ε. Sweeps stop at
// the first unchanged pass; more than degree + 1 sweeps is an error.
ArcState propagate(const LinkDiagram& diagram, int degree = 2);

// Product of g^ε over the undercrossings of strand j (1-based), read from
// the incoming tail, with the basepoint above the diagram.
TruncatedSeries longitude(const ArcState& state, const LinkDiagram& diagram, int j);

// μ_{i1...ir;j}: "1;2" is a pairwise linking number, "1,2;3" is μ123.
struct MuIndices {
  std::vector<int> word;  // 1-based strand labels
  int target = 0;         // 1-based
};

MuIndices parse_mu_indices(std::string_view text);

std::int64_t mu(const LinkDiagram& diagram, const MuIndices& indices, int degree = 2);

struct MagnusOptions {
  std::uint64_t seed = 0;
  double max_tilt = 0.2;  // radians from +z for the projection direction
  int max_attempts = 64;
  int degree = 2;
};

// Draws a generic projection direction near +z (seeded) and reads μ off the
// resulting diagram.
std::int64_t mu(const StringLink& link, const MuIndices& indices,
                const MagnusOptions& options = {});

LinkDiagram generic_projection(const StringLink& link, std::uint64_t seed, double max_tilt = 0.2,
                               int max_attempts = 64);

}  // namespace milnor
