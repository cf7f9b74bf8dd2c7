#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace milnor {

using Vec3 = Eigen::Vector3d;

// Strand labels in the public API are 1-based (lk(1,2), mu "1,2;3");
// container indices are 0-based.
struct Polyline {
  std::vector<Vec3> vertices;
};

// k piecewise-linear strands. Strand i enters from infinity along the ray
// {R v_i^- + s v_i^-, s >= 0}, travelling toward its anchor R v_i^-, and
// leaves along {R v_i^+ + s v_i^+}. v_i^± = unit((k+1)/2 - i, ±1, 0), so
// the tails are radial and lie in the plane z = 0.
class StringLink {
 public:
  StringLink(double radius, std::vector<Polyline> strands);

  int k() const { return static_cast<int>(strands_.size()); }
  double radius() const { return radius_; }
  const std::vector<Polyline>& strands() const { return strands_; }
  const Polyline& strand(int index) const { return strands_.at(index); }

  // Escape directions of the incoming and outgoing tails (0-based index).
  Vec3 incoming_direction(int index) const;
  Vec3 outgoing_direction(int index) const;
  Vec3 incoming_anchor(int index) const { return radius_ * incoming_direction(index); }
  Vec3 outgoing_anchor(int index) const { return radius_ * outgoing_direction(index); }

  std::size_t segment_count() const;

 private:
  double radius_;
  std::vector<Polyline> strands_;
};

Vec3 tail_direction(int k, int index, int side);

// A straight piece of a strand, traversed from `start` to `end`. Piece 0 is
// the incoming tail truncated at some length, pieces 1..n are the polyline
// segments, piece n+1 is the truncated outgoing tail.
struct Segment {
  Vec3 start;
  Vec3 end;
  int strand = 0;
  int piece = 0;

  Vec3 delta() const { return end - start; }
  Vec3 point(double t) const { return start + t * (end - start); }
  double length() const { return (end - start).norm(); }
};

std::vector<Segment> strand_pieces(const StringLink& link, int index, double tail_length);

// Closest distance between two segments.
double segment_distance(const Segment& a, const Segment& b);

struct Diagnostics {
  bool ok = true;
  std::string violation;   // first violation found, empty when ok
  double clearance = 0.0;  // min distance between non-adjacent pieces
};

struct ValidateOptions {
  double embedding_margin = 1e-6;  // relative to R
  double anchor_tolerance = 1e-9;  // relative to R
};

Diagnostics validate(const StringLink& link, const ValidateOptions& options = {});

// Throws InputError carrying the first violation.
void require_valid(const StringLink& link, const ValidateOptions& options = {});

// Minimum distance between non-adjacent pieces (tails cut at 4R).
double clearance(const StringLink& link);

// Subdivides every interior segment into pieces of length <= h.
StringLink resample(const StringLink& link, double max_length);

// Moves each interior vertex by less than `amplitude`. Requires amplitude
// below half the clearance, which keeps the result isotopic to the input.
StringLink perturb(const StringLink& link, double amplitude, std::uint64_t seed);

}  // namespace milnor
