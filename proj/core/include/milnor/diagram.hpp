#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "milnor/string_link.hpp"

namespace milnor {

// One passage of a strand through a crossing. Strand fields are 0-based.
// `over_arc` indexes the over strand's arcs; arc a of a strand runs between
// its a-th and (a+1)-th undercrossing, arc 0 starting at the incoming tail.
struct CrossingEvent {
  int under = 0;
  int over = 0;
  int sign = 1;
  int over_arc = 0;
  bool passes_under = true;  // this passage is the under one (matters when under == over)
  friend bool operator==(const CrossingEvent&, const CrossingEvent&) = default;
};

// Per strand, every crossing it takes part in (as under or over strand) in
// travel order. Sign = sign det(t_over, t_under, p_over - p_under) for a
// viewer looking along -direction.
struct LinkDiagram {
  Vec3 direction = Vec3::UnitZ();
  int k = 0;
  std::vector<std::vector<CrossingEvent>> events;

  std::vector<CrossingEvent> undercrossings(int index) const;
  std::size_t crossing_count() const;
};

// Throws DegeneracyError when `direction` is not generic for the link.
LinkDiagram project(const StringLink& link, const Vec3& direction);

// Half the signed count of crossings between strands i and j (1-based).
int crossing_lk(const LinkDiagram& diagram, int i, int j);

std::string diagram_to_json(const LinkDiagram& diagram);

// Accepts either full "events" lists or bare "undercrossings" lists; strand
// numbers in JSON are 1-based, arcs 0-based.
LinkDiagram diagram_from_json(std::string_view text);

}  // namespace milnor
