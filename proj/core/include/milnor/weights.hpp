#pragma once

#include <array>
#include <optional>
#include <string_view>
#include <utility>
#include <vector>

namespace milnor {

// The seven three-strand diagrams with four vertices, no chord inside a
// strand and every strand touched. Primed chord diagrams reverse the order of
// the two chords on the doubled strand; T has one free trivalent vertex.
enum class Diagram { L, M, R, Lp, Mp, Rp, T };

inline constexpr std::array<Diagram, 7> kAllDiagrams = {
    Diagram::L, Diagram::M, Diagram::R, Diagram::Lp, Diagram::Mp, Diagram::Rp, Diagram::T};

std::string_view diagram_name(Diagram d);
// Accepts "L", "L'", "L′", "Lp" and so on; nullopt for unknown names.
std::optional<Diagram> parse_diagram(std::string_view name);

// Vertices are labelled 1..n. Interval vertices are listed per strand in
// strand order; edges are oriented from first to second.
struct TrivalentDiagram {
  int strands = 3;
  std::vector<std::vector<int>> interval_vertices;
  std::vector<int> free_vertices;
  std::vector<std::pair<int, int>> edges;
};

TrivalentDiagram diagram_structure(Diagram d);

// Interval vertices carry one edge, free vertices three, and no edge is a
// loop or stays on one strand.
bool well_formed(const TrivalentDiagram& diagram);

struct WeightTable {
  std::array<int, 7> values{1, -1, 1, 0, 0, 0, -1};

  int operator[](Diagram d) const { return values[static_cast<int>(d)]; }
  int& operator[](Diagram d) { return values[static_cast<int>(d)]; }
};

const WeightTable& mu123_weights();

int weight_mu123(Diagram d);
// Throws InputError on an unknown name.
int weight_mu123(std::string_view name);

// The three relations between T and the chord diagrams L, M, R.
bool stu_consistency(const WeightTable& table = mu123_weights());

}  // namespace milnor
