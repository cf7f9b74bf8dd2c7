#include "milnor/weights.hpp"

#include <map>
#include <string>

#include "milnor/errors.hpp"

namespace milnor {

std::string_view diagram_name(Diagram d) {
  static constexpr std::array<std::string_view, 7> names{"L", "M", "R", "L'", "M'", "R'", "T"};
  return names[static_cast<int>(d)];
}

std::optional<Diagram> parse_diagram(std::string_view name) {
  std::string key(name);
  for (const std::string_view prime : {"′", "p"}) {
    if (key.size() > prime.size() && key.ends_with(prime)) {
      key = key.substr(0, key.size() - prime.size()) + "'";
      break;
    }
  }
  for (const Diagram d : kAllDiagrams)
    if (diagram_name(d) == key) return d;
  return std::nullopt;
}

TrivalentDiagram diagram_structure(Diagram d) {
  switch (d) {
    case Diagram::L:
      return {3, {{1, 2}, {3}, {4}}, {}, {{3, 1}, {4, 2}}};
    case Diagram::M:
      return {3, {{1}, {2, 3}, {4}}, {}, {{1, 2}, {3, 4}}};
    case Diagram::R:
      return {3, {{1}, {2}, {3, 4}}, {}, {{1, 3}, {2, 4}}};
    case Diagram::Lp:
      return {3, {{1, 2}, {3}, {4}}, {}, {{1, 4}, {2, 3}}};
    case Diagram::Mp:
      return {3, {{1}, {2, 3}, {4}}, {}, {{2, 4}, {1, 3}}};
    case Diagram::Rp:
      return {3, {{1}, {2}, {3, 4}}, {}, {{1, 4}, {2, 3}}};
    case Diagram::T:
      return {3, {{1}, {2}, {3}}, {4}, {{1, 4}, {2, 4}, {3, 4}}};
  }
  throw InputError("unknown diagram");
}

bool well_formed(const TrivalentDiagram& diagram) {
  std::map<int, int> strand_of;  // -1 for free vertices
  for (int s = 0; s < static_cast<int>(diagram.interval_vertices.size()); ++s)
    for (const int v : diagram.interval_vertices[s])
      if (!strand_of.emplace(v, s).second) return false;
  for (const int v : diagram.free_vertices)
    if (!strand_of.emplace(v, -1).second) return false;
  std::map<int, int> valence;
  for (const auto& [a, b] : diagram.edges) {
    if (a == b || !strand_of.contains(a) || !strand_of.contains(b)) return false;
    if (strand_of[a] >= 0 && strand_of[a] == strand_of[b]) return false;
    ++valence[a];
    ++valence[b];
  }
  for (const auto& [v, s] : strand_of)
    if (valence[v] != (s < 0 ? 3 : 1)) return false;
  return true;
}

const WeightTable& mu123_weights() {
  static const WeightTable table;
  return table;
}

int weight_mu123(Diagram d) { return mu123_weights()[d]; }

int weight_mu123(std::string_view name) {
  const auto d = parse_diagram(name);
  if (!d) throw InputError("unknown diagram '" + std::string(name) + "'");
  return weight_mu123(*d);
}

bool stu_consistency(const WeightTable& table) {
  const int t = table[Diagram::T];
  return t == -table[Diagram::L] && t == table[Diagram::M] && t == -table[Diagram::R];
}

}  // namespace milnor
