#include "milnor/link_io.hpp"

#include <fstream>
#include <json.hpp>
#include <sstream>

#include "milnor/errors.hpp"

namespace milnor {

using nlohmann::json;

std::string link_to_json(const StringLink& link) {
  json strands = json::array();
  for (const auto& s : link.strands()) {
    json verts = json::array();
    for (const auto& v : s.vertices) verts.push_back({v.x(), v.y(), v.z()});
    strands.push_back({{"vertices", std::move(verts)}});
  }
  const json doc = {{"k", link.k()}, {"R", link.radius()}, {"strands", std::move(strands)}};
  return doc.dump(1) + "\n";
}

StringLink link_from_json(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw InputError(std::string("link file is not valid JSON: ") + e.what());
  }
  try {
    const int k = doc.at("k").get<int>();
    const double R = doc.at("R").get<double>();
    const auto& arr = doc.at("strands");
    if (!arr.is_array() || static_cast<int>(arr.size()) != k)
      throw InputError("link file: 'strands' must list exactly k strands");
    std::vector<Polyline> strands;
    for (const auto& s : arr) {
      Polyline p;
      for (const auto& v : s.at("vertices")) {
        if (!v.is_array() || v.size() != 3)
          throw InputError("link file: vertices must be [x, y, z] triples");
        p.vertices.emplace_back(v[0].get<double>(), v[1].get<double>(), v[2].get<double>());
      }
      strands.push_back(std::move(p));
    }
    StringLink link(R, std::move(strands));
    require_valid(link);
    return link;
  } catch (const json::exception& e) {
    throw InputError(std::string("link file: ") + e.what());
  }
}

StringLink read_link_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open link file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return link_from_json(buf.str());
}

void write_link_file(const std::filesystem::path& path, const StringLink& link) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write " + path.string());
  out << link_to_json(link);
}

}  // namespace milnor
