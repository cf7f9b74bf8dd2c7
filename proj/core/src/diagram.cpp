#include "milnor/diagram.hpp"

#include <algorithm>
#include <cmath>
#include <json.hpp>
#include <limits>
#include <tuple>

#include "milnor/detail_text.hpp"
#include "milnor/errors.hpp"

namespace milnor {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// A piece traversed as base + t * dir for t in [lo, hi]; tails are true rays.
struct Ray {
  Vec3 base;
  Vec3 dir;
  double lo;
  double hi;
  int strand;
  int piece;
};

std::vector<Ray> rays_of(const StringLink& link) {
  std::vector<Ray> out;
  for (int i = 0; i < link.k(); ++i) {
    const auto& v = link.strand(i).vertices;
    out.push_back({link.incoming_anchor(i), -link.incoming_direction(i), -kInf, 0.0, i, 0});
    for (std::size_t j = 0; j + 1 < v.size(); ++j)
      out.push_back({v[j], v[j + 1] - v[j], 0.0, 1.0, i, static_cast<int>(j + 1)});
    out.push_back({link.outgoing_anchor(i), link.outgoing_direction(i), 0.0, kInf, i,
                   static_cast<int>(v.size())});
  }
  return out;
}

struct Passage {
  int piece;
  double t;
  int crossing;
  bool under;
  auto key() const { return std::tie(piece, t); }
};

struct RawCrossing {
  int under, over, sign;
  int under_piece, over_piece;
  double under_t, over_t;
  Eigen::Vector2d at;
};

}  // namespace

std::vector<CrossingEvent> LinkDiagram::undercrossings(int index) const {
  std::vector<CrossingEvent> out;
  for (const auto& e : events.at(index))
    if (e.under == index && e.passes_under) out.push_back(e);
  return out;
}

std::size_t LinkDiagram::crossing_count() const {
  std::size_t n = 0;
  for (int i = 0; i < k; ++i) n += undercrossings(i).size();
  return n;
}

LinkDiagram project(const StringLink& link, const Vec3& direction) {
  const double scale = link.radius();
  const double tol = 1e-7 * scale;
  const Vec3 d = direction.normalized();
  const Vec3 e1 =
      (std::abs(d.x()) < 0.9 ? d.cross(Vec3::UnitX()) : d.cross(Vec3::UnitY())).normalized();
  const Vec3 e2 = d.cross(e1);
  auto flat = [&](const Vec3& p) { return Eigen::Vector2d(p.dot(e1), p.dot(e2)); };

  const auto rays = rays_of(link);
  for (const auto& r : rays) {
    const double len = r.dir.norm();
    if (flat(r.dir).norm() < 1e-6 * len)
      throw DegeneracyError("projection direction is parallel to a segment");
  }

  std::vector<RawCrossing> raw;
  for (std::size_t a = 0; a < rays.size(); ++a) {
    for (std::size_t b = a + 1; b < rays.size(); ++b) {
      const Ray& ra = rays[a];
      const Ray& rb = rays[b];
      if (ra.strand == rb.strand && std::abs(ra.piece - rb.piece) < 2) continue;
      const Eigen::Vector2d pa = flat(ra.base), da = flat(ra.dir);
      const Eigen::Vector2d pb = flat(rb.base), db = flat(rb.dir);
      const Eigen::Vector2d w = pb - pa;
      const double cross = da.x() * db.y() - da.y() * db.x();
      if (std::abs(cross) <= 1e-10 * da.norm() * db.norm()) {
        const double off = std::abs(da.x() * w.y() - da.y() * w.x()) / da.norm();
        if (off > tol) continue;
        // Collinear projections: overlapping parameter ranges are degenerate.
        const double s0 = w.dot(da) / da.squaredNorm();
        const double s1 = (w + db).dot(da) / da.squaredNorm();
        const double lo = std::isinf(rb.lo) ? -kInf : std::min(s0, s1);
        const double hi = std::isinf(rb.hi) ? kInf : std::max(s0, s1);
        if (lo <= ra.hi && hi >= ra.lo)
          throw DegeneracyError("projection overlaps two collinear pieces");
        continue;
      }
      const double t = (w.x() * db.y() - w.y() * db.x()) / cross;
      const double u = (w.x() * da.y() - w.y() * da.x()) / cross;
      const double ta = tol / da.norm();
      const double tb = tol / db.norm();
      if (t < ra.lo - ta || t > ra.hi + ta || u < rb.lo - tb || u > rb.hi + tb) continue;
      if (std::abs(t - ra.lo) <= ta || std::abs(t - ra.hi) <= ta || std::abs(u - rb.lo) <= tb ||
          std::abs(u - rb.hi) <= tb)
        throw DegeneracyError("a crossing lies on a vertex of the projection");
      const Vec3 qa = ra.base + t * ra.dir;
      const Vec3 qb = rb.base + u * rb.dir;
      const double ha = qa.dot(d), hb = qb.dot(d);
      if (std::abs(ha - hb) <= tol)
        throw DegeneracyError("strands nearly intersect along the projection direction");
      const bool a_over = ha > hb;
      const Ray& over = a_over ? ra : rb;
      const Ray& under = a_over ? rb : ra;
      const double s = over.dir.normalized().cross(under.dir.normalized()).dot(d);
      raw.push_back({under.strand, over.strand, s > 0 ? 1 : -1, under.piece, over.piece,
                     a_over ? u : t, a_over ? t : u, pa + t * da});
    }
  }
  for (std::size_t a = 0; a < raw.size(); ++a)
    for (std::size_t b = a + 1; b < raw.size(); ++b)
      if ((raw[a].at - raw[b].at).norm() <= tol)
        throw DegeneracyError("projection has a triple point");

  const int k = link.k();
  std::vector<std::vector<Passage>> passages(k);
  for (std::size_t c = 0; c < raw.size(); ++c) {
    const auto& x = raw[c];
    passages[x.under].push_back({x.under_piece, x.under_t, static_cast<int>(c), true});
    passages[x.over].push_back({x.over_piece, x.over_t, static_cast<int>(c), false});
  }
  for (auto& p : passages)
    std::sort(p.begin(), p.end(),
              [](const Passage& a, const Passage& b) { return a.key() < b.key(); });

  // Number of undercrossings of `strand` strictly before the passage.
  auto arc_at = [&](int strand, const Passage& at) {
    int n = 0;
    for (const auto& p : passages[strand]) {
      if (!(p.key() < at.key())) break;
      if (p.under) ++n;
    }
    return n;
  };

  LinkDiagram diagram;
  diagram.direction = d;
  diagram.k = k;
  diagram.events.resize(k);
  for (int i = 0; i < k; ++i) {
    for (const auto& p : passages[i]) {
      const auto& x = raw[p.crossing];
      const Passage over_here{x.over_piece, x.over_t, p.crossing, false};
      diagram.events[i].push_back({x.under, x.over, x.sign, arc_at(x.over, over_here), p.under});
    }
  }
  return diagram;
}

int crossing_lk(const LinkDiagram& diagram, int i, int j) {
  if (i == j || i < 1 || j < 1 || i > diagram.k || j > diagram.k)
    throw InputError(detail::text("invalid strand pair (", i, ",", j, ")"));
  int total = 0;
  for (const int s : {i - 1, j - 1})
    for (const auto& e : diagram.undercrossings(s))
      if (e.over == (s == i - 1 ? j - 1 : i - 1)) total += e.sign;
  return total / 2;
}

using nlohmann::json;

std::string diagram_to_json(const LinkDiagram& diagram) {
  json strands = json::array();
  for (const auto& list : diagram.events) {
    json events = json::array();
    for (const auto& e : list)
      events.push_back({{"under", e.under + 1},
                        {"over", e.over + 1},
                        {"sign", e.sign},
                        {"over_arc", e.over_arc},
                        {"passes_under", e.passes_under}});
    strands.push_back({{"events", std::move(events)}});
  }
  const auto& d = diagram.direction;
  const json doc = {
      {"k", diagram.k}, {"direction", {d.x(), d.y(), d.z()}}, {"strands", std::move(strands)}};
  return doc.dump(1) + "\n";
}

LinkDiagram diagram_from_json(std::string_view text) {
  try {
    const json doc = json::parse(text);
    LinkDiagram diagram;
    diagram.k = doc.at("k").get<int>();
    if (doc.contains("direction")) {
      const auto& d = doc["direction"];
      diagram.direction = Vec3(d.at(0).get<double>(), d.at(1).get<double>(), d.at(2).get<double>());
    }
    const auto& strands = doc.at("strands");
    if (static_cast<int>(strands.size()) != diagram.k)
      throw InputError("diagram: 'strands' must list exactly k strands");
    diagram.events.resize(diagram.k);
    for (int i = 0; i < diagram.k; ++i) {
      const auto& s = strands[i];
      const bool bare = !s.contains("events");
      for (const auto& e : bare ? s.at("undercrossings") : s.at("events")) {
        CrossingEvent ev;
        ev.under = bare ? i : e.at("under").get<int>() - 1;
        ev.over = e.at("over").get<int>() - 1;
        ev.sign = e.at("sign").get<int>();
        ev.over_arc = e.at("over_arc").get<int>();
        ev.passes_under = bare || e.value("passes_under", ev.under == i);
        if (ev.under < 0 || ev.under >= diagram.k || ev.over < 0 || ev.over >= diagram.k ||
            (ev.sign != 1 && ev.sign != -1) || ev.over_arc < 0)
          throw InputError("diagram: malformed crossing record");
        diagram.events[i].push_back(ev);
      }
    }
    for (int i = 0; i < diagram.k; ++i)
      for (const auto& e : diagram.events[i])
        if (e.over_arc > static_cast<int>(diagram.undercrossings(e.over).size()))
          throw InputError("diagram: over_arc exceeds the over strand's arc count");
    return diagram;
  } catch (const json::exception& e) {
    throw InputError(std::string("diagram: ") + e.what());
  }
}

}  // namespace milnor
