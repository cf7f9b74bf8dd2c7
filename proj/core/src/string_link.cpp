#include "milnor/string_link.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "milnor/detail_text.hpp"
#include "milnor/errors.hpp"
#include "milnor/random.hpp"

namespace milnor {

StringLink::StringLink(double radius, std::vector<Polyline> strands)
    : radius_(radius), strands_(std::move(strands)) {
  if (!(radius_ > 0.0)) throw InputError("link radius must be positive");
}

Vec3 tail_direction(int k, int index, int side) {
  const double x = 0.5 * (k + 1) - (index + 1);
  return Vec3(x, side, 0.0).normalized();
}

Vec3 StringLink::incoming_direction(int index) const { return tail_direction(k(), index, -1); }

Vec3 StringLink::outgoing_direction(int index) const { return tail_direction(k(), index, +1); }

std::size_t StringLink::segment_count() const {
  std::size_t n = 0;
  for (const auto& s : strands_) n += s.vertices.size() - 1;
  return n;
}

std::vector<Segment> strand_pieces(const StringLink& link, int index, double tail_length) {
  const auto& v = link.strand(index).vertices;
  std::vector<Segment> out;
  out.reserve(v.size() + 1);
  const Vec3 in = link.incoming_anchor(index);
  out.push_back({in + tail_length * link.incoming_direction(index), in, index, 0});
  for (std::size_t i = 0; i + 1 < v.size(); ++i)
    out.push_back({v[i], v[i + 1], index, static_cast<int>(i + 1)});
  const Vec3 o = link.outgoing_anchor(index);
  out.push_back(
      {o, o + tail_length * link.outgoing_direction(index), index, static_cast<int>(v.size())});
  return out;
}

double segment_distance(const Segment& a, const Segment& b) {
  const Vec3 d1 = a.delta();
  const Vec3 d2 = b.delta();
  const Vec3 r = a.start - b.start;
  const double aa = d1.squaredNorm();
  const double ee = d2.squaredNorm();
  const double f = d2.dot(r);
  double s = 0.0;
  double t = 0.0;
  if (aa <= 0.0 && ee <= 0.0) return r.norm();
  if (aa <= 0.0) {
    t = std::clamp(f / ee, 0.0, 1.0);
  } else {
    const double c = d1.dot(r);
    if (ee <= 0.0) {
      s = std::clamp(-c / aa, 0.0, 1.0);
    } else {
      const double bb = d1.dot(d2);
      const double denom = aa * ee - bb * bb;
      s = denom > 0.0 ? std::clamp((bb * f - c * ee) / denom, 0.0, 1.0) : 0.0;
      t = (bb * s + f) / ee;
      if (t < 0.0) {
        t = 0.0;
        s = std::clamp(-c / aa, 0.0, 1.0);
      } else if (t > 1.0) {
        t = 1.0;
        s = std::clamp((bb - c) / aa, 0.0, 1.0);
      }
    }
  }
  return (a.point(s) - b.point(t)).norm();
}

namespace {

std::vector<Segment> all_pieces(const StringLink& link, double tail_length) {
  std::vector<Segment> all;
  for (int i = 0; i < link.k(); ++i) {
    auto p = strand_pieces(link, i, tail_length);
    all.insert(all.end(), p.begin(), p.end());
  }
  return all;
}

struct Box {
  Vec3 lo, hi;
};

Box bounds(const Segment& s) { return {s.start.cwiseMin(s.end), s.start.cwiseMax(s.end)}; }

double box_gap(const Box& a, const Box& b) {
  const Vec3 gap = (a.lo - b.hi).cwiseMax(b.lo - a.hi).cwiseMax(0.0);
  return gap.norm();
}

}  // namespace

double clearance(const StringLink& link) {
  const auto pieces = all_pieces(link, 4.0 * link.radius());
  std::vector<Box> boxes;
  boxes.reserve(pieces.size());
  for (const auto& p : pieces) boxes.push_back(bounds(p));
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < pieces.size(); ++i) {
    for (std::size_t j = i + 1; j < pieces.size(); ++j) {
      if (pieces[i].strand == pieces[j].strand && std::abs(pieces[i].piece - pieces[j].piece) < 2)
        continue;
      if (box_gap(boxes[i], boxes[j]) >= best) continue;
      best = std::min(best, segment_distance(pieces[i], pieces[j]));
    }
  }
  return best;
}

Diagnostics validate(const StringLink& link, const ValidateOptions& options) {
  Diagnostics diag;
  auto fail = [&](std::string msg) {
    diag.ok = false;
    diag.violation = std::move(msg);
    return diag;
  };
  const double R = link.radius();
  if (link.k() < 2) return fail("a string link needs at least 2 strands");
  for (int i = 0; i < link.k(); ++i) {
    const auto& v = link.strand(i).vertices;
    if (v.size() < 2) return fail(detail::text("strand ", i + 1, " has fewer than 2 vertices"));
    for (const auto& p : v)
      if (!p.allFinite()) return fail(detail::text("strand ", i + 1, " has a non-finite vertex"));
    if ((v.front() - link.incoming_anchor(i)).norm() > options.anchor_tolerance * R)
      return fail(detail::text("strand ", i + 1, " does not start at its incoming anchor"));
    if ((v.back() - link.outgoing_anchor(i)).norm() > options.anchor_tolerance * R)
      return fail(detail::text("strand ", i + 1, " does not end at its outgoing anchor"));
    for (std::size_t j = 1; j + 1 < v.size(); ++j)
      if (!(v[j].norm() < R))
        return fail(detail::text("strand ", i + 1, " vertex ", j, " is not inside the ball"));
    for (std::size_t j = 0; j + 1 < v.size(); ++j)
      if ((v[j + 1] - v[j]).norm() <= options.embedding_margin * R)
        return fail(detail::text("strand ", i + 1, " segment ", j, " has zero length"));
  }
  std::vector<Vec3> dirs;
  for (int i = 0; i < link.k(); ++i) {
    dirs.push_back(link.incoming_direction(i));
    dirs.push_back(link.outgoing_direction(i));
  }
  for (std::size_t a = 0; a < dirs.size(); ++a)
    for (std::size_t b = a + 1; b < dirs.size(); ++b)
      if ((dirs[a] - dirs[b]).norm() < 1e-12) return fail("tail directions coincide");
  diag.clearance = clearance(link);
  if (!(diag.clearance > options.embedding_margin * R))
    return fail(detail::text("strands come within ", diag.clearance, " of each other"));
  return diag;
}

void require_valid(const StringLink& link, const ValidateOptions& options) {
  const auto diag = validate(link, options);
  if (!diag.ok) throw InputError("invalid string link: " + diag.violation);
}

StringLink resample(const StringLink& link, double max_length) {
  if (!(max_length > 0.0)) throw InputError("resample length must be positive");
  std::vector<Polyline> out;
  for (const auto& s : link.strands()) {
    Polyline p;
    p.vertices.push_back(s.vertices.front());
    for (std::size_t i = 0; i + 1 < s.vertices.size(); ++i) {
      const Vec3 a = s.vertices[i];
      const Vec3 b = s.vertices[i + 1];
      const int n = std::max(1, static_cast<int>(std::ceil((b - a).norm() / max_length)));
      for (int j = 1; j < n; ++j) p.vertices.push_back(a + (b - a) * (double(j) / n));
      p.vertices.push_back(b);
    }
    out.push_back(std::move(p));
  }
  return StringLink(link.radius(), std::move(out));
}

StringLink perturb(const StringLink& link, double amplitude, std::uint64_t seed) {
  const double room = clearance(link);
  if (!(amplitude < 0.5 * room))
    throw InputError(
        detail::text("perturbation ", amplitude, " is not below half the clearance ", room));
  auto rng = make_rng(seed, "perturb");
  std::vector<Polyline> out = link.strands();
  for (auto& s : out)
    for (std::size_t j = 1; j + 1 < s.vertices.size(); ++j)
      s.vertices[j] += uniform_in_ball(rng, amplitude);
  StringLink result(link.radius(), std::move(out));
  require_valid(result);
  return result;
}

}  // namespace milnor
