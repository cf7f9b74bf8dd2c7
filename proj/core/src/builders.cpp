#include "milnor/builders.hpp"

#include <algorithm>
#include <charconv>
#include <numeric>
#include <sstream>

#include "milnor/detail_text.hpp"
#include "milnor/errors.hpp"

namespace milnor {
namespace {

// Fractions of a gadget's length where each mover levels off and starts to
// return to z = 0. Kept asymmetric and away from dyadic values so that
// crossings never land on vertices of the original or a resampled link.
constexpr double kMoverFlatStart = 0.2137;
constexpr double kMoverFlatEnd = 0.7391;
constexpr double kReturnFlatStart = 0.2711;
constexpr double kReturnFlatEnd = 0.6853;

struct Layout {
  double spacing;     // distance between neighbouring x positions
  double half_depth;  // strands run over y in [-half_depth, half_depth]
  double lift;        // height of the over strand in a gadget

  double x(int k, int position) const { return (0.5 * (k + 1) - position) * spacing; }
};

Layout layout_for(int k, double radius) {
  return {0.9 * radius / std::max(1, k - 1), 0.75 * radius, 0.12 * radius};
}

Vec3 lerp_xy(const Vec3& a, const Vec3& b, double f, double z) {
  const Vec3 p = a + f * (b - a);
  return {p.x(), p.y(), z};
}

}  // namespace

BraidWord parse_braid(std::string_view text) {
  BraidWord word;
  std::istringstream in{std::string(text)};
  std::string token;
  while (in >> token) {
    if (token.size() < 2 || (token[0] != 's' && token[0] != 'S'))
      throw InputError("bad braid letter '" + token + "'");
    const char* first = token.data() + 1;
    const char* last = token.data() + token.size();
    BraidLetter letter;
    auto [p, ec] = std::from_chars(first, last, letter.generator);
    if (ec != std::errc{} || letter.generator < 1)
      throw InputError("bad braid letter '" + token + "'");
    if (p != last) {
      if (*p != '^') throw InputError("bad braid letter '" + token + "'");
      auto [q, ec2] = std::from_chars(p + 1, last, letter.power);
      if (ec2 != std::errc{} || q != last || (letter.power != 1 && letter.power != -1))
        throw InputError("bad braid exponent in '" + token + "'");
    }
    word.push_back(letter);
  }
  return word;
}

std::string format_braid(const BraidWord& word) {
  std::string out;
  for (const auto& l : word) {
    if (!out.empty()) out += ' ';
    out += "s" + std::to_string(l.generator);
    if (l.power < 0) out += "^-1";
  }
  return out;
}

bool is_pure(const BraidWord& word, int k) {
  std::vector<int> perm(k);
  std::iota(perm.begin(), perm.end(), 0);
  for (const auto& l : word) {
    if (l.generator < 1 || l.generator >= k) return false;
    std::swap(perm[l.generator - 1], perm[l.generator]);
  }
  for (int i = 0; i < k; ++i)
    if (perm[i] != i) return false;
  return true;
}

StringLink from_braid(const BraidWord& word, int k, double radius) {
  if (k < 2) throw InputError("a braid needs at least 2 strands");
  for (const auto& l : word)
    if (l.generator < 1 || l.generator >= k || (l.power != 1 && l.power != -1))
      throw InputError(detail::text("letter s", l.generator, "^", l.power,
                                    " is not a generator for ", k, " strands"));
  if (!is_pure(word, k)) throw InputError("braid word is not pure");

  const Layout geo = layout_for(k, radius);
  std::vector<Polyline> strands(k);
  std::vector<int> at(k);  // at[position] = strand index, 0-based
  std::iota(at.begin(), at.end(), 0);
  StringLink frame(radius, std::vector<Polyline>(k));
  for (int i = 0; i < k; ++i) {
    strands[i].vertices.push_back(frame.incoming_anchor(i));
    strands[i].vertices.emplace_back(geo.x(k, i + 1), -geo.half_depth, 0.0);
  }
  const double layer = 2.0 * geo.half_depth / std::max<std::size_t>(1, word.size());
  for (std::size_t n = 0; n < word.size(); ++n) {
    const auto& l = word[n];
    const int p = l.generator;
    const double y1 = -geo.half_depth + (n + 1) * layer;
    const int mover = at[p - 1];
    const int back = at[p];
    const double mover_z = l.power > 0 ? -geo.lift : geo.lift;
    const Vec3 mover_end(geo.x(k, p + 1), y1, 0.0);
    const Vec3 back_end(geo.x(k, p), y1, 0.0);
    auto add = [](Polyline& s, const Vec3& end, double f0, double f1, double z) {
      const Vec3 start = s.vertices.back();
      s.vertices.push_back(lerp_xy(start, end, f0, z));
      s.vertices.push_back(lerp_xy(start, end, f1, z));
      s.vertices.push_back(end);
    };
    add(strands[mover], mover_end, kMoverFlatStart, kMoverFlatEnd, mover_z);
    add(strands[back], back_end, kReturnFlatStart, kReturnFlatEnd, -mover_z);
    std::swap(at[p - 1], at[p]);
  }
  for (int i = 0; i < k; ++i) {
    const Vec3 top(geo.x(k, i + 1), geo.half_depth, 0.0);
    if ((strands[i].vertices.back() - top).norm() > 1e-12 * radius)
      strands[i].vertices.push_back(top);
    strands[i].vertices.push_back(frame.outgoing_anchor(i));
  }
  StringLink link(radius, std::move(strands));
  require_valid(link);
  return link;
}

StringLink make_unlink(int k, double radius) {
  if (k < 2) throw InputError("a string link needs at least 2 strands");
  return from_braid({}, k, radius);
}

BraidWord axis_link_word(int i, int j, int k) {
  if (i == j || i < 1 || j < 1 || i > k || j > k)
    throw InputError(detail::text("invalid strand pair (", i, ",", j, ")"));
  std::vector<int> at(k);
  std::iota(at.begin(), at.end(), 1);
  BraidWord word;
  // Swaps the strand at `pos` with its neighbour in direction `step`, with
  // the moving strand passing over or under.
  auto cross = [&](int pos, int step, bool over) {
    const int left = std::min(pos, pos + step);  // 0-based position
    const bool mover_is_left = (pos == left);
    // A positive letter lifts the strand arriving from the right.
    const bool right_over = mover_is_left ? !over : over;
    word.push_back({left + 1, right_over ? 1 : -1});
    std::swap(at[left], at[left + 1]);
    return pos + step;
  };
  auto where = [&](int strand) {
    return static_cast<int>(std::find(at.begin(), at.end(), strand) - at.begin());
  };
  const int home = where(j);
  const int step = where(i) > home ? 1 : -1;
  int pos = home;
  while (pos + step != where(i)) pos = cross(pos, step, true);
  pos = cross(pos, step, false);
  pos = cross(pos, -step, true);
  while (pos != home) pos = cross(pos, -step, true);
  return word;
}

StringLink make_axis_link(int i, int j, double radius) {
  return from_braid(axis_link_word(i, j, 3), 3, radius);
}

BraidWord borromean_word() { return parse_braid("s1 s2^-1 s1 s2^-1 s1 s2^-1"); }

StringLink make_borromean(double radius) { return from_braid(borromean_word(), 3, radius); }

StringLink make_named_link(std::string_view name, double radius) {
  if (name == "unlink") return make_unlink(3, radius);
  if (name == "borromean") return make_borromean(radius);
  if (name.size() == 3 && name[0] == 'l' && name[1] >= '1' && name[1] <= '3' && name[2] >= '1' &&
      name[2] <= '3' && name[1] != name[2])
    return make_axis_link(name[1] - '0', name[2] - '0', radius);
  throw InputError("unknown link name '" + std::string(name) + "'");
}

BraidWord random_pure_braid(Rng& rng, int max_length, int k) {
  const int pairs = std::max(1, max_length / 2);
  for (;;) {
    const int length = 2 * (1 + static_cast<int>(uniform_index(rng, pairs)));
    BraidWord word;
    for (int n = 0; n < length; ++n) {
      const int g = 1 + static_cast<int>(uniform_index(rng, k - 1));
      word.push_back({g, uniform01(rng) < 0.5 ? 1 : -1});
    }
    if (is_pure(word, k)) return word;
  }
}

}  // namespace milnor
