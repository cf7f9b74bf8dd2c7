#include <cmath>

#include "doctest.h"
#include "milnor/builders.hpp"
#include "milnor/diagram.hpp"
#include "milnor/errors.hpp"
#include "milnor/link_io.hpp"
#include "milnor/string_link.hpp"
#include "support/corpus.hpp"

using namespace milnor;

namespace {

// Distance from p to the union of the link's interior pieces.
double distance_to_link(const StringLink& link, const Vec3& p) {
  double best = INFINITY;
  for (int i = 0; i < link.k(); ++i) {
    const auto& v = link.strand(i).vertices;
    for (std::size_t s = 0; s + 1 < v.size(); ++s) {
      const Vec3 d = v[s + 1] - v[s];
      const double t = std::clamp((p - v[s]).dot(d) / d.squaredNorm(), 0.0, 1.0);
      best = std::min(best, (v[s] + t * d - p).norm());
    }
  }
  return best;
}

std::vector<int> sign_sequence(const LinkDiagram& d, int strand) {
  std::vector<int> out;
  for (const auto& e : d.events[strand]) out.push_back(e.sign);
  return out;
}

}  // namespace

TEST_CASE("tail directions follow the strand offsets") {
  // Strand indices are 0-based here.
  CHECK(tail_direction(3, 0, -1).isApprox(Vec3(1, -1, 0).normalized()));
  CHECK(tail_direction(3, 1, +1).isApprox(Vec3(0, 1, 0)));
  CHECK(tail_direction(3, 2, +1).isApprox(Vec3(-1, 1, 0).normalized()));
  const StringLink link = make_unlink(3);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      CHECK(link.incoming_direction(i) != link.outgoing_direction(j));
      if (i != j) CHECK(link.incoming_direction(i) != link.incoming_direction(j));
    }
}

TEST_CASE("unlink is planar and embedded") {
  for (int k : {2, 3, 4}) {
    const StringLink link = make_unlink(k);
    CHECK(link.k() == k);
    CHECK(validate(link).ok);
    for (const auto& s : link.strands())
      for (const auto& v : s.vertices) CHECK(v.z() == 0.0);
  }
  CHECK(project(make_unlink(3), Vec3::UnitZ()).crossing_count() == 0);
}

TEST_CASE("anchors sit on the sphere and interior vertices inside") {
  const StringLink link = make_borromean();
  for (int i = 0; i < 3; ++i) {
    const auto& v = link.strand(i).vertices;
    CHECK(v.front().isApprox(link.incoming_anchor(i)));
    CHECK(v.back().isApprox(link.outgoing_anchor(i)));
    CHECK(v.front().norm() == doctest::Approx(1.0));
    for (std::size_t j = 1; j + 1 < v.size(); ++j) CHECK(v[j].norm() < 1.0);
  }
}

TEST_CASE("validate reports the first violation") {
  auto strands = make_unlink(3).strands();
  SUBCASE("vertex outside the ball") {
    strands[1].vertices.insert(strands[1].vertices.begin() + 1, Vec3(0.0, 0.0, 1.5));
    const auto d = validate(StringLink(1.0, strands));
    CHECK_FALSE(d.ok);
    CHECK_FALSE(d.violation.empty());
  }
  SUBCASE("anchor off its tail") {
    strands[0].vertices.front() += Vec3(0.0, 0.0, 0.01);
    CHECK_FALSE(validate(StringLink(1.0, strands)).ok);
  }
  SUBCASE("strands touching") {
    strands[0].vertices.insert(strands[0].vertices.begin() + 1, Vec3(0.0, 0.0, 0.0));
    strands[1].vertices.insert(strands[1].vertices.begin() + 1, Vec3(0.0, 0.0, 0.0));
    CHECK_FALSE(validate(StringLink(1.0, strands)).ok);
  }
}

TEST_CASE("braid words") {
  const BraidWord w = parse_braid("s1 s2^-1 S1^1");
  REQUIRE(w.size() == 3);
  CHECK(w[1] == BraidLetter{2, -1});
  CHECK(w[2] == BraidLetter{1, 1});
  CHECK(format_braid(w) == "s1 s2^-1 s1");
  CHECK_THROWS_AS(parse_braid("s1^2"), InputError);
  CHECK(is_pure(parse_braid("s1 s1"), 3));
  CHECK_FALSE(is_pure(parse_braid("s1"), 3));
  CHECK_THROWS_AS(from_braid(parse_braid("s1"), 3), InputError);
  CHECK_THROWS_AS(parse_braid("s1 x2"), InputError);
  CHECK_THROWS_AS(from_braid(parse_braid("s3 s3"), 3), InputError);
}

TEST_CASE("builders produce valid links") {
  CHECK(validate(from_braid({}, 3)).ok);
  CHECK(validate(make_borromean()).ok);
  for (auto [i, j] : {std::pair{1, 2}, {1, 3}, {2, 3}}) CHECK(validate(make_axis_link(i, j)).ok);
  CHECK_THROWS_AS(make_axis_link(2, 2), InputError);
  CHECK_THROWS_AS(make_axis_link(1, 4), InputError);
  CHECK_THROWS_AS(make_named_link("trefoil"), InputError);
  auto rng = make_rng(11, "corpus");
  for (int n = 0; n < 20; ++n) {
    const BraidWord w = random_pure_braid(rng);
    CHECK(w.size() <= 12u);
    CHECK(is_pure(w, 3));
    CHECK(validate(from_braid(w, 3)).ok);
  }
}

TEST_CASE("axis links move strand j under then over strand i") {
  const LinkDiagram d = project(make_axis_link(1, 2), Vec3::UnitZ());
  const auto& events = d.events[1];
  REQUIRE(events.size() == 2u);
  CHECK(events[0].under == 1);
  CHECK(events[1].over == 1);
  // Strand 3 stays above strand 2 in L13.
  const LinkDiagram d13 = project(make_axis_link(1, 3), Vec3::UnitZ());
  for (const auto& e : d13.events[1])
    if (e.under == 1 || e.over == 1) CHECK((e.under == 1 && e.over == 2));
}

TEST_CASE("sigma1 squared has two crossings of equal sign") {
  const LinkDiagram d = project(from_braid(parse_braid("s1 s1"), 3), Vec3::UnitZ());
  CHECK(d.crossing_count() == 2u);
  const auto signs = sign_sequence(d, 0);
  REQUIRE(signs.size() == 2u);
  CHECK(signs[0] == signs[1]);
  CHECK(crossing_lk(d, 1, 2) == 1);
}

TEST_CASE("projection along a segment is rejected") {
  const StringLink link = make_unlink(3);
  const auto& v = link.strand(0).vertices;
  CHECK_THROWS_AS(project(link, (v[2] - v[1]).normalized()), DegeneracyError);
}

TEST_CASE("resample keeps the point set and the crossing sequence") {
  const StringLink link = make_borromean();
  const StringLink fine = resample(link, 0.05);
  CHECK(validate(fine).ok);
  for (const auto& s : fine.strands()) {
    for (std::size_t j = 0; j + 1 < s.vertices.size(); ++j)
      CHECK((s.vertices[j + 1] - s.vertices[j]).norm() <= 0.05 + 1e-12);
    for (const auto& v : s.vertices) CHECK(distance_to_link(link, v) < 1e-12);
  }
  for (const auto& s : link.strands())
    for (const auto& v : s.vertices) CHECK(distance_to_link(fine, v) < 1e-12);
  const Vec3 dir = Vec3(0.03, -0.02, 1.0).normalized();
  const LinkDiagram a = project(link, dir);
  const LinkDiagram b = project(fine, dir);
  for (int i = 0; i < 3; ++i) CHECK(sign_sequence(a, i) == sign_sequence(b, i));
}

TEST_CASE("perturb stays below the requested amplitude") {
  const StringLink link = make_unlink(3);
  const StringLink moved = perturb(link, 1e-3, 5);
  CHECK(validate(moved).ok);
  for (int i = 0; i < 3; ++i) {
    const auto& a = link.strand(i).vertices;
    const auto& b = moved.strand(i).vertices;
    REQUIRE(a.size() == b.size());
    CHECK(a.front() == b.front());
    for (std::size_t j = 0; j < a.size(); ++j) CHECK((a[j] - b[j]).norm() < 1e-3);
  }
  CHECK(perturb(link, 1e-3, 5).strands()[0].vertices == moved.strands()[0].vertices);
  CHECK_THROWS_AS(perturb(link, clearance(link), 5), InputError);
}

TEST_CASE("link files round trip") {
  const StringLink link = make_borromean();
  const StringLink back = link_from_json(link_to_json(link));
  REQUIRE(back.k() == 3);
  for (int i = 0; i < 3; ++i) CHECK(back.strand(i).vertices == link.strand(i).vertices);
  CHECK_THROWS_AS(link_from_json("{\"k\": 3}"), InputError);
  CHECK_THROWS_AS(link_from_json("not json"), InputError);
  CHECK_THROWS_AS(
      link_from_json(R"({"k": 2, "R": 1.0, "strands": [{"vertices": [[0,0,0],[0,1,0]]}]})"),
      InputError);
}

TEST_CASE("slide links used for T coverage are valid") {
  for (double offset : {0.4, -0.25, -0.6}) CHECK(validate(testing::slide_link("s2 s2", offset)).ok);
}
