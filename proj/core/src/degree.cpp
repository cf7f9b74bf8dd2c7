#include "milnor/degree.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <json.hpp>
#include <numbers>
#include <stdexcept>

#include "cone.hpp"
#include "milnor/detail_text.hpp"
#include "milnor/errors.hpp"
#include "milnor/parallel.hpp"
#include "milnor/random.hpp"

namespace milnor {
namespace {

constexpr double kConeSlack = 1e-6;

// Outcome of checking one linear system on one tuple of pieces.
enum class Fit { None, Unique };

template <int N>
struct LinearSolve {
  Fit fit = Fit::None;
  Eigen::Matrix<double, N, 1> x;
  double conditioning = 0.0;
  int det_sign = 0;
};

// Solves A x = b, rejecting near-singular systems that still admit a nearby
// solution (those would make the preimage non-isolated).
template <int N>
LinearSolve<N> solve_system(const Eigen::Matrix<double, N, N>& A,
                            const Eigen::Matrix<double, N, 1>& b, double tolerance,
                            double length_scale) {
  LinearSolve<N> out;
  Eigen::Matrix<double, N, N> unit = A;
  for (int c = 0; c < N; ++c) unit.col(c).normalize();
  const double det = unit.determinant();
  // For unit columns sigma_max <= sqrt(N), so |det| bounds the ratio below.
  const double bound = std::abs(det) / std::pow(std::sqrt(double(N)), N);
  double ratio = bound;
  if (bound < 1e-3) {
    const Eigen::JacobiSVD<Eigen::Matrix<double, N, N>> svd(unit);
    const auto& s = svd.singularValues();
    ratio = s(N - 1) / s(0);
  }
  out.conditioning = ratio;
  if (ratio < tolerance) {
    const Eigen::JacobiSVD<Eigen::Matrix<double, N, N>> svd(
        A, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const Eigen::Matrix<double, N, 1> ls = svd.solve(b);
    if ((A * ls - b).norm() > 1e-7 * length_scale) return out;
    throw DegeneracyError("near-singular preimage system");
  }
  out.x = A.partialPivLu().solve(b);
  out.det_sign = det > 0 ? 1 : -1;
  out.fit = Fit::Unique;
  return out;
}

struct Window {
  double t_tol;
  double r_tol;
};

// -1 outside, +1 strictly inside; throws when the value sits on a boundary.
int classify_param(double t, const Window& w) {
  if (t < -w.t_tol || t > 1.0 + w.t_tol) return -1;
  if (std::abs(t) <= w.t_tol || std::abs(t - 1.0) <= w.t_tol)
    throw DegeneracyError("preimage on a piece boundary");
  return 1;
}

int classify_radius(double r, const Window& w) {
  if (r < -w.r_tol) return -1;
  if (r <= w.r_tol) throw DegeneracyError("preimage at a collision");
  return 1;
}

void check_tail_reach(const Segment& s, int last_piece, double t) {
  if ((s.piece == 0 && t < 0.1) || (s.piece == last_piece && t > 0.9))
    throw std::runtime_error("preimage beyond the tail bound; the bound is too small");
}

double cone_angle(const Vec3& a, const Vec3& b) {
  return std::max(detail::angle_between(a, Vec3::UnitZ()),
                  detail::angle_between(b, Vec3::UnitZ())) +
         kConeSlack;
}

int permutation_sign(std::array<int, 4> p) {
  int sign = 1;
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j)
      if (p[i] > p[j]) sign = -sign;
  return sign;
}

void require_label(const StringLink& link, int label) {
  if (label < 1 || label > link.k()) throw InputError(detail::text("invalid strand ", label));
}

// A chord diagram as two chords sharing the doubled strand. Chord c joins
// the head on the doubled strand to a tail on another strand and is matched
// to component `target` of the regular value.
struct ChordPlan {
  int doubled;  // 0-based strand
  std::array<int, 2> tail_strand;
  std::array<int, 2> target;
  // Vertex labels (1..4) of head and tail of each chord.
  std::array<int, 2> head_label, tail_label;
};

ChordPlan plan_for(Diagram d) {
  switch (d) {
    case Diagram::L:
      return {0, {1, 2}, {1, 2}, {1, 2}, {3, 4}};
    case Diagram::M:
      return {1, {0, 2}, {0, 2}, {2, 3}, {1, 4}};
    case Diagram::R:
      return {2, {0, 1}, {0, 1}, {3, 4}, {1, 2}};
    default:
      throw std::invalid_argument("not a chord diagram with a preimage count");
  }
}

bool before(const PairSolution& a, const PairSolution& b) {
  return std::tie(a.head_piece, a.head_t) < std::tie(b.head_piece, b.head_t);
}

}  // namespace

std::vector<PairSolution> solve_pair(const StringLink& link, int strand_a, int strand_b,
                                     const Vec3& u_raw, const DegreeOptions& options,
                                     std::optional<double> tail_length) {
  require_label(link, strand_a);
  require_label(link, strand_b);
  if (strand_a == strand_b) throw InputError("chords must join two different strands");
  const Vec3 u = u_raw.normalized();
  const double lambda = tail_length.value_or(tail_bound(link, {u, u, u}));
  const auto A = strand_pieces(link, strand_a - 1, lambda);
  const auto B = strand_pieces(link, strand_b - 1, lambda);
  const int last_a = A.back().piece, last_b = B.back().piece;
  const Window w{options.endpoint_tolerance, 1e-9 * link.radius()};
  const int pole = u.z() >= 0 ? 1 : -1;
  const double angle = detail::angle_between(u, pole * Vec3::UnitZ()) + kConeSlack;

  std::vector<PairSolution> out;
  for (const auto& sa : A) {
    for (const auto& sb : B) {
      // x_a - x_b = s u, s > 0.
      if (!detail::difference_meets_cone(sb.start, sb.end, sa.start, sa.end, angle, pole)) continue;
      Eigen::Matrix3d M;
      M.col(0) = sa.delta();
      M.col(1) = -sb.delta();
      M.col(2) = -u;
      const Eigen::Vector3d rhs = sb.start - sa.start;
      const auto sol = solve_system<3>(M, rhs, options.conditioning, link.radius());
      if (sol.fit == Fit::None) continue;
      const double ta = sol.x(0), tb = sol.x(1), s = sol.x(2);
      if (classify_radius(s, w) < 0) continue;
      if (ta < -w.t_tol || ta > 1 + w.t_tol || tb < -w.t_tol || tb > 1 + w.t_tol) continue;
      classify_param(ta, w);
      classify_param(tb, w);
      if ((M * sol.x - rhs).norm() > 1e-9 * link.radius())
        throw DegeneracyError("pair solution fails its residual check");
      check_tail_reach(sa, last_a, ta);
      check_tail_reach(sb, last_b, tb);
      // Orientation of (t_head, t_tail) -> S^2 is opposite to det(M).
      out.push_back({strand_a - 1, strand_b - 1, sa.piece, sb.piece, ta, tb, s, -sol.det_sign,
                     sol.conditioning});
    }
  }
  return out;
}

std::vector<PreimageSolution> solve_T(const StringLink& link, const RegularValue& value,
                                      const DegreeOptions& options) {
  if (link.k() != 3) throw InputError("the T configuration needs exactly 3 strands");
  Directions u;
  for (int i = 0; i < 3; ++i) u[i] = value.u[i].normalized();
  Eigen::Matrix<double, 6, 3> r_block = Eigen::Matrix<double, 6, 3>::Zero();
  r_block.block<3, 1>(0, 0) = u[0];
  r_block.block<3, 1>(0, 1) = -u[1];
  r_block.block<3, 1>(3, 1) = u[1];
  r_block.block<3, 1>(3, 2) = -u[2];
  {
    const Eigen::JacobiSVD<Eigen::Matrix<double, 6, 3>> svd(r_block);
    const auto& s = svd.singularValues();
    if (s(2) < options.conditioning * s(0))
      throw DegeneracyError("directions admit a vertical family of T configurations");
  }

  const double lambda = tail_bound(link, u);
  std::array<std::vector<Segment>, 3> P;
  for (int i = 0; i < 3; ++i) P[i] = strand_pieces(link, i, lambda);
  const double angle12 = cone_angle(u[0], -u[1]);
  const double angle13 = cone_angle(u[0], -u[2]);
  const Window w{options.endpoint_tolerance, 1e-9 * link.radius()};

  std::vector<std::vector<PreimageSolution>> per_first(P[0].size());
  parallel_for(P[0].size(), options.threads, [&](std::size_t i1) {
    const Segment& s1 = P[0][i1];
    std::vector<const Segment*> second, third;
    for (const auto& s : P[1])
      if (detail::difference_meets_cone(s1.start, s1.end, s.start, s.end, angle12, 1))
        second.push_back(&s);
    if (second.empty()) return;
    for (const auto& s : P[2])
      if (detail::difference_meets_cone(s1.start, s1.end, s.start, s.end, angle13, 1))
        third.push_back(&s);
    for (const Segment* s2 : second) {
      for (const Segment* s3 : third) {
        Eigen::Matrix<double, 6, 6> A = Eigen::Matrix<double, 6, 6>::Zero();
        A.block<3, 1>(0, 0) = s1.delta();
        A.block<3, 1>(0, 1) = -s2->delta();
        A.block<3, 1>(3, 1) = s2->delta();
        A.block<3, 1>(3, 2) = -s3->delta();
        A.block<6, 3>(0, 3) = r_block;
        Eigen::Matrix<double, 6, 1> rhs;
        rhs << s2->start - s1.start, s3->start - s2->start;
        const auto sol = solve_system<6>(A, rhs, options.conditioning, link.radius());
        if (sol.fit == Fit::None) continue;
        const auto& x = sol.x;
        bool outside = false;
        for (int j = 3; j < 6; ++j) outside |= classify_radius(x(j), w) < 0;
        for (int j = 0; j < 3; ++j) outside |= x(j) < -w.t_tol || x(j) > 1 + w.t_tol;
        if (outside) continue;
        for (int j = 0; j < 3; ++j) classify_param(x(j), w);
        if ((A * x - rhs).norm() > 1e-9 * link.radius())
          throw DegeneracyError("T solution fails its residual check");
        const std::array<const Segment*, 3> segs{&s1, s2, s3};
        for (int j = 0; j < 3; ++j) check_tail_reach(*segs[j], P[j].back().piece, x(j));
        PreimageSolution p;
        p.diagram = Diagram::T;
        p.strands = {0, 1, 2};
        p.pieces = {s1.piece, s2->piece, s3->piece};
        p.params = {x(0), x(1), x(2)};
        p.radii = {x(3), x(4), x(5)};
        p.free_point = s1.point(x(0)) + x(3) * u[0];
        p.sign = sol.det_sign;
        p.conditioning = sol.conditioning;
        per_first[i1].push_back(std::move(p));
      }
    }
  });
  std::vector<PreimageSolution> out;
  for (auto& v : per_first)
    for (auto& p : v) out.push_back(std::move(p));
  return out;
}

std::vector<PreimageSolution> diagram_preimages(const StringLink& link, const RegularValue& value,
                                                Diagram d, const DegreeOptions& options) {
  if (link.k() != 3) throw InputError("triple linking needs exactly 3 strands");
  if (d == Diagram::T) return solve_T(link, value, options);
  const ChordPlan plan = plan_for(d);
  const double lambda = tail_bound(link, value.u);
  std::array<std::vector<PairSolution>, 2> chords;
  for (int c = 0; c < 2; ++c)
    chords[c] = solve_pair(link, plan.doubled + 1, plan.tail_strand[c] + 1, value.u[plan.target[c]],
                           options, lambda);
  const int parity = permutation_sign(
      {plan.head_label[0], plan.tail_label[0], plan.head_label[1], plan.tail_label[1]});

  std::vector<PreimageSolution> out;
  for (const auto& a : chords[0]) {
    for (const auto& b : chords[1]) {
      if (!before(a, b)) continue;
      PreimageSolution p;
      p.diagram = d;
      p.strands.assign(4, 0);
      p.pieces.assign(4, 0);
      p.params.assign(4, 0.0);
      for (int c = 0; c < 2; ++c) {
        const PairSolution& s = c == 0 ? a : b;
        const int h = plan.head_label[c] - 1, t = plan.tail_label[c] - 1;
        p.strands[h] = s.head_strand;
        p.pieces[h] = s.head_piece;
        p.params[h] = s.head_t;
        p.strands[t] = s.tail_strand;
        p.pieces[t] = s.tail_piece;
        p.params[t] = s.tail_t;
        p.radii.push_back(s.distance);
      }
      p.sign = parity * a.sign * b.sign;
      p.conditioning = std::min(a.conditioning, b.conditioning);
      out.push_back(std::move(p));
    }
  }
  return out;
}

std::int64_t count_diagram(const StringLink& link, const RegularValue& value, Diagram d,
                           const DegreeOptions& options) {
  std::int64_t n = 0;
  for (const auto& p : diagram_preimages(link, value, d, options)) n += p.sign;
  return n;
}

namespace {

constexpr std::array<Diagram, 4> kCounted = {Diagram::L, Diagram::M, Diagram::R, Diagram::T};

DegreeResult evaluate(const StringLink& link, const RegularValue& value,
                      const DegreeOptions& options, const WeightTable& weights) {
  DegreeResult result;
  result.regular_value = value;
  for (int i = 0; i < 4; ++i) {
    auto sols = diagram_preimages(link, value, kCounted[i], options);
    for (const auto& p : sols) result.counts[i] += p.sign;
    result.value += weights[kCounted[i]] * result.counts[i];
    for (auto& p : sols) result.solutions.push_back(std::move(p));
  }
  result.value *= kMu123Orientation;
  return result;
}

Directions draw_directions(Rng& rng, double max_angle) {
  return {uniform_on_cap(rng, Vec3::UnitZ(), max_angle),
          uniform_on_cap(rng, -Vec3::UnitZ(), max_angle),
          uniform_on_cap(rng, -Vec3::UnitZ(), max_angle)};
}

template <class Accept>
auto search_regular_value(const StringLink& link, std::uint64_t seed, const DegreeOptions& options,
                          Accept&& accept) {
  for (int attempt = 0; attempt < options.max_retries; ++attempt) {
    auto rng = make_rng(seed, "regular-value", static_cast<std::uint64_t>(attempt));
    RegularValue value;
    value.u = draw_directions(rng, options.max_angle);
    value.attempt = attempt;
    value.margin = degenerate_margin(link, value.u);
    if (value.margin < options.min_margin) continue;
    try {
      return accept(value);
    } catch (const DegeneracyError&) {
    }
  }
  throw RegularValueExhausted(
      detail::text("no regular value found in ", options.max_retries, " attempts"));
}

}  // namespace

RegularValue pick_regular_value(const StringLink& link, std::uint64_t seed,
                                const DegreeOptions& options) {
  return search_regular_value(link, seed, options, [&](const RegularValue& v) {
    evaluate(link, v, options, mu123_weights());
    return v;
  });
}

DegreeResult mu123_degree(const StringLink& link, std::optional<RegularValue> value,
                          std::uint64_t seed, const DegreeOptions& options,
                          const WeightTable& weights) {
  if (link.k() != 3) throw InputError("triple linking needs exactly 3 strands");
  if (value) return evaluate(link, *value, options, weights);
  return search_regular_value(link, seed, options, [&](const RegularValue& v) {
    return evaluate(link, v, options, weights);
  });
}

std::int64_t lk_degree(const StringLink& link, int i, int j, std::uint64_t seed,
                       const DegreeOptions& options) {
  require_label(link, i);
  require_label(link, j);
  if (i == j) throw InputError("linking number needs two different strands");
  for (int attempt = 0; attempt < options.max_retries; ++attempt) {
    auto rng = make_rng(seed, "lk-direction", static_cast<std::uint64_t>(attempt));
    const Vec3 u = uniform_on_cap(rng, Vec3::UnitZ(), options.max_angle);
    const Directions probe{u, -u, -u};
    if (degenerate_margin(link, probe) < options.min_margin) continue;
    try {
      std::int64_t n = 0;
      // Orientation (t_i, t_j) is the reverse of (t_head, t_tail).
      for (const auto& s : solve_pair(link, j, i, u, options)) n -= s.sign;
      return n;
    } catch (const DegeneracyError&) {
    }
  }
  throw RegularValueExhausted("no regular direction found for the Gauss map");
}

std::string solutions_to_json(const std::vector<PreimageSolution>& solutions) {
  using nlohmann::json;
  json arr = json::array();
  for (const auto& p : solutions) {
    json strands = json::array(), pieces = json::array();
    for (const int s : p.strands) strands.push_back(s + 1);
    for (const int s : p.pieces) pieces.push_back(s);
    json rec = {{"diagram", std::string(diagram_name(p.diagram))},
                {"strands", strands},
                {"pieces", pieces},
                {"t", p.params},
                {"r", p.radii},
                {"sign", p.sign},
                {"conditioning", p.conditioning}};
    if (p.diagram == Diagram::T) rec["x4"] = {p.free_point.x(), p.free_point.y(), p.free_point.z()};
    arr.push_back(std::move(rec));
  }
  return arr.dump(1) + "\n";
}

}  // namespace milnor
