#include "milnor/quadrature.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "cone.hpp"
#include "milnor/degree.hpp"
#include "milnor/errors.hpp"
#include "milnor/parallel.hpp"

namespace milnor {
namespace {

constexpr double kPi = std::numbers::pi;

double profile(double theta, double radius) {
  if (theta >= radius) return 0.0;
  const double q = 1.0 - (theta / radius) * (theta / radius);
  return q * q;
}

// Any unit vector orthogonal to n, chosen continuously away from n ~ ±x.
Vec3 orthogonal_unit(const Vec3& n) {
  const Vec3 trial = std::abs(n.x()) < 0.9 ? Vec3::UnitX() : Vec3::UnitY();
  return n.cross(trial).normalized();
}

struct NeumaierSum {
  double sum = 0.0;
  double carry = 0.0;
  void add(double x) {
    const double t = sum + x;
    carry += std::abs(sum) >= std::abs(x) ? (sum - t) + x : (x - t) + sum;
    sum = t;
  }
  double value() const { return sum + carry; }
};

struct Chord {
  int from;  // vertex labels, 0-based
  int to;
  int form;
};

struct Shape {
  std::array<int, 4> strand_of;  // T: strands of x1..x3, x4 free
  std::vector<Chord> chords;
  int ordered_first = -1;  // vertices on the doubled strand that must be ordered
  int ordered_second = -1;
};

Shape shape_of(Diagram d) {
  switch (d) {
    case Diagram::L:
      return {{0, 0, 1, 2}, {{2, 0, 1}, {3, 1, 2}}, 0, 1};
    case Diagram::M:
      return {{0, 1, 1, 2}, {{0, 1, 0}, {3, 2, 2}}, 1, 2};
    case Diagram::R:
      return {{0, 1, 2, 2}, {{0, 2, 0}, {1, 3, 1}}, 2, 3};
    case Diagram::T:
      return {{0, 1, 2, -1}, {{0, 3, 0}, {1, 3, 1}, {2, 3, 2}}, -1, -1};
    default:
      throw InputError("only L, M, R and T carry integrals");
  }
}

int pole_of(const BumpForm& f) {
  if (f.center().z() > 1.0 - 1e-12) return 1;
  if (f.center().z() < -1.0 + 1e-12) return -1;
  return 0;
}

}  // namespace

BumpForm::BumpForm(const Vec3& center, double radius)
    : center_(center.normalized()), radius_(radius), scale_(0.0) {
  if (!(radius > 0.0 && radius < kPi)) throw InputError("bump radius must lie in (0, pi)");
  auto f = [radius](double t) { return profile(t, radius) * std::sin(t) * 2.0 * kPi; };
  const double gauss = boost::math::quadrature::gauss<double, 30>::integrate(f, 0.0, radius);
  const double kronrod =
      boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, 0.0, radius, 0, 0.0);
  if (std::abs(gauss - kronrod) > 1e-6 * gauss)
    throw std::runtime_error("bump form normalisation is not stable");
  scale_ = 1.0 / gauss;
}

double BumpForm::density(const Vec3& u) const {
  const double theta = detail::angle_between(center_, u);
  return scale_ * profile(theta, radius_);
}

double BumpForm::cap_area() const { return 2.0 * kPi * (1.0 - std::cos(radius_)); }

Vec3 BumpForm::sample(Rng& rng) const {
  for (;;) {
    const Vec3 u = uniform_on_cap(rng, center_, radius_);
    if (uniform01(rng) < profile(detail::angle_between(center_, u), radius_)) return u;
  }
}

FormTriple default_forms(double radius) {
  return {BumpForm(Vec3::UnitZ(), radius), BumpForm(-Vec3::UnitZ(), radius),
          BumpForm(-Vec3::UnitZ(), radius)};
}

Configuration::Configuration(const StringLink& link, double tail_length)
    : tail_length_(tail_length), radius_(link.radius()) {
  for (int i = 0; i < link.k(); ++i) pieces_.push_back(strand_pieces(link, i, tail_length));
}

int Configuration::locate(int strand, double tau) const {
  const int n = piece_count(strand);
  return std::clamp(static_cast<int>(std::floor(tau)), 0, n - 1);
}

Vec3 Configuration::point(int strand, double tau) const {
  const int p = locate(strand, tau);
  return pieces_[strand][p].point(tau - p);
}

Vec3 Configuration::tangent(int strand, double tau) const {
  return pieces_[strand][locate(strand, tau)].delta();
}

double integration_tail_length(const StringLink& link, const FormTriple& forms) {
  double widest = 0.0;
  for (const auto& f : forms) widest = std::max(widest, f.radius());
  const double elevation = 0.5 * kPi - widest;
  return 10.0 * 2.0 * link.radius() / std::max(std::sin(elevation), 1e-3);
}

double integrand(const Configuration& config, Diagram d, const FormTriple& forms,
                 std::span<const double> params) {
  const Shape shape = shape_of(d);
  const bool free_vertex = d == Diagram::T;
  if (params.size() != 6u && free_vertex) throw InputError("T takes (t1, t2, t3, x4)");
  if (params.size() != 4u && !free_vertex) throw InputError("chord diagrams take 4 parameters");
  if (!free_vertex && !(params[shape.ordered_first] < params[shape.ordered_second])) return 0.0;

  std::array<Vec3, 4> x;
  std::array<Vec3, 4> dx;
  const int on_strands = free_vertex ? 3 : 4;
  for (int v = 0; v < on_strands; ++v) {
    x[v] = config.point(shape.strand_of[v], params[v]);
    dx[v] = config.tangent(shape.strand_of[v], params[v]);
  }
  if (free_vertex) x[3] = Vec3(params[3], params[4], params[5]);

  const int dim = free_vertex ? 6 : 4;
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(dim, dim);
  double weight = 1.0;
  for (std::size_t c = 0; c < shape.chords.size(); ++c) {
    const Chord& ch = shape.chords[c];
    const Vec3 diff = x[ch.to] - x[ch.from];
    const double len = diff.norm();
    if (len == 0.0) return 0.0;
    const Vec3 phi = diff / len;
    weight *= forms[ch.form].density(phi);
    if (weight == 0.0) return 0.0;
    const Vec3 e1 = orthogonal_unit(phi);
    const Vec3 e2 = phi.cross(e1);
    for (int a = 0; a < 2; ++a) {
      const Vec3& e = a == 0 ? e1 : e2;
      const int row = 2 * static_cast<int>(c) + a;
      if (free_vertex) {
        J.block<1, 3>(row, 3) = e.transpose() / len;
        J(row, ch.from) = -e.dot(dx[ch.from]) / len;
      } else {
        J(row, ch.to) += e.dot(dx[ch.to]) / len;
        J(row, ch.from) -= e.dot(dx[ch.from]) / len;
      }
    }
  }
  return weight * J.determinant();
}

double integrand(const StringLink& link, Diagram d, const FormTriple& forms,
                 std::span<const double> params) {
  const Configuration config(link, integration_tail_length(link, forms));
  return integrand(config, d, forms, params);
}

namespace {

// Axis-aligned boxes in global strand parameters, sampled in proportion to
// their volume.
struct CellSet {
  int dims = 0;
  std::vector<std::array<double, 6>> boxes;  // lo0, hi0, lo1, hi1, lo2, hi2
  std::vector<double> cumulative;            // running volume

  double volume() const { return cumulative.empty() ? 0.0 : cumulative.back(); }
  double volume_between(std::size_t b, std::size_t e) const {
    return (e == 0 ? 0.0 : cumulative[e - 1]) - (b == 0 ? 0.0 : cumulative[b - 1]);
  }
  void add(const std::array<double, 6>& box) {
    double v = 1.0;
    for (int i = 0; i < dims; ++i) v *= box[2 * i + 1] - box[2 * i];
    boxes.push_back(box);
    cumulative.push_back(volume() + v);
  }
  // Uniform point in the union of boxes [b, e), written to out[0..dims).
  void sample(Rng& rng, std::size_t b, std::size_t e, double* out) const {
    const double lo = b == 0 ? 0.0 : cumulative[b - 1];
    const double target = lo + uniform01(rng) * (cumulative[e - 1] - lo);
    auto it = std::upper_bound(cumulative.begin() + b, cumulative.begin() + e, target);
    const std::size_t i = std::min<std::size_t>(it - cumulative.begin(), e - 1);
    for (int d = 0; d < dims; ++d) out[d] = uniform(rng, boxes[i][2 * d], boxes[i][2 * d + 1]);
  }
};

Segment sub_segment(const Configuration& config, int strand, double lo, double hi) {
  const int p = std::clamp(static_cast<int>(std::floor(lo)), 0, config.piece_count(strand) - 1);
  const Segment& s = config.piece(strand, p);
  return {s.point(lo - p), s.point(hi - p), strand, p};
}

constexpr double kHuge = std::numeric_limits<double>::infinity();

// Bisects boxes whose sub-segments pass `keep` until every side is shorter
// than `resolution`.
template <class Keep>
void refine(const Configuration& config, const std::array<int, 3>& strands, int dims,
            std::array<double, 6> box, double resolution, int depth, const Keep& keep,
            CellSet& out) {
  std::array<Segment, 3> segs;
  for (int i = 0; i < dims; ++i)
    segs[i] = sub_segment(config, strands[i], box[2 * i], box[2 * i + 1]);
  if (!keep(segs)) return;
  int longest = 0;
  for (int i = 1; i < dims; ++i)
    if (segs[i].length() > segs[longest].length()) longest = i;
  if (segs[longest].length() <= resolution || depth >= 48) {
    out.add(box);
    return;
  }
  const double mid = 0.5 * (box[2 * longest] + box[2 * longest + 1]);
  auto left = box, right = box;
  left[2 * longest + 1] = mid;
  right[2 * longest] = mid;
  refine(config, strands, dims, left, resolution, depth + 1, keep, out);
  refine(config, strands, dims, right, resolution, depth + 1, keep, out);
}

CellSet chord_cells(const Configuration& config, const Chord& chord, const Shape& shape,
                    const BumpForm& form, bool whole_pieces) {
  CellSet cells;
  cells.dims = 2;
  const std::array<int, 3> strands{shape.strand_of[chord.from], shape.strand_of[chord.to], 0};
  const int pole = pole_of(form);
  const double angle = pole == 0 ? kPi : form.radius();
  auto keep = [&](const std::array<Segment, 3>& s) {
    return detail::difference_meets_cone(s[0].start, s[0].end, s[1].start, s[1].end, angle,
                                         pole == 0 ? 1 : pole);
  };
  const double resolution = whole_pieces ? kHuge : 0.02 * config.radius();
  for (int a = 0; a < config.piece_count(strands[0]); ++a)
    for (int b = 0; b < config.piece_count(strands[1]); ++b)
      refine(config, strands, 2, {double(a), a + 1.0, double(b), b + 1.0, 0, 0}, resolution, 0,
             keep, cells);
  return cells;
}

CellSet triple_cells(const Configuration& config, const FormTriple& forms, bool whole_pieces) {
  CellSet cells;
  cells.dims = 3;
  const double angle12 = std::max(forms[0].radius(), forms[1].radius());
  const double angle13 = std::max(forms[0].radius(), forms[2].radius());
  auto keep = [&](const std::array<Segment, 3>& s) {
    return detail::difference_meets_cone(s[0].start, s[0].end, s[1].start, s[1].end, angle12, 1) &&
           detail::difference_meets_cone(s[0].start, s[0].end, s[2].start, s[2].end, angle13, 1);
  };
  const double resolution = whole_pieces ? kHuge : 0.02 * config.radius();
  for (int a = 0; a < config.piece_count(0); ++a) {
    for (int b = 0; b < config.piece_count(1); ++b) {
      const auto& s1 = config.piece(0, a);
      const auto& s2 = config.piece(1, b);
      if (!detail::difference_meets_cone(s1.start, s1.end, s2.start, s2.end, angle12, 1)) continue;
      for (int c = 0; c < config.piece_count(2); ++c)
        refine(config, {0, 1, 2}, 3, {double(a), a + 1.0, double(b), b + 1.0, double(c), c + 1.0},
               resolution, 0, keep, cells);
    }
  }
  return cells;
}

// Density of the free point under the mixture that, for each i, places x4 at
// x_i + r w with w uniform on form i's cap and r uniform on [0, reach_i].
double free_point_density(const std::array<Vec3, 3>& x, const Vec3& x4, const FormTriple& forms,
                          const std::array<double, 3>& reach) {
  double q = 0.0;
  for (int i = 0; i < 3; ++i) {
    const Vec3 d = x4 - x[i];
    const double r = d.norm();
    if (r == 0.0 || r > reach[i]) continue;
    if (detail::angle_between(d, forms[i].center()) > forms[i].radius()) continue;
    q += 1.0 / (reach[i] * forms[i].cap_area() * r * r);
  }
  return q / 3.0;
}

struct StratumTally {
  NeumaierSum sum;
  NeumaierSum sum_sq;
  std::uint64_t count = 0;
};

}  // namespace

IntegralEstimate mc_estimate(const StringLink& link, Diagram d, const FormTriple& forms,
                             const McOptions& options) {
  if (link.k() != 3) throw InputError("triple linking needs exactly 3 strands");
  if (options.samples < 10000) throw InputError("Monte Carlo needs at least 10^4 samples");
  if (options.chunk == 0) throw InputError("chunk size must be positive");
  const Shape shape = shape_of(d);
  const bool free_vertex = d == Diagram::T;
  const bool uniform_box = options.sampling == Sampling::Uniform;
  if (free_vertex && (pole_of(forms[0]) != 1 || pole_of(forms[1]) != -1 || pole_of(forms[2]) != -1))
    throw InputError("the T sampler needs forms centred at north, south, south");
  const Configuration config(link, integration_tail_length(link, forms));

  CellSet primary, secondary;
  if (free_vertex) {
    primary = triple_cells(config, forms, uniform_box);
  } else {
    primary = chord_cells(config, shape.chords[0], shape, forms[shape.chords[0].form], uniform_box);
    secondary =
        chord_cells(config, shape.chords[1], shape, forms[shape.chords[1].form], uniform_box);
  }
  IntegralEstimate result;
  result.samples = options.samples;
  result.seed = options.seed;
  if (primary.boxes.empty() || (!free_vertex && secondary.boxes.empty())) return result;

  // Strata: contiguous groups of primary cells with similar volume.
  const std::size_t groups =
      std::min<std::size_t>({std::size_t{uniform_box ? 1u : 64u}, primary.boxes.size(),
                             std::size_t(options.samples / 2)});
  std::vector<std::size_t> bounds{0};
  for (std::size_t g = 1; g < groups; ++g) {
    const double target = primary.volume() * double(g) / double(groups);
    const auto it = std::lower_bound(primary.cumulative.begin(), primary.cumulative.end(), target);
    const std::size_t cut =
        std::max(bounds.back() + 1, std::size_t(it - primary.cumulative.begin()));
    if (cut >= primary.boxes.size()) break;
    bounds.push_back(cut);
  }
  bounds.push_back(primary.boxes.size());
  const std::size_t strata = bounds.size() - 1;
  std::vector<double> stratum_volume(strata);
  for (std::size_t h = 0; h < strata; ++h)
    stratum_volume[h] = primary.volume_between(bounds[h], bounds[h + 1]);

  // Allocation proportional to volume on top of two samples per stratum.
  std::vector<std::uint64_t> alloc(strata, 2);
  {
    const std::uint64_t spare = options.samples - 2 * strata;
    std::vector<std::pair<double, std::size_t>> remainder;
    std::uint64_t given = 0;
    for (std::size_t h = 0; h < strata; ++h) {
      const double share = double(spare) * stratum_volume[h] / primary.volume();
      const auto whole = static_cast<std::uint64_t>(std::floor(share));
      alloc[h] += whole;
      given += whole;
      remainder.emplace_back(share - double(whole), h);
    }
    std::stable_sort(remainder.begin(), remainder.end(),
                     [](const auto& a, const auto& b) { return a.first > b.first; });
    for (std::size_t i = 0; given < spare; ++i, ++given) ++alloc[remainder[i % strata].second];
  }
  std::vector<std::uint64_t> first_index(strata + 1, 0);
  for (std::size_t h = 0; h < strata; ++h) first_index[h + 1] = first_index[h] + alloc[h];

  auto draw = [&](Rng& rng, std::size_t h) -> double {
    std::array<double, 6> params{};
    double tau[3];
    primary.sample(rng, bounds[h], bounds[h + 1], tau);
    if (!free_vertex) {
      double other[2];
      secondary.sample(rng, 0, secondary.boxes.size(), other);
      params[shape.chords[0].from] = tau[0];
      params[shape.chords[0].to] = tau[1];
      params[shape.chords[1].from] = other[0];
      params[shape.chords[1].to] = other[1];
      const double f = integrand(config, d, forms, std::span<const double>(params.data(), 4));
      return f * stratum_volume[h] * secondary.volume();
    }
    std::array<Vec3, 3> x;
    for (int i = 0; i < 3; ++i) {
      params[i] = tau[i];
      x[i] = config.point(i, tau[i]);
    }
    const double top = std::min(x[1].z(), x[2].z());
    if (top <= x[0].z()) return 0.0;
    const std::array<double, 3> reach{(top - x[0].z()) / std::cos(forms[0].radius()),
                                      (x[1].z() - x[0].z()) / std::cos(forms[1].radius()),
                                      (x[2].z() - x[0].z()) / std::cos(forms[2].radius())};
    const int pick = static_cast<int>(uniform_index(rng, 3));
    const Vec3 w = uniform_on_cap(rng, forms[pick].center(), forms[pick].radius());
    const Vec3 x4 = x[pick] + uniform01(rng) * reach[pick] * w;
    const double q = free_point_density(x, x4, forms, reach);
    if (q == 0.0) return 0.0;
    params[3] = x4.x();
    params[4] = x4.y();
    params[5] = x4.z();
    const double f = integrand(config, d, forms, params);
    return f * stratum_volume[h] / q;
  };

  const std::uint64_t chunk = options.chunk;
  const std::size_t chunks = (options.samples + chunk - 1) / chunk;
  std::vector<std::vector<StratumTally>> tallies(chunks, std::vector<StratumTally>(strata));
  const std::string stream = "mc/" + std::string(diagram_name(d));
  parallel_for(chunks, options.threads, [&](std::size_t c) {
    auto rng = make_rng(options.seed, stream, c);
    const std::uint64_t begin = c * chunk;
    const std::uint64_t end = std::min<std::uint64_t>(options.samples, begin + chunk);
    std::size_t h =
        std::upper_bound(first_index.begin(), first_index.end(), begin) - first_index.begin() - 1;
    for (std::uint64_t i = begin; i < end; ++i) {
      while (i >= first_index[h + 1]) ++h;
      const double g = draw(rng, h);
      auto& t = tallies[c][h];
      t.sum.add(g);
      t.sum_sq.add(g * g);
      ++t.count;
    }
  });

  NeumaierSum mean, variance;
  for (std::size_t h = 0; h < strata; ++h) {
    NeumaierSum s, s2;
    std::uint64_t n = 0;
    for (std::size_t c = 0; c < chunks; ++c) {
      s.add(tallies[c][h].sum.value());
      s2.add(tallies[c][h].sum_sq.value());
      n += tallies[c][h].count;
    }
    const double m = s.value() / double(n);
    const double var = std::max(0.0, (s2.value() - double(n) * m * m) / double(n - 1));
    mean.add(m);
    variance.add(var / double(n));
  }
  result.mean = mean.value();
  result.std_error = std::sqrt(variance.value());
  return result;
}

IntegralResult mu123_integral(const StringLink& link, const FormTriple& forms,
                              const McOptions& options, const WeightTable& weights) {
  static constexpr std::array<Diagram, 4> kDiagrams{Diagram::L, Diagram::M, Diagram::R, Diagram::T};
  IntegralResult out;
  double variance = 0.0;
  for (int i = 0; i < 4; ++i) {
    out.diagrams[i] = mc_estimate(link, kDiagrams[i], forms, options);
    const int w = weights[kDiagrams[i]];
    out.total.mean += w * out.diagrams[i].mean;
    variance += double(w * w) * out.diagrams[i].std_error * out.diagrams[i].std_error;
  }
  out.total.mean *= kMu123Orientation;
  out.total.std_error = std::sqrt(variance);
  out.total.samples = options.samples;
  out.total.seed = options.seed;
  return out;
}

std::string convergence_csv(const StringLink& link, const FormTriple& forms,
                            std::span<const std::uint64_t> sample_counts,
                            const McOptions& options) {
  std::ostringstream out;
  out.precision(10);
  out << "N,quantity,estimate,stderr\n";
  for (const auto n : sample_counts) {
    McOptions o = options;
    o.samples = n;
    const auto r = mu123_integral(link, forms, o);
    const char* names[] = {"L", "M", "R", "T"};
    for (int i = 0; i < 4; ++i)
      out << n << ',' << names[i] << ',' << r.diagrams[i].mean << ',' << r.diagrams[i].std_error
          << '\n';
    out << n << ",mu123," << r.total.mean << ',' << r.total.std_error << '\n';
  }
  return out.str();
}

}  // namespace milnor
