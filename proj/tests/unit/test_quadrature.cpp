#include <cmath>
#include <numbers>
#include <sstream>

#include "doctest.h"
#include "milnor/builders.hpp"
#include "milnor/degree.hpp"
#include "milnor/errors.hpp"
#include "milnor/quadrature.hpp"
#include "support/corpus.hpp"

using namespace milnor;

namespace {

// Midpoint rule on a latitude/longitude grid, independent of the radial
// quadrature used at construction.
double sphere_integral(const BumpForm& f, int nt = 6000, int np = 600) {
  double sum = 0.0;
  const double dt = std::numbers::pi / nt;
  const double dp = 2.0 * std::numbers::pi / np;
  for (int i = 0; i < nt; ++i) {
    const double theta = (i + 0.5) * dt;
    for (int j = 0; j < np; ++j) {
      const double phi = (j + 0.5) * dp;
      const Vec3 u(std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi),
                   std::cos(theta));
      sum += f.density(u) * std::sin(theta) * dt * dp;
    }
  }
  return sum;
}

std::vector<double> integrand_params(const PreimageSolution& p) {
  std::vector<double> out;
  for (std::size_t i = 0; i < p.pieces.size(); ++i) out.push_back(p.global_param(int(i)));
  if (p.diagram == Diagram::T)
    out.insert(out.end(), {p.free_point.x(), p.free_point.y(), p.free_point.z()});
  return out;
}

}  // namespace

TEST_CASE("default forms") {
  const FormTriple forms = default_forms();
  CHECK(forms[0].center() == Vec3::UnitZ());
  CHECK(forms[1].center() == -Vec3::UnitZ());
  CHECK(forms[2].center() == -Vec3::UnitZ());
  CHECK(forms[0].density(Vec3::UnitZ()) > 0.0);
  CHECK(forms[1].density(Vec3::UnitX()) == 0.0);
  for (const auto& f : forms) CHECK(sphere_integral(f) == doctest::Approx(1.0).epsilon(1e-5));
  CHECK(sphere_integral(BumpForm(Vec3(1, 2, 3), 0.2)) == doctest::Approx(1.0).epsilon(1e-5));
  CHECK_THROWS_AS(BumpForm(Vec3::UnitZ(), 0.0), InputError);
}

TEST_CASE("bump density vanishes smoothly at the rim") {
  const BumpForm f(Vec3::UnitZ(), 0.3);
  auto at = [&](double theta) { return f.density(Vec3(std::sin(theta), 0.0, std::cos(theta))); };
  CHECK(at(0.3) == doctest::Approx(0.0));
  CHECK(at(0.31) == 0.0);
  // Quadratic approach: halving the distance to the rim quarters the value.
  CHECK(at(0.3 - 1e-3) / at(0.3 - 2e-3) == doctest::Approx(0.25).epsilon(0.01));
}

TEST_CASE("bump sampling follows the density") {
  const BumpForm f(Vec3::UnitZ(), 0.3);
  auto rng = make_rng(1, "bump-test");
  double mean_angle = 0.0;
  const int n = 20000;
  for (int i = 0; i < n; ++i) {
    const Vec3 u = f.sample(rng);
    CHECK(u.norm() == doctest::Approx(1.0));
    mean_angle += std::acos(std::clamp(u.z(), -1.0, 1.0));
  }
  mean_angle /= n;
  // E[θ] under the density, by the same grid rule.
  double num = 0.0, den = 0.0;
  for (int i = 0; i < 20000; ++i) {
    const double t = (i + 0.5) * 0.3 / 20000;
    const double w = std::pow(1.0 - (t / 0.3) * (t / 0.3), 2) * std::sin(t);
    num += t * w;
    den += w;
  }
  CHECK(mean_angle == doctest::Approx(num / den).epsilon(0.01));
}

TEST_CASE("integrand on the unlink is zero") {
  const StringLink link = make_unlink(3);
  const FormTriple forms = default_forms();
  auto rng = make_rng(2, "integrand-test");
  const Configuration config(link, integration_tail_length(link, forms));
  for (int n = 0; n < 200; ++n) {
    std::vector<double> p;
    for (int i = 0; i < 3; ++i) p.push_back(uniform(rng, 0.0, config.piece_count(i)));
    for (int i = 0; i < 3; ++i) p.push_back(uniform(rng, -1.0, 1.0));
    CHECK(integrand(config, Diagram::T, forms, p) == 0.0);
    p.resize(4);
    p[3] = uniform(rng, 0.0, config.piece_count(2));
    for (Diagram d : {Diagram::L, Diagram::M, Diagram::R})
      CHECK(integrand(config, d, forms, p) == 0.0);
  }
}

TEST_CASE("integrand sign agrees with preimage signs") {
  std::vector<StringLink> links{make_borromean(), testing::slide_link("s2 s2", -0.25)};
  std::size_t checked = 0;
  for (const auto& link : links) {
    for (std::uint64_t seed = 0; seed < 6; ++seed) {
      const DegreeResult r = mu123_degree(link, std::nullopt, seed);
      const FormTriple forms{BumpForm(r.regular_value.u[0], 0.3),
                             BumpForm(r.regular_value.u[1], 0.3),
                             BumpForm(r.regular_value.u[2], 0.3)};
      const Configuration config(link, integration_tail_length(link, default_forms()));
      for (const auto& p : r.solutions) {
        const double value = integrand(config, p.diagram, forms, integrand_params(p));
        CHECK(value != 0.0);
        CHECK((value > 0.0 ? 1 : -1) == p.sign);
        ++checked;
      }
    }
  }
  CHECK(checked >= 20u);
}

TEST_CASE("integrand is zero on the rim of a support") {
  // Place ω2 so that the L chord x3 -> x1 of a borromean preimage sits
  // exactly on its rim.
  const StringLink link = make_borromean();
  const DegreeResult r = mu123_degree(link, std::nullopt, 0);
  REQUIRE_FALSE(r.solutions.empty());
  const PreimageSolution& p = r.solutions.front();
  const Configuration config(link, integration_tail_length(link, default_forms()));
  auto forms = std::array<BumpForm, 3>{BumpForm(r.regular_value.u[0], 0.3),
                                       BumpForm(r.regular_value.u[1], 0.3),
                                       BumpForm(r.regular_value.u[2], 0.3)};
  const int target = p.diagram == Diagram::M ? 0 : 1;
  const Vec3 u = r.regular_value.u[target];
  const Vec3 axis = u.cross(Vec3::UnitX()).normalized();
  const Vec3 moved = Eigen::AngleAxisd(0.3, axis) * u;
  forms[target] = BumpForm(moved, 0.3);
  CHECK(integrand(config, p.diagram, forms, integrand_params(p)) ==
        doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("Monte Carlo on the unlink is exactly zero") {
  const StringLink link = make_unlink(3);
  for (Diagram d : {Diagram::L, Diagram::M, Diagram::R, Diagram::T}) {
    const IntegralEstimate e = mc_estimate(link, d, default_forms(), McOptions{.samples = 10000});
    CHECK(e.mean == 0.0);
    CHECK(e.std_error == 0.0);
  }
  CHECK_THROWS_AS(mc_estimate(link, Diagram::L, default_forms(), McOptions{.samples = 9999}),
                  InputError);
  CHECK_THROWS_AS(mc_estimate(make_unlink(2), Diagram::L, default_forms(), McOptions{}),
                  InputError);
}

TEST_CASE("Monte Carlo is reproducible and independent of the thread count") {
  const StringLink link = make_borromean();
  const McOptions base{.samples = 50000, .seed = 4, .threads = 1};
  McOptions threaded = base;
  threaded.threads = 4;
  const IntegralEstimate a = mc_estimate(link, Diagram::M, default_forms(), base);
  const IntegralEstimate b = mc_estimate(link, Diagram::M, default_forms(), base);
  const IntegralEstimate c = mc_estimate(link, Diagram::M, default_forms(), threaded);
  CHECK(a.mean == b.mean);
  CHECK(a.mean == c.mean);
  CHECK(a.std_error == c.std_error);
  CHECK(a.seed == 4u);
  CHECK(a.samples == 50000u);
}

TEST_CASE("per-diagram integrals match the preimage counts on the borromean link") {
  const StringLink link = make_borromean();
  const DegreeResult r = mu123_degree(link, std::nullopt, 0);
  const IntegralResult mc = mu123_integral(link, default_forms(), McOptions{.samples = 200000});
  for (int i = 0; i < 4; ++i) {
    const double tolerance = std::max(3.0 * mc.diagrams[i].std_error, 1e-12);
    CHECK(std::abs(mc.diagrams[i].mean - double(r.counts[i])) <= tolerance);
  }
  CHECK(std::abs(mc.total.mean - double(r.value)) <= 3.0 * mc.total.std_error);
}

TEST_CASE("uniform sampling agrees with importance sampling") {
  const StringLink link = make_borromean();
  const IntegralEstimate imp =
      mc_estimate(link, Diagram::M, default_forms(), McOptions{.samples = 100000, .seed = 1});
  const IntegralEstimate uni =
      mc_estimate(link, Diagram::M, default_forms(),
                  McOptions{.samples = 400000, .seed = 1, .sampling = Sampling::Uniform});
  CHECK(uni.std_error > imp.std_error);
  const double combined = std::hypot(imp.std_error, uni.std_error);
  CHECK(std::abs(uni.mean - imp.mean) <= 3.0 * combined);
}

TEST_CASE("doubling the sample count shrinks the error by sqrt 2") {
  const StringLink link = make_borromean();
  const auto e1 = mc_estimate(link, Diagram::M, default_forms(), McOptions{.samples = 100000});
  const auto e2 = mc_estimate(link, Diagram::M, default_forms(), McOptions{.samples = 200000});
  CHECK(e2.std_error / e1.std_error == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(0.2));
}

TEST_CASE("T integral on a link with T preimages") {
  const StringLink link = testing::slide_link("s2 s2", -0.25);
  const IntegralResult mc = mu123_integral(link, default_forms(), McOptions{.samples = 200000});
  CHECK(std::abs(mc.total.mean) <= 3.0 * mc.total.std_error);
  CHECK(mc.diagrams[3].std_error > 0.0);
}

TEST_CASE("convergence CSV") {
  const std::array<std::uint64_t, 2> counts{10000, 20000};
  const std::string csv =
      convergence_csv(make_borromean(), default_forms(), counts, McOptions{.seed = 2});
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);
  CHECK(line == "N,quantity,estimate,stderr");
  int rows = 0;
  while (std::getline(in, line)) ++rows;
  CHECK(rows == 10);
}
