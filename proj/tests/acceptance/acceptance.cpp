// Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any
// criterion fails.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "milnor/builders.hpp"
#include "milnor/degree.hpp"
#include "milnor/diagram.hpp"
#include "milnor/magnus.hpp"
#include "milnor/quadrature.hpp"
#include "milnor/weights.hpp"
#include "support/corpus.hpp"

using namespace milnor;

namespace {

constexpr std::array<std::pair<int, int>, 3> kPairs{{{1, 2}, {1, 3}, {2, 3}}};

struct Exact {
  std::int64_t mu_degree = 0;
  std::int64_t mu_magnus = 0;
  // Per pair: crossing sum, Magnus (i;j), Magnus (j;i), degree.
  std::array<std::array<std::int64_t, 4>, 3> lk{};

  bool consistent() const {
    if (mu_degree != mu_magnus) return false;
    for (const auto& l : lk)
      if (std::adjacent_find(l.begin(), l.end(), std::not_equal_to<>()) != l.end()) return false;
    return true;
  }
  friend bool operator==(const Exact&, const Exact&) = default;
};

Exact exact_invariants(const StringLink& link, std::uint64_t seed) {
  Exact e;
  e.mu_degree = mu123_degree(link, std::nullopt, seed).value;
  const LinkDiagram d = generic_projection(link, seed);
  e.mu_magnus = mu(d, parse_mu_indices("1,2;3"));
  for (std::size_t p = 0; p < kPairs.size(); ++p) {
    const auto [i, j] = kPairs[p];
    e.lk[p] = {crossing_lk(d, i, j), mu(d, MuIndices{{i}, j}), mu(d, MuIndices{{j}, i}),
               lk_degree(link, i, j, seed)};
  }
  return e;
}

double max_segment(const StringLink& link) {
  double h = 0.0;
  for (const auto& s : link.strands())
    for (std::size_t i = 0; i + 1 < s.vertices.size(); ++i)
      h = std::max(h, (s.vertices[i + 1] - s.vertices[i]).norm());
  return h;
}

// Largest jitter that keeps the isotopy class: half the clearance, and
// interior vertices must stay inside the ball.
double safe_amplitude(const StringLink& link) {
  double depth = link.radius();
  for (const auto& s : link.strands())
    for (std::size_t i = 1; i + 1 < s.vertices.size(); ++i)
      depth = std::min(depth, link.radius() - s.vertices[i].norm());
  return 0.5 * std::min(0.5 * clearance(link), depth);
}

struct Named {
  std::string name;
  StringLink link;
};

std::vector<Named> corpus() {
  std::vector<Named> out;
  for (const char* name : {"unlink", "l12", "l13", "l23", "borromean"})
    out.push_back({name, make_named_link(name)});
  // Strand 1 dragged under the crossings of 2 and 3: these carry T preimages.
  out.push_back({"slide(s2 s2)", testing::slide_link("s2 s2", -0.25, -0.35)});
  out.push_back({"slide(s2 s2 s2^-1 s2^-1 s2 s2)",
                 testing::slide_link("s2 s2 s2^-1 s2^-1 s2 s2", -0.25, -0.35)});
  auto rng = make_rng(2024, "acceptance-corpus");
  for (int n = 0; n < 3; ++n) {
    const BraidWord w = random_pure_braid(rng);
    out.push_back({format_braid(w), from_braid(w, 3)});
  }
  return out;
}

class Suite {
 public:
  void run(int id, const char* title, const std::function<bool(std::string&)>& body) {
    const auto start = std::chrono::steady_clock::now();
    std::string detail;
    bool ok = false;
    try {
      ok = body(detail);
    } catch (const std::exception& e) {
      detail = std::string("exception: ") + e.what();
    }
    const double s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("AC%d %s  %s  (%.1f s)  %s\n", id, ok ? "PASS" : "FAIL", title, s, detail.c_str());
    std::fflush(stdout);
    failures_ += ok ? 0 : 1;
  }
  int failures() const { return failures_; }

 private:
  int failures_ = 0;
};

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.4f", v);
  return buf;
}

template <class F>
double seconds(F&& f) {
  const auto start = std::chrono::steady_clock::now();
  f();
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

}  // namespace

int main() {
  Suite suite;

  suite.run(1, "calibration links", [](std::string& detail) {
    bool ok = true;
    const double t = seconds([&] {
      for (const char* name : {"unlink", "l12", "l13", "l23"}) {
        const StringLink link = make_named_link(name);
        const Exact e = exact_invariants(link, 0);
        const IntegralResult mc =
            mu123_integral(link, default_forms(), McOptions{.samples = 100000, .seed = 0});
        int nonzero = 0;
        bool unit = true;
        for (const auto& l : e.lk)
          if (l[0] != 0) {
            ++nonzero;
            unit = unit && std::abs(l[0]) == 1;
          }
        const bool axis = std::string(name) != "unlink";
        const bool mc_ok = std::abs(mc.total.mean) <= std::max(3.0 * mc.total.std_error, 1e-12);
        const bool link_ok =
            e.consistent() && e.mu_degree == 0 && mc_ok && nonzero == (axis ? 1 : 0) && unit;
        detail += std::string(name) + ":mu=" + std::to_string(e.mu_degree) + "/" +
                  std::to_string(e.mu_magnus) + ",mc=" + fmt(mc.total.mean) + "±" +
                  fmt(mc.total.std_error) + ",nonzero_lk=" + std::to_string(nonzero) + " ";
        ok = ok && link_ok;
      }
    });
    detail += "time=" + fmt(t) + "s";
    return ok && t < 60.0;
  });

  suite.run(2, "weight table", [](std::string& detail) {
    const std::array<int, 7> expected{1, -1, 1, 0, 0, 0, -1};
    bool ok = stu_consistency();
    for (std::size_t i = 0; i < kAllDiagrams.size(); ++i) {
      detail += std::string(diagram_name(kAllDiagrams[i])) + "=" +
                std::to_string(weight_mu123(kAllDiagrams[i])) + " ";
      ok = ok && weight_mu123(kAllDiagrams[i]) == expected[i];
    }
    detail += stu_consistency() ? "stu=true" : "stu=false";
    return ok;
  });

  suite.run(3, "borromean", [](std::string& detail) {
    bool ok = true;
    const double t = seconds([&] {
      const StringLink link = make_borromean();
      const Exact e = exact_invariants(link, 0);
      const IntegralResult mc =
          mu123_integral(link, default_forms(), McOptions{.samples = 1000000, .seed = 0});
      bool lk_zero = true;
      for (const auto& l : e.lk) lk_zero = lk_zero && l[0] == 0;
      const double z = std::abs(mc.total.mean - double(e.mu_magnus)) / mc.total.std_error;
      detail = "magnus=" + std::to_string(e.mu_magnus) + " degree=" + std::to_string(e.mu_degree) +
               " mc=" + fmt(mc.total.mean) + "±" + fmt(mc.total.std_error) + " z=" + fmt(z);
      ok = e.consistent() && lk_zero && std::abs(e.mu_magnus) == 1 && z <= 3.0;
    });
    detail += " time=" + fmt(t) + "s";
    return ok && t < 300.0;
  });

  suite.run(4, "oracle equivalence on 50 random pure braids", [](std::string& detail) {
    int disagreements = 0, nonzero = 0;
    const double t = seconds([&] {
      auto rng = make_rng(7, "corpus");
      for (int n = 0; n < 50; ++n) {
        const BraidWord w = random_pure_braid(rng, 12, 3);
        const Exact e = exact_invariants(from_braid(w, 3), std::uint64_t(n));
        if (!e.consistent()) ++disagreements;
        if (e.mu_magnus != 0) ++nonzero;
      }
    });
    detail = "disagreements=" + std::to_string(disagreements) +
             " nonzero_mu=" + std::to_string(nonzero) + " time=" + fmt(t) + "s";
    return disagreements == 0 && t < 900.0;
  });

  suite.run(5, "regular-value independence", [](std::string& detail) {
    auto links = corpus();
    bool ok = true;
    for (std::size_t n = 0; n < 10 && n < links.size(); ++n) {
      const std::int64_t first = mu123_degree(links[n].link, std::nullopt, 0).value;
      std::int64_t spread = 0;
      for (std::uint64_t seed = 1; seed < 10; ++seed)
        spread = std::max(spread,
                          std::abs(mu123_degree(links[n].link, std::nullopt, seed).value - first));
      ok = ok && spread == 0;
      detail += links[n].name + "=" + std::to_string(first) + (spread ? "(varies) " : " ");
    }
    return ok;
  });

  suite.run(6, "resampling and perturbation", [](std::string& detail) {
    int checked = 0, changed = 0;
    for (const auto& [name, link] : corpus()) {
      const Exact reference = exact_invariants(link, 0);
      const double h = max_segment(link);
      for (double fraction : {0.5, 0.25}) {
        ++checked;
        if (!(exact_invariants(resample(link, fraction * h), 1) == reference)) ++changed;
      }
      const double amplitude = safe_amplitude(link);
      for (std::uint64_t seed = 0; seed < 20; ++seed) {
        ++checked;
        if (!(exact_invariants(perturb(link, amplitude, seed), seed) == reference)) ++changed;
      }
    }
    detail = "variants=" + std::to_string(checked) + " changed=" + std::to_string(changed);
    return changed == 0;
  });

  suite.run(7, "Monte Carlo scaling and support radius", [](std::string& detail) {
    const StringLink link = make_borromean();
    const auto small =
        mu123_integral(link, default_forms(0.3), McOptions{.samples = 100000, .seed = 5});
    const auto large =
        mu123_integral(link, default_forms(0.3), McOptions{.samples = 400000, .seed = 5});
    const double ratio = large.total.std_error / (0.5 * small.total.std_error);
    const auto narrow =
        mu123_integral(link, default_forms(0.2), McOptions{.samples = 400000, .seed = 6});
    const double combined = std::hypot(large.total.std_error, narrow.total.std_error);
    const double z = std::abs(large.total.mean - narrow.total.mean) / combined;
    detail = "stderr_ratio=" + fmt(ratio) + " rho0.3=" + fmt(large.total.mean) +
             " rho0.2=" + fmt(narrow.total.mean) + " z=" + fmt(z);
    return std::abs(ratio - 1.0) <= 0.2 && z <= 3.0;
  });

  suite.run(8, "degenerate locus", [](std::string& detail) {
    const StringLink link = make_borromean();
    const Vec3 n = Vec3::UnitZ(), s = -Vec3::UnitZ();
    const double on_c_plus = degenerate_margin(link, {Vec3::UnitX(), s, s});
    const double in_h_plus = degenerate_margin(link, {n, n, n});
    const double generic = degenerate_margin(link, {n, s, s});
    detail = "C+=" + fmt(on_c_plus) + " H+^3=" + fmt(in_h_plus) + " NSS=" + fmt(generic);
    return on_c_plus == 0.0 && in_h_plus == 0.0 && generic > 0.0;
  });

  suite.run(9, "integrand sign coherence", [](std::string& detail) {
    int checked = 0, agree = 0, with_t = 0;
    for (const auto& [name, link] : corpus()) {
      const Configuration config(link, integration_tail_length(link, default_forms()));
      for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const DegreeResult r = mu123_degree(link, std::nullopt, seed);
        const FormTriple forms{BumpForm(r.regular_value.u[0], 0.3),
                               BumpForm(r.regular_value.u[1], 0.3),
                               BumpForm(r.regular_value.u[2], 0.3)};
        for (const auto& p : r.solutions) {
          std::vector<double> params;
          for (std::size_t i = 0; i < p.pieces.size(); ++i)
            params.push_back(p.global_param(int(i)));
          if (p.diagram == Diagram::T)
            params.insert(params.end(), {p.free_point.x(), p.free_point.y(), p.free_point.z()});
          const double value = integrand(config, p.diagram, forms, params);
          ++checked;
          with_t += p.diagram == Diagram::T;
          agree += value != 0.0 && (value > 0.0 ? 1 : -1) == p.sign;
        }
      }
    }
    detail = "solutions=" + std::to_string(checked) + " agree=" + std::to_string(agree) +
             " T=" + std::to_string(with_t);
    return checked >= 20 && with_t > 0 && agree == checked;
  });

  return suite.failures() == 0 ? 0 : 1;
}
