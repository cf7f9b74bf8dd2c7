#include "report.hpp"

#include <charconv>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <map>

#include "milnor/builders.hpp"
#include "milnor/degree.hpp"
#include "milnor/diagram.hpp"
#include "milnor/errors.hpp"
#include "milnor/link_io.hpp"
#include "milnor/magnus.hpp"
#include "milnor/quadrature.hpp"

namespace milnor::cli {

using nlohmann::ordered_json;

namespace {

ordered_json vec(const Vec3& v) { return {v.x(), v.y(), v.z()}; }

int strand_label(std::string_view s) {
  int v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || p != s.data() + s.size() || v < 1)
    throw InputError("bad strand label '" + std::string(s) + "'");
  return v;
}

bool is_builder_name(std::string_view s) {
  return s == "unlink" || s == "borromean" || s == "l12" || s == "l13" || s == "l23";
}

}  // namespace

std::string_view method_name(Method m) {
  switch (m) {
    case Method::Degree:
      return "degree";
    case Method::Magnus:
      return "magnus";
    case Method::Mc:
      return "mc";
    case Method::Crossing:
      return "crossing";
  }
  return "?";
}

std::optional<Method> parse_method(std::string_view name) {
  for (Method m : {Method::Degree, Method::Magnus, Method::Mc, Method::Crossing})
    if (method_name(m) == name) return m;
  return std::nullopt;
}

std::string InvariantSpec::label() const {
  return triple ? "mu123" : "lk:" + std::to_string(i) + "," + std::to_string(j);
}

InvariantSpec parse_invariant(std::string_view text) {
  if (text == "mu123") return {};
  if (text.substr(0, 3) != "lk:") throw InputError("invariant must be mu123 or lk:i,j");
  const auto rest = text.substr(3);
  const auto comma = rest.find(',');
  if (comma == std::string_view::npos) throw InputError("lk needs two strands, as in lk:1,2");
  InvariantSpec spec{false, strand_label(rest.substr(0, comma)),
                     strand_label(rest.substr(comma + 1))};
  if (spec.i == spec.j) throw InputError("lk needs two different strands");
  return spec;
}

InvariantResult compute(const StringLink& link, const InvariantSpec& spec, Method method,
                        const RunSettings& settings) {
  if (!spec.triple && (spec.i > link.k() || spec.j > link.k()))
    throw InputError("strand label exceeds the link's strand count");
  if (spec.triple && link.k() != 3) throw InputError("mu123 needs a 3-strand link");

  InvariantResult r;
  r.invariant = spec.label();
  r.method = method;
  switch (method) {
    case Method::Degree: {
      DegreeOptions options;
      options.threads = settings.threads;
      options.min_margin = settings.min_margin;
      if (spec.triple) {
        const DegreeResult d =
            mu123_degree(link, std::nullopt, settings.seed, options, settings.weights);
        r.value = d.value;
        r.diagnostics["regular_value"] = {vec(d.regular_value.u[0]), vec(d.regular_value.u[1]),
                                          vec(d.regular_value.u[2])};
        r.diagnostics["margin"] = d.regular_value.margin;
        r.diagnostics["attempt"] = d.regular_value.attempt;
        r.diagnostics["counts"] = {
            {"L", d.counts[0]}, {"M", d.counts[1]}, {"R", d.counts[2]}, {"T", d.counts[3]}};
        r.diagnostics["solutions"] = d.solutions.size();
      } else {
        r.value = lk_degree(link, spec.i, spec.j, settings.seed, options);
      }
      break;
    }
    case Method::Magnus: {
      const LinkDiagram diagram = generic_projection(link, settings.seed);
      const std::string indices =
          spec.triple ? "1,2;3" : std::to_string(spec.i) + ";" + std::to_string(spec.j);
      r.value = mu(diagram, parse_mu_indices(indices));
      r.diagnostics["projection"] = vec(diagram.direction);
      r.diagnostics["crossings"] = diagram.crossing_count();
      break;
    }
    case Method::Crossing: {
      if (spec.triple) throw InputError("the crossing method only computes lk");
      const LinkDiagram diagram = generic_projection(link, settings.seed);
      r.value = crossing_lk(diagram, spec.i, spec.j);
      r.diagnostics["projection"] = vec(diagram.direction);
      break;
    }
    case Method::Mc: {
      if (!spec.triple) throw InputError("Monte Carlo is only implemented for mu123");
      McOptions options;
      options.samples = settings.samples;
      options.seed = settings.seed;
      options.threads = settings.threads;
      const IntegralResult ir =
          mu123_integral(link, default_forms(settings.support_radius), options, settings.weights);
      r.estimate = ir.total.mean;
      r.std_error = ir.total.std_error;
      r.diagnostics["samples"] = settings.samples;
      r.diagnostics["support_radius"] = settings.support_radius;
      ordered_json per = ordered_json::object();
      static constexpr std::array<const char*, 4> kNames{"L", "M", "R", "T"};
      for (int i = 0; i < 4; ++i)
        per[kNames[i]] = {{"estimate", ir.diagrams[i].mean}, {"stderr", ir.diagrams[i].std_error}};
      r.diagnostics["diagrams"] = std::move(per);
      break;
    }
  }
  return r;
}

StringLink build_named(std::string_view text, double radius) {
  if (is_builder_name(text)) return make_named_link(text, radius);
  return from_braid(parse_braid(text), 3, radius);
}

std::vector<NamedLink> load_corpus(std::string_view spec, std::uint64_t seed) {
  std::vector<NamedLink> out;
  if (spec == "calibration") {
    for (const char* name : {"unlink", "l12", "l13", "l23"})
      out.push_back({name, make_named_link(name)});
    return out;
  }
  if (spec.substr(0, 7) == "random:") {
    const int count = strand_label(spec.substr(7));
    auto rng = make_rng(seed, "corpus");
    for (int n = 0; n < count; ++n) {
      const BraidWord word = random_pure_braid(rng);
      out.push_back({format_braid(word), from_braid(word, 3)});
    }
    return out;
  }
  if (std::filesystem::exists(std::filesystem::path(spec)))
    out.push_back({std::string(spec), read_link_file(std::filesystem::path(spec))});
  else
    out.push_back({std::string(spec), build_named(spec)});
  return out;
}

LinkReport validate_link(const NamedLink& named, const RunSettings& settings) {
  const auto start = std::chrono::steady_clock::now();
  const StringLink& link = named.link;
  LinkReport report;
  report.descriptor = named.descriptor;

  std::vector<InvariantSpec> specs;
  for (int i = 1; i <= link.k(); ++i)
    for (int j = i + 1; j <= link.k(); ++j) specs.push_back({false, i, j});
  if (link.k() == 3) specs.push_back({});

  for (const InvariantSpec& spec : specs) {
    const std::vector<Method> methods =
        spec.triple ? std::vector{Method::Degree, Method::Magnus, Method::Mc}
                    : std::vector{Method::Degree, Method::Magnus, Method::Crossing};
    std::optional<std::int64_t> exact;
    std::vector<InvariantResult> group;
    for (Method m : methods) group.push_back(compute(link, spec, m, settings));
    if (!spec.triple) {
      // Both orders of the Magnus reading give the same linking number.
      InvariantResult reversed =
          compute(link, InvariantSpec{false, spec.j, spec.i}, Method::Magnus, settings);
      reversed.invariant = spec.label();
      reversed.diagnostics["order"] = "reversed";
      group.push_back(std::move(reversed));
    }
    for (const auto& r : group) {
      if (!r.exact()) continue;
      if (exact && *exact != r.value) report.agree = false;
      exact = exact.value_or(r.value);
    }
    for (const auto& r : group) {
      if (r.exact() || !exact) continue;
      const double miss = std::abs(r.estimate - double(*exact));
      if (miss > std::max(3.0 * r.std_error, 1e-9)) report.agree = false;
    }
    for (auto& r : group) report.results.push_back(std::move(r));
  }
  report.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

ordered_json to_json(const InvariantResult& r) {
  ordered_json j;
  j["invariant"] = r.invariant;
  j["method"] = method_name(r.method);
  if (r.exact()) {
    j["value"] = r.value;
  } else {
    j["estimate"] = r.estimate;
    j["stderr"] = r.std_error;
  }
  j["diagnostics"] = r.diagnostics;
  return j;
}

ordered_json run_report(std::string_view corpus, const std::vector<LinkReport>& links,
                        const RunSettings& settings, double wall_seconds) {
  ordered_json doc;
  doc["corpus"] = corpus;
  doc["seeds"] = {
      {"seed", settings.seed},
      {"streams",
       {"corpus", "regular-value", "lk-direction", "projection", "mc/L", "mc/M", "mc/R", "mc/T"}}};
  doc["samples"] = settings.samples;
  doc["support_radius"] = settings.support_radius;
  bool agree = true;
  ordered_json entries = ordered_json::array();
  for (const auto& l : links) {
    ordered_json e;
    e["link"] = l.descriptor;
    ordered_json results = ordered_json::array();
    for (const auto& r : l.results) results.push_back(to_json(r));
    e["results"] = std::move(results);
    e["agree"] = l.agree;
    if (settings.timing) e["wall_seconds"] = l.wall_seconds;
    entries.push_back(std::move(e));
    agree = agree && l.agree;
  }
  doc["links"] = std::move(entries);
  doc["agree"] = agree;
  if (settings.timing) doc["wall_seconds"] = wall_seconds;
  return doc;
}

}  // namespace milnor::cli
