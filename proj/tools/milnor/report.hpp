#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "milnor/string_link.hpp"
#include "milnor/weights.hpp"

namespace milnor::cli {

enum class Method { Degree, Magnus, Mc, Crossing };

std::string_view method_name(Method m);
std::optional<Method> parse_method(std::string_view name);

// "mu123" or "lk:i,j" with 1-based strands.
struct InvariantSpec {
  bool triple = true;
  int i = 0, j = 0;
  std::string label() const;
};

InvariantSpec parse_invariant(std::string_view text);

struct RunSettings {
  std::uint64_t seed = 0;
  std::uint64_t samples = 100000;
  double support_radius = 0.3;
  double min_margin = 0.05;  // regular values keep this distance from the degenerate set
  unsigned threads = 1;
  bool timing = false;
  WeightTable weights = mu123_weights();
};

struct InvariantResult {
  std::string invariant;
  Method method = Method::Degree;
  std::int64_t value = 0;  // exact methods
  double estimate = 0.0;   // Monte Carlo
  double std_error = 0.0;
  nlohmann::ordered_json diagnostics = nlohmann::ordered_json::object();

  bool exact() const { return method != Method::Mc; }
};

InvariantResult compute(const StringLink& link, const InvariantSpec& spec, Method method,
                        const RunSettings& settings);

struct NamedLink {
  std::string descriptor;
  StringLink link;
};

// A single name, braid word or link file, "calibration" for the unlink and
// the three axis links, or "random:N" for N seeded pure braids.
std::vector<NamedLink> load_corpus(std::string_view spec, std::uint64_t seed);

// Reads `text` as a builder name or a braid word.
StringLink build_named(std::string_view text, double radius = 1.0);

struct LinkReport {
  std::string descriptor;
  std::vector<InvariantResult> results;
  bool agree = true;
  double wall_seconds = 0.0;
};

// Runs every method on every invariant the link supports and checks that
// exact values coincide and Monte Carlo lands within 3σ of them.
LinkReport validate_link(const NamedLink& link, const RunSettings& settings);

nlohmann::ordered_json to_json(const InvariantResult& r);
nlohmann::ordered_json run_report(std::string_view corpus, const std::vector<LinkReport>& links,
                                  const RunSettings& settings, double wall_seconds);

}  // namespace milnor::cli
