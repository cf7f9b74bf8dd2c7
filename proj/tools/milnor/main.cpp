#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "milnor/errors.hpp"
#include "milnor/link_io.hpp"
#include "milnor/quadrature.hpp"
#include "report.hpp"

namespace {

using namespace milnor;
using namespace milnor::cli;

enum Exit { kOk = 0, kDisagree = 1, kBadInput = 2, kNumerical = 3 };

std::uint64_t sample_count(double requested) {
  if (!(requested >= 1.0) || requested != std::floor(requested) || requested > 1e15)
    throw InputError("--samples must be a positive integer");
  return static_cast<std::uint64_t>(requested);
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write '" + path + "'");
  out << text;
}

// 1/16, 1/8, ... of the requested count, never below the sampler's minimum.
std::vector<std::uint64_t> ladder(std::uint64_t samples) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t n = samples; n >= 10000 && out.size() < 5; n /= 2) out.insert(out.begin(), n);
  if (out.empty()) out.push_back(10000);
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Triple linking numbers of 3-strand string links"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "milnor 0.1.0");

  std::string gen_spec, gen_out;
  double gen_radius = 1.0;
  auto* gen = app.add_subcommand("gen", "Write a link file for a named link or a pure braid word");
  gen->add_option("link", gen_spec, "unlink, l12, l13, l23, borromean or a word like \"s1 s2^-1\"")
      ->required();
  gen->add_option("-o,--output", gen_out, "Output path (stdout when omitted)");
  gen->add_option("--radius", gen_radius, "Radius of the ball holding the nonlinear part");

  RunSettings settings;
  double samples = 1e5;
  std::string link_path, invariant = "mu123", method = "degree", csv_path;
  auto* inv = app.add_subcommand("invariant", "Compute one invariant of a link file");
  inv->add_option("file", link_path, "Link JSON file")->required();
  inv->add_option("--invariant", invariant, "mu123 or lk:i,j");
  inv->add_option("--method", method, "degree, magnus, mc or crossing");
  inv->add_option("--csv", csv_path, "With --method mc: write a convergence table here");

  std::string corpus, report_out;
  bool corrupt = false;
  auto* val = app.add_subcommand("validate", "Run every method on a link or corpus and compare");
  val->add_option("corpus", corpus, "Link file, name, braid word, 'calibration' or 'random:N'")
      ->required();
  val->add_option("-o,--output", report_out, "Report path (stdout when omitted)");
  val->add_flag("--debug-corrupt-weights", corrupt)->group("");

  for (auto* cmd : {inv, val}) {
    cmd->add_option("--seed", settings.seed, "Master seed for every random stream");
    cmd->add_option("--samples", samples, "Monte Carlo sample count per diagram");
    cmd->add_option("--rho", settings.support_radius, "Angular radius of the bump forms");
    cmd->add_option("--min-margin", settings.min_margin,
                    "Required distance of regular values from the degenerate set (radians)");
    cmd->add_option("--threads", settings.threads, "Worker threads (0 = hardware)");
    cmd->add_flag("--timing", settings.timing, "Report wall time");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kBadInput;
  }

  const auto start = std::chrono::steady_clock::now();
  auto elapsed = [&] {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  };
  try {
    if (*gen) {
      write_text(gen_out, link_to_json(build_named(gen_spec, gen_radius)));
      return kOk;
    }
    settings.samples = sample_count(samples);
    if (*inv) {
      const StringLink link = read_link_file(link_path);
      const auto m = parse_method(method);
      if (!m) throw InputError("unknown method '" + method + "'");
      const InvariantResult r = compute(link, parse_invariant(invariant), *m, settings);
      if (r.exact()) {
        std::cout << r.value << "\n";
      } else {
        std::printf("%.6f ± %.6f\n", r.estimate, r.std_error);
        if (!csv_path.empty()) {
          McOptions options;
          options.seed = settings.seed;
          options.threads = settings.threads;
          write_text(csv_path, convergence_csv(link, default_forms(settings.support_radius),
                                               ladder(settings.samples), options));
        }
      }
      if (settings.timing) std::cerr << "wall time " << elapsed() << " s\n";
      return kOk;
    }
    if (*val) {
      if (corrupt) settings.weights[Diagram::M] = -settings.weights[Diagram::M];
      std::vector<LinkReport> links;
      for (const auto& named : load_corpus(corpus, settings.seed))
        links.push_back(validate_link(named, settings));
      const auto doc = run_report(corpus, links, settings, elapsed());
      write_text(report_out, doc.dump(2) + "\n");
      return doc["agree"].get<bool>() ? kOk : kDisagree;
    }
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kBadInput;
  } catch (const RegularValueExhausted& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kNumerical;
  } catch (const DegeneracyError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kNumerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kNumerical;
  }
  return kOk;
}
