// Command-line front end. Exit codes: 0 success / all PASS, 1 bad input or
// runtime error, 2 a hard FAIL in a report, 3 advisory failures only.

#include <cstdio>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "fracbly/bounds.hpp"
#include "fracbly/error.hpp"
#include "fracbly/fractional.hpp"
#include "fracbly/harness.hpp"
#include "fracbly/json_io.hpp"
#include "fracbly/lemma.hpp"
#include "fracbly/spectrum.hpp"

using namespace fracbly;

namespace {

// A path to a JSON descriptor, or the JSON itself when it starts with '{'.
Json load_json_arg(const std::string& arg) {
  if (!arg.empty() && arg.front() == '{') {
    try {
      return Json::parse(arg);
    } catch (const Json::parse_error& e) {
      throw InvalidInput(std::string("inline JSON: ") + e.what());
    }
  }
  return read_json_file(arg);
}

void write_or_print(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
  } else {
    write_text_file(path, text);
  }
}

std::pair<std::int64_t, std::int64_t> parse_range(const std::string& s) {
  const auto dots = s.find("..");
  try {
    if (dots == std::string::npos) {
      const auto k = std::stoll(s);
      return {k, k};
    }
    return {std::stoll(s.substr(0, dots)), std::stoll(s.substr(dots + 2))};
  } catch (const std::exception&) {
    throw InvalidInput("--k-range must look like a..b, got " + s);
  }
}

struct ExperimentFlags {
  std::string config;
  std::string k_range;
  std::string csv;
  std::string json;
};

void add_experiment_flags(CLI::App* cmd, ExperimentFlags& f) {
  cmd->add_option("--config", f.config, "experiment config (JSON file or inline JSON)");
  cmd->add_option("--k-range", f.k_range, "k range a..b, overrides the config");
  cmd->add_option("--csv", f.csv, "CSV report path, overrides the config");
  cmd->add_option("--json", f.json, "JSON report path, overrides the config");
}

ExperimentConfig resolve_config(const ExperimentFlags& f) {
  ExperimentConfig c;
  if (!f.config.empty()) c = config_from_json(load_json_arg(f.config));
  if (!f.k_range.empty()) std::tie(c.k_min, c.k_max) = parse_range(f.k_range);
  if (!f.csv.empty()) c.csv_out = f.csv;
  if (!f.json.empty()) c.json_out = f.json;
  return c;
}

int finish(const BoundReport& rep, const ExperimentConfig& c) {
  if (!c.csv_out.empty()) emit_report(rep, ReportFormat::csv, c.csv_out);
  if (!c.json_out.empty()) emit_report(rep, ReportFormat::json, c.json_out);
  if (c.csv_out.empty() && c.json_out.empty()) std::cout << report_to_csv(rep);
  int fails = 0, advisory_fails = 0, skipped = 0;
  for (const auto& r : rep.rows) {
    fails += r.verdict == Verdict::fail;
    advisory_fails += r.verdict == Verdict::advisory_fail;
    skipped += r.verdict == Verdict::skipped;
  }
  std::fprintf(stderr, "%s: %zu rows, %d FAIL, %d ADVISORY_FAIL, %d SKIPPED\n", rep.experiment.c_str(),
               rep.rows.size(), fails, advisory_fails, skipped);
  for (const auto& x : rep.crossovers) {
    std::fprintf(stderr, "crossover %s over %s (alpha %g): %s\n", x.challenger.c_str(), x.incumbent.c_str(),
                 x.alpha, x.k0 ? std::to_string(*x.k0).c_str() : "none up to limit");
  }
  return rep.exit_code();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Berezin-Li-Yau type bounds for the fractional Laplacian: evaluation and verification"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kToolVersion);

  int exit_code = 0;

  // bounds eval
  auto* bounds = app.add_subcommand("bounds", "bound evaluation");
  bounds->require_subcommand(1);
  auto* eval = bounds->add_subcommand("eval", "evaluate one bound kind over a k range");
  std::string domain_arg, kind_name = "PROP_NEW", k_range = "1..10", out;
  double alpha = 2.0, ell = 1.0, sigma = 1.0;
  eval->add_option("--domain", domain_arg, "domain descriptor (JSON file or inline JSON)")->required();
  eval->add_option("--kind", kind_name, "BLY, MELAS, ST2, ST6_POWER, PROP_NEW, THM_POWER, ELLIPTIC");
  eval->add_option("--alpha", alpha);
  eval->add_option("--ell", ell);
  eval->add_option("--sigma", sigma);
  eval->add_option("--k-range", k_range, "a..b");
  eval->add_option("--out", out, "CSV path (stdout if omitted)");
  eval->callback([&] {
    const Domain dom = domain_from_json(load_json_arg(domain_arg));
    const GeometrySummary geom = summarize(dom);
    const BoundKind kind = bound_kind_from_string(kind_name);
    const auto [k0, k1] = parse_range(k_range);
    std::vector<BoundValue> values;
    for (std::int64_t k = std::max<std::int64_t>(k0, 1); k <= k1; ++k) {
      values.push_back(evaluate_bound(kind, geom, {dom.dimension(), alpha, ell, sigma, k}));
    }
    write_or_print(out, bounds_to_csv(values));
  });

  // lemma scan
  auto* lemma = app.add_subcommand("lemma", "key inequality machinery");
  lemma->require_subcommand(1);
  auto* scan = lemma->add_subcommand("scan", "scan h(x) on [0, xmax] for its minimum");
  int d = 3, points = 100000;
  double xmax = 20.0;
  bool force = false;
  scan->add_option("--d", d);
  scan->add_option("--alpha", alpha);
  scan->add_option("--xmax", xmax);
  scan->add_option("--points", points);
  scan->add_flag("--force", force, "scan outside the region where the inequality is known to hold");
  scan->add_option("--out", out, "JSON path (stdout if omitted)");
  scan->callback([&] {
    if (!force && !in_key_region(d, alpha)) {
      throw RegionViolation("(d, alpha) lies outside the key region; pass --force to hunt for counterexamples");
    }
    const LemmaScanResult r = scan_min_gap(d, alpha, xmax, points);
    write_or_print(out, scan_to_json(r).dump(2) + '\n');
  });

  // spectrum exact / fractional
  auto* spectrum = app.add_subcommand("spectrum", "eigenvalue lists");
  spectrum->require_subcommand(1);
  int K = 10, grid = 64;
  auto* exact = spectrum->add_subcommand("exact", "exact Dirichlet Laplacian spectrum (box, disk, ball)");
  exact->add_option("--domain", domain_arg)->required();
  exact->add_option("--K", K);
  exact->add_option("--out", out, "CSV path (stdout if omitted)");
  exact->callback([&] {
    const Domain dom = domain_from_json(load_json_arg(domain_arg));
    write_or_print(out, spectrum_to_csv(exact_spectrum(dom, K)));
  });
  auto* frac = spectrum->add_subcommand("fractional", "restricted fractional Laplacian on a lattice");
  frac->add_option("--domain", domain_arg)->required();
  frac->add_option("--alpha", alpha);
  frac->add_option("--grid", grid, "lattice sites along the longest axis");
  frac->add_option("--K", K);
  frac->add_option("--out", out, "CSV path (stdout if omitted)");
  frac->callback([&] {
    const Domain dom = domain_from_json(load_json_arg(domain_arg));
    const GridOperator op = build_fractional_operator(dom, alpha, grid);
    write_or_print(out, spectrum_to_csv(fractional_eigs(op, K)));
  });

  // verify sandwich / compare bounds
  ExperimentFlags sandwich_flags, compare_flags;
  auto* verify = app.add_subcommand("verify", "verification experiments");
  verify->require_subcommand(1);
  auto* sandwich = verify->add_subcommand("sandwich", "lower bound <= eigenvalue sums <= Chen-Song proxy");
  add_experiment_flags(sandwich, sandwich_flags);
  sandwich->callback([&] {
    const ExperimentConfig c = resolve_config(sandwich_flags);
    exit_code = finish(run_sandwich(c), c);
  });
  auto* compare = app.add_subcommand("compare", "bound comparisons");
  compare->require_subcommand(1);
  auto* cmp_bounds = compare->add_subcommand("bounds", "all bounds per k, largest marked, crossovers");
  add_experiment_flags(cmp_bounds, compare_flags);
  cmp_bounds->callback([&] {
    const ExperimentConfig c = resolve_config(compare_flags);
    exit_code = finish(run_bound_comparison(c), c);
  });

  // report: re-emit a saved JSON report
  auto* report = app.add_subcommand("report", "re-emit a saved JSON report and return its exit code");
  std::string report_in, format = "csv";
  report->add_option("--in", report_in, "JSON report")->required();
  report->add_option("--format", format)->check(CLI::IsMember({"csv", "json"}));
  report->add_option("--out", out, "output path (stdout if omitted)");
  report->callback([&] {
    const BoundReport rep = report_from_json(read_json_file(report_in));
    write_or_print(out, format == "csv" ? report_to_csv(rep) : report_to_json(rep).dump(2) + '\n');
    exit_code = rep.exit_code();
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return exit_code;
}
