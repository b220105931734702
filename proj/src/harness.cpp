#include "fracbly/harness.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <sstream>
#include <tuple>

#include "fracbly/error.hpp"
#include "fracbly/fractional.hpp"

namespace fracbly {

namespace {

bool reads_ell(BoundKind kind) { return kind == BoundKind::st6_power || kind == BoundKind::thm_power; }

bool exact_available(const Domain& dom) {
  switch (dom.kind()) {
    case DomainKind::box:
      return true;
    case DomainKind::disk:
      return true;
    case DomainKind::ball:
      return dom.dimension() == 3;
    case DomainKind::polygon:
      return false;
  }
  return false;
}

Verdict exact_verdict(double slack, double scale, double tol) {
  return slack >= -tol * std::max(1.0, std::abs(scale)) ? Verdict::pass : Verdict::fail;
}

Verdict lower_verdict(double sum, double bound, double tol) {
  const double scale = std::max(std::abs(sum), std::abs(bound));
  return sum - bound >= -tol * scale ? Verdict::pass : Verdict::fail;
}

Verdict advisory(Verdict v) { return v == Verdict::pass ? Verdict::advisory_pass : Verdict::advisory_fail; }

std::vector<std::int64_t> k_values(const ExperimentConfig& c) {
  std::vector<std::int64_t> ks;
  for (std::int64_t k = std::max<std::int64_t>(c.k_min, 1); k <= c.k_max; ++k) ks.push_back(k);
  return ks;
}

void push_skips(std::vector<ReportRow>& rows, const std::string& kind, double alpha, double ell,
                const std::vector<std::int64_t>& ks, const std::string& reason) {
  for (std::int64_t k : ks) {
    ReportRow r;
    r.k = k;
    r.kind = kind;
    r.alpha = alpha;
    r.ell = ell;
    r.verdict = Verdict::skipped;
    r.note = reason;
    rows.push_back(std::move(r));
  }
}

BoundReport report_skeleton(const ExperimentConfig& c, const std::string& experiment) {
  BoundReport rep;
  rep.experiment = experiment;
  rep.domain = domain_to_json(c.domain);
  rep.geometry = summarize(c.domain);
  rep.tolerance = c.tolerance;
  rep.advisory_tolerance = c.advisory_tolerance;
  if (c.domain.kind() == DomainKind::polygon) rep.flags.emplace_back("polygon_boundary_not_smooth");
  return rep;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + '"';
}

std::string csv_opt(const std::optional<double>& v) { return v ? format_double(*v) : std::string(); }

Json json_opt(const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); }

std::optional<double> opt_from_json(const Json& j) {
  if (j.is_null()) return std::nullopt;
  return j.get<double>();
}

std::pair<std::int64_t, std::int64_t> parse_k_range(const std::string& s) {
  const auto dots = s.find("..");
  if (dots == std::string::npos) throw InvalidInput("k range must look like a..b, got " + s);
  try {
    return {std::stoll(s.substr(0, dots)), std::stoll(s.substr(dots + 2))};
  } catch (const std::exception&) {
    throw InvalidInput("k range must look like a..b, got " + s);
  }
}

}  // namespace

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::pass:
      return "PASS";
    case Verdict::fail:
      return "FAIL";
    case Verdict::advisory_pass:
      return "ADVISORY_PASS";
    case Verdict::advisory_fail:
      return "ADVISORY_FAIL";
    case Verdict::info:
      return "INFO";
    case Verdict::skipped:
      return "SKIPPED";
  }
  return "INFO";
}

Verdict verdict_from_string(const std::string& s) {
  for (Verdict v : {Verdict::pass, Verdict::fail, Verdict::advisory_pass, Verdict::advisory_fail,
                    Verdict::info, Verdict::skipped}) {
    if (to_string(v) == s) return v;
  }
  throw InvalidInput("unknown verdict " + s);
}

ExperimentConfig config_from_json(const Json& j, ExperimentConfig c) {
  if (!j.is_object()) throw InvalidInput("experiment config must be a JSON object");
  static const std::set<std::string> known = {
      "domain", "kinds", "alphas", "ells", "sigma", "k_min", "k_max", "k_range", "spectrum",
      "outputs", "seed", "tolerance", "advisory_tolerance"};
  for (const auto& [key, _] : j.items()) {
    if (!known.contains(key)) throw InvalidInput("unknown config key \"" + key + "\"");
  }
  try {
    if (j.contains("domain")) c.domain = domain_from_json(j.at("domain"));
    if (j.contains("kinds")) {
      c.kinds.clear();
      for (const auto& name : j.at("kinds")) c.kinds.push_back(bound_kind_from_string(name.get<std::string>()));
    }
    if (j.contains("alphas")) c.alphas = j.at("alphas").get<std::vector<double>>();
    if (j.contains("ells")) c.ells = j.at("ells").get<std::vector<double>>();
    if (j.contains("sigma")) c.sigma = j.at("sigma").get<double>();
    if (j.contains("k_min")) c.k_min = j.at("k_min").get<std::int64_t>();
    if (j.contains("k_max")) c.k_max = j.at("k_max").get<std::int64_t>();
    if (j.contains("k_range")) std::tie(c.k_min, c.k_max) = parse_k_range(j.at("k_range").get<std::string>());
    if (j.contains("spectrum")) {
      const Json& s = j.at("spectrum");
      const auto src = s.value("source", std::string("exact"));
      if (src == "exact") {
        c.source = SpectrumSource::exact;
      } else if (src == "fractional") {
        c.source = SpectrumSource::fractional;
      } else {
        throw InvalidInput("spectrum source must be exact or fractional");
      }
      c.grid_n = s.value("grid", c.grid_n);
    }
    if (j.contains("outputs")) {
      c.csv_out = j.at("outputs").value("csv", c.csv_out);
      c.json_out = j.at("outputs").value("json", c.json_out);
    }
    if (j.contains("seed")) c.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("tolerance")) c.tolerance = j.at("tolerance").get<double>();
    if (j.contains("advisory_tolerance")) c.advisory_tolerance = j.at("advisory_tolerance").get<double>();
  } catch (const Json::exception& e) {
    throw InvalidInput(std::string("malformed experiment config: ") + e.what());
  }
  if (c.sigma <= 0.0) throw InvalidInput("sigma must be positive");
  if (c.tolerance < 0.0 || c.advisory_tolerance < 0.0) throw InvalidInput("tolerances must be nonnegative");
  return c;
}

Json config_to_json(const ExperimentConfig& c) {
  Json kinds = Json::array();
  for (BoundKind k : c.kinds) kinds.push_back(to_string(k));
  Json spectrum{{"source", c.source == SpectrumSource::exact ? "exact" : "fractional"}, {"grid", c.grid_n}};
  return Json{{"domain", domain_to_json(c.domain)},
              {"kinds", kinds},
              {"alphas", c.alphas},
              {"ells", c.ells},
              {"sigma", c.sigma},
              {"k_min", c.k_min},
              {"k_max", c.k_max},
              {"spectrum", spectrum},
              {"outputs", {{"csv", c.csv_out}, {"json", c.json_out}}},
              {"seed", c.seed},
              {"tolerance", c.tolerance},
              {"advisory_tolerance", c.advisory_tolerance}};
}

int BoundReport::exit_code() const {
  bool advisory_failure = false;
  for (const auto& r : rows) {
    if (r.verdict == Verdict::fail) return 2;
    if (r.verdict == Verdict::advisory_fail) advisory_failure = true;
  }
  return advisory_failure ? 3 : 0;
}

BoundReport run_sandwich(const ExperimentConfig& c) {
  BoundReport rep = report_skeleton(c, "sandwich");
  const GeometrySummary& geom = rep.geometry;
  const int d = c.domain.dimension();
  const auto ks = k_values(c);
  const int K = ks.empty() ? 0 : static_cast<int>(ks.back());
  const std::string thm = to_string(BoundKind::thm_power);

  std::optional<Spectrum> exact;
  auto exact_base = [&]() -> const Spectrum& {
    if (!exact) {
      try {
        exact = exact_spectrum(c.domain, K);
      } catch (const std::exception& e) {
        throw std::runtime_error("building the exact spectrum for the sandwich failed: " +
                                 std::string(e.what()));
      }
    }
    return *exact;
  };

  if (c.source == SpectrumSource::exact) {
    rep.spectrum_source = "laplacian_exact";
  } else {
    rep.spectrum_source = "fractional_numeric grid=" + std::to_string(c.grid_n);
    rep.flags.emplace_back("numerical_spectrum_advisory");
  }

  bool riesz_done = false;
  for (double alpha : c.alphas) {
    for (double ell : c.ells) {
      try {
        validate_params({d, alpha, ell, c.sigma, 1}, BoundKind::thm_power);
      } catch (const InvalidInput& e) {
        push_skips(rep.rows, thm, alpha, ell, ks, e.what());
        continue;
      }
      if (ks.empty()) continue;
      const double order = alpha * ell;

      if (c.source == SpectrumSource::exact) {
        if (alpha != 2.0) {
          push_skips(rep.rows, thm, alpha, ell, ks,
                     "exact spectra exist only for alpha = 2; use a fractional source");
          continue;
        }
        const auto sums = partial_sums(exact_base(), ell);
        for (std::int64_t k : ks) {
          const double bound = thm_power_lower(geom, {d, alpha, ell, c.sigma, k}).value;
          const double sum = sums[static_cast<std::size_t>(k - 1)];
          rep.rows.push_back({k, thm, alpha, ell, bound, sum, sum - bound,
                              lower_verdict(sum, bound, c.tolerance), ""});
        }
        if (!riesz_done) {
          riesz_done = true;
          const Spectrum& s = exact_base();
          for (std::int64_t k : ks) {
            const double z = s.values[static_cast<std::size_t>(k - 1)];
            const double upper = berezin_riesz_upper(geom, {d, 2.0, 1.0, 1.0, 1}, z);
            const double mean = riesz_mean(s, z);
            rep.rows.push_back({k, to_string(BoundKind::berezin_riesz), 2.0, 1.0, upper, mean,
                                upper - mean, lower_verdict(upper, mean, c.tolerance),
                                "z = lambda_k; partial_sum is the Riesz mean"});
          }
        }
        continue;
      }

      // Numerical spectrum of order alpha * ell.
      if (!(order > 0.0 && order < 2.0)) {
        push_skips(rep.rows, thm, alpha, ell, ks, "the grid solver needs 0 < alpha * ell < 2");
        continue;
      }
      Spectrum numeric;
      try {
        const GridOperator op = build_fractional_operator(c.domain, order, c.grid_n);
        LanczosOptions opts;
        opts.seed = c.seed;
        numeric = fractional_eigs(op, K, opts);
      } catch (const std::exception& e) {
        throw std::runtime_error("fractional spectrum (alpha ell = " + format_double(order) +
                                 ", grid " + std::to_string(c.grid_n) + ") failed: " + e.what());
      }
      const auto sums = partial_sums(numeric, 1.0);
      std::vector<double> upper;
      if (exact_available(c.domain)) upper = partial_sums(exact_base(), order / 2.0);
      for (std::int64_t k : ks) {
        const auto i = static_cast<std::size_t>(k - 1);
        const double bound = thm_power_lower(geom, {d, alpha, ell, c.sigma, k}).value;
        rep.rows.push_back({k, thm, alpha, ell, bound, sums[i], sums[i] - bound,
                            advisory(lower_verdict(sums[i], bound, c.advisory_tolerance)), ""});
      }
      if (upper.empty()) {
        push_skips(rep.rows, "CHEN_SONG_UPPER", alpha, ell, ks, "no exact base spectrum for this domain");
        continue;
      }
      for (std::int64_t k : ks) {
        const auto i = static_cast<std::size_t>(k - 1);
        rep.rows.push_back({k, "CHEN_SONG_UPPER", alpha, ell, upper[i], sums[i], upper[i] - sums[i],
                            advisory(exact_verdict(upper[i] - sums[i], upper[i], c.advisory_tolerance)),
                            "bound is the partial sum of (lambda^(2))^(alpha ell / 2)"});
      }
    }
  }
  return rep;
}

std::optional<std::int64_t> crossover_k0(const GeometrySummary& geom, BoundKind incumbent,
                                         const BoundParams& params, std::int64_t k_limit) {
  auto ahead = [&](std::int64_t k) {
    BoundParams p = params;
    p.k = k;
    return prop_lower(geom, p).value > evaluate_bound(incumbent, geom, p).value;
  };
  if (k_limit < 1 || !ahead(k_limit)) return std::nullopt;
  if (ahead(1)) return 1;
  std::int64_t lo = 1;  // not ahead
  std::int64_t hi = 2;
  while (hi < k_limit && !ahead(hi)) {
    lo = hi;
    hi = std::min(2 * hi, k_limit);
  }
  while (hi - lo > 1) {
    const std::int64_t mid = lo + (hi - lo) / 2;
    (ahead(mid) ? hi : lo) = mid;
  }
  return hi;
}

BoundReport run_bound_comparison(const ExperimentConfig& c) {
  BoundReport rep = report_skeleton(c, "comparison");
  const GeometrySummary& geom = rep.geometry;
  const int d = c.domain.dimension();
  const auto ks = k_values(c);
  const int K = ks.empty() ? 0 : static_cast<int>(ks.back());

  std::optional<Spectrum> exact;
  const bool have_exact = exact_available(c.domain) && K > 0;
  if (have_exact) exact = exact_spectrum(c.domain, K);
  rep.spectrum_source = have_exact ? "laplacian_exact" : "none";
  std::map<double, std::vector<double>> sums_by_order;
  auto sums_for = [&](double order) -> const std::vector<double>& {
    auto it = sums_by_order.find(order);
    if (it == sums_by_order.end()) it = sums_by_order.emplace(order, partial_sums(*exact, order / 2.0)).first;
    return it->second;
  };

  for (BoundKind kind : c.kinds) {
    const std::string name = to_string(kind);
    for (double alpha : c.alphas) {
      const std::vector<double> ells = reads_ell(kind) ? c.ells : std::vector<double>{1.0};
      for (double ell : ells) {
        if (kind == BoundKind::berezin_riesz) {
          push_skips(rep.rows, name, alpha, ell, ks,
                     "upper bound on Riesz means; checked by the sandwich run at alpha = 2");
          continue;
        }
        try {
          validate_params({d, alpha, ell, c.sigma, 1}, kind);
        } catch (const InvalidInput& e) {
          push_skips(rep.rows, name, alpha, ell, ks, e.what());
          continue;
        }
        for (std::int64_t k : ks) {
          const BoundValue v = evaluate_bound(kind, geom, {d, alpha, ell, c.sigma, k});
          ReportRow r{k, name, alpha, ell, v.value, std::nullopt, std::nullopt, Verdict::info, ""};
          // Exact sums exist for the Laplacian and its powers only; the
          // elliptic bound with sigma != 1 concerns a different operator.
          const bool comparable = have_exact && alpha == 2.0 &&
                                  (kind != BoundKind::elliptic || c.sigma == 1.0);
          if (comparable) {
            const double sum = sums_for(effective_order(kind, {d, alpha, ell, c.sigma, k}))
                [static_cast<std::size_t>(k - 1)];
            r.partial_sum = sum;
            r.slack = sum - v.value;
            r.verdict = lower_verdict(sum, v.value, c.tolerance);
          }
          rep.rows.push_back(std::move(r));
        }
      }
    }
  }

  // Mark the largest bound per (alpha, ell, k) and PROP_NEW rows that fall
  // below BLY.
  std::map<std::tuple<double, double, std::int64_t>, std::size_t> best;
  std::map<std::pair<double, std::int64_t>, double> bly_at;
  for (std::size_t i = 0; i < rep.rows.size(); ++i) {
    const ReportRow& r = rep.rows[i];
    if (!r.bound) continue;
    const auto key = std::make_tuple(r.alpha, r.ell, r.k);
    auto it = best.find(key);
    if (it == best.end() || *r.bound > *rep.rows[it->second].bound) best[key] = i;
    if (r.kind == to_string(BoundKind::bly)) bly_at[{r.alpha, r.k}] = *r.bound;
  }
  for (const auto& [key, i] : best) rep.rows[i].note = "largest";
  for (ReportRow& r : rep.rows) {
    if (r.kind != to_string(BoundKind::prop_new) || !r.bound) continue;
    auto it = bly_at.find({r.alpha, r.k});
    if (it != bly_at.end() && *r.bound < it->second) {
      r.note += r.note.empty() ? "below BLY" : "; below BLY";
    }
  }

  constexpr std::int64_t kCrossoverLimit = 1'000'000;
  for (double alpha : c.alphas) {
    const BoundParams p{d, alpha, 1.0, c.sigma, 1};
    try {
      validate_params(p, BoundKind::prop_new);
    } catch (const InvalidInput&) {
      continue;
    }
    for (BoundKind incumbent : {BoundKind::st2, BoundKind::st6_power}) {
      try {
        validate_params(p, incumbent);
      } catch (const InvalidInput&) {
        continue;
      }
      rep.crossovers.push_back({to_string(BoundKind::prop_new), to_string(incumbent), alpha,
                                crossover_k0(geom, incumbent, p, kCrossoverLimit), kCrossoverLimit});
    }
  }
  return rep;
}

std::string report_to_csv(const BoundReport& report) {
  std::string out = "k,kind,alpha,ell,bound,partial_sum,slack,verdict,note\n";
  for (const auto& r : report.rows) {
    out += std::to_string(r.k) + ',' + csv_field(r.kind) + ',' + format_double(r.alpha) + ',' +
           format_double(r.ell) + ',' + csv_opt(r.bound) + ',' + csv_opt(r.partial_sum) + ',' +
           csv_opt(r.slack) + ',' + to_string(r.verdict) + ',' + csv_field(r.note) + '\n';
  }
  return out;
}

Json report_to_json(const BoundReport& report) {
  Json rows = Json::array();
  for (const auto& r : report.rows) {
    rows.push_back({{"k", r.k},
                    {"kind", r.kind},
                    {"alpha", r.alpha},
                    {"ell", r.ell},
                    {"bound", json_opt(r.bound)},
                    {"partial_sum", json_opt(r.partial_sum)},
                    {"slack", json_opt(r.slack)},
                    {"verdict", to_string(r.verdict)},
                    {"note", r.note}});
  }
  Json crossovers = Json::array();
  for (const auto& x : report.crossovers) {
    crossovers.push_back({{"challenger", x.challenger},
                          {"incumbent", x.incumbent},
                          {"alpha", x.alpha},
                          {"k0", x.k0 ? Json(*x.k0) : Json(nullptr)},
                          {"k_limit", x.k_limit}});
  }
  return Json{{"experiment", report.experiment},
              {"metadata",
               {{"domain", report.domain},
                {"geometry", geometry_to_json(report.geometry)},
                {"spectrum_source", report.spectrum_source},
                {"tolerance", report.tolerance},
                {"advisory_tolerance", report.advisory_tolerance},
                {"tool_version", report.tool_version},
                {"flags", report.flags}}},
              {"rows", rows},
              {"crossovers", crossovers},
              {"exit_code", report.exit_code()}};
}

BoundReport report_from_json(const Json& j) {
  BoundReport rep;
  try {
    rep.experiment = j.at("experiment").get<std::string>();
    const Json& m = j.at("metadata");
    rep.domain = m.at("domain");
    rep.geometry = geometry_from_json(m.at("geometry"));
    rep.spectrum_source = m.at("spectrum_source").get<std::string>();
    rep.tolerance = m.at("tolerance").get<double>();
    rep.advisory_tolerance = m.at("advisory_tolerance").get<double>();
    rep.tool_version = m.at("tool_version").get<std::string>();
    rep.flags = m.at("flags").get<std::vector<std::string>>();
    for (const Json& r : j.at("rows")) {
      rep.rows.push_back({r.at("k").get<std::int64_t>(), r.at("kind").get<std::string>(),
                          r.at("alpha").get<double>(), r.at("ell").get<double>(), opt_from_json(r.at("bound")),
                          opt_from_json(r.at("partial_sum")), opt_from_json(r.at("slack")),
                          verdict_from_string(r.at("verdict").get<std::string>()),
                          r.at("note").get<std::string>()});
    }
    for (const Json& x : j.at("crossovers")) {
      Crossover c;
      c.challenger = x.at("challenger").get<std::string>();
      c.incumbent = x.at("incumbent").get<std::string>();
      c.alpha = x.at("alpha").get<double>();
      if (!x.at("k0").is_null()) c.k0 = x.at("k0").get<std::int64_t>();
      c.k_limit = x.at("k_limit").get<std::int64_t>();
      rep.crossovers.push_back(c);
    }
  } catch (const Json::exception& e) {
    throw InvalidInput(std::string("malformed report: ") + e.what());
  }
  return rep;
}

void emit_report(const BoundReport& report, ReportFormat format, const std::filesystem::path& path) {
  if (format == ReportFormat::csv) {
    write_text_file(path, report_to_csv(report));
  } else {
    write_text_file(path, report_to_json(report).dump(2) + '\n');
  }
}

std::string bounds_to_csv(const std::vector<BoundValue>& values) {
  std::string out = "k,kind,value,term1,term2,term3,term4,params\n";
  for (const auto& v : values) {
    out += std::to_string(v.params.k) + ',' + to_string(v.kind) + ',' + format_double(v.value);
    for (std::size_t i = 0; i < 4; ++i) {
      out += ',';
      if (i < v.terms.size()) out += format_double(v.terms[i]);
    }
    out += ",d=" + std::to_string(v.params.d) + ";alpha=" + format_double(v.params.alpha) +
           ";ell=" + format_double(v.params.ell) + ";sigma=" + format_double(v.params.sigma) + '\n';
  }
  return out;
}

std::string spectrum_to_csv(const Spectrum& s) {
  std::string out = "index,value,operator,grid\n";
  for (std::size_t i = 0; i < s.values.size(); ++i) {
    out += std::to_string(i + 1) + ',' + format_double(s.values[i]) + ',' + csv_field(s.operator_tag()) + ',' +
           s.grid_tag() + '\n';
  }
  return out;
}

Json scan_to_json(const LemmaScanResult& r) {
  Json ce = nullptr;
  if (r.counterexample) {
    const auto& c = *r.counterexample;
    ce = {{"x", c.x},
          {"h", c.h},
          {"enclosure", {c.enclosure.lower(), c.enclosure.upper()}},
          {"certified", c.certified}};
  }
  return Json{{"d", r.d},
              {"alpha", r.alpha},
              {"grid", {{"x_min", r.x_min}, {"x_max", r.x_max}, {"n_points", r.n_points}}},
              {"valid_region", r.valid_region},
              {"min_h", r.min_h},
              {"argmin_x", r.argmin_x},
              {"counterexample", ce}};
}

}  // namespace fracbly
