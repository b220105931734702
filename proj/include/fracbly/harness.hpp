#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "fracbly/bounds.hpp"
#include "fracbly/geometry.hpp"
#include "fracbly/json_io.hpp"
#include "fracbly/lemma.hpp"
#include "fracbly/spectrum.hpp"

namespace fracbly {

inline constexpr const char* kToolVersion = "0.1.0";

enum class SpectrumSource { exact, fractional };

struct ExperimentConfig {
  Domain domain = Domain::box({1.0, 1.0});
  std::vector<BoundKind> kinds = {BoundKind::bly, BoundKind::melas, BoundKind::st2,
                                  BoundKind::st6_power, BoundKind::prop_new, BoundKind::thm_power};
  std::vector<double> alphas = {2.0};
  std::vector<double> ells = {1.0};
  double sigma = 1.0;
  std::int64_t k_min = 1;
  std::int64_t k_max = 100;
  SpectrumSource source = SpectrumSource::exact;
  int grid_n = 64;
  std::string csv_out;
  std::string json_out;
  std::uint64_t seed = 0x5eed'f00dULL;
  double tolerance = 1e-9;            // relative slack on exact spectra
  double advisory_tolerance = 0.05;   // relative slack on numerical spectra
};

/// Fields present in j override those of base. Unknown keys are rejected.
ExperimentConfig config_from_json(const Json& j, ExperimentConfig base = {});
Json config_to_json(const ExperimentConfig& c);

enum class Verdict { pass, fail, advisory_pass, advisory_fail, info, skipped };
std::string to_string(Verdict v);
Verdict verdict_from_string(const std::string& s);

struct ReportRow {
  std::int64_t k = 0;
  std::string kind;  // a bound kind name, or CHEN_SONG_UPPER
  double alpha = 0.0;
  double ell = 1.0;
  std::optional<double> bound;
  std::optional<double> partial_sum;
  std::optional<double> slack;  // partial_sum - bound (bound - partial_sum for upper bounds)
  Verdict verdict = Verdict::info;
  std::string note;
  bool operator==(const ReportRow&) const = default;
};

struct Crossover {
  std::string challenger;
  std::string incumbent;
  double alpha = 2.0;
  std::optional<std::int64_t> k0;  // empty if the challenger never overtakes up to k_limit
  std::int64_t k_limit = 0;
  bool operator==(const Crossover&) const = default;
};

struct BoundReport {
  std::string experiment;
  Json domain;
  GeometrySummary geometry;
  std::string spectrum_source;
  double tolerance = 0.0;
  double advisory_tolerance = 0.0;
  std::string tool_version = kToolVersion;
  std::vector<std::string> flags;
  std::vector<ReportRow> rows;
  std::vector<Crossover> crossovers;

  /// 0 all PASS, 2 any FAIL, 3 advisory failures only.
  [[nodiscard]] int exit_code() const;
};

/// Lower bound THM_POWER against the chosen spectrum's partial sums, and
/// (numerical spectra) the Chen-Song proxy sum of (lambda^{(2)})^{alpha ell / 2}
/// above it. Exact spectra also get the Riesz-mean upper bound at z = lambda_k.
BoundReport run_sandwich(const ExperimentConfig& config);

/// Every requested kind at every k, the largest bound per k marked, and
/// the crossover of PROP_NEW over ST2 and ST6_POWER.
BoundReport run_bound_comparison(const ExperimentConfig& config);

/// Smallest k0 <= k_limit with prop_lower > incumbent for k0..k_limit,
/// found by doubling then bisection.
std::optional<std::int64_t> crossover_k0(const GeometrySummary& geom, BoundKind incumbent,
                                         const BoundParams& params, std::int64_t k_limit);

enum class ReportFormat { csv, json };

std::string report_to_csv(const BoundReport& report);
Json report_to_json(const BoundReport& report);
BoundReport report_from_json(const Json& j);
void emit_report(const BoundReport& report, ReportFormat format, const std::filesystem::path& path);

/// Columns k, kind, value, term1..term4, params.
std::string bounds_to_csv(const std::vector<BoundValue>& values);
/// Columns index, value, operator, grid.
std::string spectrum_to_csv(const Spectrum& s);
Json scan_to_json(const LemmaScanResult& r);

}  // namespace fracbly
