#include "fracbly/bounds.hpp"

#include <cmath>
#include <sstream>

#include "fracbly/error.hpp"
#include "fracbly/numeric.hpp"
#include "fracbly/spectrum.hpp"

namespace fracbly {

namespace {

std::string region_text(const BoundParams& p) {
  std::ostringstream os;
  os << "(d=" << p.d << ", alpha=" << p.alpha << ", ell=" << p.ell << ", sigma=" << p.sigma
     << ", k=" << p.k << ")";
  return os.str();
}

void check_geometry(const GeometrySummary& geom, const BoundParams& p) {
  if (geom.dimension() != p.d) {
    throw InvalidInput("geometry has dimension " + std::to_string(geom.dimension()) +
                       " but parameters say d=" + std::to_string(p.d));
  }
  if (!(geom.volume > 0.0) || !(geom.inertia > 0.0)) {
    throw InvalidInput("geometry summary must have positive volume and inertia");
  }
}

// The monomial shared by every bound in the family:
//   |Omega|^{j/2-(s-j)/d} Gamma(1+d/2)^{(s-j)/d} (4 pi)^{(s-j)/2} I^{-j/2} k^{1+(s-j)/d}
// for order s and correction index j, returned as a logarithm.
double log_weyl_monomial(const GeometrySummary& g, int d, double s, int j, double k) {
  const double r = (s - j) / d;
  return (0.5 * j - r) * std::log(g.volume) + r * std::lgamma(1.0 + 0.5 * d) +
         0.5 * (s - j) * std::log(4.0 * kPi) - 0.5 * j * std::log(g.inertia) +
         (1.0 + r) * std::log(k);
}

double signed_exp(double coef, double log_rest) {
  const double mag = std::exp(std::log(std::abs(coef)) + log_rest);
  return coef < 0.0 ? -mag : mag;
}

BoundValue assemble(BoundKind kind, const BoundParams& p, std::vector<double> terms) {
  BoundValue out;
  out.kind = kind;
  out.params = p;
  out.value = compensated_sum(terms);
  out.terms = std::move(terms);
  return out;
}

// Four-term family in order s, scaled by `scale`.
std::vector<double> four_terms(const GeometrySummary& g, int d, double s, double k, double scale) {
  const double c0 = d / (s + d);
  const double c1 = s / (2.0 * (s + d));
  const double c2 = -5.0 * s / (16.0 * (s + d));
  const double c3 = s / (16.0 * (s + d));
  return {signed_exp(scale * c0, log_weyl_monomial(g, d, s, 0, k)),
          signed_exp(scale * c1, log_weyl_monomial(g, d, s, 1, k)),
          signed_exp(scale * c2, log_weyl_monomial(g, d, s, 2, k)),
          signed_exp(scale * c3, log_weyl_monomial(g, d, s, 3, k))};
}

}  // namespace

std::string to_string(BoundKind kind) {
  switch (kind) {
    case BoundKind::bly: return "BLY";
    case BoundKind::berezin_riesz: return "BEREZIN_RIESZ";
    case BoundKind::melas: return "MELAS";
    case BoundKind::st2: return "ST2";
    case BoundKind::st6_power: return "ST6_POWER";
    case BoundKind::prop_new: return "PROP_NEW";
    case BoundKind::thm_power: return "THM_POWER";
    case BoundKind::elliptic: return "ELLIPTIC";
  }
  return "?";
}

BoundKind bound_kind_from_string(const std::string& name) {
  for (BoundKind k : {BoundKind::bly, BoundKind::berezin_riesz, BoundKind::melas, BoundKind::st2,
                      BoundKind::st6_power, BoundKind::prop_new, BoundKind::thm_power,
                      BoundKind::elliptic}) {
    if (to_string(k) == name) return k;
  }
  throw InvalidInput("unknown bound kind '" + name + "'");
}

bool in_key_region(int d, double alpha) {
  if (d == 2) return alpha >= 1.0 && alpha <= 2.0;
  return d >= 3 && alpha > 0.0 && alpha <= 2.0;
}

BoundParams validate_params(const BoundParams& p, BoundKind kind) {
  const std::string where = to_string(kind) + " " + region_text(p);
  if (p.d < 2) throw RegionViolation(where + ": requires d >= 2");
  if (!(p.alpha > 0.0 && p.alpha <= 2.0)) throw RegionViolation(where + ": requires 0 < alpha <= 2");
  if (!(p.ell > 0.0 && p.ell <= 1.0)) throw RegionViolation(where + ": requires 0 < ell <= 1");
  if (!(p.sigma > 0.0) || !std::isfinite(p.sigma)) throw RegionViolation(where + ": requires sigma > 0");
  if (p.k < 1) throw RegionViolation(where + ": requires k >= 1");

  switch (kind) {
    case BoundKind::bly:
    case BoundKind::berezin_riesz:
    case BoundKind::st6_power:
      break;
    case BoundKind::melas:
      if (p.alpha != 2.0) throw RegionViolation(where + ": requires alpha = 2");
      break;
    case BoundKind::st2:
    case BoundKind::prop_new:
    case BoundKind::thm_power:
    case BoundKind::elliptic:
      if (p.d == 2 && p.alpha < 1.0) {
        throw RegionViolation(where + ": d = 2 requires 1 <= alpha <= 2 (key inequality fails for alpha < 1)");
      }
      break;
  }
  return p;
}

double effective_order(BoundKind kind, const BoundParams& p) {
  switch (kind) {
    case BoundKind::st6_power:
    case BoundKind::thm_power:
      return p.alpha * p.ell;
    default:
      return p.alpha;
  }
}

BoundValue bly_lower(const GeometrySummary& geom, const BoundParams& params) {
  const BoundParams p = validate_params(params, BoundKind::bly);
  check_geometry(geom, p);
  const double s = p.alpha;
  const double k = static_cast<double>(p.k);
  return assemble(BoundKind::bly, p, {signed_exp(p.d / (s + p.d), log_weyl_monomial(geom, p.d, s, 0, k))});
}

double berezin_riesz_upper(const GeometrySummary& geom, const BoundParams& params, double z) {
  const BoundParams p = validate_params(params, BoundKind::berezin_riesz);
  check_geometry(geom, p);
  if (!(z >= 0.0)) throw InvalidInput("Riesz-mean argument z must be >= 0");
  if (z == 0.0) return 0.0;
  const double a = p.alpha;
  const int d = p.d;
  const double log_val = -0.5 * d * std::log(4.0 * kPi) + std::log(a / (a + d)) +
                         std::log(geom.volume) - std::lgamma(1.0 + 0.5 * d) +
                         (1.0 + d / a) * std::log(z);
  return std::exp(log_val);
}

BoundValue melas_lower(const GeometrySummary& geom, const BoundParams& params) {
  const BoundParams p = validate_params(params, BoundKind::melas);
  check_geometry(geom, p);
  const double k = static_cast<double>(p.k);
  const double lead = signed_exp(p.d / (2.0 + p.d), log_weyl_monomial(geom, p.d, 2.0, 0, k));
  const double second = geom.volume / geom.inertia * k / (24.0 * (2.0 + p.d));
  return assemble(BoundKind::melas, p, {lead, second});
}

BoundValue st2_lower(const GeometrySummary& geom, const BoundParams& params) {
  const BoundParams p = validate_params(params, BoundKind::st2);
  check_geometry(geom, p);
  const double s = p.alpha;
  const double k = static_cast<double>(p.k);
  return assemble(BoundKind::st2, p,
                  {signed_exp(p.d / (s + p.d), log_weyl_monomial(geom, p.d, s, 0, k)),
                   signed_exp(s / (48.0 * (s + p.d)), log_weyl_monomial(geom, p.d, s, 2, k))});
}

BoundValue st6_power_lower(const GeometrySummary& geom, const BoundParams& params) {
  const BoundParams p = validate_params(params, BoundKind::st6_power);
  check_geometry(geom, p);
  const double s = p.alpha * p.ell;
  const double k = static_cast<double>(p.k);
  return assemble(BoundKind::st6_power, p,
                  {signed_exp(p.d / (s + p.d), log_weyl_monomial(geom, p.d, s, 0, k)),
                   signed_exp(s / (16.0 * (s + p.d)), log_weyl_monomial(geom, p.d, s, 2, k)),
                   signed_exp(-s / (640.0 * (s + p.d)), log_weyl_monomial(geom, p.d, s, 4, k))});
}

BoundValue prop_lower(const GeometrySummary& geom, const BoundParams& params) {
  BoundParams p = validate_params(params, BoundKind::prop_new);
  check_geometry(geom, p);
  p.ell = 1.0;
  return assemble(BoundKind::prop_new, p, four_terms(geom, p.d, p.alpha, static_cast<double>(p.k), 1.0));
}

BoundValue thm_power_lower(const GeometrySummary& geom, const BoundParams& params) {
  const BoundParams p = validate_params(params, BoundKind::thm_power);
  check_geometry(geom, p);
  return assemble(BoundKind::thm_power, p,
                  four_terms(geom, p.d, p.alpha * p.ell, static_cast<double>(p.k), 1.0));
}

BoundValue elliptic_lower(const GeometrySummary& geom, const BoundParams& params) {
  BoundParams p = validate_params(params, BoundKind::elliptic);
  check_geometry(geom, p);
  p.ell = 1.0;
  return assemble(BoundKind::elliptic, p,
                  four_terms(geom, p.d, p.alpha, static_cast<double>(p.k), p.sigma));
}

BoundValue evaluate_bound(BoundKind kind, const GeometrySummary& geom, const BoundParams& params) {
  switch (kind) {
    case BoundKind::bly: return bly_lower(geom, params);
    case BoundKind::melas: return melas_lower(geom, params);
    case BoundKind::st2: return st2_lower(geom, params);
    case BoundKind::st6_power: return st6_power_lower(geom, params);
    case BoundKind::prop_new: return prop_lower(geom, params);
    case BoundKind::thm_power: return thm_power_lower(geom, params);
    case BoundKind::elliptic: return elliptic_lower(geom, params);
    case BoundKind::berezin_riesz:
      break;
  }
  throw InvalidInput("BEREZIN_RIESZ is an upper bound on Riesz means; use berezin_riesz_upper");
}

std::vector<double> chen_song_gap(const Spectrum& spectrum_pow, const Spectrum& spectrum_base,
                                  double ell) {
  if (!(ell > 0.0 && ell <= 1.0)) throw InvalidInput("chen_song_gap: ell must lie in (0, 1]");
  if (spectrum_pow.values.size() != spectrum_base.values.size()) {
    throw InvalidInput("chen_song_gap: spectra have different lengths");
  }
  if (!(spectrum_pow.domain == spectrum_base.domain)) {
    throw InvalidInput("chen_song_gap: spectra belong to different domains");
  }
  std::vector<double> gaps(spectrum_base.values.size());
  for (std::size_t j = 0; j < gaps.size(); ++j) {
    gaps[j] = std::pow(spectrum_base.values[j], ell) - spectrum_pow.values[j];
  }
  return gaps;
}

}  // namespace fracbly
