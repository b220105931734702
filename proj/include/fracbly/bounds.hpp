#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fracbly/geometry.hpp"

namespace fracbly {

enum class BoundKind { bly, berezin_riesz, melas, st2, st6_power, prop_new, thm_power, elliptic };

std::string to_string(BoundKind kind);
BoundKind bound_kind_from_string(const std::string& name);

struct BoundParams {
  int d = 2;
  double alpha = 2.0;
  double ell = 1.0;    // only the power bounds read it
  double sigma = 1.0;  // kernel constant, only the elliptic bound reads it
  std::int64_t k = 1;
};

struct BoundValue {
  BoundKind kind = BoundKind::bly;
  double value = 0.0;
  std::vector<double> terms;
  BoundParams params;
};

/// Checks the parameter region in which the inequality of `kind` is
/// proven. Throws RegionViolation naming the first violated constraint.
BoundParams validate_params(const BoundParams& params, BoundKind kind);

/// True when (d, alpha) lies in the region covered by the key inequality:
/// d = 2 with 1 <= alpha <= 2, or d >= 3 with 0 < alpha <= 2.
bool in_key_region(int d, double alpha);

// All lower bounds below validate their parameters and the dimension of
// the geometry. Each term is evaluated as exp(sum of log factors), and the
// value is the compensated sum of the terms.

/// Berezin-Li-Yau: (4 pi)^{a/2} d/(a+d) (Gamma(1+d/2)/|Omega|)^{a/d} k^{1+a/d}.
BoundValue bly_lower(const GeometrySummary& geom, const BoundParams& params);

/// Riesz-mean upper bound on sum_j (z - lambda_j)_+.
double berezin_riesz_upper(const GeometrySummary& geom, const BoundParams& params, double z);

/// Two-term bound for the Dirichlet Laplacian (alpha = 2 only).
BoundValue melas_lower(const GeometrySummary& geom, const BoundParams& params);

/// Two-term fractional refinement; reduces to melas_lower at alpha = 2.
BoundValue st2_lower(const GeometrySummary& geom, const BoundParams& params);

/// Three-term bound for sums of lambda_j^ell, third term negative.
BoundValue st6_power_lower(const GeometrySummary& geom, const BoundParams& params);

/// Four-term bound with powers k^{1+(alpha-j)/d}, j = 0..3.
BoundValue prop_lower(const GeometrySummary& geom, const BoundParams& params);

/// prop_lower with alpha replaced by alpha*ell; bounds sum_j lambda_j^ell.
BoundValue thm_power_lower(const GeometrySummary& geom, const BoundParams& params);

/// sigma times each term of prop_lower; bounds eigenvalue sums of
/// operators whose kernel dominates sigma times the fractional kernel.
BoundValue elliptic_lower(const GeometrySummary& geom, const BoundParams& params);

/// Dispatch on kind. berezin_riesz is not a lower bound and is rejected.
BoundValue evaluate_bound(BoundKind kind, const GeometrySummary& geom, const BoundParams& params);

/// Exponent s such that the bound of `kind` bounds sums of lambda^{s/alpha}
/// and scales like t^{-s} under dilation (alpha*ell for the power bounds).
double effective_order(BoundKind kind, const BoundParams& params);

struct Spectrum;

/// gap_j = (lambda_j^{(alpha)})^ell - lambda_j^{(alpha ell)}. Both spectra
/// must belong to the same domain and have the same length.
std::vector<double> chen_song_gap(const Spectrum& spectrum_pow, const Spectrum& spectrum_base,
                                  double ell);

}  // namespace fracbly
