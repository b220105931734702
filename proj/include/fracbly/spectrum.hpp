#pragma once

#include <string>
#include <vector>

#include "fracbly/geometry.hpp"

namespace fracbly {

enum class SpectrumOperator { laplacian_exact, laplacian_power, fractional_numeric };

/// Sorted, multiplicity-expanded eigenvalues with provenance.
struct Spectrum {
  std::vector<double> values;
  SpectrumOperator op = SpectrumOperator::laplacian_exact;
  Domain domain = Domain::box({1.0, 1.0});
  double alpha = 2.0;  // order of the operator the values belong to
  double ell = 1.0;    // laplacian_power: values are lambda^ell
  int grid_n = 0;      // fractional_numeric: lattice sites along the longest axis

  [[nodiscard]] std::size_t count() const { return values.size(); }
  [[nodiscard]] bool is_exact() const { return op != SpectrumOperator::fractional_numeric; }
  /// e.g. "laplacian_exact", "laplacian_power(0.5)", "fractional_numeric(1)".
  [[nodiscard]] std::string operator_tag() const;
  /// "-" for closed-form spectra, otherwise "NxN" style lattice description.
  [[nodiscard]] std::string grid_tag() const;
};

/// First K Dirichlet Laplacian eigenvalues pi^2 sum_i m_i^2 / a_i^2 of a box.
Spectrum box_spectrum(const Domain& box, int K);

/// First K Dirichlet Laplacian eigenvalues j_{nu,m}^2 / R^2 of a disk (d=2)
/// or ball (d=3) with the angular multiplicities.
Spectrum radial_spectrum(const Domain& domain, int K);

/// Dispatches on the domain kind. Polygons have no closed-form spectrum.
Spectrum exact_spectrum(const Domain& domain, int K);

/// m-th positive zero of J_nu.
double bessel_zero(double nu, int m);

Spectrum power_spectrum(const Spectrum& s, double ell);

/// Cumulative sums of lambda_j^ell for k = 1..K.
std::vector<double> partial_sums(const Spectrum& s, double ell);

/// partial_sums(k) divided by the leading Weyl term of order alpha*ell.
std::vector<double> weyl_ratio(const Spectrum& s, const GeometrySummary& geom, double alpha,
                               double ell);

/// Riesz mean sum_j (z - lambda_j)_+ over the listed values.
double riesz_mean(const Spectrum& s, double z);

}  // namespace fracbly
