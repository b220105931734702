#include "fracbly/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <boost/math/special_functions/bessel.hpp>

#include "fracbly/bounds.hpp"
#include "fracbly/error.hpp"
#include "fracbly/numeric.hpp"

namespace fracbly {

namespace {

std::string format_number(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

// Cutoff Lambda with Weyl count |Omega| omega_d Lambda^{d/2} / (2 pi)^d ~ 1.25 K.
double weyl_cutoff(double vol, int d, int K) {
  const double target = 1.25 * K + 10.0;
  return 4.0 * kPi * kPi * std::pow(target / (vol * unit_ball_volume(d)), 2.0 / d);
}

void enumerate_box(const std::vector<double>& inv_sq, std::size_t axis, double partial,
                   double rest_min, double cutoff, std::vector<double>& out) {
  const double pi2 = kPi * kPi;
  const double rest_after = rest_min - pi2 * inv_sq[axis];
  for (long m = 1;; ++m) {
    const double term = pi2 * static_cast<double>(m * m) * inv_sq[axis];
    if (partial + term + rest_after > cutoff) break;
    if (axis + 1 == inv_sq.size()) {
      out.push_back(partial + term);
    } else {
      enumerate_box(inv_sq, axis + 1, partial + term, rest_after, cutoff, out);
    }
  }
}

}  // namespace

std::string Spectrum::operator_tag() const {
  switch (op) {
    case SpectrumOperator::laplacian_exact: return "laplacian_exact";
    case SpectrumOperator::laplacian_power: return "laplacian_power(" + format_number(ell) + ")";
    case SpectrumOperator::fractional_numeric:
      return "fractional_numeric(" + format_number(alpha) + ")";
  }
  return "?";
}

std::string Spectrum::grid_tag() const {
  if (op != SpectrumOperator::fractional_numeric) return "-";
  std::string tag = std::to_string(grid_n);
  for (int i = 1; i < domain.dimension(); ++i) tag += "x" + std::to_string(grid_n);
  return tag;
}

Spectrum box_spectrum(const Domain& box, int K) {
  if (box.kind() != DomainKind::box) throw InvalidInput("box_spectrum needs a box domain");
  if (K < 1) throw InvalidInput("box_spectrum needs K >= 1");
  const int d = box.dimension();
  std::vector<double> inv_sq;
  for (double a : box.edges()) inv_sq.push_back(1.0 / (a * a));
  double rest_min = 0.0;
  for (double v : inv_sq) rest_min += kPi * kPi * v;

  // Every lattice point with value <= cutoff is enumerated, so once the
  // count reaches K the first K sorted values are exact.
  double cutoff = std::max(weyl_cutoff(volume(box), d, K), rest_min);
  std::vector<double> vals;
  for (int attempt = 0; attempt < 64; ++attempt) {
    vals.clear();
    enumerate_box(inv_sq, 0, 0.0, rest_min, cutoff, vals);
    if (static_cast<int>(vals.size()) >= K) break;
    cutoff *= 1.5;
  }
  if (static_cast<int>(vals.size()) < K) {
    throw ConvergenceError("box_spectrum: enumeration did not reach K values");
  }
  std::sort(vals.begin(), vals.end());
  vals.resize(static_cast<std::size_t>(K));
  Spectrum s;
  s.values = std::move(vals);
  s.op = SpectrumOperator::laplacian_exact;
  s.domain = box;
  return s;
}

double bessel_zero(double nu, int m) {
  try {
    return boost::math::cyl_bessel_j_zero(nu, m);
  } catch (const std::exception& e) {
    std::ostringstream os;
    os << "Bessel zero j_{" << nu << "," << m << "} failed: " << e.what();
    throw ConvergenceError(os.str());
  }
}

Spectrum radial_spectrum(const Domain& domain, int K) {
  const int d = domain.dimension();
  if (!(domain.kind() == DomainKind::disk || (domain.kind() == DomainKind::ball && d == 3))) {
    throw InvalidInput("radial_spectrum supports disks (d=2) and balls with d=3");
  }
  if (K < 1) throw InvalidInput("radial_spectrum needs K >= 1");
  const double R = domain.radius();
  double cutoff = weyl_cutoff(volume(domain), d, K);
  std::vector<double> vals;
  for (int attempt = 0; attempt < 64; ++attempt) {
    vals.clear();
    const double xmax = R * std::sqrt(cutoff);
    for (int l = 0;; ++l) {
      const double nu = d == 2 ? l : l + 0.5;
      const int mult = d == 2 ? (l == 0 ? 1 : 2) : 2 * l + 1;
      if (bessel_zero(nu, 1) > xmax) break;
      for (int m = 1;; ++m) {
        const double j = bessel_zero(nu, m);
        if (j > xmax) break;
        const double lam = (j / R) * (j / R);
        vals.insert(vals.end(), static_cast<std::size_t>(mult), lam);
      }
    }
    if (static_cast<int>(vals.size()) >= K) break;
    cutoff *= 1.5;
  }
  if (static_cast<int>(vals.size()) < K) {
    throw ConvergenceError("radial_spectrum: zero enumeration did not reach K values");
  }
  std::sort(vals.begin(), vals.end());
  vals.resize(static_cast<std::size_t>(K));
  Spectrum s;
  s.values = std::move(vals);
  s.op = SpectrumOperator::laplacian_exact;
  s.domain = domain;
  return s;
}

Spectrum exact_spectrum(const Domain& domain, int K) {
  switch (domain.kind()) {
    case DomainKind::box: return box_spectrum(domain, K);
    case DomainKind::disk:
    case DomainKind::ball: return radial_spectrum(domain, K);
    case DomainKind::polygon: break;
  }
  throw InvalidInput("no closed-form Dirichlet spectrum for polygons");
}

Spectrum power_spectrum(const Spectrum& s, double ell) {
  if (!(ell > 0.0 && ell <= 1.0)) throw InvalidInput("power_spectrum: ell must lie in (0, 1]");
  if (s.op == SpectrumOperator::laplacian_power) {
    throw InvalidInput("power_spectrum: input is already a power spectrum");
  }
  Spectrum out = s;
  for (double& v : out.values) {
    if (!(v > 0.0)) throw InvalidInput("power_spectrum: eigenvalues must be positive");
    v = std::pow(v, ell);
  }
  out.op = SpectrumOperator::laplacian_power;
  out.ell = ell;
  return out;
}

std::vector<double> partial_sums(const Spectrum& s, double ell) {
  std::vector<double> out;
  out.reserve(s.values.size());
  CompensatedSum acc;
  for (double v : s.values) {
    acc.add(ell == 1.0 ? v : std::pow(v, ell));
    out.push_back(acc.value());
  }
  return out;
}

std::vector<double> weyl_ratio(const Spectrum& s, const GeometrySummary& geom, double alpha,
                               double ell) {
  const std::vector<double> sums = partial_sums(s, ell);
  std::vector<double> out(sums.size());
  BoundParams p;
  p.d = geom.dimension();
  p.alpha = alpha * ell;
  for (std::size_t i = 0; i < sums.size(); ++i) {
    p.k = static_cast<std::int64_t>(i + 1);
    out[i] = sums[i] / bly_lower(geom, p).value;
  }
  return out;
}

double riesz_mean(const Spectrum& s, double z) {
  CompensatedSum acc;
  for (double v : s.values) {
    if (v >= z) break;
    acc.add(z - v);
  }
  return acc.value();
}

}  // namespace fracbly
