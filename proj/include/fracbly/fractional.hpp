#pragma once

#include <complex>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "fracbly/geometry.hpp"
#include "fracbly/lanczos.hpp"
#include "fracbly/spectrum.hpp"

namespace fracbly {

/// A_{d,alpha} = 2^alpha Gamma((d+alpha)/2) / (pi^{d/2} |Gamma(-alpha/2)|),
/// the constant that makes the singular integral's symbol exactly |mu|^alpha.
double fractional_constant(int d, double alpha);

/// Integral of |z|^{2-d-alpha} over the unit cube [-1/2, 1/2]^d.
double singular_cell_integral(int d, double alpha);

/// Discretisation of the restricted fractional Laplacian on a regular
/// lattice of spacing h, cell-centred over the domain's bounding box.
/// Sites outside the domain are held at zero.
///
///   (L u)_i = diag u_i - sum_{j != i} K(x_i - x_j) u_j
///
/// K(y) = A h^d / |y|^{d+alpha} for lattice offsets y != 0, plus the
/// singular-cell correction c/h^2 on nearest neighbours. diag collects the
/// lattice sum of K up to radius rho, the analytic tail beyond rho and
/// 2 d c / h^2. All state is read-only after construction; apply() uses
/// per-call FFT buffers.
class GridOperator {
 public:
  [[nodiscard]] int dimension() const { return d_; }
  [[nodiscard]] double alpha() const { return alpha_; }
  [[nodiscard]] double spacing() const { return h_; }
  [[nodiscard]] int n_per_axis() const { return n_per_axis_; }
  [[nodiscard]] const std::vector<int>& sites_per_axis() const { return sites_; }
  [[nodiscard]] const Domain& domain() const { return domain_; }
  /// Number of interior (unmasked) sites, the operator's dimension.
  [[nodiscard]] std::size_t size() const { return interior_.size(); }
  [[nodiscard]] const std::vector<std::int64_t>& interior_sites() const { return interior_; }

  [[nodiscard]] double diagonal() const { return diag_; }
  [[nodiscard]] double normalizing_constant() const { return a_const_; }
  [[nodiscard]] double truncation_radius() const { return rho_; }
  [[nodiscard]] double tail_correction() const { return tail_; }
  [[nodiscard]] double singular_weight() const { return nn_weight_; }
  /// K(offset * h); offsets are per-axis lattice steps, |o_i| < sites_i.
  [[nodiscard]] double kernel(std::span<const int> offset) const;

  /// out = L in via zero-padded FFT convolution.
  void apply(std::span<const double> in, std::span<double> out) const;
  /// out = L in via the explicit sum over interior pairs (O(n^2)).
  void apply_direct(std::span<const double> in, std::span<double> out) const;
  [[nodiscard]] Eigen::MatrixXd dense() const;

  /// Symbol of the unmasked lattice operator at frequency mu:
  /// tail + sum_{0<|y|<=rho} K(y) (1 - cos(mu . y)).
  [[nodiscard]] double symbol(std::span<const double> mu) const;

  [[nodiscard]] MatVec as_matvec() const;

 private:
  friend GridOperator build_fractional_operator(const Domain&, double, int);
  struct FftState;

  GridOperator() = default;
  void init_fft();

  Domain domain_ = Domain::box({1.0, 1.0});
  int d_ = 2;
  double alpha_ = 1.0;
  double h_ = 0.0;
  int n_per_axis_ = 0;
  std::vector<int> sites_;
  std::vector<std::int64_t> interior_;  // row-major, last axis fastest
  std::vector<double> kernel_;          // over offsets in prod_i [-(n_i-1), n_i-1]
  double diag_ = 0.0;
  double a_const_ = 0.0;
  double rho_ = 0.0;
  double tail_ = 0.0;
  double nn_weight_ = 0.0;
  std::shared_ptr<const FftState> fft_;
};

/// Builds the operator for a box (d = 2, 3) or disk. n_per_axis sites
/// along the longest bounding-box axis; other axes use the same spacing.
/// Kernels are cached on disk when FRACBLY_CACHE_DIR is set.
GridOperator build_fractional_operator(const Domain& domain, double alpha, int n_per_axis);

/// Smallest K eigenvalues of the operator, residual <= 1e-8 per pair.
Spectrum fractional_eigs(const GridOperator& op, int K, const LanczosOptions& opts = {});

/// Environment variable naming the kernel cache directory.
inline constexpr const char* kCacheEnvVar = "FRACBLY_CACHE_DIR";

/// Kernel cache file layout: 8-byte magic "FBLYKERN", uint32 version,
/// uint32 d, d x uint32 sites, float64 alpha, float64 h, uint64 count,
/// count float64 kernel values, float64 diagonal. Little-endian.
struct KernelCacheEntry {
  int d = 0;
  std::vector<int> sites;
  double alpha = 0.0;
  double h = 0.0;
  std::vector<double> kernel;
  double diagonal = 0.0;
};

inline constexpr std::uint32_t kKernelCacheVersion = 1;

void write_kernel_cache(const std::filesystem::path& path, const KernelCacheEntry& entry);
std::optional<KernelCacheEntry> read_kernel_cache(const std::filesystem::path& path);
/// File name derived from (domain, alpha, n).
std::string kernel_cache_name(const Domain& domain, double alpha, int n_per_axis);

}  // namespace fracbly
