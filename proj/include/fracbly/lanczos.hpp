#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace fracbly {

/// y = A x for a symmetric operator A.
using MatVec = std::function<void(std::span<const double>, std::span<double>)>;

struct LanczosOptions {
  int max_basis = 300;
  int max_restarts = 80;
  double tol = 1e-8;  // on ||A v - lambda v|| for unit v
  std::uint64_t seed = 0x5eed'f00dULL;
};

struct EigenPairs {
  std::vector<double> values;     // ascending
  std::vector<double> residuals;  // explicit ||A v - lambda v||
  Eigen::MatrixXd vectors;        // columns match values
  int matvecs = 0;
  int restarts = 0;
};

/// Smallest K eigenpairs of a symmetric operator of dimension n.
///
/// Lanczos with full reorthogonalisation. Converged Ritz pairs are locked
/// and the iteration restarts in their orthogonal complement from a seeded
/// random vector, so every copy of a repeated eigenvalue is found. It stops
/// once K pairs are locked and a restart produces nothing below the K-th.
EigenPairs lanczos_smallest(const MatVec& op, std::size_t n, int K, const LanczosOptions& opts = {});

}  // namespace fracbly
