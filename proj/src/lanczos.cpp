#include "fracbly/lanczos.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <string>

#include "fracbly/error.hpp"

namespace fracbly {

namespace {

Eigen::VectorXd random_unit(std::mt19937_64& rng, std::size_t n) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(n));
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    v[i] = static_cast<double>(rng() >> 11) * 0x1.0p-53 - 0.5;
  }
  return v / v.norm();
}

void project_out(Eigen::VectorXd& w, const Eigen::MatrixXd& basis, Eigen::Index cols) {
  if (cols == 0) return;
  const auto b = basis.leftCols(cols);
  w.noalias() -= b * (b.transpose() * w);
}

Eigen::VectorXd apply(const MatVec& op, const Eigen::VectorXd& x, int& counter) {
  Eigen::VectorXd y(x.size());
  op(std::span<const double>(x.data(), static_cast<std::size_t>(x.size())),
     std::span<double>(y.data(), static_cast<std::size_t>(y.size())));
  ++counter;
  return y;
}

}  // namespace

EigenPairs lanczos_smallest(const MatVec& op, std::size_t n, int K, const LanczosOptions& opts) {
  if (K < 1) throw InvalidInput("lanczos_smallest needs K >= 1");
  if (static_cast<std::size_t>(K) > n) throw InvalidInput("lanczos_smallest needs K <= n");
  const auto N = static_cast<Eigen::Index>(n);
  const int m_max = static_cast<int>(std::min<std::size_t>(n, static_cast<std::size_t>(opts.max_basis)));

  std::mt19937_64 rng(opts.seed);
  EigenPairs out;
  Eigen::MatrixXd locked(N, 0);
  std::vector<double> locked_vals, locked_res;

  Eigen::VectorXd start = random_unit(rng, n);
  bool done = false;
  for (int restart = 0; restart <= opts.max_restarts && !done; ++restart) {
    out.restarts = restart;
    const auto L = static_cast<Eigen::Index>(locked_vals.size());
    if (L >= N) break;
    for (int pass = 0; pass < 2; ++pass) project_out(start, locked, L);
    start /= start.norm();

    const int want = L < K ? static_cast<int>(K - L) + 1 : 1;
    const int m_cap = static_cast<int>(std::min<Eigen::Index>(m_max, N - L));
    Eigen::MatrixXd V(N, m_cap);
    std::vector<double> alpha, beta;
    V.col(0) = start;
    int m = 0;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> tri;
    for (int j = 0; j < m_cap; ++j) {
      Eigen::VectorXd w = apply(op, V.col(j), out.matvecs);
      const double a = V.col(j).dot(w);
      w -= a * V.col(j);
      if (j > 0) w -= beta[j - 1] * V.col(j - 1);
      for (int pass = 0; pass < 2; ++pass) {
        project_out(w, V, j + 1);
        project_out(w, locked, L);
      }
      const double b = w.norm();
      alpha.push_back(a);
      m = j + 1;

      const double scale = std::max(1.0, std::abs(a));
      const bool breakdown = b <= 1e-12 * scale;
      const bool last = j + 1 == m_cap;
      if (breakdown || last || (m % 10 == 0 && m >= want)) {
        Eigen::VectorXd diag = Eigen::Map<Eigen::VectorXd>(alpha.data(), m);
        Eigen::VectorXd sub = Eigen::Map<Eigen::VectorXd>(beta.data(), m - 1);
        tri.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
        bool converged = m >= want;
        for (int i = 0; i < std::min(want, m) && converged; ++i) {
          converged = b * std::abs(tri.eigenvectors()(m - 1, i)) <= 0.1 * opts.tol;
        }
        if (breakdown || last || converged) break;
      }
      beta.push_back(b);
      V.col(j + 1) = w / b;
    }

    // Explicit residuals for the smallest Ritz pairs; lock the converged
    // prefix.
    const int cand = std::min(want, m);
    const double kth_before = L >= K ? [&] {
      std::vector<double> s = locked_vals;
      std::nth_element(s.begin(), s.begin() + (K - 1), s.end());
      return s[static_cast<std::size_t>(K - 1)];
    }()
                                     : 0.0;
    Eigen::VectorXd next_start = Eigen::VectorXd::Zero(N);
    int newly_locked = 0;
    bool first_converged = false;
    double first_value = 0.0;
    for (int i = 0; i < cand; ++i) {
      Eigen::VectorXd y = V.leftCols(m) * tri.eigenvectors().col(i);
      y /= y.norm();
      const double theta = tri.eigenvalues()[i];
      const double res = (apply(op, y, out.matvecs) - theta * y).norm();
      if (i == 0) {
        first_converged = res <= opts.tol;
        first_value = theta;
      }
      if (res <= opts.tol && newly_locked == i) {
        locked.conservativeResize(Eigen::NoChange, locked.cols() + 1);
        locked.col(locked.cols() - 1) = y;
        locked_vals.push_back(theta);
        locked_res.push_back(res);
        ++newly_locked;
      } else {
        next_start += y;
      }
    }

    if (L >= K && first_converged && first_value >= kth_before - opts.tol) done = true;
    // Mix the unconverged Ritz vectors with fresh randomness so hidden
    // copies of repeated eigenvalues enter the next Krylov space.
    Eigen::VectorXd noise = random_unit(rng, n);
    if (next_start.norm() > 0.0) {
      start = next_start / next_start.norm() + 0.1 * noise;
    } else {
      start = noise;
    }
    if (static_cast<Eigen::Index>(locked_vals.size()) >= N) done = true;
  }

  if (static_cast<int>(locked_vals.size()) < K || !done) {
    throw ConvergenceError("Lanczos did not converge: " + std::to_string(locked_vals.size()) +
                           " of " + std::to_string(K) + " eigenpairs after " +
                           std::to_string(out.restarts) + " restarts");
  }

  std::vector<std::size_t> order(locked_vals.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return locked_vals[a] < locked_vals[b]; });
  out.vectors.resize(N, K);
  for (int i = 0; i < K; ++i) {
    out.values.push_back(locked_vals[order[i]]);
    out.residuals.push_back(locked_res[order[i]]);
    out.vectors.col(i) = locked.col(static_cast<Eigen::Index>(order[i]));
  }
  return out;
}

}  // namespace fracbly
