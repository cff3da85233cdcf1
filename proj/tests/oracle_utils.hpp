#pragma once

// Test-only oracles, independent of the library code paths they check.

#include "nusl/rng.hpp"
#include "nusl/sampling.hpp"
#include "nusl/types.hpp"

#include <Eigen/QR>
#include <Eigen/SVD>

#include <bit>
#include <cmath>
#include <limits>
#include <vector>

namespace oracle {

using nusl::Matrix;
using nusl::Vector;

// Largest singular value via Jacobi SVD (implementation uses BDC/eigensolver).
inline double operator_norm_svd(const Matrix& m) {
  Eigen::JacobiSVD<Matrix> svd(m);
  return svd.singularValues().size() ? svd.singularValues()[0] : 0.0;
}

// P(sum Bernoulli(p_i) >= s) by direct 2^K enumeration.
inline double poisson_binomial_tail_enum(const Vector& p, int s) {
  int K = static_cast<int>(p.size());
  double tail = 0.0;
  for (std::uint32_t mask = 0; mask < (1u << K); ++mask) {
    if (std::popcount(mask) < s) continue;
    double mass = 1.0;
    for (int i = 0; i < K; ++i)
      mass *= (mask >> i) & 1u ? p[i] : 1.0 - p[i];
    tail += mass;
  }
  return tail;
}

// Minimum l1 norm over exact-sparse representations, by exhausting all
// supports of size <= d with independent columns; valid for small (d, K).
inline double min_l1_bruteforce(const Matrix& a, const Vector& y,
                                double feas_tol = 1e-8) {
  int d = static_cast<int>(a.rows());
  int K = static_cast<int>(a.cols());
  double best = std::numeric_limits<double>::infinity();
  for (std::uint32_t mask = 1; mask < (1u << K); ++mask) {
    int size = std::popcount(mask);
    if (size > d) continue;
    Matrix sub(d, size);
    int c = 0;
    for (int k = 0; k < K; ++k)
      if ((mask >> k) & 1u) sub.col(c++) = a.col(k);
    Eigen::ColPivHouseholderQR<Matrix> qr(sub);
    if (qr.rank() < size) continue;
    Vector x = qr.solve(y);
    if ((sub * x - y).norm() > feas_tol) continue;
    best = std::min(best, x.cwiseAbs().sum());
  }
  return best;
}

// Dual certificate |Phi_{I^c}^T Phi_I (Phi_I^T Phi_I)^{-1} sigma_I|_inf.
inline double fuchs_certificate(const Matrix& phi, const std::vector<int>& I,
                                const Vector& sigma) {
  int d = static_cast<int>(phi.rows());
  int K = static_cast<int>(phi.cols());
  int S = static_cast<int>(I.size());
  Matrix sub(d, S);
  for (int k = 0; k < S; ++k) sub.col(k) = phi.col(I[k]);
  Matrix gram = sub.transpose() * sub;
  Vector inner = gram.ldlt().solve(sigma);
  double best = 0.0;
  std::vector<bool> in_support(K, false);
  for (int i : I) in_support[i] = true;
  for (int k = 0; k < K; ++k) {
    if (in_support[k]) continue;
    double v = std::abs(phi.col(k).dot(sub * inner));
    best = std::max(best, v);
  }
  return best;
}

// Total variation distance between empirical support frequencies and a table.
inline double tv_distance(const nusl::SupportDistributionTable& table,
                          const std::vector<std::pair<std::uint32_t, long long>>&
                              counts,
                          long long n) {
  double tv = 0.0;
  std::size_t ci = 0;
  for (const auto& [mask, prob] : table.entries) {
    double freq = 0.0;
    while (ci < counts.size() && counts[ci].first < mask) {
      // Mass observed outside the table (should not happen for rejective).
      tv += static_cast<double>(counts[ci].second) / n;
      ++ci;
    }
    if (ci < counts.size() && counts[ci].first == mask) {
      freq = static_cast<double>(counts[ci].second) / n;
      ++ci;
    }
    tv += std::abs(freq - prob);
  }
  for (; ci < counts.size(); ++ci)
    tv += static_cast<double>(counts[ci].second) / n;
  return 0.5 * tv;
}

// Random monotone indicator: union of a few random up-sets.
inline nusl::SetIndicator random_upset_union(int K, int n_seeds,
                                             nusl::RngStream& rng) {
  std::vector<std::uint32_t> seeds;
  for (int i = 0; i < n_seeds; ++i) {
    std::uint32_t mask = 0;
    for (int j = 0; j < K; ++j)
      if (rng.bernoulli(0.35)) mask |= 1u << j;
    seeds.push_back(mask);
  }
  return [seeds](std::uint32_t mask) {
    for (std::uint32_t s : seeds)
      if ((mask & s) == s) return true;
    return false;
  };
}

// Random monotone indicator: nonnegative weighted threshold.
inline nusl::SetIndicator random_weight_threshold(int K, nusl::RngStream& rng) {
  std::vector<double> w(K);
  double total = 0.0;
  for (int j = 0; j < K; ++j) {
    w[j] = rng.uniform();
    total += w[j];
  }
  double threshold = rng.uniform() * total;
  return [w, threshold](std::uint32_t mask) {
    double acc = 0.0;
    for (std::size_t j = 0; j < w.size(); ++j)
      if ((mask >> j) & 1u) acc += w[j];
    return acc >= threshold;
  };
}

// Random probability vector with integer sum S, entries in (0, 1].
inline Vector random_model_p(int K, int S, nusl::RngStream& rng) {
  Vector raw(K);
  // Raw weights stay below 1 so the initial pass never clips everything.
  for (int i = 0; i < K; ++i) raw[i] = 0.05 + 0.9 * rng.uniform();
  // Scale-and-clip until the sum is S.
  for (int pass = 0; pass < 64; ++pass) {
    double free_sum = 0.0;
    double fixed = 0.0;
    for (int i = 0; i < K; ++i)
      (raw[i] >= 1.0 ? fixed : free_sum) += std::min(raw[i], 1.0);
    double scale = (S - fixed) / free_sum;
    bool clipped = false;
    for (int i = 0; i < K; ++i) {
      if (raw[i] >= 1.0) continue;
      raw[i] *= scale;
      if (raw[i] >= 1.0) {
        raw[i] = 1.0;
        clipped = true;
      }
    }
    if (!clipped) break;
  }
  for (int i = 0; i < K; ++i) raw[i] = std::min(raw[i], 1.0);
  return raw;
}

}  // namespace oracle
