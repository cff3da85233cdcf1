#pragma once

#include "nusl/rng.hpp"
#include "nusl/types.hpp"

#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

namespace nusl {

inline constexpr int kMaxEnumerationK = 20;
inline constexpr int kExhaustiveMonotoneK = 12;
inline constexpr int kDefaultMaxAttempts = 100000;

/// Exact support distribution over subsets of {0..K-1}, keyed by bitmask.
struct SupportDistributionTable {
  enum class Kind { poisson, rejective };

  Kind model_kind = Kind::poisson;
  int K = 0;
  std::vector<std::pair<std::uint32_t, double>> entries;  // sorted by mask

  double prob_mask(std::uint32_t mask) const;
  double prob(const Support& s) const;
};

Support mask_to_support(std::uint32_t mask, int K);
std::uint32_t support_to_mask(const Support& s);

/// Each index included independently with probability p_i.
Support poisson_sample(const SupportModel& model, RngStream& rng);

/// Poisson draws conditioned on |I| = S by rejection. Indices with
/// p_i in {0,1} are resolved deterministically before the loop.
Support rejective_sample(const SupportModel& model, RngStream& rng,
                         int max_attempts = kDefaultMaxAttempts);

SupportDistributionTable enumerate_poisson(const SupportModel& model);
SupportDistributionTable enumerate_rejective(const SupportModel& model);

/// Inverse-CDF draw from an enumeration table; removes rejection-loop
/// randomness from distribution tests.
Support table_sample(const SupportDistributionTable& table, RngStream& rng);

/// 0/1 indicator on subsets, addressed by bitmask.
using SetIndicator = std::function<bool(std::uint32_t mask)>;

/// Exhaustive check of f(I) <= f(I + {j}) over all I, j.
bool is_monotone_indicator(const SetIndicator& f, int K);

struct PoissonisationReport {
  double lhs = 0;  // P_S(f = 1)
  double rhs = 0;  // 2 P(f = 1)
  bool holds = false;
};

/// Exact check of P_S(f=1) <= 2 P(f=1) for a monotone indicator f.
/// Monotonicity itself is verified exhaustively when K <= 12.
PoissonisationReport verify_poissonisation(const SupportModel& model,
                                           const SetIndicator& f);

/// True iff P(f=1 | |I|=T) is nondecreasing over all T with P(|I|=T) > 0.
bool verify_conditional_monotonicity(const SupportModel& model,
                                     const SetIndicator& f);

struct MedianReport {
  double tail = 0;  // P(|I| >= S)
  bool holds = false;
};

/// Poisson-binomial tail at the integer mean; holds iff tail >= 1/2.
MedianReport verify_median_property(const SupportModel& model);

/// P(sum of independent Bernoulli(p_i) >= s) by O(K*s) convolution.
double poisson_binomial_tail_geq(const Vector& p, int s);

}  // namespace nusl
