#include "nusl/sampling.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>

namespace nusl {

namespace {

void require_enumerable(const SupportModel& model) {
  if (model.K() > kMaxEnumerationK)
    throw std::invalid_argument("K too large for enumeration (max " +
                                std::to_string(kMaxEnumerationK) + ")");
}

double poisson_mass(const Vector& p, std::uint32_t mask) {
  double m = 1.0;
  for (int i = 0; i < p.size(); ++i)
    m *= (mask >> i) & 1u ? p[i] : 1.0 - p[i];
  return m;
}

// Next bitmask with the same popcount (Gosper's hack).
std::uint32_t next_same_popcount(std::uint32_t v) {
  std::uint32_t c = v & static_cast<std::uint32_t>(-static_cast<std::int32_t>(v));
  std::uint32_t r = v + c;
  return (((r ^ v) >> 2) / c) | r;
}

void ensure_monotone_if_checkable(const SetIndicator& f, int K) {
  if (K <= kExhaustiveMonotoneK && !is_monotone_indicator(f, K))
    throw std::invalid_argument("monotonicity check fails");
}

}  // namespace

double SupportDistributionTable::prob_mask(std::uint32_t mask) const {
  auto it = std::lower_bound(entries.begin(), entries.end(), mask,
                             [](const auto& e, std::uint32_t m) { return e.first < m; });
  if (it == entries.end() || it->first != mask) return 0.0;
  return it->second;
}

double SupportDistributionTable::prob(const Support& s) const {
  return prob_mask(support_to_mask(s));
}

Support mask_to_support(std::uint32_t mask, int K) {
  Support s;
  for (int i = 0; i < K; ++i)
    if ((mask >> i) & 1u) s.indices.push_back(i);
  return s;
}

std::uint32_t support_to_mask(const Support& s) {
  std::uint32_t mask = 0;
  for (int i : s.indices) {
    if (i < 0 || i >= 32) throw std::invalid_argument("index out of mask range");
    mask |= 1u << i;
  }
  return mask;
}

Support poisson_sample(const SupportModel& model, RngStream& rng) {
  Support s;
  for (int i = 0; i < model.K(); ++i)
    if (rng.bernoulli(model.p[i])) s.indices.push_back(i);
  return s;
}

Support rejective_sample(const SupportModel& model, RngStream& rng,
                         int max_attempts) {
  // Deterministic indices first: p_i = 1 is always in, p_i = 0 never.
  std::vector<int> forced;
  std::vector<int> open;
  for (int i = 0; i < model.K(); ++i) {
    if (model.p[i] >= 1.0)
      forced.push_back(i);
    else if (model.p[i] > 0.0)
      open.push_back(i);
  }
  int residual_S = model.S - static_cast<int>(forced.size());
  if (residual_S < 0)
    throw std::invalid_argument("more certain indices than the sparsity level");
  if (residual_S > static_cast<int>(open.size()))
    throw std::invalid_argument("fewer than S positive entries");

  Support s;
  if (residual_S == 0) {
    s.indices = forced;
  } else {
    std::vector<int> draw;
    draw.reserve(open.size());
    bool accepted = false;
    for (int attempt = 0; attempt < max_attempts; ++attempt) {
      draw.clear();
      for (int i : open)
        if (rng.bernoulli(model.p[i])) draw.push_back(i);
      if (static_cast<int>(draw.size()) == residual_S) {
        accepted = true;
        break;
      }
    }
    if (!accepted)
      throw std::runtime_error("rejective sampling exceeded max attempts (" +
                               std::to_string(max_attempts) + ")");
    s.indices = forced;
    s.indices.insert(s.indices.end(), draw.begin(), draw.end());
    std::sort(s.indices.begin(), s.indices.end());
  }
  if (s.size() != model.S)
    throw std::logic_error("rejective draw has wrong cardinality");
  return s;
}

SupportDistributionTable enumerate_poisson(const SupportModel& model) {
  require_enumerable(model);
  int K = model.K();
  SupportDistributionTable table;
  table.model_kind = SupportDistributionTable::Kind::poisson;
  table.K = K;
  std::uint32_t count = 1u << K;
  table.entries.reserve(count);
  for (std::uint32_t mask = 0; mask < count; ++mask)
    table.entries.emplace_back(mask, poisson_mass(model.p, mask));
  return table;
}

SupportDistributionTable enumerate_rejective(const SupportModel& model) {
  require_enumerable(model);
  int K = model.K();
  int S = model.S;
  SupportDistributionTable table;
  table.model_kind = SupportDistributionTable::Kind::rejective;
  table.K = K;
  double total = 0.0;
  std::uint32_t last = ((1u << S) - 1u) << (K - S);
  for (std::uint32_t mask = (1u << S) - 1u;; mask = next_same_popcount(mask)) {
    double m = poisson_mass(model.p, mask);
    table.entries.emplace_back(mask, m);
    total += m;
    if (mask == last) break;
  }
  if (!(total > 0.0))
    throw std::runtime_error("no size-S subset has positive mass");
  for (auto& e : table.entries) e.second /= total;
  return table;
}

Support table_sample(const SupportDistributionTable& table, RngStream& rng) {
  double u = rng.uniform();
  double acc = 0.0;
  for (const auto& [mask, prob] : table.entries) {
    acc += prob;
    if (u < acc) return mask_to_support(mask, table.K);
  }
  return mask_to_support(table.entries.back().first, table.K);
}

bool is_monotone_indicator(const SetIndicator& f, int K) {
  if (K > kExhaustiveMonotoneK)
    throw std::invalid_argument("K too large for exhaustive monotonicity check");
  std::uint32_t count = 1u << K;
  for (std::uint32_t mask = 0; mask < count; ++mask) {
    bool fi = f(mask);
    if (!fi) continue;
    // f(mask) = 1 must persist when adding any element.
    for (int j = 0; j < K; ++j) {
      if ((mask >> j) & 1u) continue;
      if (!f(mask | (1u << j))) return false;
    }
  }
  return true;
}

PoissonisationReport verify_poissonisation(const SupportModel& model,
                                           const SetIndicator& f) {
  require_enumerable(model);
  ensure_monotone_if_checkable(f, model.K());
  auto poisson = enumerate_poisson(model);
  auto rejective = enumerate_rejective(model);
  double lhs = 0.0;
  for (const auto& [mask, prob] : rejective.entries)
    if (f(mask)) lhs += prob;
  double rhs = 0.0;
  for (const auto& [mask, prob] : poisson.entries)
    if (f(mask)) rhs += prob;
  rhs *= 2.0;
  PoissonisationReport report;
  report.lhs = lhs;
  report.rhs = rhs;
  report.holds = lhs <= rhs * (1.0 + 1e-12) + 1e-15;
  return report;
}

bool verify_conditional_monotonicity(const SupportModel& model,
                                     const SetIndicator& f) {
  int K = model.K();
  if (K > 16)
    throw std::invalid_argument("K too large for conditional-monotonicity check");
  ensure_monotone_if_checkable(f, K);
  std::vector<double> hit(K + 1, 0.0), mass(K + 1, 0.0);
  std::uint32_t count = 1u << K;
  for (std::uint32_t mask = 0; mask < count; ++mask) {
    double m = poisson_mass(model.p, mask);
    int t = std::popcount(mask);
    mass[t] += m;
    if (f(mask)) hit[t] += m;
  }
  double prev_hit = 0.0, prev_mass = 0.0;
  bool have_prev = false;
  for (int t = 0; t <= K; ++t) {
    if (mass[t] <= 0.0) continue;
    if (have_prev) {
      // prev_hit/prev_mass <= hit/mass, cross-multiplied.
      double lhs = prev_hit * mass[t];
      double rhs = hit[t] * prev_mass;
      if (lhs > rhs * (1.0 + 1e-12) + 1e-15) return false;
    }
    prev_hit = hit[t];
    prev_mass = mass[t];
    have_prev = true;
  }
  return true;
}

MedianReport verify_median_property(const SupportModel& model) {
  require_enumerable(model);
  MedianReport report;
  report.tail = poisson_binomial_tail_geq(model.p, model.S);
  report.holds = report.tail >= 0.5;
  return report;
}

double poisson_binomial_tail_geq(const Vector& p, int s) {
  if (s <= 0) return 1.0;
  int K = static_cast<int>(p.size());
  if (s > K) return 0.0;
  // dp[j] = P(j successes so far), counts >= s dropped into the tail.
  std::vector<double> dp(s, 0.0);
  dp[0] = 1.0;
  double tail = 0.0;
  for (int i = 0; i < K; ++i) {
    double q = p[i];
    tail += dp[s - 1] * q;
    for (int j = s - 1; j >= 1; --j) dp[j] = dp[j] * (1.0 - q) + dp[j - 1] * q;
    dp[0] *= 1.0 - q;
  }
  return tail;
}

}  // namespace nusl
