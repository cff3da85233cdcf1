#include "nusl/bounds.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <mutex>
#include <stdexcept>
#include <thread>

namespace nusl {

namespace {

constexpr double kE2 = M_E * M_E;
constexpr double kInf = std::numeric_limits<double>::infinity();

double exponent_min(double r, double hw_inf2, double wh_21, double mu,
                    bool symmetric) {
  // Zero scales make the corresponding failure mode impossible; the term
  // becomes +inf and drops out of the min.
  double t = kInf;
  if (hw_inf2 > 0) t = std::min(t, r * r / (4.0 * kE2 * hw_inf2 * hw_inf2));
  if (!symmetric && wh_21 > 0)
    t = std::min(t, r * r / (4.0 * kE2 * wh_21 * wh_21));
  if (mu > 0) t = std::min(t, r / (2.0 * mu));
  return t;
}

void check_eps(double eps) {
  if (!(eps > 0.0 && eps < 1.0))
    throw std::invalid_argument("eps must lie in (0,1)");
}

}  // namespace

double theorem1_bound(const GramQuantities& q, double r, bool symmetric) {
  double floor = 2.0 * kE2 * q.whw_op;
  if (r < floor * (1.0 - 1e-12))
    throw std::invalid_argument("r below validity floor 2e^2 |WHW|");
  double t = exponent_min(r, q.hw_inf2, q.wh_21, q.mu, symmetric);
  if (t == kInf) return 0.0;
  return 216.0 * q.K * std::exp(-t);
}

double corollary2_bound(const GramQuantities& q, double r) {
  return theorem1_bound(q, r, /*symmetric=*/false);
}

double lemma1_bound(const GramQuantities& q, double v) {
  if (!(v > 0.0)) throw std::invalid_argument("v must be positive");
  if (q.hw_inf2 <= 0.0) return 0.0;
  double base = M_E * q.hw_inf2 * q.hw_inf2 / (v * v);
  if (q.mu <= 0.0) {
    // Exponent +inf: the bound collapses to 0/2K/inf depending on the base.
    if (base < 1.0) return 0.0;
    if (base == 1.0) return 2.0 * q.K;
    return kInf;
  }
  double exponent = v * v / (q.mu * q.mu);
  return 2.0 * q.K * std::pow(base, exponent);
}

double hoeffding_bound(double m_inf2, double x_inf, int K, double t) {
  if (!(m_inf2 > 0.0) || !(x_inf > 0.0))
    throw std::invalid_argument("nonpositive scale parameter");
  if (t < 0.0) throw std::invalid_argument("t must be nonnegative");
  double denom = 2.0 * m_inf2 * m_inf2 * x_inf * x_inf;
  return 2.0 * K * std::exp(-t * t / denom);
}

TailBoundCurve theorem1_curve(const GramQuantities& q, bool symmetric) {
  TailBoundCurve curve;
  curve.validity_floor = 2.0 * kE2 * q.whw_op;
  curve.evaluator = [q, symmetric](double r) {
    return theorem1_bound(q, r, symmetric);
  };
  return curve;
}

TailBoundCurve lemma1_curve(const GramQuantities& q) {
  TailBoundCurve curve;
  // The statement holds for all v > 0; monotone decrease starts at |HW|.
  curve.validity_floor = q.hw_inf2;
  curve.evaluator = [q](double v) { return lemma1_bound(q, v); };
  return curve;
}

double bound_threshold_radius(const TailBoundCurve& curve, double target) {
  double lo = std::max(curve.validity_floor, 1e-12);
  if (curve.evaluator(lo) <= target) return lo;
  double hi = std::max(lo * 2.0, 1.0);
  int guard = 0;
  while (curve.evaluator(hi) > target && guard++ < 200) hi *= 2.0;
  if (guard >= 200) return hi;
  for (int i = 0; i < 100; ++i) {
    double mid = 0.5 * (lo + hi);
    (curve.evaluator(mid) > target ? lo : hi) = mid;
  }
  return hi;
}

double min_linf_l2_ratio(const Vector& c) {
  if (c.size() == 0) throw std::invalid_argument("empty coefficient vector");
  std::vector<double> mags(c.size());
  for (int i = 0; i < c.size(); ++i) mags[i] = std::abs(c[i]);
  std::sort(mags.begin(), mags.end(), std::greater<>());
  // For each candidate maximum c_(k), the worst L is the whole suffix of
  // entries no larger than it.
  double best = 1.0;
  double tail_sq = 0.0;
  for (int k = static_cast<int>(mags.size()) - 1; k >= 0; --k) {
    tail_sq += mags[k] * mags[k];
    best = std::min(best, mags[k] / std::sqrt(tail_sq));
  }
  return best;
}

double min_linf_l2_ratio_bruteforce(const Vector& c) {
  int S = static_cast<int>(c.size());
  if (S == 0) throw std::invalid_argument("empty coefficient vector");
  if (S > 15) throw std::invalid_argument("bruteforce limited to S <= 15");
  double best = 1.0;
  for (std::uint32_t mask = 1; mask < (1u << S); ++mask) {
    double maxabs = 0.0, sumsq = 0.0;
    for (int i = 0; i < S; ++i) {
      if (!((mask >> i) & 1u)) continue;
      double a = std::abs(c[i]);
      maxabs = std::max(maxabs, a);
      sumsq += a * a;
    }
    best = std::min(best, maxabs / std::sqrt(sumsq));
  }
  return best;
}

ConditionReport thresholding_condition(const Vector& c, const GramQuantities& q,
                                       double eps) {
  if (c.size() == 0) throw std::invalid_argument("empty coefficient vector");
  check_eps(eps);
  double cmin = c.cwiseAbs().minCoeff();
  double cmax = c.cwiseAbs().maxCoeff();
  double ratio2 = (cmin * cmin) / (cmax * cmax);
  double lg = std::log(4.0 * q.K / eps);
  ConditionReport report;
  report.checks.push_back({"mu^2", q.mu * q.mu, ratio2 / (8.0 * lg)});
  report.checks.push_back(
      {"|HW|^2_inf2", q.hw_inf2 * q.hw_inf2, ratio2 / (8.0 * kE2 * lg)});
  report.holds = report.checks[0].holds() && report.checks[1].holds();
  return report;
}

ConditionReport omp_condition(const Vector& c, const GramQuantities& q,
                              double eps) {
  if (c.size() == 0) throw std::invalid_argument("empty coefficient vector");
  check_eps(eps);
  double ratio = min_linf_l2_ratio(c);
  double lg216 = std::log(216.0 * q.K / eps);
  double lg218 = std::log(218.0 * q.K / eps);
  ConditionReport report;
  report.checks.push_back({"|WHW|", q.whw_op, 1.0 / (4.0 * kE2)});
  report.checks.push_back(
      {"|HW|^2_inf2", q.hw_inf2 * q.hw_inf2,
       std::min(ratio * ratio / (16.0 * kE2), 1.0 / (16.0 * kE2 * lg216))});
  report.checks.push_back(
      {"mu", q.mu,
       std::min(ratio / (4.0 * std::sqrt(lg218)), 1.0 / (4.0 * lg218))});
  report.holds = true;
  for (const auto& chk : report.checks) report.holds &= chk.holds();
  return report;
}

ConditionReport bp_condition(const GramQuantities& q, double eps) {
  check_eps(eps);
  double lg220 = std::log(220.0 * q.K / eps);
  ConditionReport report;
  report.checks.push_back({"|WHW|", q.whw_op, 1.0 / (4.0 * kE2)});
  report.checks.push_back({"mu", q.mu, 1.0 / (4.0 * lg220)});
  report.checks.push_back({"|HW|^2_inf2", q.hw_inf2 * q.hw_inf2,
                           1.0 / (16.0 * kE2 * lg220)});
  report.holds = true;
  for (const auto& chk : report.checks) report.holds &= chk.holds();
  return report;
}

ConditionReport sensing_thresholding_condition(const Vector& c,
                                               const GramQuantities& q_cross,
                                               double eps) {
  // Same two inequalities with the cross-Gram quantities; mu plays the role
  // of |Psi^T Phi - I|_{inf,1}.
  return thresholding_condition(c, q_cross, eps);
}

ConditionReport sensing_omp_condition(const Vector& c,
                                      const GramQuantities& q_gram,
                                      const GramQuantities& q_cross, double eps) {
  if (c.size() == 0) throw std::invalid_argument("empty coefficient vector");
  check_eps(eps);
  double ratio = min_linf_l2_ratio(c);
  double lg216 = std::log(216.0 * q_gram.K / eps);
  double lg218 = std::log(218.0 * q_gram.K / eps);
  ConditionReport report;
  report.checks.push_back({"|WHW|", q_gram.whw_op, 1.0 / (4.0 * kE2)});
  report.checks.push_back({"|HW|^2_inf2", q_gram.hw_inf2 * q_gram.hw_inf2,
                           1.0 / (16.0 * kE2 * lg216)});
  report.checks.push_back({"|H|_inf1", q_gram.mu, 1.0 / (4.0 * lg218)});
  report.checks.push_back({"|(PsiTPhi-I)W|^2_inf2",
                           q_cross.hw_inf2 * q_cross.hw_inf2,
                           ratio * ratio / (16.0 * kE2)});
  report.checks.push_back({"|PsiTPhi-I|_inf1", q_cross.mu,
                           ratio / (4.0 * std::sqrt(lg218))});
  report.holds = true;
  for (const auto& chk : report.checks) report.holds &= chk.holds();
  return report;
}

std::vector<double> empirical_tail(
    const std::function<double(const Support&)>& statistic,
    const SupportModel& model, const std::vector<double>& thresholds,
    int n_trials, std::uint64_t seed, int jobs) {
  if (n_trials < 1) throw std::invalid_argument("n_trials must be >= 1");
  jobs = std::max(1, jobs);
  std::vector<std::atomic<long long>> counts(thresholds.size());
  for (auto& c : counts) c.store(0);
  std::atomic<int> next{0};
  std::atomic<bool> failed{false};
  std::string error_msg;
  std::mutex error_mutex;

  auto worker = [&]() {
    std::vector<long long> local(thresholds.size(), 0);
    for (;;) {
      int t = next.fetch_add(1);
      if (t >= n_trials || failed.load()) break;
      try {
        RngStream rng(seed, static_cast<std::uint64_t>(t));
        Support I = rejective_sample(model, rng);
        double value = statistic(I);
        for (std::size_t j = 0; j < thresholds.size(); ++j)
          if (value >= thresholds[j]) ++local[j];
      } catch (const std::exception& e) {
        std::lock_guard<std::mutex> lock(error_mutex);
        error_msg = e.what();
        failed.store(true);
        break;
      }
    }
    for (std::size_t j = 0; j < thresholds.size(); ++j)
      counts[j].fetch_add(local[j]);
  };

  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int i = 0; i < jobs; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (failed.load()) throw std::runtime_error("empirical_tail: " + error_msg);

  std::vector<double> survival(thresholds.size());
  for (std::size_t j = 0; j < thresholds.size(); ++j)
    survival[j] = static_cast<double>(counts[j].load()) / n_trials;
  return survival;
}

}  // namespace nusl
