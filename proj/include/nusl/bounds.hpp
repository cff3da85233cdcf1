#pragma once

#include "nusl/gram.hpp"
#include "nusl/sampling.hpp"
#include "nusl/types.hpp"

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace nusl {

/// r |-> bound value; the bound statement applies (and is nonincreasing)
/// for r >= validity_floor.
struct TailBoundCurve {
  std::function<double(double)> evaluator;
  double validity_floor = 0;
};

/// 216 K exp(-min{r^2/(4e^2 |HW|^2_{inf,2}), r^2/(4e^2 |WH|^2_{2,1}),
/// r/(2 mu)}); requires r >= 2e^2 |WHW|. For symmetric H the |WH|_{2,1}
/// term duplicates the |HW|_{inf,2} term and is omitted. Raw value, not
/// clipped to [0,1].
double theorem1_bound(const GramQuantities& q, double r, bool symmetric);

/// Theorem 1 applied to a cross-Gram (mu read as the cross-coherence).
double corollary2_bound(const GramQuantities& q, double r);

/// 2K (e |HW|^2_{inf,2} / v^2)^(v^2/mu^2). Raw value.
double lemma1_bound(const GramQuantities& q, double v);

/// 2K exp(-t^2 / (2 m_inf2^2 x_inf^2)).
double hoeffding_bound(double m_inf2, double x_inf, int K, double t);

TailBoundCurve theorem1_curve(const GramQuantities& q, bool symmetric);
TailBoundCurve lemma1_curve(const GramQuantities& q);

/// Smallest r >= floor with bound(r) <= target (bisection on the curve).
double bound_threshold_radius(const TailBoundCurve& curve, double target);

struct ConditionCheck {
  std::string name;
  double lhs = 0;
  double rhs = 0;
  bool holds() const { return lhs <= rhs; }
  double margin() const { return rhs - lhs; }
};

struct ConditionReport {
  bool holds = false;
  std::vector<ConditionCheck> checks;
};

/// Theorem-style sufficient conditions for the three algorithms, and their
/// sensing-dictionary variants.
ConditionReport thresholding_condition(const Vector& c, const GramQuantities& q,
                                       double eps);
ConditionReport omp_condition(const Vector& c, const GramQuantities& q, double eps);
ConditionReport bp_condition(const GramQuantities& q, double eps);
ConditionReport sensing_thresholding_condition(const Vector& c,
                                               const GramQuantities& q_cross,
                                               double eps);
ConditionReport sensing_omp_condition(const Vector& c, const GramQuantities& q_gram,
                                      const GramQuantities& q_cross, double eps);

/// min over nonempty L of |c_L|_inf / |c_L|_2, via the descending-sort
/// suffix scan (the minimizing L is a suffix of the sorted order).
double min_linf_l2_ratio(const Vector& c);

/// Same minimum by enumeration of all 2^S - 1 subsets (S <= 15); oracle.
double min_linf_l2_ratio_bruteforce(const Vector& c);

/// Survival estimates P(statistic >= r) over rejective draws, one entry per
/// threshold. Deterministic for a given seed under any job count.
std::vector<double> empirical_tail(
    const std::function<double(const Support&)>& statistic,
    const SupportModel& model, const std::vector<double>& thresholds,
    int n_trials, std::uint64_t seed, int jobs = 1);

}  // namespace nusl
