#pragma once

#include "nusl/algorithms.hpp"
#include "nusl/bounds.hpp"
#include "nusl/sampling.hpp"
#include "nusl/sensing.hpp"
#include "nusl/types.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace nusl {

struct DistributionFamily {
  enum class Kind { uniform, linear, quadratic, step };

  Kind kind = Kind::uniform;
  int K = 0;
  int S = 0;
  double step_ratio = 10.0;  // step kind only, > 1
};

DistributionFamily::Kind parse_family_kind(const std::string& name);
std::string family_kind_name(DistributionFamily::Kind kind);

/// Scale weights to sum S, clip at 1, redistribute the clipped excess over
/// the unclipped entries, repeat until no entry exceeds 1.
Vector water_fill(const Vector& weights, int S);

SupportModel gen_distribution(const DistributionFamily& family);

/// Columns drawn i.i.d. from the unit sphere (normalized Gaussians).
Dictionary gen_gaussian_dictionary(int d, int K, std::uint64_t seed);

/// d rows of the K x K orthonormal DCT-II matrix, sampled without
/// replacement, columns renormalized.
Dictionary gen_subsampled_dct_dictionary(int d, int K, std::uint64_t seed);

struct CoeffSpec {
  enum class Kind { unit, geometric };
  Kind kind = Kind::unit;
  double alpha = 0.9;  // geometric only
};

/// Rejective support, magnitudes per spec (geometric magnitudes assigned in
/// increasing index order), i.i.d. Rademacher signs.
SignalInstance gen_signal(const Dictionary& phi, const SupportModel& model,
                          const CoeffSpec& coeff, RngStream& rng);

enum class Algo { thresholding, omp, bp };
enum class SensingMode { none, uniform, matched };

Algo parse_algo(const std::string& name);
std::string algo_name(Algo a);
SensingMode parse_sensing_mode(const std::string& name);
std::string sensing_mode_name(SensingMode m);

struct DictionarySpec {
  enum class Kind { gaussian, subsampled_dct, file };
  Kind kind = Kind::gaussian;
  int d = 0;
  int K = 0;
  std::uint64_t seed = 0;
  std::string path;  // file kind
};

Dictionary build_dictionary(const DictionarySpec& spec);

struct SweepConfig {
  DictionarySpec dictionary;
  DistributionFamily::Kind family = DistributionFamily::Kind::uniform;
  double step_ratio = 10.0;
  std::vector<int> s_range;
  int n_trials = 200;
  std::vector<Algo> algorithms{Algo::thresholding, Algo::omp, Algo::bp};
  std::vector<SensingMode> sensing_modes{SensingMode::none, SensingMode::uniform,
                                         SensingMode::matched};
  CoeffSpec coeff;
  std::uint64_t master_seed = 0;
};

struct SweepRow {
  Algo algorithm = Algo::thresholding;
  SensingMode sensing_mode = SensingMode::none;
  int S = 0;
  int n_trials = 0;
  double support_rate = 0;
  double coeff_rate = 0;
  double mean_runtime_ms = 0;
  bool failed = false;  // sensing construction failed for this cell
};

struct SweepResult {
  std::vector<SweepRow> rows;
  bool any_failed = false;
};

/// Runs the recovery sweep. The same signals are shared across algorithms
/// and sensing modes at each S; output is identical for any job count.
/// Timing is off by default (the runtime column would break byte-identical
/// reruns) and opt-in via measure_runtime.
SweepResult recovery_sweep(const SweepConfig& config, int jobs = 1,
                           bool measure_runtime = false);

std::string sweep_csv(const SweepResult& result);

enum class TailStatistic { submatrix_op_norm, restricted_row_norm, cross_op_norm };

TailStatistic parse_tail_statistic(const std::string& name);
std::string tail_statistic_name(TailStatistic s);

struct TailRow {
  double r = 0;
  double empirical = 0;
  double bound = 0;     // raw bound value
  bool floor_ok = false;
};

struct TailExperimentResult {
  std::vector<TailRow> rows;
  double validity_floor = 0;
  bool any_nonvacuous = false;  // some checked grid point had bound < 1
  GramQuantities quantities;
};

/// Monte-Carlo survival of the chosen statistic against its bound curve.
/// Empty r_grid -> automatic grid from the validity floor to where the
/// bound drops below 0.5.
TailExperimentResult tail_experiment(const Dictionary& phi,
                                     const SupportModel& model,
                                     TailStatistic statistic,
                                     std::vector<double> r_grid, int n_trials,
                                     std::uint64_t seed, int jobs = 1);

std::string tail_csv(const TailExperimentResult& result);

}  // namespace nusl
