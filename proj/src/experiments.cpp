#include "nusl/experiments.hpp"

#include "nusl/io.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <limits>
#include <mutex>
#include <numeric>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace nusl {

DistributionFamily::Kind parse_family_kind(const std::string& name) {
  if (name == "uniform") return DistributionFamily::Kind::uniform;
  if (name == "linear") return DistributionFamily::Kind::linear;
  if (name == "quadratic") return DistributionFamily::Kind::quadratic;
  if (name == "step") return DistributionFamily::Kind::step;
  throw std::invalid_argument("unknown distribution family: " + name);
}

std::string family_kind_name(DistributionFamily::Kind kind) {
  switch (kind) {
    case DistributionFamily::Kind::uniform: return "uniform";
    case DistributionFamily::Kind::linear: return "linear";
    case DistributionFamily::Kind::quadratic: return "quadratic";
    case DistributionFamily::Kind::step: return "step";
  }
  return "?";
}

Algo parse_algo(const std::string& name) {
  if (name == "thresholding") return Algo::thresholding;
  if (name == "omp") return Algo::omp;
  if (name == "bp") return Algo::bp;
  throw std::invalid_argument("unknown algorithm: " + name);
}

std::string algo_name(Algo a) {
  switch (a) {
    case Algo::thresholding: return "thresholding";
    case Algo::omp: return "omp";
    case Algo::bp: return "bp";
  }
  return "?";
}

SensingMode parse_sensing_mode(const std::string& name) {
  if (name == "none") return SensingMode::none;
  if (name == "uniform") return SensingMode::uniform;
  if (name == "matched") return SensingMode::matched;
  throw std::invalid_argument("unknown sensing mode: " + name);
}

std::string sensing_mode_name(SensingMode m) {
  switch (m) {
    case SensingMode::none: return "none";
    case SensingMode::uniform: return "uniform";
    case SensingMode::matched: return "matched";
  }
  return "?";
}

TailStatistic parse_tail_statistic(const std::string& name) {
  if (name == "submatrix_op_norm") return TailStatistic::submatrix_op_norm;
  if (name == "restricted_row_norm") return TailStatistic::restricted_row_norm;
  if (name == "cross_op_norm") return TailStatistic::cross_op_norm;
  throw std::invalid_argument("unknown tail statistic: " + name);
}

std::string tail_statistic_name(TailStatistic s) {
  switch (s) {
    case TailStatistic::submatrix_op_norm: return "submatrix_op_norm";
    case TailStatistic::restricted_row_norm: return "restricted_row_norm";
    case TailStatistic::cross_op_norm: return "cross_op_norm";
  }
  return "?";
}

Vector water_fill(const Vector& weights, int S) {
  int K = static_cast<int>(weights.size());
  if (S < 1) throw std::invalid_argument("S must be >= 1");
  int positive = 0;
  for (int i = 0; i < K; ++i) {
    if (weights[i] < 0) throw std::invalid_argument("negative weight");
    if (weights[i] > 0) ++positive;
  }
  if (S > positive)
    throw std::invalid_argument("S exceeds the number of positive weights");

  Vector p = Vector::Zero(K);
  std::vector<int> free_idx;
  for (int i = 0; i < K; ++i)
    if (weights[i] > 0) free_idx.push_back(i);
  double remaining = static_cast<double>(S);

  for (int pass = 0; pass < K && !free_idx.empty(); ++pass) {
    double wsum = 0.0;
    for (int i : free_idx) wsum += weights[i];
    double scale = remaining / wsum;
    std::vector<int> clipped;
    for (int i : free_idx) {
      if (weights[i] * scale >= 1.0) clipped.push_back(i);
    }
    if (clipped.empty()) {
      for (int i : free_idx) p[i] = weights[i] * scale;
      return p;
    }
    for (int i : clipped) {
      p[i] = 1.0;
      remaining -= 1.0;
    }
    std::vector<int> next;
    for (int i : free_idx)
      if (p[i] < 1.0) next.push_back(i);
    free_idx.swap(next);
    if (remaining <= 0.0) return p;
  }
  return p;
}

SupportModel gen_distribution(const DistributionFamily& family) {
  int K = family.K;
  int S = family.S;
  if (K < 1 || S < 1 || S > K)
    throw std::invalid_argument("invalid distribution dimensions");
  Vector w(K);
  switch (family.kind) {
    case DistributionFamily::Kind::uniform:
      w.setOnes();
      break;
    case DistributionFamily::Kind::linear:
      for (int i = 0; i < K; ++i) w[i] = static_cast<double>(K - i);
      break;
    case DistributionFamily::Kind::quadratic:
      for (int i = 0; i < K; ++i)
        w[i] = static_cast<double>(K - i) * static_cast<double>(K - i);
      break;
    case DistributionFamily::Kind::step:
      if (!(family.step_ratio > 1.0))
        throw std::invalid_argument("step_ratio must exceed 1");
      for (int i = 0; i < K; ++i)
        w[i] = i < K / 2 ? family.step_ratio : 1.0;
      break;
  }
  return build_support_model(water_fill(w, S));
}

Dictionary gen_gaussian_dictionary(int d, int K, std::uint64_t seed) {
  if (d < 1 || K < 1) throw std::invalid_argument("invalid dimensions");
  Matrix m(d, K);
  RngStream rng(seed, 0x67617573ULL);  // fixed stream purpose tag
  for (int k = 0; k < K; ++k) {
    for (int i = 0; i < d; ++i) m(i, k) = rng.normal();
    double norm = m.col(k).norm();
    if (norm == 0.0) {  // essentially impossible; regenerate the column
      m(0, k) = 1.0;
      norm = 1.0;
    }
    m.col(k) /= norm;
  }
  return validate_dictionary(m, true);
}

Dictionary gen_subsampled_dct_dictionary(int d, int K, std::uint64_t seed) {
  if (d < 1 || K < 1 || d > K)
    throw std::invalid_argument("requires 1 <= d <= K");
  for (int attempt = 0; attempt < 10; ++attempt) {
    RngStream rng(seed + attempt, 0x64637432ULL);
    // Sample d distinct rows via partial Fisher-Yates.
    std::vector<int> rows(K);
    std::iota(rows.begin(), rows.end(), 0);
    for (int i = 0; i < d; ++i) {
      int j = i + static_cast<int>(rng.below(static_cast<std::uint64_t>(K - i)));
      std::swap(rows[i], rows[j]);
    }
    rows.resize(d);
    std::sort(rows.begin(), rows.end());

    Matrix m(d, K);
    for (int r = 0; r < d; ++r) {
      int j = rows[r];
      double scale = j == 0 ? std::sqrt(1.0 / K) : std::sqrt(2.0 / K);
      for (int k = 0; k < K; ++k)
        m(r, k) = scale * std::cos(M_PI * (2.0 * k + 1.0) * j / (2.0 * K));
    }

    bool ok = true;
    for (int k = 0; k < K && ok; ++k) {
      double norm = m.col(k).norm();
      if (norm < 1e-9) ok = false;
    }
    if (!ok) continue;
    Matrix normalized = m;
    for (int k = 0; k < K; ++k) normalized.col(k) /= normalized.col(k).norm();
    // Reject duplicate (or sign-flipped duplicate) columns.
    for (int k = 0; k < K && ok; ++k)
      for (int l = k + 1; l < K && ok; ++l)
        if (std::abs(normalized.col(k).dot(normalized.col(l))) > 1.0 - 1e-12)
          ok = false;
    if (!ok) continue;
    return validate_dictionary(normalized, true);
  }
  throw std::runtime_error("subsampled DCT produced degenerate columns");
}

SignalInstance gen_signal(const Dictionary& phi, const SupportModel& model,
                          const CoeffSpec& coeff, RngStream& rng) {
  Support I = rejective_sample(model, rng);
  int S = I.size();
  Vector c(S);
  switch (coeff.kind) {
    case CoeffSpec::Kind::unit:
      c.setOnes();
      break;
    case CoeffSpec::Kind::geometric:
      if (!(coeff.alpha > 0.0 && coeff.alpha < 1.0))
        throw std::invalid_argument("geometric alpha must lie in (0,1)");
      for (int k = 0; k < S; ++k) c[k] = std::pow(coeff.alpha, k + 1);
      break;
  }
  Vector sigma(S);
  for (int k = 0; k < S; ++k) sigma[k] = rng.bernoulli(0.5) ? 1.0 : -1.0;
  return make_signal(phi, I, c, sigma);
}

Dictionary build_dictionary(const DictionarySpec& spec) {
  switch (spec.kind) {
    case DictionarySpec::Kind::gaussian:
      return gen_gaussian_dictionary(spec.d, spec.K, spec.seed);
    case DictionarySpec::Kind::subsampled_dct:
      return gen_subsampled_dct_dictionary(spec.d, spec.K, spec.seed);
    case DictionarySpec::Kind::file:
      return validate_dictionary(io::load_matrix(spec.path), true);
  }
  throw std::invalid_argument("bad dictionary spec");
}

// ---------------------------------------------------------------------------
// Recovery sweep
// ---------------------------------------------------------------------------

namespace {

struct CellKey {
  std::size_t algo;
  std::size_t mode;
};

struct SRunArtifacts {
  SupportModel model;
  bool ok = true;
  std::string error;
  // Sensing artifacts, built once per S.
  std::optional<Matrix> greedy_uniform;
  std::optional<Matrix> greedy_matched;
  std::optional<Preconditioner> precond_uniform;
  std::optional<Preconditioner> precond_matched;
  bool greedy_uniform_ok = false, greedy_matched_ok = false;
  bool precond_uniform_ok = false, precond_matched_ok = false;
};

}  // namespace

SweepResult recovery_sweep(const SweepConfig& config, int jobs,
                           bool measure_runtime) {
  Dictionary phi = build_dictionary(config.dictionary);
  const int K = phi.K();
  const int n_trials = config.n_trials;
  if (n_trials < 1) throw std::invalid_argument("n_trials must be >= 1");
  if (config.s_range.empty()) throw std::invalid_argument("empty S range");
  for (int S : config.s_range)
    if (S < 1 || S > std::min(phi.d(), K))
      throw std::invalid_argument("S out of range [1, min(d,K)]");
  jobs = std::max(1, jobs);

  const auto& algos = config.algorithms;
  const auto& modes = config.sensing_modes;
  const std::size_t n_cells = algos.size() * modes.size();

  SweepResult result;
  for (std::size_t s_idx = 0; s_idx < config.s_range.size(); ++s_idx) {
    int S = config.s_range[s_idx];

    SRunArtifacts art;
    DistributionFamily fam{config.family, K, S, config.step_ratio};
    art.model = gen_distribution(fam);
    SupportModel uniform_model =
        build_support_model(Vector::Constant(K, static_cast<double>(S) / K));

    bool need_greedy = false, need_bp = false;
    for (Algo a : algos) (a == Algo::bp ? need_bp : need_greedy) = true;
    bool need_uniform = false, need_matched = false;
    for (SensingMode m : modes) {
      if (m == SensingMode::uniform) need_uniform = true;
      if (m == SensingMode::matched) need_matched = true;
    }

    auto try_build = [&](auto&& builder, auto& slot, bool& ok_flag) {
      try {
        slot = builder();
        ok_flag = true;
      } catch (const std::exception&) {
        ok_flag = false;
      }
    };
    if (need_greedy && need_uniform)
      try_build([&] { return greedy_sensing(phi, uniform_model).entries; },
                art.greedy_uniform, art.greedy_uniform_ok);
    if (need_greedy && need_matched)
      try_build([&] { return greedy_sensing(phi, art.model).entries; },
                art.greedy_matched, art.greedy_matched_ok);
    if (need_bp && need_uniform)
      try_build([&] { return preconditioner(phi, uniform_model); },
                art.precond_uniform, art.precond_uniform_ok);
    if (need_bp && need_matched)
      try_build([&] { return preconditioner(phi, art.model); },
                art.precond_matched, art.precond_matched_ok);

    // Per-trial outcome slots: support hit / coeff hit per cell.
    std::vector<std::uint8_t> support_hits(n_cells * n_trials, 0);
    std::vector<std::uint8_t> coeff_hits(n_cells * n_trials, 0);
    std::vector<double> runtimes(measure_runtime ? n_cells * n_trials : 0, 0.0);
    std::vector<std::atomic<std::uint8_t>> cell_failed(n_cells);

    // Pre-mark cells whose sensing artifacts failed to build.
    for (std::size_t ai = 0; ai < algos.size(); ++ai) {
      for (std::size_t mi = 0; mi < modes.size(); ++mi) {
        bool ok = true;
        if (modes[mi] == SensingMode::uniform)
          ok = algos[ai] == Algo::bp ? art.precond_uniform_ok
                                     : art.greedy_uniform_ok;
        else if (modes[mi] == SensingMode::matched)
          ok = algos[ai] == Algo::bp ? art.precond_matched_ok
                                     : art.greedy_matched_ok;
        if (!ok) cell_failed[ai * modes.size() + mi].store(1);
      }
    }

    std::atomic<int> next{0};
    std::mutex error_mutex;
    std::string first_error;

    static const std::optional<Matrix> kNoSensing;
    auto greedy_for_mode = [&](SensingMode mode) -> const std::optional<Matrix>& {
      if (mode == SensingMode::uniform) return art.greedy_uniform;
      if (mode == SensingMode::matched) return art.greedy_matched;
      return kNoSensing;
    };

    auto run_trial = [&](int trial) {
      RngStream rng(config.master_seed,
                    mix_indices(s_idx, static_cast<std::uint64_t>(trial)));
      SignalInstance signal = gen_signal(phi, art.model, config.coeff, rng);
      for (std::size_t ai = 0; ai < algos.size(); ++ai) {
        for (std::size_t mi = 0; mi < modes.size(); ++mi) {
          std::size_t cell = ai * modes.size() + mi;
          if (cell_failed[cell].load()) continue;
          auto started = std::chrono::steady_clock::now();
          RecoveryResult rec;
          try {
            switch (algos[ai]) {
              case Algo::thresholding:
                rec = thresholding(phi, signal.y, S, greedy_for_mode(modes[mi]));
                break;
              case Algo::omp:
                rec = omp(phi, signal.y, S, greedy_for_mode(modes[mi]));
                break;
              case Algo::bp: {
                if (modes[mi] == SensingMode::none) {
                  rec = basis_pursuit(phi.entries, signal.y);
                } else {
                  const Preconditioner& pc = modes[mi] == SensingMode::uniform
                                                 ? *art.precond_uniform
                                                 : *art.precond_matched;
                  Vector y_tilde = pc.transform * signal.y;
                  RecoveryResult inner = basis_pursuit(pc.psi.entries, y_tilde);
                  rec.coefficients = Vector(K);
                  for (int k = 0; k < K; ++k)
                    rec.coefficients[k] = std::sqrt(pc.psi.normalization[k]) *
                                          inner.coefficients[k];
                  rec.iterations = inner.iterations;
                  rec.converged = inner.converged;
                  std::vector<int> sup;
                  for (int k = 0; k < K; ++k)
                    if (std::abs(rec.coefficients[k]) > 1e-6) sup.push_back(k);
                  rec.support_found = Support{std::move(sup)};
                }
                break;
              }
            }
          } catch (const std::exception& e) {
            std::lock_guard<std::mutex> lock(error_mutex);
            if (first_error.empty()) first_error = e.what();
            cell_failed[cell].store(1);
            continue;
          }
          RecoveryVerdict verdict = judge_recovery(rec, signal);
          support_hits[cell * n_trials + trial] = verdict.support_exact ? 1 : 0;
          coeff_hits[cell * n_trials + trial] = verdict.coeff_exact ? 1 : 0;
          if (measure_runtime) {
            auto elapsed = std::chrono::steady_clock::now() - started;
            runtimes[cell * n_trials + trial] =
                std::chrono::duration<double, std::milli>(elapsed).count();
          }
        }
      }
    };

    auto worker = [&]() {
      for (;;) {
        int t = next.fetch_add(1);
        if (t >= n_trials) break;
        run_trial(t);
      }
    };
    if (jobs == 1) {
      worker();
    } else {
      std::vector<std::thread> pool;
      for (int i = 0; i < jobs; ++i) pool.emplace_back(worker);
      for (auto& th : pool) th.join();
    }

    for (std::size_t ai = 0; ai < algos.size(); ++ai) {
      for (std::size_t mi = 0; mi < modes.size(); ++mi) {
        std::size_t cell = ai * modes.size() + mi;
        SweepRow row;
        row.algorithm = algos[ai];
        row.sensing_mode = modes[mi];
        row.S = S;
        row.n_trials = n_trials;
        row.failed = cell_failed[cell].load() != 0;
        if (!row.failed) {
          long long sup = 0, coef = 0;
          double ms = 0.0;
          for (int t = 0; t < n_trials; ++t) {
            sup += support_hits[cell * n_trials + t];
            coef += coeff_hits[cell * n_trials + t];
            if (measure_runtime) ms += runtimes[cell * n_trials + t];
          }
          row.support_rate = static_cast<double>(sup) / n_trials;
          row.coeff_rate = static_cast<double>(coef) / n_trials;
          row.mean_runtime_ms = measure_runtime ? ms / n_trials : 0.0;
        } else {
          result.any_failed = true;
        }
        result.rows.push_back(row);
      }
    }
  }
  return result;
}

std::string sweep_csv(const SweepResult& result) {
  std::ostringstream out;
  out << "algorithm,sensing_mode,S,n_trials,support_rate,coeff_rate,mean_runtime_ms\n";
  out.precision(10);
  for (const auto& row : result.rows) {
    out << algo_name(row.algorithm) << ',' << sensing_mode_name(row.sensing_mode)
        << ',' << row.S << ',' << row.n_trials << ',';
    if (row.failed) {
      out << "nan,nan,nan";
    } else {
      out << row.support_rate << ',' << row.coeff_rate << ','
          << row.mean_runtime_ms;
    }
    out << '\n';
  }
  return out.str();
}

// ---------------------------------------------------------------------------
// Tail experiment
// ---------------------------------------------------------------------------

TailExperimentResult tail_experiment(const Dictionary& phi,
                                     const SupportModel& model,
                                     TailStatistic statistic,
                                     std::vector<double> r_grid, int n_trials,
                                     std::uint64_t seed, int jobs) {
  TailExperimentResult result;
  HollowMatrix h = statistic == TailStatistic::cross_op_norm
                       ? cross_gram(greedy_sensing(phi, model).entries, phi)
                       : hollow_gram(phi);
  result.quantities = gram_quantities(h, model);

  TailBoundCurve curve;
  switch (statistic) {
    case TailStatistic::submatrix_op_norm:
      curve = theorem1_curve(result.quantities, true);
      break;
    case TailStatistic::cross_op_norm:
      curve = theorem1_curve(result.quantities, false);
      break;
    case TailStatistic::restricted_row_norm:
      curve = lemma1_curve(result.quantities);
      break;
  }
  result.validity_floor = curve.validity_floor;

  if (r_grid.empty()) {
    // From the floor out to where the bound is informative (< 0.5).
    double lo = std::max(curve.validity_floor, 1e-6);
    double hi = std::max(bound_threshold_radius(curve, 0.5) * 1.05, lo * 1.5);
    int n_points = 24;
    for (int i = 0; i < n_points; ++i)
      r_grid.push_back(lo + (hi - lo) * i / (n_points - 1));
  }
  std::sort(r_grid.begin(), r_grid.end());

  std::function<double(const Support&)> stat_fn;
  switch (statistic) {
    case TailStatistic::submatrix_op_norm:
    case TailStatistic::cross_op_norm:
      stat_fn = [&h](const Support& I) {
        int S = I.size();
        Matrix sub(S, S);
        for (int a = 0; a < S; ++a)
          for (int b = 0; b < S; ++b)
            sub(a, b) = h.entries(I.indices[a], I.indices[b]);
        return operator_norm(sub);
      };
      break;
    case TailStatistic::restricted_row_norm:
      stat_fn = [&h](const Support& I) { return restricted_max_row_norm(h, I); };
      break;
  }

  std::vector<double> survival =
      empirical_tail(stat_fn, model, r_grid, n_trials, seed, jobs);

  for (std::size_t i = 0; i < r_grid.size(); ++i) {
    TailRow row;
    row.r = r_grid[i];
    row.empirical = survival[i];
    row.floor_ok = r_grid[i] >= curve.validity_floor;
    row.bound = row.floor_ok ? curve.evaluator(r_grid[i])
                             : std::numeric_limits<double>::quiet_NaN();
    if (row.floor_ok && row.bound < 1.0) result.any_nonvacuous = true;
    result.rows.push_back(row);
  }
  return result;
}

std::string tail_csv(const TailExperimentResult& result) {
  std::ostringstream out;
  out << "r,empirical,bound,floor_ok\n";
  out.precision(10);
  for (const auto& row : result.rows)
    out << row.r << ',' << row.empirical << ',' << row.bound << ','
        << (row.floor_ok ? 1 : 0) << '\n';
  return out.str();
}

}  // namespace nusl
