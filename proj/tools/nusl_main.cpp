#include "nusl/algorithms.hpp"
#include "nusl/bounds.hpp"
#include "nusl/config.hpp"
#include "nusl/experiments.hpp"
#include "nusl/gram.hpp"
#include "nusl/io.hpp"
#include "nusl/sampling.hpp"
#include "nusl/sensing.hpp"
#include "nusl/types.hpp"
#include "nusl/version.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <bit>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

namespace {

using nlohmann::json;

std::string iso_timestamp() {
  auto now = std::chrono::system_clock::now();
  std::time_t t = std::chrono::system_clock::to_time_t(now);
  char buf[32];
  std::tm tm_utc;
  gmtime_r(&t, &tm_utc);
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
  return buf;
}

// Output directory: --out flag, then NUSL_OUT_DIR, else none (stdout only).
std::optional<std::string> resolve_out_dir(const std::string& flag_value) {
  if (!flag_value.empty()) return flag_value;
  if (const char* env = std::getenv("NUSL_OUT_DIR"); env && *env)
    return std::string(env);
  return std::nullopt;
}

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ManifestWriter {
  std::string command;
  nusl::ConfigFile config;
  std::uint64_t seed = 0;
  std::string started = iso_timestamp();
  json summary = json::object();

  void write(const std::optional<std::string>& out_dir) const {
    if (!out_dir) return;
    json manifest;
    manifest["command"] = command;
    manifest["config_hash"] = config.hash();
    manifest["master_seed"] = seed;
    manifest["version"] = nusl::kVersion;
    manifest["started"] = started;
    manifest["finished"] = iso_timestamp();
    manifest["summary"] = summary;
    std::filesystem::path path(*out_dir);
    nusl::io::atomic_write_text((path / "meta.json").string(),
                                manifest.dump(2) + "\n");
  }
};

void emit(const std::optional<std::string>& out_dir, const std::string& filename,
          const std::string& content, bool echo_stdout) {
  if (echo_stdout) std::cout << content;
  if (out_dir) {
    std::filesystem::path path(*out_dir);
    nusl::io::atomic_write_text((path / filename).string(), content);
  }
}

nusl::ConfigValue scalar(std::int64_t v) {
  nusl::ConfigValue value;
  value.scalar = v;
  return value;
}
nusl::ConfigValue scalar(const std::string& v) {
  nusl::ConfigValue value;
  value.scalar = v;
  return value;
}
nusl::ConfigValue scalar(double v) {
  nusl::ConfigValue value;
  value.scalar = v;
  return value;
}

// Shared flags describing a support model source.
struct ModelFlags {
  std::string prob_path;
  std::string dist = "uniform";
  int k = 0;
  int s = 0;
  double step_ratio = 10.0;

  void attach(CLI::App* cmd) {
    cmd->add_option("--prob", prob_path, "probability vector file (.csv or blob)");
    cmd->add_option("--dist", dist, "distribution family: uniform|linear|quadratic|step");
    cmd->add_option("--k", k, "number of atoms K (generated families)");
    cmd->add_option("--s", s, "target sparsity S (generated families)");
    cmd->add_option("--step-ratio", step_ratio, "ratio for the step family");
  }

  nusl::SupportModel build(int default_k = 0) const {
    if (!prob_path.empty())
      return nusl::build_support_model(nusl::io::load_vector(prob_path));
    int kk = k > 0 ? k : default_k;
    if (kk <= 0 || s <= 0)
      throw CLI::ValidationError("--k/--s (or --prob) are required");
    nusl::DistributionFamily family{nusl::parse_family_kind(dist), kk, s,
                                    step_ratio};
    return nusl::gen_distribution(family);
  }

  void describe(nusl::ConfigFile& cfg) const {
    cfg.set("model", "prob", scalar(prob_path));
    cfg.set("model", "dist", scalar(dist));
    cfg.set("model", "k", scalar(static_cast<std::int64_t>(k)));
    cfg.set("model", "s", scalar(static_cast<std::int64_t>(s)));
    cfg.set("model", "step_ratio", scalar(step_ratio));
  }
};

json result_to_json(const nusl::RecoveryResult& result) {
  json out;
  json support = json::array();
  for (int i : result.support_found.indices) support.push_back(i + 1);
  out["support"] = support;
  json coeffs = json::array();
  for (int i = 0; i < result.coefficients.size(); ++i)
    coeffs.push_back(result.coefficients[i]);
  out["coefficients"] = coeffs;
  out["iterations"] = result.iterations;
  out["converged"] = result.converged;
  return out;
}

nusl::SweepConfig load_sweep_config(const std::string& path,
                                    nusl::ConfigFile& cfg) {
  cfg = nusl::ConfigFile::parse_file(path);
  nusl::SweepConfig sweep;

  std::string kind = cfg.get("dictionary", "kind").as_string();
  if (kind == "gaussian")
    sweep.dictionary.kind = nusl::DictionarySpec::Kind::gaussian;
  else if (kind == "subsampled_dct")
    sweep.dictionary.kind = nusl::DictionarySpec::Kind::subsampled_dct;
  else if (kind == "file")
    sweep.dictionary.kind = nusl::DictionarySpec::Kind::file;
  else
    throw std::runtime_error("unknown dictionary kind " + kind);
  if (sweep.dictionary.kind == nusl::DictionarySpec::Kind::file) {
    sweep.dictionary.path = cfg.get("dictionary", "path").as_string();
  } else {
    sweep.dictionary.d = static_cast<int>(cfg.get("dictionary", "d").as_int());
    sweep.dictionary.K = static_cast<int>(cfg.get("dictionary", "K").as_int());
    if (cfg.has("dictionary", "seed"))
      sweep.dictionary.seed =
          static_cast<std::uint64_t>(cfg.get("dictionary", "seed").as_int());
  }

  sweep.family = nusl::parse_family_kind(cfg.get("distribution", "kind").as_string());
  if (cfg.has("distribution", "step_ratio"))
    sweep.step_ratio = cfg.get("distribution", "step_ratio").as_double();

  for (auto v : cfg.get("sweep", "s_range").as_int_array())
    sweep.s_range.push_back(static_cast<int>(v));
  sweep.n_trials = static_cast<int>(cfg.get("sweep", "n_trials").as_int());
  if (cfg.has("sweep", "algorithms")) {
    sweep.algorithms.clear();
    for (const auto& name : cfg.get("sweep", "algorithms").as_string_array())
      sweep.algorithms.push_back(nusl::parse_algo(name));
  }
  if (cfg.has("sweep", "sensing_modes")) {
    sweep.sensing_modes.clear();
    for (const auto& name : cfg.get("sweep", "sensing_modes").as_string_array())
      sweep.sensing_modes.push_back(nusl::parse_sensing_mode(name));
  }
  if (cfg.has("sweep", "coeff")) {
    std::string coeff = cfg.get("sweep", "coeff").as_string();
    if (coeff == "unit")
      sweep.coeff.kind = nusl::CoeffSpec::Kind::unit;
    else if (coeff == "geometric")
      sweep.coeff.kind = nusl::CoeffSpec::Kind::geometric;
    else
      throw std::runtime_error("unknown coeff spec " + coeff);
  }
  if (cfg.has("sweep", "alpha"))
    sweep.coeff.alpha = cfg.get("sweep", "alpha").as_double();
  if (cfg.has("sweep", "master_seed"))
    sweep.master_seed =
        static_cast<std::uint64_t>(cfg.get("sweep", "master_seed").as_int());
  return sweep;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"non-uniform random supports and sparse approximation toolkit"};
  app.require_subcommand(1);

  std::string out_flag;
  std::uint64_t seed = 0;
  int jobs = 1;
  app.add_option("--out", out_flag, "output directory (env NUSL_OUT_DIR as fallback)");
  app.add_option("--seed", seed, "master seed (default 0)");
  app.add_option("--jobs", jobs, "worker threads");

  // --- sample ---
  auto* sample_cmd = app.add_subcommand("sample", "draw supports");
  ModelFlags sample_model;
  sample_model.attach(sample_cmd);
  std::string sample_kind = "rejective";
  int sample_n = 10;
  sample_cmd->add_option("--model", sample_kind, "poisson|rejective");
  sample_cmd->add_option("--n", sample_n, "number of draws");

  // --- verify-sampling ---
  auto* verify_cmd = app.add_subcommand("verify-sampling",
                                        "exact sampling-identity report");
  ModelFlags verify_model;
  verify_model.attach(verify_cmd);

  // --- gram-report ---
  auto* gram_cmd = app.add_subcommand("gram-report",
                                      "norm quantities of a (cross-)Gram matrix");
  std::string gram_dict, gram_sensing;
  ModelFlags gram_model;
  gram_cmd->add_option("--dict", gram_dict, "dictionary file")->required();
  gram_cmd->add_option("--sensing", gram_sensing, "optional sensing matrix file");
  gram_model.attach(gram_cmd);

  // --- bounds ---
  auto* bounds_cmd = app.add_subcommand("bounds",
                                        "tail bound vs Monte-Carlo survival");
  std::string bounds_dict, bounds_stat = "submatrix_op_norm";
  ModelFlags bounds_model;
  int bounds_trials = 10000;
  double bounds_rmin = 0, bounds_rmax = 0;
  int bounds_rn = 0;
  bounds_cmd->add_option("--dict", bounds_dict, "dictionary file")->required();
  bounds_model.attach(bounds_cmd);
  bounds_cmd->add_option("--statistic", bounds_stat,
                         "submatrix_op_norm|restricted_row_norm|cross_op_norm");
  bounds_cmd->add_option("--trials", bounds_trials, "Monte-Carlo draws");
  bounds_cmd->add_option("--rmin", bounds_rmin, "grid start (default: validity floor)");
  bounds_cmd->add_option("--rmax", bounds_rmax, "grid end (default: bound < 0.5)");
  bounds_cmd->add_option("--rn", bounds_rn, "grid points (default 24)");

  // --- sensing ---
  auto* sensing_cmd = app.add_subcommand("sensing",
                                         "build a sensing dictionary / preconditioner");
  std::string sensing_dict, sensing_kind = "greedy";
  std::string sensing_psi_out = "psi.csv", sensing_transform_out;
  double sensing_ridge = 0.0;
  ModelFlags sensing_model;
  sensing_cmd->add_option("--dict", sensing_dict, "dictionary file")->required();
  sensing_model.attach(sensing_cmd);
  sensing_cmd->add_option("--kind", sensing_kind, "greedy|precondition");
  sensing_cmd->add_option("--ridge", sensing_ridge, "ridge for near-singular frames");
  sensing_cmd->add_option("--psi-out", sensing_psi_out, "output file for Psi");
  sensing_cmd->add_option("--transform-out", sensing_transform_out,
                          "output file for T (precondition kind)");

  // --- solve ---
  auto* solve_cmd = app.add_subcommand("solve", "run a recovery algorithm");
  std::string solve_dict, solve_signal, solve_algo = "omp", solve_sensing;
  int solve_sparsity = 0;
  ModelFlags solve_model;
  solve_cmd->add_option("--dict", solve_dict, "dictionary file")->required();
  solve_cmd->add_option("--signal", solve_signal, "signal vector file")->required();
  solve_cmd->add_option("--algo", solve_algo,
                        "thresholding|omp|bp|bp-precond");
  solve_cmd->add_option("--sparsity", solve_sparsity, "S for greedy algorithms");
  solve_cmd->add_option("--sensing", solve_sensing,
                        "sensing matrix file, or 'auto' (needs a model)");
  solve_model.attach(solve_cmd);

  // --- sweep ---
  auto* sweep_cmd = app.add_subcommand("sweep", "recovery-rate sweep");
  std::string sweep_config_path;
  bool sweep_timing = false;
  sweep_cmd->add_option("--config", sweep_config_path, "sweep config file")
      ->required();
  sweep_cmd->add_flag("--timing", sweep_timing,
                      "measure per-trial runtimes (breaks byte-identical reruns)");

  // --- tails ---
  auto* tails_cmd = app.add_subcommand("tails", "bound-validity experiment");
  std::string tails_dict_kind = "gaussian", tails_dict_path,
              tails_stat = "submatrix_op_norm";
  int tails_d = 64, tails_k = 128, tails_trials = 10000;
  std::uint64_t tails_dict_seed = 0;
  ModelFlags tails_model;
  tails_cmd->add_option("--dict-kind", tails_dict_kind, "gaussian|subsampled_dct|file");
  tails_cmd->add_option("--dict", tails_dict_path, "dictionary file (file kind)");
  tails_cmd->add_option("--d", tails_d, "rows (generated dictionary)");
  tails_cmd->add_option("--K", tails_k, "columns (generated dictionary)");
  tails_cmd->add_option("--dict-seed", tails_dict_seed, "dictionary seed");
  tails_model.attach(tails_cmd);
  tails_cmd->add_option("--statistic", tails_stat,
                        "submatrix_op_norm|restricted_row_norm|cross_op_norm");
  tails_cmd->add_option("--trials", tails_trials, "Monte-Carlo draws");
  double tails_rmin = 0, tails_rmax = 0;
  int tails_rn = 0;
  tails_cmd->add_option("--rmin", tails_rmin, "grid start (default: validity floor)");
  tails_cmd->add_option("--rmax", tails_rmax, "grid end (default: bound < 0.5)");
  tails_cmd->add_option("--rn", tails_rn, "grid points (default 24)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  auto out_dir = resolve_out_dir(out_flag);

  try {
    if (*sample_cmd) {
      nusl::SupportModel model = sample_model.build();
      ManifestWriter manifest;
      manifest.command = "sample";
      manifest.seed = seed;
      sample_model.describe(manifest.config);
      manifest.config.set("sample", "model", scalar(sample_kind));
      manifest.config.set("sample", "n", scalar(static_cast<std::int64_t>(sample_n)));
      manifest.config.set("", "seed", scalar(static_cast<std::int64_t>(seed)));

      bool rejective = sample_kind == "rejective";
      if (!rejective && sample_kind != "poisson")
        throw std::runtime_error("unknown sampling model " + sample_kind);
      std::ostringstream csv;
      csv << "trial,indices\n";
      for (int t = 0; t < sample_n; ++t) {
        nusl::RngStream rng(seed, static_cast<std::uint64_t>(t));
        nusl::Support s = rejective ? nusl::rejective_sample(model, rng)
                                    : nusl::poisson_sample(model, rng);
        csv << t;
        for (int i : s.indices) csv << ',' << (i + 1);
        csv << '\n';
      }
      emit(out_dir, "supports.csv", csv.str(), true);
      manifest.summary["draws"] = sample_n;
      manifest.write(out_dir);
      return 0;
    }

    if (*verify_cmd) {
      nusl::SupportModel model = verify_model.build();
      int K = model.K();
      ManifestWriter manifest;
      manifest.command = "verify-sampling";
      manifest.seed = seed;
      verify_model.describe(manifest.config);

      std::ostringstream csv;
      csv << "property,lhs,rhs,holds\n";
      csv.precision(12);
      bool all_ok = true;
      auto add_row = [&](const std::string& name, double lhs, double rhs,
                         bool holds) {
        csv << name << ',' << lhs << ',' << rhs << ',' << (holds ? 1 : 0) << '\n';
        all_ok &= holds;
      };

      std::vector<std::pair<std::string, nusl::SetIndicator>> indicators;
      indicators.emplace_back("poissonisation_card_ge_S",
                              [&](std::uint32_t m) {
                                return std::popcount(m) >= model.S;
                              });
      for (int i = 0; i < std::min(3, K); ++i)
        indicators.emplace_back(
            "poissonisation_contains_" + std::to_string(i + 1),
            [i](std::uint32_t m) { return ((m >> i) & 1u) != 0; });
      for (const auto& [name, f] : indicators) {
        auto report = nusl::verify_poissonisation(model, f);
        add_row(name, report.lhs, report.rhs, report.holds);
        bool chain = nusl::verify_conditional_monotonicity(model, f);
        add_row("conditional_monotonicity_" + name.substr(name.find('_') + 1),
                chain ? 1.0 : 0.0, 1.0, chain);
      }
      auto median = nusl::verify_median_property(model);
      add_row("median_tail_ge_half", median.tail, 0.5, median.holds);

      emit(out_dir, "verify_sampling.csv", csv.str(), true);
      manifest.summary["all_hold"] = all_ok;
      manifest.write(out_dir);
      return all_ok ? 0 : 2;
    }

    if (*gram_cmd) {
      nusl::Dictionary phi =
          nusl::validate_dictionary(nusl::io::load_matrix(gram_dict), true);
      nusl::SupportModel model = gram_model.build(phi.K());
      nusl::HollowMatrix h =
          gram_sensing.empty()
              ? nusl::hollow_gram(phi)
              : nusl::cross_gram(nusl::io::load_matrix(gram_sensing), phi);
      nusl::GramQuantities q = nusl::gram_quantities(h, model);
      std::ostringstream csv;
      csv.precision(12);
      csv << "mu,hw_inf2,wh_21,whw_op,K\n";
      csv << q.mu << ',' << q.hw_inf2 << ',' << q.wh_21 << ',' << q.whw_op << ','
          << q.K << '\n';
      ManifestWriter manifest;
      manifest.command = "gram-report";
      manifest.seed = seed;
      gram_model.describe(manifest.config);
      manifest.config.set("gram", "dict", scalar(gram_dict));
      manifest.config.set("gram", "sensing", scalar(gram_sensing));
      emit(out_dir, "gram_report.csv", csv.str(), true);
      manifest.write(out_dir);
      return 0;
    }

    if (*bounds_cmd) {
      nusl::Dictionary phi =
          nusl::validate_dictionary(nusl::io::load_matrix(bounds_dict), true);
      nusl::SupportModel model = bounds_model.build(phi.K());
      std::vector<double> grid;
      if (bounds_rn > 0 && bounds_rmax > bounds_rmin)
        for (int i = 0; i < bounds_rn; ++i)
          grid.push_back(bounds_rmin +
                         (bounds_rmax - bounds_rmin) * i /
                             std::max(1, bounds_rn - 1));
      auto stat = nusl::parse_tail_statistic(bounds_stat);
      auto result = nusl::tail_experiment(phi, model, stat, grid, bounds_trials,
                                          seed, jobs);
      std::ostringstream csv;
      csv.precision(12);
      const char* bound_col =
          stat == nusl::TailStatistic::submatrix_op_norm ? "theorem1_bound"
          : stat == nusl::TailStatistic::cross_op_norm   ? "corollary2_bound"
                                                         : "lemma1_bound";
      csv << "r," << bound_col << ",empirical_tail,holds\n";
      bool all_ok = true;
      for (const auto& row : result.rows) {
        double clipped = std::min(1.0, row.bound);
        double slack =
            3.0 * std::sqrt(std::max(0.0, clipped * (1.0 - clipped)) /
                            bounds_trials);
        bool holds = !row.floor_ok || row.empirical <= clipped + slack;
        all_ok &= holds;
        csv << row.r << ',' << row.bound << ',' << row.empirical << ','
            << (holds ? 1 : 0) << '\n';
      }
      ManifestWriter manifest;
      manifest.command = "bounds";
      manifest.seed = seed;
      bounds_model.describe(manifest.config);
      manifest.config.set("bounds", "dict", scalar(bounds_dict));
      manifest.config.set("bounds", "statistic", scalar(bounds_stat));
      manifest.config.set("bounds", "trials",
                          scalar(static_cast<std::int64_t>(bounds_trials)));
      manifest.summary["validity_floor"] = result.validity_floor;
      manifest.summary["any_nonvacuous"] = result.any_nonvacuous;
      manifest.summary["all_hold"] = all_ok;
      emit(out_dir, "bounds.csv", csv.str(), true);
      manifest.write(out_dir);
      return all_ok ? 0 : 2;
    }

    if (*sensing_cmd) {
      nusl::Dictionary phi =
          nusl::validate_dictionary(nusl::io::load_matrix(sensing_dict), true);
      nusl::SupportModel model = sensing_model.build(phi.K());
      ManifestWriter manifest;
      manifest.command = "sensing";
      manifest.seed = seed;
      sensing_model.describe(manifest.config);
      manifest.config.set("sensing", "kind", scalar(sensing_kind));
      manifest.config.set("sensing", "ridge", scalar(sensing_ridge));
      std::filesystem::path base = out_dir ? *out_dir : std::string(".");
      if (sensing_kind == "greedy") {
        nusl::SensingDictionary psi =
            nusl::greedy_sensing(phi, model, sensing_ridge);
        nusl::io::save_matrix(psi.entries, (base / sensing_psi_out).string());
      } else if (sensing_kind == "precondition") {
        nusl::Preconditioner pc = nusl::preconditioner(phi, model, sensing_ridge);
        nusl::io::save_matrix(pc.psi.entries, (base / sensing_psi_out).string());
        if (!sensing_transform_out.empty())
          nusl::io::save_matrix(pc.transform,
                                (base / sensing_transform_out).string());
      } else {
        throw std::runtime_error("unknown sensing kind " + sensing_kind);
      }
      manifest.summary["psi_file"] = sensing_psi_out;
      manifest.write(out_dir);
      return 0;
    }

    if (*solve_cmd) {
      nusl::Dictionary phi =
          nusl::validate_dictionary(nusl::io::load_matrix(solve_dict), true);
      nusl::Vector y = nusl::io::load_vector(solve_signal);
      nusl::RecoveryResult result;
      std::optional<nusl::Matrix> sensing;
      if (!solve_sensing.empty() && solve_sensing != "auto")
        sensing = nusl::io::load_matrix(solve_sensing);

      if (solve_algo == "thresholding" || solve_algo == "omp") {
        if (solve_sparsity <= 0)
          throw std::runtime_error("--sparsity required for greedy algorithms");
        if (solve_sensing == "auto") {
          nusl::SupportModel model = solve_model.build(phi.K());
          sensing = nusl::greedy_sensing(phi, model).entries;
        }
        result = solve_algo == "omp"
                     ? nusl::omp(phi, y, solve_sparsity, sensing)
                     : nusl::thresholding(phi, y, solve_sparsity, sensing);
      } else if (solve_algo == "bp") {
        result = nusl::basis_pursuit(phi.entries, y);
      } else if (solve_algo == "bp-precond") {
        nusl::SupportModel model = solve_model.build(phi.K());
        result = nusl::bp_preconditioned(phi, model, y);
      } else {
        throw std::runtime_error("unknown algorithm " + solve_algo);
      }
      json line = result_to_json(result);
      line["algorithm"] = solve_algo;
      std::string text = line.dump() + "\n";
      emit(out_dir, "solve.jsonl", text, true);
      ManifestWriter manifest;
      manifest.command = "solve";
      manifest.seed = seed;
      solve_model.describe(manifest.config);
      manifest.config.set("solve", "algo", scalar(solve_algo));
      manifest.config.set("solve", "sparsity",
                          scalar(static_cast<std::int64_t>(solve_sparsity)));
      manifest.summary["converged"] = result.converged;
      manifest.write(out_dir);
      return 0;
    }

    if (*sweep_cmd) {
      if (!std::filesystem::exists(sweep_config_path))
        throw UsageError("config file not found: " + sweep_config_path);
      nusl::ConfigFile cfg;
      nusl::SweepConfig config = load_sweep_config(sweep_config_path, cfg);
      nusl::SweepResult result =
          nusl::recovery_sweep(config, jobs, sweep_timing);
      std::string csv = nusl::sweep_csv(result);
      emit(out_dir, "sweep.csv", csv, !out_dir.has_value());
      ManifestWriter manifest;
      manifest.command = "sweep";
      manifest.config = cfg;
      manifest.seed = config.master_seed;
      manifest.summary["rows"] = result.rows.size();
      manifest.summary["any_failed"] = result.any_failed;
      manifest.write(out_dir);
      return result.any_failed ? 2 : 0;
    }

    if (*tails_cmd) {
      nusl::DictionarySpec spec;
      if (tails_dict_kind == "gaussian")
        spec.kind = nusl::DictionarySpec::Kind::gaussian;
      else if (tails_dict_kind == "subsampled_dct")
        spec.kind = nusl::DictionarySpec::Kind::subsampled_dct;
      else if (tails_dict_kind == "file")
        spec.kind = nusl::DictionarySpec::Kind::file;
      else
        throw std::runtime_error("unknown dictionary kind " + tails_dict_kind);
      spec.d = tails_d;
      spec.K = tails_k;
      spec.seed = tails_dict_seed;
      spec.path = tails_dict_path;
      nusl::Dictionary phi = nusl::build_dictionary(spec);
      nusl::SupportModel model = tails_model.build(phi.K());
      std::vector<double> grid;
      if (tails_rn > 0 && tails_rmax > tails_rmin)
        for (int i = 0; i < tails_rn; ++i)
          grid.push_back(tails_rmin + (tails_rmax - tails_rmin) * i /
                                          std::max(1, tails_rn - 1));
      auto result = nusl::tail_experiment(
          phi, model, nusl::parse_tail_statistic(tails_stat), grid,
          tails_trials, seed, jobs);
      ManifestWriter manifest;
      manifest.command = "tails";
      manifest.seed = seed;
      tails_model.describe(manifest.config);
      manifest.config.set("tails", "dict_kind", scalar(tails_dict_kind));
      manifest.config.set("tails", "statistic", scalar(tails_stat));
      manifest.config.set("tails", "trials",
                          scalar(static_cast<std::int64_t>(tails_trials)));
      manifest.summary["validity_floor"] = result.validity_floor;
      manifest.summary["any_nonvacuous"] = result.any_nonvacuous;
      emit(out_dir, "tails.csv", nusl::tail_csv(result), true);
      manifest.write(out_dir);
      return 0;
    }
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 1;
}
