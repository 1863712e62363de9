// wsnmlp: distributed-MLP experiments over a simulated lossy sensor network.
//
// Subcommands:
//   run              one seeded experiment, full report written to disk
//   sweep            grid of runs over theta, seed or drop model
//   validate-models  statistical checks of the drop/delay models
//   dataset-info     dataset summary and derived network shapes
//   replay-trace     scripted walkthrough of the link bookkeeping
//
// Exit codes: 0 success, 1 internal/validation failure, 2 bad configuration,
// 3 dataset problem, 4 training divergence, 5 trace mismatch.

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "wsnmlp/engine.hpp"
#include "wsnmlp/errors.hpp"
#include "wsnmlp/io.hpp"
#include "wsnmlp/neural.hpp"
#include "wsnmlp/stat_models.hpp"
#include "wsnmlp/topology.hpp"
#include "wsnmlp/trace.hpp"

namespace fs = std::filesystem;
using namespace wsnmlp;

namespace {

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error("cannot write " + path.string());
  }
  out << content;
}

fs::path run_directory(const fs::path& out_root, const ExperimentConfig& cfg) {
  return out_root /
         (cfg.dataset_name + "-" + std::to_string(cfg.seed) + "-" +
          config_hash8(cfg));
}

// Runs one experiment and writes report.json, layout.txt, weights.txt and
// summary.csv under its run directory.  Nothing is written if the run throws.
fs::path execute_run(const ExperimentConfig& cfg, const fs::path& out_root,
                     bool verbose) {
  ExperimentRun run(cfg);
  RunReport report = run.run_to_completion();
  report.layout_file = "layout.txt";
  report.weights_file = "weights.txt";

  const fs::path dir = run_directory(out_root, cfg);
  fs::create_directories(dir);
  write_file(dir / "report.json", report_to_json(report));
  write_file(dir / "config.json", config_to_json(run.config()));
  {
    std::ofstream layout(dir / "layout.txt");
    write_layout(layout, run.layout());
  }
  {
    std::ofstream weights(dir / "weights.txt");
    write_weights(weights, run.mlp());
  }
  {
    std::ofstream summary(dir / "summary.csv");
    summary << kSummaryCsvHeader << "\n" << summary_csv_row(report) << "\n";
  }

  if (verbose) {
    for (std::size_t e = 0; e < report.val_mse_history.size(); ++e) {
      std::cout << "epoch " << e + 1 << ": val_mse "
                << report.val_mse_history[e] << ", val_accuracy "
                << report.val_accuracy_history[e] << "\n";
    }
  }
  std::cout << "dataset=" << report.dataset << " seed=" << report.seed
            << " hidden=" << report.n_hidden << " l_max=" << report.l_max
            << " drop_model=" << report.drop_model_name
            << " accuracy=" << report.accuracy << " mse=" << report.mse
            << " epochs=" << report.epochs_run << " c_m=" << report.c_m
            << " c_t_hours=" << report.c_t_hours << "\n";
  std::cout << "wrote " << (dir / "report.json").string() << "\n";
  return dir;
}

struct SweepCell {
  ExperimentConfig config;
  std::string param;
  std::string value;
  bool ok = false;
  std::string error;
  RunReport report;
};

std::vector<std::string> split_values(const std::string& csv) {
  std::vector<std::string> out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

double parse_double_or_throw(const std::string& s, const std::string& what) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("bad " + what + " value '" + s + "'");
  }
}

std::uint64_t parse_u64_or_throw(const std::string& s,
                                 const std::string& what) {
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) {
    throw ConfigError("bad " + what + " value '" + s + "'");
  }
  return v;
}

int cmd_sweep(const std::string& config_path, const std::string& out_dir,
              const std::string& param, const std::string& values_csv,
              int extra_seeds, int jobs, bool verbose) {
  const ExperimentConfig base = config_from_json_file(config_path);
  const std::vector<std::string> values = split_values(values_csv);
  if (values.empty()) {
    throw ConfigError("sweep needs at least one value");
  }
  if (param != "theta" && param != "seed" && param != "drop") {
    throw ConfigError("sweep param must be one of theta|seed|drop");
  }
  if (extra_seeds < 1) {
    throw ConfigError("--seeds must be >= 1");
  }

  std::vector<SweepCell> cells;
  for (const std::string& value : values) {
    ExperimentConfig cfg = base;
    if (param == "theta") {
      cfg.theta = parse_double_or_throw(value, "theta");
      cfg.t_wait_override.reset();
    } else if (param == "seed") {
      cfg.seed = parse_u64_or_throw(value, "seed");
    } else {
      if (value != "random" && find_drop_model(value) == nullptr) {
        throw ConfigError("unknown drop model '" + value + "'");
      }
      cfg.drop_model = value;
      cfg.drop_delta0.reset();
      cfg.drop_delta1.reset();
      cfg.identity_channel = false;
    }
    const int seeds_per_value = param == "seed" ? 1 : extra_seeds;
    for (int s = 0; s < seeds_per_value; ++s) {
      SweepCell cell;
      cell.config = cfg;
      cell.config.seed = cfg.seed + static_cast<std::uint64_t>(s);
      cell.param = param;
      cell.value = value;
      cells.push_back(std::move(cell));
    }
  }

  const int n_workers = std::max(1, std::min<int>(jobs, static_cast<int>(cells.size())));
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    while (true) {
      const std::size_t i = next.fetch_add(1);
      if (i >= cells.size()) break;
      SweepCell& cell = cells[i];
      try {
        cell.report = run_experiment(cell.config);
        cell.ok = true;
      } catch (const std::exception& e) {
        cell.error = e.what();
      }
    }
  };
  if (n_workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(n_workers));
    for (int w = 0; w < n_workers; ++w) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
  }

  const fs::path dir =
      fs::path(out_dir) / ("sweep-" + param + "-" + config_hash8(base));
  fs::create_directories(dir);

  std::ostringstream cells_csv;
  cells_csv << "param,value,status," << kSummaryCsvHeader << "\n";
  for (const SweepCell& cell : cells) {
    cells_csv << cell.param << ',' << cell.value << ','
              << (cell.ok ? "ok" : "error");
    if (cell.ok) {
      cells_csv << ',' << summary_csv_row(cell.report);
    } else {
      cells_csv << ',' << cell.config.dataset_name << ','
                << cell.config.seed << ",,,,,,";
    }
    cells_csv << "\n";
  }
  write_file(dir / "cells.csv", cells_csv.str());

  std::ostringstream agg;
  agg.precision(17);
  agg << "param,value,runs,failed,min_accuracy,mean_accuracy,max_accuracy\n";
  for (const std::string& value : values) {
    double lo = 1.0, hi = 0.0, sum = 0.0;
    int runs = 0, failed = 0;
    for (const SweepCell& cell : cells) {
      if (cell.value != value) continue;
      ++runs;
      if (!cell.ok) {
        ++failed;
        continue;
      }
      lo = std::min(lo, cell.report.accuracy);
      hi = std::max(hi, cell.report.accuracy);
      sum += cell.report.accuracy;
    }
    const int succeeded = runs - failed;
    agg << param << ',' << value << ',' << runs << ',' << failed << ',';
    if (succeeded > 0) {
      agg << lo << ',' << sum / succeeded << ',' << hi;
    } else {
      agg << ",,";
    }
    agg << "\n";
    if (verbose || succeeded == 0) {
      std::cout << param << "=" << value << ": " << succeeded << "/" << runs
                << " runs ok\n";
    }
  }
  write_file(dir / "sweep_summary.csv", agg.str());
  std::cout << "wrote " << (dir / "sweep_summary.csv").string() << "\n";

  const bool any_failed =
      std::any_of(cells.begin(), cells.end(),
                  [](const SweepCell& c) { return !c.ok; });
  return any_failed ? 1 : 0;
}

double std_normal_pdf(double z) {
  return std::exp(-0.5 * z * z) / 2.5066282746310002;
}
double std_normal_cdf(double z) {
  return 0.5 * std::erfc(-z / 1.4142135623730951);
}

int cmd_validate_models(const std::string& out_dir, std::uint64_t samples,
                        std::uint64_t seed) {
  const fs::path dir = fs::path(out_dir) / "model-validation";
  fs::create_directories(dir);
  bool all_ok = true;

  // Drop-rate curves per preset.
  {
    std::ostringstream csv;
    csv.precision(17);
    csv << "model,n_hops,p_drop\n";
    for (const DropModel& model : drop_model_presets()) {
      for (int hops = 1; hops <= 50; ++hops) {
        csv << model.name << ',' << hops << ','
            << drop_probability(model, hops) << "\n";
      }
    }
    write_file(dir / "drop_curves.csv", csv.str());
  }

  // Monte-Carlo agreement of the simulated drop decision with the analytic
  // probability, three-sigma binomial bound.
  {
    std::ostringstream csv;
    csv.precision(17);
    csv << "model,n_hops,trials,analytic,empirical,abs_dev,three_sigma,ok\n";
    const int hop_cases[] = {1, 5, 10, 20};
    for (const DropModel& model : drop_model_presets()) {
      for (const int hops : hop_cases) {
        const double p = drop_probability(model, hops);
        const std::uint64_t trials = std::max<std::uint64_t>(samples, 1000);
        Rng rng(derive_seed(derive_seed(seed, "validate-drop"), model.name,
                            static_cast<std::uint64_t>(hops)));
        std::uint64_t drops = 0;
        for (std::uint64_t t = 0; t < trials; ++t) {
          if (!(rng.positive01() > p)) ++drops;
        }
        const double empirical =
            static_cast<double>(drops) / static_cast<double>(trials);
        const double sigma =
            std::sqrt(std::max(p * (1.0 - p), 1e-12) /
                      static_cast<double>(trials));
        const double dev = std::abs(empirical - p);
        const bool ok = dev <= 3.0 * sigma + 1e-9;
        all_ok = all_ok && ok;
        csv << model.name << ',' << hops << ',' << trials << ',' << p << ','
            << empirical << ',' << dev << ',' << 3.0 * sigma << ','
            << (ok ? "yes" : "NO") << "\n";
      }
    }
    write_file(dir / "drop_check.csv", csv.str());
    std::cout << (all_ok ? "PASS" : "FAIL")
              << " drop model Monte-Carlo (three-sigma)\n";
  }

  // Delay sampler against the analytic density: histogram, KS statistic,
  // moment and support checks.
  {
    DelayModel model;  // defaults; t_wait irrelevant for per-hop draws
    Rng rng(derive_seed(seed, "validate-delay"));
    std::vector<double> draws(samples);
    for (double& d : draws) d = sample_truncated_gaussian(rng, model);
    std::sort(draws.begin(), draws.end());

    double ks = 0.0;
    for (std::size_t i = 0; i < draws.size(); ++i) {
      const double f = truncated_gaussian_cdf(draws[i], model);
      const double lo = static_cast<double>(i) / draws.size();
      const double hi = static_cast<double>(i + 1) / draws.size();
      ks = std::max({ks, std::abs(f - lo), std::abs(hi - f)});
    }
    double mean = 0.0;
    for (const double d : draws) mean += d;
    mean /= static_cast<double>(draws.size());

    const double a_std = (model.a - model.mu) / model.sigma;
    const double b_std = (model.b - model.mu) / model.sigma;
    const double mass = std_normal_cdf(b_std) - std_normal_cdf(a_std);
    const double analytic_mean =
        model.mu +
        model.sigma * (std_normal_pdf(a_std) - std_normal_pdf(b_std)) / mass;

    const double ks_threshold = 0.002;
    const bool support_ok =
        draws.front() >= model.a && draws.back() <= model.b;
    const bool ks_ok = ks < ks_threshold;
    const bool mean_ok = std::abs(mean - analytic_mean) < 0.01;
    all_ok = all_ok && support_ok && ks_ok && mean_ok;

    std::ostringstream stats;
    stats.precision(17);
    stats << "samples,ks_stat,ks_threshold,empirical_mean,analytic_mean,"
             "min_sample,max_sample,ok\n";
    stats << samples << ',' << ks << ',' << ks_threshold << ',' << mean << ','
          << analytic_mean << ',' << draws.front() << ',' << draws.back()
          << ',' << ((support_ok && ks_ok && mean_ok) ? "yes" : "NO") << "\n";
    write_file(dir / "delay_check.csv", stats.str());

    std::ostringstream hist;
    hist.precision(17);
    hist << "bin_lo,bin_hi,empirical_density,analytic_pdf_at_center\n";
    const int n_bins = 47;
    const double width = (model.b - model.a) / n_bins;
    std::vector<std::uint64_t> counts(n_bins, 0);
    for (const double d : draws) {
      const int bin = std::min(
          n_bins - 1, static_cast<int>((d - model.a) / width));
      counts[static_cast<std::size_t>(bin)]++;
    }
    for (int b = 0; b < n_bins; ++b) {
      const double lo_edge = model.a + b * width;
      const double density =
          static_cast<double>(counts[static_cast<std::size_t>(b)]) /
          (static_cast<double>(samples) * width);
      hist << lo_edge << ',' << lo_edge + width << ',' << density << ','
           << truncated_gaussian_pdf(lo_edge + width / 2.0, model) << "\n";
    }
    write_file(dir / "delay_hist.csv", hist.str());

    std::cout << (ks_ok ? "PASS" : "FAIL") << " delay sampler KS: " << ks
              << " (threshold " << ks_threshold << ")\n";
    std::cout << (support_ok ? "PASS" : "FAIL")
              << " delay sampler support within [" << model.a << ", "
              << model.b << "]\n";
    std::cout << (mean_ok ? "PASS" : "FAIL") << " delay sampler mean: " << mean
              << " vs analytic " << analytic_mean << "\n";
  }

  std::cout << "wrote " << dir.string() << "\n";
  return all_ok ? 0 : 1;
}

int cmd_dataset_info(const std::string& data_path, bool has_header) {
  const Dataset ds = load_csv(data_path, {"", has_header});
  std::cout << "name: " << ds.name << "\n";
  std::cout << "instances: " << ds.size() << "\n";
  std::cout << "attributes: " << ds.n_attributes << "\n";
  std::cout << "classes: " << ds.class_count() << "\n";
  const std::vector<std::size_t> counts = ds.class_counts();
  for (std::size_t c = 0; c < ds.class_count(); ++c) {
    std::cout << "  class " << ds.class_names[c] << ": " << counts[c]
              << " instances\n";
  }
  std::cout << "hidden layer candidates:";
  for (const SizingFormula f :
       {SizingFormula::Boger, SizingFormula::Kolmogorov, SizingFormula::Daqi,
        SizingFormula::Weka}) {
    std::cout << ' ' << to_string(f) << '='
              << hidden_count(f, static_cast<int>(ds.n_attributes),
                              static_cast<int>(ds.class_count()));
  }
  std::cout << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"distributed MLP training over a simulated sensor network"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir = "runs";
  std::optional<std::uint64_t> seed_override;
  bool verbose = false;
  app.add_flag("--verbose", verbose, "print per-epoch detail");

  CLI::App* run_cmd = app.add_subcommand("run", "run one experiment");
  run_cmd->add_option("--config", config_path, "experiment config (JSON)")
      ->required();
  run_cmd->add_option("--out", out_dir, "output root directory");
  std::uint64_t seed_value = 0;
  CLI::Option* seed_opt =
      run_cmd->add_option("--seed", seed_value, "override the config seed");

  CLI::App* sweep_cmd = app.add_subcommand("sweep", "grid of experiments");
  std::string sweep_param;
  std::string sweep_values;
  int sweep_seeds = 1;
  int sweep_jobs = 1;
  sweep_cmd->add_option("--config", config_path, "experiment config (JSON)")
      ->required();
  sweep_cmd->add_option("--out", out_dir, "output root directory");
  sweep_cmd->add_option("--param", sweep_param, "theta|seed|drop")->required();
  sweep_cmd->add_option("--values", sweep_values, "comma-separated values")
      ->required();
  sweep_cmd->add_option("--seeds", sweep_seeds,
                        "consecutive seeds per value (from the config seed)");
  sweep_cmd->add_option("--jobs", sweep_jobs, "parallel workers");

  CLI::App* validate_cmd = app.add_subcommand(
      "validate-models", "statistical checks of the drop/delay models");
  std::uint64_t validate_samples = 1000000;
  std::uint64_t validate_seed = 1;
  validate_cmd->add_option("--out", out_dir, "output root directory");
  validate_cmd->add_option("--samples", validate_samples,
                           "delay sampler draws");
  validate_cmd->add_option("--seed", validate_seed, "validation seed");

  CLI::App* info_cmd =
      app.add_subcommand("dataset-info", "summarize a dataset file");
  std::string data_path;
  bool has_header = false;
  info_cmd->add_option("--data", data_path, "dataset CSV")->required();
  info_cmd->add_flag("--header", has_header, "first line is a header");

  CLI::App* trace_cmd = app.add_subcommand(
      "replay-trace", "walk through the link delay/drop bookkeeping");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      return app.exit(e);  // --help and friends
    }
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  }

  try {
    if (*run_cmd) {
      ExperimentConfig cfg = config_from_json_file(config_path);
      if (seed_opt->count() > 0) {
        seed_override = seed_value;
        cfg.seed = *seed_override;
      }
      execute_run(cfg, out_dir, verbose);
      return 0;
    }
    if (*sweep_cmd) {
      return cmd_sweep(config_path, out_dir, sweep_param, sweep_values,
                       sweep_seeds, sweep_jobs, verbose);
    }
    if (*validate_cmd) {
      return cmd_validate_models(out_dir, validate_samples, validate_seed);
    }
    if (*info_cmd) {
      return cmd_dataset_info(data_path, has_header);
    }
    if (*trace_cmd) {
      const TraceResult result = run_delay_drop_trace();
      std::cout << trace_to_text(result);
      return result.matches_expected ? 0 : 5;
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const DatasetError& e) {
    std::cerr << "dataset error: " << e.what() << "\n";
    return 3;
  } catch (const DivergenceError& e) {
    std::cerr << "divergence: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
