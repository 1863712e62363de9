#include "wsnmlp/engine.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <limits>
#include <string>

#include "wsnmlp/errors.hpp"

namespace wsnmlp {

void validate_config(ExperimentConfig& config) {
  if (config.dataset_path.empty()) {
    throw ConfigError("dataset_path is required");
  }
  if (config.dataset_name.empty()) {
    config.dataset_name =
        std::filesystem::path(config.dataset_path).stem().string();
  }
  if (config.theta && config.t_wait_override) {
    throw ConfigError("theta and t_wait are mutually exclusive");
  }
  if (!config.theta && !config.t_wait_override) {
    config.theta = 0.72;
  }
  if (config.theta && !(*config.theta > 0.0)) {
    throw ConfigError("theta must be positive");
  }
  if (config.t_wait_override && !(*config.t_wait_override > 0.0)) {
    throw ConfigError("t_wait must be positive");
  }
  if (!(config.learning_rate > 0.0)) {
    throw ConfigError("learning_rate must be positive");
  }
  if (config.momentum < 0.0 || config.momentum >= 1.0) {
    throw ConfigError("momentum must lie in [0, 1)");
  }
  if (config.max_epochs < 1) {
    throw ConfigError("max_epochs must be >= 1");
  }
  if (config.patience < 1) {
    throw ConfigError("patience must be >= 1");
  }
  if (config.smote_k < 1) {
    throw ConfigError("smote_k must be >= 1");
  }
  if (!(config.per_hop_delay_ms > 0.0)) {
    throw ConfigError("per_hop_delay_ms must be positive");
  }
  if (config.hidden_override && *config.hidden_override < 1) {
    throw ConfigError("hidden neuron count must be >= 1");
  }
  if (!config.hidden_override) {
    try {
      (void)sizing_from_string(config.sizing);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what());
    }
  }
  try {
    validate_shape(config.delay);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  const bool has0 = config.drop_delta0.has_value();
  const bool has1 = config.drop_delta1.has_value();
  if (has0 != has1) {
    throw ConfigError("drop_delta0 and drop_delta1 must be set together");
  }
  if (!has0 && config.drop_model != "random" &&
      find_drop_model(config.drop_model) == nullptr) {
    throw ConfigError("unknown drop model '" + config.drop_model + "'");
  }
}

std::uint64_t analytic_message_complexity(std::uint64_t epochs,
                                          std::uint64_t n_train,
                                          std::uint64_t n_test,
                                          std::uint64_t m_fp) {
  return epochs * (2 * n_train + n_test) * m_fp;
}

double analytic_time_complexity_hours(std::uint64_t epochs,
                                      std::uint64_t n_train,
                                      std::uint64_t n_test, double t_wait,
                                      double per_hop_delay_ms) {
  const double presentations =
      static_cast<double>(epochs) * static_cast<double>(n_train + n_test);
  const double ms = presentations * t_wait * per_hop_delay_ms;
  return ms / 3.6e6;
}

namespace {

struct PreparedData {
  SplitDataset split;
  int n_hidden = 0;
};

// Shared preprocessing so the channel run and the reference trainer consume
// identical data: load, normalize, oversample, split.  With train_only_stats
// normalization moves after the split and the test side is clipped.
PreparedData prepare_data(const ExperimentConfig& config) {
  Dataset ds = load_csv(config.dataset_path,
                        {config.dataset_name, config.csv_has_header});
  if (ds.class_count() < 2) {
    throw DatasetError("dataset '" + ds.name + "' has a single class");
  }
  if (config.normalize && !config.train_only_stats) {
    min_max_normalize(ds, compute_stats(ds));
  }
  if (config.apply_smote) {
    Rng smote_rng(derive_seed(config.seed, "smote"));
    ds = smote(smote_rng, ds, config.smote_k);
  }
  Rng split_rng(derive_seed(config.seed, "split"));
  PreparedData out{stratified_split(split_rng, ds), 0};
  if (config.normalize && config.train_only_stats) {
    const AttributeStats stats = compute_stats(out.split.train);
    min_max_normalize(out.split.train, stats, false);
    min_max_normalize(out.split.test, stats, true);
  }
  out.n_hidden = config.hidden_override
                     ? *config.hidden_override
                     : hidden_count(sizing_from_string(config.sizing),
                                    static_cast<int>(ds.n_attributes),
                                    static_cast<int>(ds.class_count()));
  return out;
}

DropModel resolve_drop_model(const ExperimentConfig& config) {
  if (config.identity_channel) {
    return {"identity", 0.0, 0.0};
  }
  if (config.drop_delta0) {
    return {"explicit", *config.drop_delta0, *config.drop_delta1};
  }
  if (config.drop_model == "random") {
    Rng model_rng(derive_seed(config.seed, "dropmodel"));
    return random_drop_model(model_rng);
  }
  return *find_drop_model(config.drop_model);
}

std::vector<std::vector<double>> one_hot_targets(const Dataset& ds) {
  std::vector<std::vector<double>> targets;
  targets.reserve(ds.size());
  for (std::size_t r = 0; r < ds.size(); ++r) {
    targets.push_back(one_hot(ds.labels[r], ds.class_count()));
  }
  return targets;
}

// Validation-MSE minimum tracking with weight snapshots.
struct BestEpoch {
  double mse = std::numeric_limits<double>::infinity();
  double accuracy = 0.0;
  int epoch = 0;
  std::vector<double> w_ih;
  std::vector<double> w_ho;
  std::vector<std::vector<std::uint64_t>> confusion;

  bool offer(int epoch_no, double val_mse, double val_accuracy,
             const Mlp& mlp,
             const std::vector<std::vector<std::uint64_t>>& conf) {
    if (val_mse >= mse) return false;
    mse = val_mse;
    accuracy = val_accuracy;
    epoch = epoch_no;
    w_ih = mlp.weights_input_hidden();
    w_ho = mlp.weights_hidden_output();
    confusion = conf;
    return true;
  }
};

void fill_dataset_fields(RunReport& report, const ExperimentConfig& config,
                         const SplitDataset& split) {
  report.dataset = config.dataset_name;
  report.seed = config.seed;
  report.n_instances = split.train.size() + split.test.size();
  report.n_attributes = split.train.n_attributes;
  report.n_classes = split.train.class_count();
  report.n_train = split.train.size();
  report.n_test = split.test.size();
}

}  // namespace

ExperimentRun::ExperimentRun(const ExperimentConfig& config)
    : config_(config),
      split_((validate_config(config_), prepare_data(config_).split)),
      train_targets_(one_hot_targets(split_.train)),
      layout_([this] {
        Rng placement_rng(derive_seed(config_.seed, "placement"));
        const int n_hidden =
            config_.hidden_override
                ? *config_.hidden_override
                : hidden_count(sizing_from_string(config_.sizing),
                               static_cast<int>(split_.train.n_attributes),
                               static_cast<int>(split_.train.class_count()));
        return place_motes(placement_rng, n_hidden,
                           static_cast<int>(split_.train.class_count()));
      }()),
      drop_model_(resolve_drop_model(config_)),
      delay_(config_.delay),
      mlp_(static_cast<int>(split_.train.n_attributes), layout_.n_hidden,
           layout_.n_output, config_.learning_rate, config_.momentum),
      shuffle_rng_(derive_seed(config_.seed, "shuffle")) {
  if (config_.identity_channel) {
    // Wait window longer than the worst-case route transit: every delivered
    // message lands in its own presentation window.
    delay_.t_wait = delay_.b * static_cast<double>(layout_.l_max) + 1.0;
    theta_used_.reset();
  } else if (config_.t_wait_override) {
    delay_.t_wait = *config_.t_wait_override;
    theta_used_.reset();
  } else {
    theta_used_ = config_.theta;
    delay_.t_wait = wait_time(*config_.theta, delay_, layout_.l_max);
  }

  Rng weight_rng(derive_seed(config_.seed, "weights"));
  mlp_.init_weights(weight_rng);

  const int n_hid = layout_.n_hidden;
  const int n_out = layout_.n_output;
  forward_links_.reserve(static_cast<std::size_t>(n_hid) * n_out);
  for (int h = 0; h < n_hid; ++h) {
    for (int o = 0; o < n_out; ++o) {
      const int s = layout_.hidden_index(h);
      const int r = layout_.output_index(o);
      forward_links_.emplace_back(
          s, r, layout_.hops(s, r), drop_probability(drop_model_, layout_.hops(s, r)),
          delay_, sigmoid(0.0),
          derive_seed(config_.seed, "link-drop", static_cast<std::uint64_t>(s),
                      static_cast<std::uint64_t>(r)),
          derive_seed(config_.seed, "link-delay", static_cast<std::uint64_t>(s),
                      static_cast<std::uint64_t>(r)));
    }
  }
  backward_links_.reserve(static_cast<std::size_t>(n_hid) * n_out);
  for (int o = 0; o < n_out; ++o) {
    for (int h = 0; h < n_hid; ++h) {
      const int s = layout_.output_index(o);
      const int r = layout_.hidden_index(h);
      // Error signals carry no meaning before the first backward sweep;
      // their links start from zero rather than a resting activation.
      backward_links_.emplace_back(
          s, r, layout_.hops(s, r), drop_probability(drop_model_, layout_.hops(s, r)),
          delay_, 0.0,
          derive_seed(config_.seed, "link-drop", static_cast<std::uint64_t>(s),
                      static_cast<std::uint64_t>(r)),
          derive_seed(config_.seed, "link-delay", static_cast<std::uint64_t>(s),
                      static_cast<std::uint64_t>(r)));
    }
  }

  m_fp_ = forward_hop_sum(layout_);
  stale_hidden_.assign(static_cast<std::size_t>(n_out),
                       std::vector<double>(static_cast<std::size_t>(n_hid)));
  received_deltas_.assign(static_cast<std::size_t>(n_hid),
                          std::vector<double>(static_cast<std::size_t>(n_out)));
  val_confusion_.assign(split_.train.class_count(),
                        std::vector<std::uint64_t>(split_.train.class_count(), 0));
}

void ExperimentRun::present_train_pattern(std::size_t row) {
  ++k_;
  const std::span<const double> input = split_.train.row(row);
  const std::vector<double>& target = train_targets_[row];
  const int n_hid = mlp_.hidden_layer_count();
  const int n_out = mlp_.output_count();

  const std::vector<double> hidden = mlp_.forward_hidden(input);
  for (int h = 0; h < n_hid; ++h) {
    for (int o = 0; o < n_out; ++o) {
      LinkState& link = forward_link(h, o);
      link.transmit(k_, hidden[static_cast<std::size_t>(h)]);
      stale_hidden_[static_cast<std::size_t>(o)][static_cast<std::size_t>(h)] =
          link.receive(k_).value;
    }
  }
  std::vector<double> output(static_cast<std::size_t>(n_out));
  for (int o = 0; o < n_out; ++o) {
    output[static_cast<std::size_t>(o)] =
        mlp_.output_activation(o, stale_hidden_[static_cast<std::size_t>(o)]);
  }

  const std::vector<double> d_out = Mlp::output_deltas(output, target);
  const std::vector<double> w_ho_mirror = mlp_.weights_hidden_output();
  for (int j = 0; j < n_out; ++j) {
    mlp_.update_output_weights_one(j, stale_hidden_[static_cast<std::size_t>(j)],
                                   d_out[static_cast<std::size_t>(j)]);
  }
  for (int o = 0; o < n_out; ++o) {
    for (int h = 0; h < n_hid; ++h) {
      LinkState& link = backward_link(o, h);
      link.transmit(k_, d_out[static_cast<std::size_t>(o)]);
      received_deltas_[static_cast<std::size_t>(h)][static_cast<std::size_t>(o)] =
          link.receive(k_).value;
    }
  }
  std::vector<double> d_hid(static_cast<std::size_t>(n_hid));
  for (int h = 0; h < n_hid; ++h) {
    d_hid[static_cast<std::size_t>(h)] = mlp_.hidden_delta_one(
        h, hidden[static_cast<std::size_t>(h)],
        received_deltas_[static_cast<std::size_t>(h)], w_ho_mirror);
  }
  for (int h = 0; h < n_hid; ++h) {
    mlp_.update_hidden_weights_one(h, input, d_hid[static_cast<std::size_t>(h)]);
  }
}

int ExperimentRun::present_validation_pattern(std::size_t row) {
  ++k_;
  const std::span<const double> input = split_.test.row(row);
  const int actual = split_.test.labels[row];
  const int n_hid = mlp_.hidden_layer_count();
  const int n_out = mlp_.output_count();

  const std::vector<double> hidden = mlp_.forward_hidden(input);
  for (int h = 0; h < n_hid; ++h) {
    for (int o = 0; o < n_out; ++o) {
      LinkState& link = forward_link(h, o);
      link.transmit(k_, hidden[static_cast<std::size_t>(h)]);
      stale_hidden_[static_cast<std::size_t>(o)][static_cast<std::size_t>(h)] =
          link.receive(k_).value;
    }
  }
  std::vector<double> output(static_cast<std::size_t>(n_out));
  for (int o = 0; o < n_out; ++o) {
    output[static_cast<std::size_t>(o)] =
        mlp_.output_activation(o, stale_hidden_[static_cast<std::size_t>(o)]);
  }

  int predicted = 0;
  for (int j = 1; j < n_out; ++j) {
    if (output[static_cast<std::size_t>(j)] >
        output[static_cast<std::size_t>(predicted)]) {
      predicted = j;
    }
  }
  for (int j = 0; j < n_out; ++j) {
    const double t = j == actual ? 1.0 : 0.0;
    const double diff = output[static_cast<std::size_t>(j)] - t;
    val_sq_error_ += diff * diff;
  }
  if (predicted == actual) ++val_correct_;
  val_confusion_[static_cast<std::size_t>(actual)]
                [static_cast<std::size_t>(predicted)]++;
  return predicted;
}

EpochStats ExperimentRun::run_epoch() {
  ++epoch_;
  const std::vector<std::size_t> order =
      shuffle_epoch(shuffle_rng_, split_.train.size());
  for (const std::size_t row : order) {
    present_train_pattern(row);
  }
  val_sq_error_ = 0.0;
  val_correct_ = 0;
  for (auto& row : val_confusion_) {
    std::fill(row.begin(), row.end(), std::uint64_t{0});
  }
  for (std::size_t r = 0; r < split_.test.size(); ++r) {
    present_validation_pattern(r);
  }
  EpochStats stats;
  stats.epoch = epoch_;
  stats.val_mse = val_sq_error_ / (static_cast<double>(split_.test.size()) *
                                   mlp_.output_count());
  stats.val_accuracy = static_cast<double>(val_correct_) /
                       static_cast<double>(split_.test.size());
  return stats;
}

RunReport ExperimentRun::run_to_completion() {
  RunReport report;
  fill_dataset_fields(report, config_, split_);
  report.n_hidden = layout_.n_hidden;
  report.sizing = config_.hidden_override ? "override" : config_.sizing;
  report.l_max = layout_.l_max;
  report.t_wait = delay_.t_wait;
  report.theta = theta_used_;
  report.drop_model_name = drop_model_.name;
  report.drop_delta0 = drop_model_.delta0;
  report.drop_delta1 = drop_model_.delta1;

  BestEpoch best;
  for (int e = 1; e <= config_.max_epochs; ++e) {
    const EpochStats stats = run_epoch();
    if (!std::isfinite(stats.val_mse) || !mlp_.weights_finite()) {
      throw DivergenceError("training diverged at epoch " + std::to_string(e) +
                            " (non-finite weights or validation error)");
    }
    report.val_mse_history.push_back(stats.val_mse);
    report.val_accuracy_history.push_back(stats.val_accuracy);
    best.offer(e, stats.val_mse, stats.val_accuracy, mlp_, val_confusion_);
    if (e - best.epoch >= config_.patience) break;
  }
  mlp_.restore_weights(best.w_ih, best.w_ho);

  report.epochs_run = epoch_;
  report.best_epoch = best.epoch;
  report.accuracy = best.accuracy;
  report.mse = best.mse;
  report.confusion = best.confusion;

  double staleness_weighted = 0.0;
  std::uint64_t receives = 0;
  auto collect = [&](const LinkState& link) {
    report.messages_sent += link.sent_count();
    report.messages_dropped += link.dropped_count();
    report.hop_transmissions += link.hop_transmissions();
    staleness_weighted +=
        link.mean_staleness() * static_cast<double>(link.receive_count());
    receives += link.receive_count();
    report.links.push_back({link.sender(), link.receiver(), link.hop_count(),
                            link.drop_probability(), link.sent_count(),
                            link.dropped_count(), link.mean_staleness()});
  };
  for (const LinkState& link : forward_links_) collect(link);
  for (const LinkState& link : backward_links_) collect(link);
  report.drop_rate =
      report.messages_sent == 0
          ? 0.0
          : static_cast<double>(report.messages_dropped) /
                static_cast<double>(report.messages_sent);
  report.mean_staleness =
      receives == 0 ? 0.0 : staleness_weighted / static_cast<double>(receives);

  report.m_fp = m_fp_;
  report.c_m = analytic_message_complexity(
      static_cast<std::uint64_t>(report.epochs_run), report.n_train,
      report.n_test, m_fp_);
  report.c_t_hours = analytic_time_complexity_hours(
      static_cast<std::uint64_t>(report.epochs_run), report.n_train,
      report.n_test, delay_.t_wait, config_.per_hop_delay_ms);

  report.hidden_output_weights = mlp_.weights_hidden_output();
  report.input_hidden_weights = mlp_.weights_input_hidden();
  return report;
}

RunReport run_experiment(const ExperimentConfig& config) {
  ExperimentRun run(config);
  return run.run_to_completion();
}

RunReport train_plain(const ExperimentConfig& config) {
  ExperimentConfig cfg = config;
  validate_config(cfg);
  const PreparedData prepared = prepare_data(cfg);
  const SplitDataset& split = prepared.split;
  const std::vector<std::vector<double>> targets = one_hot_targets(split.train);

  Mlp mlp(static_cast<int>(split.train.n_attributes), prepared.n_hidden,
          static_cast<int>(split.train.class_count()), cfg.learning_rate,
          cfg.momentum);
  Rng weight_rng(derive_seed(cfg.seed, "weights"));
  mlp.init_weights(weight_rng);
  Rng shuffle_rng(derive_seed(cfg.seed, "shuffle"));

  RunReport report;
  fill_dataset_fields(report, cfg, split);
  report.n_hidden = prepared.n_hidden;
  report.sizing = cfg.hidden_override ? "override" : cfg.sizing;
  report.drop_model_name = "none";

  BestEpoch best;
  int epochs = 0;
  for (int e = 1; e <= cfg.max_epochs; ++e) {
    epochs = e;
    const std::vector<std::size_t> order =
        shuffle_epoch(shuffle_rng, split.train.size());
    for (const std::size_t row : order) {
      const std::span<const double> input = split.train.row(row);
      const std::vector<double> hidden = mlp.forward_hidden(input);
      const std::vector<double> output = mlp.forward_output(hidden);
      mlp.backward_and_update(input, hidden, output, targets[row]);
    }
    const EvalResult eval = mlp.evaluate(split.test);
    if (!std::isfinite(eval.mse) || !mlp.weights_finite()) {
      throw DivergenceError("training diverged at epoch " + std::to_string(e) +
                            " (non-finite weights or validation error)");
    }
    report.val_mse_history.push_back(eval.mse);
    report.val_accuracy_history.push_back(eval.accuracy);
    best.offer(e, eval.mse, eval.accuracy, mlp, eval.confusion);
    if (e - best.epoch >= cfg.patience) break;
  }
  mlp.restore_weights(best.w_ih, best.w_ho);

  report.epochs_run = epochs;
  report.best_epoch = best.epoch;
  report.accuracy = best.accuracy;
  report.mse = best.mse;
  report.confusion = best.confusion;
  report.hidden_output_weights = mlp.weights_hidden_output();
  report.input_hidden_weights = mlp.weights_input_hidden();
  return report;
}

}  // namespace wsnmlp
