#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "wsnmlp/channel.hpp"
#include "wsnmlp/dataset.hpp"
#include "wsnmlp/neural.hpp"
#include "wsnmlp/stat_models.hpp"
#include "wsnmlp/topology.hpp"

namespace wsnmlp {

// Complete description of one experiment.  Everything that influences the
// outcome is in here plus the dataset file contents; two runs with equal
// configs produce identical reports.
struct ExperimentConfig {
  std::string dataset_path;
  std::string dataset_name;  // defaults to the file stem
  bool csv_has_header = false;

  std::uint64_t seed = 1;

  // Preprocessing.
  bool normalize = true;
  bool train_only_stats = false;  // stats from training split only, test clipped
  bool apply_smote = false;
  int smote_k = 5;

  // Network shape.
  std::string sizing = "daqi";
  std::optional<int> hidden_override;

  // Training.
  double learning_rate = 0.3;
  double momentum = 0.8;
  int max_epochs = 500;
  int patience = 5;

  // Channel.  Exactly one of theta / t_wait_override is active; with
  // identity_channel set the links are forced lossless and delay-free.
  std::string drop_model = "random";  // preset name or "random"
  std::optional<double> drop_delta0;  // explicit model overrides the name
  std::optional<double> drop_delta1;
  std::optional<double> theta;
  std::optional<double> t_wait_override;
  bool identity_channel = false;
  DelayModel delay;                  // shape parameters; t_wait filled per run
  double per_hop_delay_ms = 65.0;    // physical time per expected hop transit
};

// Validates cross-field constraints and fills defaulted fields (dataset
// name, theta).  Throws ConfigError.
void validate_config(ExperimentConfig& config);

struct EpochStats {
  int epoch = 0;  // 1-based
  double val_mse = 0.0;
  double val_accuracy = 0.0;
};

struct LinkSummary {
  int sender = 0;
  int receiver = 0;
  int n_hops = 0;
  double p_drop = 0.0;
  std::uint64_t sent = 0;
  std::uint64_t dropped = 0;
  double mean_staleness = 0.0;
};

struct RunReport {
  std::string dataset;
  std::uint64_t seed = 0;

  std::size_t n_instances = 0;
  std::size_t n_attributes = 0;
  std::size_t n_classes = 0;
  std::size_t n_train = 0;
  std::size_t n_test = 0;

  int n_hidden = 0;
  std::string sizing;
  int l_max = 0;
  double t_wait = 0.0;
  std::optional<double> theta;
  std::string drop_model_name;
  double drop_delta0 = 0.0;
  double drop_delta1 = 0.0;

  int epochs_run = 0;
  int best_epoch = 0;
  double accuracy = 0.0;  // validation accuracy at the best epoch
  double mse = 0.0;       // validation MSE at the best epoch
  std::vector<double> val_mse_history;
  std::vector<double> val_accuracy_history;
  std::vector<std::vector<std::uint64_t>> confusion;

  // Message accounting over the whole run.
  std::uint64_t messages_sent = 0;
  std::uint64_t messages_dropped = 0;
  std::uint64_t hop_transmissions = 0;  // simulated radio transmissions
  double drop_rate = 0.0;
  double mean_staleness = 0.0;
  std::vector<LinkSummary> links;

  // Analytic complexity of the run (using the realized epoch count):
  // messages c_m = epochs * (2 |train| + |test|) * m_fp, and wall-clock
  // c_t_hours = epochs * (|train| + |test|) * t_wait * per_hop_delay_ms.
  std::uint64_t m_fp = 0;
  std::uint64_t c_m = 0;
  double c_t_hours = 0.0;

  std::vector<double> hidden_output_weights;  // converged, row-major
  std::vector<double> input_hidden_weights;

  std::string layout_file;
  std::string weights_file;
};

// Analytic complexity formulas, exposed for cross-checking.
std::uint64_t analytic_message_complexity(std::uint64_t epochs,
                                          std::uint64_t n_train,
                                          std::uint64_t n_test,
                                          std::uint64_t m_fp);
double analytic_time_complexity_hours(std::uint64_t epochs,
                                      std::uint64_t n_train,
                                      std::uint64_t n_test, double t_wait,
                                      double per_hop_delay_ms);

// One experiment instance: dataset prepared, motes placed, links built,
// weights initialized.  Exposes the per-presentation stepping used by the
// training loop so tests can drive and inspect single steps.
class ExperimentRun {
 public:
  explicit ExperimentRun(const ExperimentConfig& config);

  // One training pattern: forward through the lossy links, weight update
  // from each unit's local (possibly stale) view.  Advances k by one.
  void present_train_pattern(std::size_t row);

  // One validation pattern: forward only.  Returns the predicted class and
  // accumulates the epoch's squared error.  Advances k by one.
  int present_validation_pattern(std::size_t row);

  // Full epoch: shuffled training sweep plus validation sweep.
  EpochStats run_epoch();

  // Epochs until early stopping (patience epochs without a new validation
  // MSE minimum) or max_epochs; restores the best-epoch weights.  Throws
  // DivergenceError if the weights or the validation error leave the
  // representable range.
  RunReport run_to_completion();

  const ExperimentConfig& config() const { return config_; }
  const MoteLayout& layout() const { return layout_; }
  const Mlp& mlp() const { return mlp_; }
  const SplitDataset& split() const { return split_; }
  const DropModel& drop_model() const { return drop_model_; }
  double t_wait() const { return delay_.t_wait; }
  std::optional<double> theta_used() const { return theta_used_; }
  std::uint64_t presentation_index() const { return k_; }
  std::uint64_t m_fp() const { return m_fp_; }
  std::vector<LinkState>& forward_links() { return forward_links_; }
  std::vector<LinkState>& backward_links() { return backward_links_; }
  int epochs_completed() const { return epoch_; }

 private:
  LinkState& forward_link(int h, int o) {
    return forward_links_[static_cast<std::size_t>(h) *
                              static_cast<std::size_t>(mlp_.output_count()) +
                          static_cast<std::size_t>(o)];
  }
  LinkState& backward_link(int o, int h) {
    return backward_links_[static_cast<std::size_t>(o) *
                               static_cast<std::size_t>(
                                   mlp_.hidden_layer_count()) +
                           static_cast<std::size_t>(h)];
  }

  ExperimentConfig config_;
  SplitDataset split_;
  std::vector<std::vector<double>> train_targets_;
  MoteLayout layout_;
  DropModel drop_model_;
  DelayModel delay_;
  std::optional<double> theta_used_;
  Mlp mlp_;
  std::vector<LinkState> forward_links_;
  std::vector<LinkState> backward_links_;
  Rng shuffle_rng_;
  std::uint64_t k_ = 0;
  std::uint64_t m_fp_ = 0;
  int epoch_ = 0;

  // Per-epoch validation accumulators.
  double val_sq_error_ = 0.0;
  std::uint64_t val_correct_ = 0;
  std::vector<std::vector<std::uint64_t>> val_confusion_;

  // Scratch reused across presentations.
  std::vector<std::vector<double>> stale_hidden_;   // per output unit
  std::vector<std::vector<double>> received_deltas_;  // per hidden unit
};

// Runs the full experiment for a config (convenience wrapper).
RunReport run_experiment(const ExperimentConfig& config);

// Reference trainer: the same preprocessing, initialization and update
// arithmetic with no network in the loop.  A run through an identity channel
// must reproduce this bit for bit.
RunReport train_plain(const ExperimentConfig& config);

}  // namespace wsnmlp
