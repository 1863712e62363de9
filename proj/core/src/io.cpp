#include "wsnmlp/io.hpp"

#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "wsnmlp/errors.hpp"
#include "wsnmlp/rng.hpp"

namespace wsnmlp {

namespace {

using json = nlohmann::ordered_json;

// Typed field extraction with a ConfigError naming the key on any mismatch.
template <typename T>
void take(json& obj, const char* key, T& out) {
  const auto it = obj.find(key);
  if (it == obj.end()) return;
  try {
    out = it->get<T>();
  } catch (const json::exception&) {
    throw ConfigError(std::string("config key '") + key +
                      "' has the wrong type");
  }
  obj.erase(it);
}

template <typename T>
void take_optional(json& obj, const char* key, std::optional<T>& out) {
  const auto it = obj.find(key);
  if (it == obj.end()) return;
  try {
    out = it->get<T>();
  } catch (const json::exception&) {
    throw ConfigError(std::string("config key '") + key +
                      "' has the wrong type");
  }
  obj.erase(it);
}

}  // namespace

ExperimentConfig config_from_json(const std::string& json_text) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!root.is_object()) {
    throw ConfigError("config root must be a JSON object");
  }

  ExperimentConfig config;
  take(root, "dataset_path", config.dataset_path);
  take(root, "dataset_name", config.dataset_name);
  take(root, "csv_has_header", config.csv_has_header);
  take(root, "seed", config.seed);
  take(root, "normalize", config.normalize);
  take(root, "train_only_stats", config.train_only_stats);
  take(root, "smote", config.apply_smote);
  take(root, "smote_k", config.smote_k);
  take(root, "sizing", config.sizing);
  take_optional(root, "hidden", config.hidden_override);
  take(root, "learning_rate", config.learning_rate);
  take(root, "momentum", config.momentum);
  take(root, "max_epochs", config.max_epochs);
  take(root, "patience", config.patience);
  take(root, "drop_model", config.drop_model);
  take_optional(root, "drop_delta0", config.drop_delta0);
  take_optional(root, "drop_delta1", config.drop_delta1);
  take_optional(root, "theta", config.theta);
  take_optional(root, "t_wait", config.t_wait_override);
  take(root, "identity_channel", config.identity_channel);
  take(root, "delay_mu", config.delay.mu);
  take(root, "delay_sigma", config.delay.sigma);
  take(root, "delay_a", config.delay.a);
  take(root, "delay_b", config.delay.b);
  take(root, "per_hop_delay_ms", config.per_hop_delay_ms);

  if (!root.empty()) {
    throw ConfigError("unknown config key '" + root.begin().key() + "'");
  }
  validate_config(config);
  return config;
}

ExperimentConfig config_from_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw ConfigError("cannot open config file: " + path);
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return config_from_json(buffer.str());
}

std::string config_to_json(const ExperimentConfig& config) {
  json root;
  root["dataset_path"] = config.dataset_path;
  root["dataset_name"] = config.dataset_name;
  root["csv_has_header"] = config.csv_has_header;
  root["seed"] = config.seed;
  root["normalize"] = config.normalize;
  root["train_only_stats"] = config.train_only_stats;
  root["smote"] = config.apply_smote;
  root["smote_k"] = config.smote_k;
  root["sizing"] = config.sizing;
  if (config.hidden_override) root["hidden"] = *config.hidden_override;
  root["learning_rate"] = config.learning_rate;
  root["momentum"] = config.momentum;
  root["max_epochs"] = config.max_epochs;
  root["patience"] = config.patience;
  root["drop_model"] = config.drop_model;
  if (config.drop_delta0) root["drop_delta0"] = *config.drop_delta0;
  if (config.drop_delta1) root["drop_delta1"] = *config.drop_delta1;
  if (config.theta) root["theta"] = *config.theta;
  if (config.t_wait_override) root["t_wait"] = *config.t_wait_override;
  root["identity_channel"] = config.identity_channel;
  root["delay_mu"] = config.delay.mu;
  root["delay_sigma"] = config.delay.sigma;
  root["delay_a"] = config.delay.a;
  root["delay_b"] = config.delay.b;
  root["per_hop_delay_ms"] = config.per_hop_delay_ms;
  return root.dump(2);
}

std::string config_hash8(const ExperimentConfig& config) {
  const std::string canonical = config_to_json(config);
  std::uint64_t h = 0xcbf29ce484222325ull;  // FNV-1a
  for (const char c : canonical) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ull;
  }
  h = splitmix64(h);
  static const char* digits = "0123456789abcdef";
  std::string out(8, '0');
  for (int i = 0; i < 8; ++i) {
    out[static_cast<std::size_t>(i)] = digits[(h >> (4 * i)) & 0xF];
  }
  return out;
}

std::string report_to_json(const RunReport& report) {
  json root;
  root["dataset"] = report.dataset;
  root["seed"] = report.seed;

  json data;
  data["instances"] = report.n_instances;
  data["attributes"] = report.n_attributes;
  data["classes"] = report.n_classes;
  data["train"] = report.n_train;
  data["test"] = report.n_test;
  root["data"] = data;

  json network;
  network["hidden_neurons"] = report.n_hidden;
  network["sizing"] = report.sizing;
  network["l_max"] = report.l_max;
  network["t_wait"] = report.t_wait;
  if (report.theta) {
    network["theta"] = *report.theta;
  } else {
    network["theta"] = nullptr;
  }
  network["drop_model"] = report.drop_model_name;
  network["drop_delta0"] = report.drop_delta0;
  network["drop_delta1"] = report.drop_delta1;
  root["network"] = network;

  json training;
  training["epochs_run"] = report.epochs_run;
  training["best_epoch"] = report.best_epoch;
  training["accuracy"] = report.accuracy;
  training["mse"] = report.mse;
  training["val_mse_history"] = report.val_mse_history;
  training["val_accuracy_history"] = report.val_accuracy_history;
  training["confusion"] = report.confusion;
  root["training"] = training;

  json messages;
  messages["sent"] = report.messages_sent;
  messages["dropped"] = report.messages_dropped;
  messages["drop_rate"] = report.drop_rate;
  messages["hop_transmissions"] = report.hop_transmissions;
  messages["mean_staleness"] = report.mean_staleness;
  root["messages"] = messages;

  json complexity;
  complexity["m_fp"] = report.m_fp;
  complexity["c_m"] = report.c_m;
  complexity["c_t_hours"] = report.c_t_hours;
  root["complexity"] = complexity;

  json links = json::array();
  for (const LinkSummary& link : report.links) {
    json entry;
    entry["sender"] = link.sender;
    entry["receiver"] = link.receiver;
    entry["hops"] = link.n_hops;
    entry["p_drop"] = link.p_drop;
    entry["sent"] = link.sent;
    entry["dropped"] = link.dropped;
    entry["mean_staleness"] = link.mean_staleness;
    links.push_back(entry);
  }
  root["links"] = links;

  root["hidden_output_weights"] = report.hidden_output_weights;
  if (!report.layout_file.empty()) root["layout_file"] = report.layout_file;
  if (!report.weights_file.empty()) root["weights_file"] = report.weights_file;
  return root.dump(2);
}

const char* const kSummaryCsvHeader =
    "dataset,seed,theta,accuracy,mse,epochs,c_m,c_t_hours";

std::string summary_csv_row(const RunReport& report) {
  std::ostringstream os;
  os.precision(17);
  os << report.dataset << ',' << report.seed << ',';
  if (report.theta) os << *report.theta;
  os << ',' << report.accuracy << ',' << report.mse << ',' << report.epochs_run
     << ',' << report.c_m << ',' << report.c_t_hours;
  return os.str();
}

}  // namespace wsnmlp
