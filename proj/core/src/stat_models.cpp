#include "wsnmlp/stat_models.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <stdexcept>

#include <boost/math/special_functions/erf.hpp>

namespace wsnmlp {

namespace {

constexpr double kSqrt2 = 1.4142135623730951;

double std_normal_cdf(double z) { return 0.5 * std::erfc(-z / kSqrt2); }

double std_normal_quantile(double p) {
  return kSqrt2 * boost::math::erf_inv(2.0 * p - 1.0);
}

// Normalizing mass of the truncation window.  Throws when numerically empty.
double window_mass(const DelayModel& m) {
  const double lo = std_normal_cdf((m.a - m.mu) / m.sigma);
  const double hi = std_normal_cdf((m.b - m.mu) / m.sigma);
  const double mass = hi - lo;
  if (mass < 1e-12) {
    throw std::invalid_argument("truncated Gaussian: degenerate window [" +
                                std::to_string(m.a) + ", " +
                                std::to_string(m.b) + "] carries no mass");
  }
  return mass;
}

}  // namespace

double drop_probability(const DropModel& model, int n_hops) {
  if (n_hops < 1) {
    throw std::invalid_argument("drop_probability: n_hops must be >= 1, got " +
                                std::to_string(n_hops));
  }
  const double h = static_cast<double>(n_hops);
  const double p = (model.delta0 + model.delta1 * h * h) / 100.0;
  return std::clamp(p, 0.0, 1.0);
}

double delivery_from_node_count(double beta0, double beta1, int n_nodes) {
  if (n_nodes < 0) {
    throw std::invalid_argument("delivery_from_node_count: negative n_nodes");
  }
  const double rate = (beta0 + beta1 * static_cast<double>(n_nodes)) / 100.0;
  return std::clamp(rate, 0.0, 1.0);
}

double nodes_from_hops(double tau, int n_hops) {
  if (tau <= 0.0) {
    throw std::invalid_argument("nodes_from_hops: tau must be positive");
  }
  if (n_hops < 1) {
    throw std::invalid_argument("nodes_from_hops: n_hops must be >= 1");
  }
  const double h = static_cast<double>(n_hops);
  return tau * h * h;
}

std::span<const DropModel> drop_model_presets() {
  // Fitted loss-rate coefficients per routing protocol, percent units.
  static const std::array<DropModel, 10> kPresets = {{
      {"EAR", -0.82, 0.043},
      {"GBR", 5.5, 0.45},
      {"BVR", 5.6, 0.076},
      {"QoS", 3.0, 0.049},
      {"Speed", 2.6, 0.042},
      {"LBAR", 4.21, 0.020},
      {"LAR", 7.43, 0.015},
      {"AODVjr", 9.43, 0.015},
      {"DD", 10.4, 0.088},
      {"OpportunisticFlooding", 0.0, 0.0},
  }};
  return kPresets;
}

const DropModel* find_drop_model(std::string_view name) {
  auto canon = [](std::string_view s) {
    std::string out;
    for (const char c : s) {
      if (c == '-' || c == '_' || c == ' ') continue;
      out.push_back(static_cast<char>(
          std::tolower(static_cast<unsigned char>(c))));
    }
    return out;
  };
  const std::string wanted = canon(name);
  for (const DropModel& preset : drop_model_presets()) {
    if (canon(preset.name) == wanted) return &preset;
  }
  return nullptr;
}

DropModel random_drop_model(Rng& rng) {
  DropModel m;
  m.name = "random";
  m.delta0 = rng.uniform(-1.0, 11.0);
  m.delta1 = rng.uniform(0.013, 0.09);
  return m;
}

void validate_shape(const DelayModel& model) {
  if (!(model.sigma > 0.0)) {
    throw std::invalid_argument("delay model: sigma must be positive");
  }
  if (!(model.a < model.mu && model.mu < model.b)) {
    throw std::invalid_argument(
        "delay model: truncation bounds must satisfy a < mu < b");
  }
}

double truncated_gaussian_pdf(double x, const DelayModel& model) {
  validate_shape(model);
  if (x < model.a || x > model.b) return 0.0;
  const double mass = window_mass(model);
  const double z = (x - model.mu) / model.sigma;
  const double phi = std::exp(-0.5 * z * z) / (model.sigma * 2.5066282746310002);
  return phi / mass;
}

double truncated_gaussian_cdf(double x, const DelayModel& model) {
  validate_shape(model);
  if (x < model.a) return 0.0;
  if (x >= model.b) return 1.0;
  const double mass = window_mass(model);
  const double lo = std_normal_cdf((model.a - model.mu) / model.sigma);
  return (std_normal_cdf((x - model.mu) / model.sigma) - lo) / mass;
}

double sample_truncated_gaussian(Rng& rng, const DelayModel& model) {
  validate_shape(model);
  const double lo = std_normal_cdf((model.a - model.mu) / model.sigma);
  const double hi = std_normal_cdf((model.b - model.mu) / model.sigma);
  if (hi - lo < 1e-12) {
    throw std::invalid_argument(
        "truncated Gaussian: degenerate window carries no mass");
  }
  const double u = rng.open01();
  const double p = lo + u * (hi - lo);
  const double x = model.mu + model.sigma * std_normal_quantile(p);
  return std::clamp(x, model.a, model.b);
}

double wait_time(double theta, const DelayModel& model, int l_max) {
  if (!(theta > 0.0)) {
    throw std::invalid_argument("wait_time: theta must be positive");
  }
  if (l_max < 1) {
    throw std::invalid_argument("wait_time: l_max must be >= 1");
  }
  return theta * model.mu * static_cast<double>(l_max);
}

int sample_delay(Rng& rng, int n_hops, const DelayModel& model) {
  if (n_hops < 1) {
    throw std::invalid_argument("sample_delay: n_hops must be >= 1");
  }
  if (!(model.t_wait > 0.0)) {
    throw std::logic_error("sample_delay: t_wait not set on delay model");
  }
  double total = 0.0;
  for (int hop = 0; hop < n_hops; ++hop) {
    total += sample_truncated_gaussian(rng, model);
  }
  return static_cast<int>(std::floor(total / model.t_wait));
}

int max_delay(int n_hops, const DelayModel& model) {
  if (n_hops < 1) {
    throw std::invalid_argument("max_delay: n_hops must be >= 1");
  }
  if (!(model.t_wait > 0.0)) {
    throw std::logic_error("max_delay: t_wait not set on delay model");
  }
  return static_cast<int>(
      std::floor(static_cast<double>(n_hops) * model.b / model.t_wait));
}

}  // namespace wsnmlp
