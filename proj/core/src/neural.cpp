#include "wsnmlp/neural.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <stdexcept>

namespace wsnmlp {

namespace {

int round_half_up_min1(double x) {
  return std::max(1, static_cast<int>(std::floor(x + 0.5)));
}

}  // namespace

int hidden_count(SizingFormula formula, int n_in, int n_out) {
  if (n_in < 1 || n_out < 1) {
    throw std::invalid_argument("hidden_count: need n_in >= 1 and n_out >= 1");
  }
  const double in = static_cast<double>(n_in);
  const double out = static_cast<double>(n_out);
  switch (formula) {
    case SizingFormula::Boger:
      return round_half_up_min1(2.0 * (in + out) / 3.0);
    case SizingFormula::Kolmogorov:
      return 2 * n_in + 1;
    case SizingFormula::Daqi:
      return round_half_up_min1(std::sqrt(in * (out + 2.0)));
    case SizingFormula::Weka:
      return round_half_up_min1((in + out) / 2.0);
  }
  throw std::invalid_argument("hidden_count: unknown formula");
}

SizingFormula sizing_from_string(std::string_view name) {
  if (name == "boger") return SizingFormula::Boger;
  if (name == "kolmogorov") return SizingFormula::Kolmogorov;
  if (name == "daqi") return SizingFormula::Daqi;
  if (name == "weka") return SizingFormula::Weka;
  throw std::invalid_argument("unknown hidden sizing formula: '" +
                              std::string(name) +
                              "' (expected boger|kolmogorov|daqi|weka)");
}

std::string to_string(SizingFormula formula) {
  switch (formula) {
    case SizingFormula::Boger: return "boger";
    case SizingFormula::Kolmogorov: return "kolmogorov";
    case SizingFormula::Daqi: return "daqi";
    case SizingFormula::Weka: return "weka";
  }
  return "?";
}

double sigmoid(double t) {
  if (t >= 0.0) {
    return 1.0 / (1.0 + std::exp(-t));
  }
  const double e = std::exp(t);
  return e / (1.0 + e);
}

Mlp::Mlp(int n_in, int n_hidden, int n_out, double learning_rate,
         double momentum)
    : n_in_(n_in),
      n_hidden_(n_hidden),
      n_out_(n_out),
      gamma_(learning_rate),
      alpha_(momentum) {
  if (n_in < 1 || n_hidden < 1 || n_out < 1) {
    throw std::invalid_argument("Mlp: layer sizes must be >= 1");
  }
  if (!(learning_rate > 0.0)) {
    throw std::invalid_argument("Mlp: learning rate must be positive");
  }
  if (momentum < 0.0 || momentum >= 1.0) {
    throw std::invalid_argument("Mlp: momentum must lie in [0, 1)");
  }
  w_ih_.assign(static_cast<std::size_t>(n_hidden_) * (n_in_ + 1), 0.0);
  w_ho_.assign(static_cast<std::size_t>(n_out_) * (n_hidden_ + 1), 0.0);
  dw_ih_.assign(w_ih_.size(), 0.0);
  dw_ho_.assign(w_ho_.size(), 0.0);
}

void Mlp::init_weights(Rng& rng) {
  for (double& w : w_ih_) w = rng.uniform01() - 0.5;
  for (double& w : w_ho_) w = rng.uniform01() - 0.5;
  std::fill(dw_ih_.begin(), dw_ih_.end(), 0.0);
  std::fill(dw_ho_.begin(), dw_ho_.end(), 0.0);
}

std::vector<double> Mlp::forward_hidden(std::span<const double> input) const {
  std::vector<double> hidden(static_cast<std::size_t>(n_hidden_));
  for (int i = 0; i < n_hidden_; ++i) {
    const double* w = w_ih_.data() + static_cast<std::size_t>(i) * (n_in_ + 1);
    double acc = 0.0;
    for (int a = 0; a < n_in_; ++a) {
      acc += w[a] * input[static_cast<std::size_t>(a)];
    }
    acc += w[n_in_];  // bias
    hidden[static_cast<std::size_t>(i)] = sigmoid(acc);
  }
  return hidden;
}

double Mlp::output_activation(int j, std::span<const double> hidden) const {
  const double* w = w_ho_.data() + static_cast<std::size_t>(j) * (n_hidden_ + 1);
  double acc = 0.0;
  for (int i = 0; i < n_hidden_; ++i) {
    acc += w[i] * hidden[static_cast<std::size_t>(i)];
  }
  acc += w[n_hidden_];
  return sigmoid(acc);
}

std::vector<double> Mlp::forward_output(std::span<const double> hidden) const {
  std::vector<double> output(static_cast<std::size_t>(n_out_));
  for (int j = 0; j < n_out_; ++j) {
    output[static_cast<std::size_t>(j)] = output_activation(j, hidden);
  }
  return output;
}

std::vector<double> Mlp::output_deltas(std::span<const double> output,
                                       std::span<const double> target) {
  std::vector<double> deltas(output.size());
  for (std::size_t j = 0; j < output.size(); ++j) {
    const double o = output[j];
    deltas[j] = (o - target[j]) * o * (1.0 - o);
  }
  return deltas;
}

double Mlp::hidden_delta_one(int i, double hidden_i,
                             std::span<const double> output_deltas,
                             std::span<const double> w_ho_mirror) const {
  double acc = 0.0;
  for (int j = 0; j < n_out_; ++j) {
    acc += w_ho_mirror[static_cast<std::size_t>(j) * (n_hidden_ + 1) + i] *
           output_deltas[static_cast<std::size_t>(j)];
  }
  return hidden_i * (1.0 - hidden_i) * acc;
}

std::vector<double> Mlp::hidden_deltas(
    std::span<const double> hidden, std::span<const double> output_deltas,
    std::span<const double> w_ho_mirror) const {
  std::vector<double> deltas(static_cast<std::size_t>(n_hidden_));
  for (int i = 0; i < n_hidden_; ++i) {
    deltas[static_cast<std::size_t>(i)] = hidden_delta_one(
        i, hidden[static_cast<std::size_t>(i)], output_deltas, w_ho_mirror);
  }
  return deltas;
}

void Mlp::update_output_weights_one(int j, std::span<const double> hidden_seen,
                                    double delta_j) {
  const std::size_t base = static_cast<std::size_t>(j) * (n_hidden_ + 1);
  for (int i = 0; i <= n_hidden_; ++i) {
    const double activation =
        i < n_hidden_ ? hidden_seen[static_cast<std::size_t>(i)] : 1.0;
    const double gradient = delta_j * activation;
    const double dw = -gamma_ * gradient + alpha_ * dw_ho_[base + i];
    w_ho_[base + i] += dw;
    dw_ho_[base + i] = dw;
  }
}

void Mlp::update_output_weights(std::span<const double> hidden_seen,
                                std::span<const double> output_deltas) {
  for (int j = 0; j < n_out_; ++j) {
    update_output_weights_one(j, hidden_seen,
                              output_deltas[static_cast<std::size_t>(j)]);
  }
}

void Mlp::update_hidden_weights_one(int i, std::span<const double> input,
                                    double delta_i) {
  const std::size_t base = static_cast<std::size_t>(i) * (n_in_ + 1);
  for (int a = 0; a <= n_in_; ++a) {
    const double activation =
        a < n_in_ ? input[static_cast<std::size_t>(a)] : 1.0;
    const double gradient = delta_i * activation;
    const double dw = -gamma_ * gradient + alpha_ * dw_ih_[base + a];
    w_ih_[base + a] += dw;
    dw_ih_[base + a] = dw;
  }
}

void Mlp::update_hidden_weights(std::span<const double> input,
                                std::span<const double> hidden_deltas) {
  for (int i = 0; i < n_hidden_; ++i) {
    update_hidden_weights_one(i, input,
                              hidden_deltas[static_cast<std::size_t>(i)]);
  }
}

std::vector<double> Mlp::backward_and_update(std::span<const double> input,
                                             std::span<const double> hidden,
                                             std::span<const double> output,
                                             std::span<const double> target) {
  const std::vector<double> d_out = output_deltas(output, target);
  // Hidden deltas read the weights as they stood before this update.
  const std::vector<double> w_ho_before = w_ho_;
  update_output_weights(hidden, d_out);
  const std::vector<double> d_hid = hidden_deltas(hidden, d_out, w_ho_before);
  update_hidden_weights(input, d_hid);
  return d_out;
}

EvalResult Mlp::evaluate(const Dataset& ds) const {
  EvalResult result;
  result.confusion.assign(ds.class_count(),
                          std::vector<std::uint64_t>(ds.class_count(), 0));
  double sq_error = 0.0;
  std::uint64_t correct = 0;
  for (std::size_t r = 0; r < ds.size(); ++r) {
    const std::vector<double> hidden = forward_hidden(ds.row(r));
    const std::vector<double> output = forward_output(hidden);
    const int actual = ds.labels[r];
    int predicted = 0;
    for (int j = 1; j < n_out_; ++j) {
      if (output[static_cast<std::size_t>(j)] >
          output[static_cast<std::size_t>(predicted)]) {
        predicted = j;
      }
    }
    for (int j = 0; j < n_out_; ++j) {
      const double t = j == actual ? 1.0 : 0.0;
      const double diff = output[static_cast<std::size_t>(j)] - t;
      sq_error += diff * diff;
    }
    if (predicted == actual) ++correct;
    result.confusion[static_cast<std::size_t>(actual)]
                    [static_cast<std::size_t>(predicted)]++;
  }
  const double denom = static_cast<double>(ds.size()) * n_out_;
  result.mse = sq_error / denom;
  result.accuracy = static_cast<double>(correct) / static_cast<double>(ds.size());
  return result;
}

void Mlp::restore_weights(const std::vector<double>& w_ih,
                          const std::vector<double>& w_ho) {
  if (w_ih.size() != w_ih_.size() || w_ho.size() != w_ho_.size()) {
    throw std::invalid_argument("restore_weights: size mismatch");
  }
  w_ih_ = w_ih;
  w_ho_ = w_ho;
}

bool Mlp::weights_finite() const {
  const auto finite = [](const std::vector<double>& w) {
    return std::all_of(w.begin(), w.end(),
                       [](double v) { return std::isfinite(v); });
  };
  return finite(w_ih_) && finite(w_ho_);
}

void write_weights(std::ostream& os, const Mlp& mlp) {
  os << std::setprecision(17);
  os << "hidden_output " << mlp.output_count() << ' '
     << mlp.hidden_layer_count() + 1 << "\n";
  const std::vector<double>& w_ho = mlp.weights_hidden_output();
  for (int j = 0; j < mlp.output_count(); ++j) {
    for (int i = 0; i <= mlp.hidden_layer_count(); ++i) {
      os << w_ho[static_cast<std::size_t>(j) * (mlp.hidden_layer_count() + 1) +
                 i]
         << (i == mlp.hidden_layer_count() ? '\n' : ' ');
    }
  }
  os << "input_hidden " << mlp.hidden_layer_count() << ' '
     << mlp.input_count() + 1 << "\n";
  const std::vector<double>& w_ih = mlp.weights_input_hidden();
  for (int i = 0; i < mlp.hidden_layer_count(); ++i) {
    for (int a = 0; a <= mlp.input_count(); ++a) {
      os << w_ih[static_cast<std::size_t>(i) * (mlp.input_count() + 1) + a]
         << (a == mlp.input_count() ? '\n' : ' ');
    }
  }
}

}  // namespace wsnmlp
