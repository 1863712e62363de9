#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "wsnmlp/dataset.hpp"
#include "wsnmlp/rng.hpp"

namespace wsnmlp {

// Hidden-layer sizing heuristics, all functions of the attribute and class
// counts (rounding is half-up, result floored at 1):
//   Boger:       round(2/3 * (n_in + n_out))
//   Kolmogorov:  2 * n_in + 1
//   Daqi:        round(sqrt(n_in * (n_out + 2)))
//   Weka:        round((n_in + n_out) / 2)
enum class SizingFormula { Boger, Kolmogorov, Daqi, Weka };

int hidden_count(SizingFormula formula, int n_in, int n_out);
SizingFormula sizing_from_string(std::string_view name);
std::string to_string(SizingFormula formula);

double sigmoid(double t);

struct EvalResult {
  double accuracy = 0.0;
  double mse = 0.0;  // mean over instances and output units of (o - t)^2
  std::vector<std::vector<std::uint64_t>> confusion;  // [actual][predicted]
};

// Two-layer perceptron: logistic units in both layers, bias on every unit,
// trained by gradient descent with momentum:
//
//   delta_w = -gamma * dE/dw + alpha * delta_w_prev,   E = 1/2 sum (o - t)^2
//
// The backward pass is split into per-unit operations so a caller can feed
// each unit its own (possibly stale) view of the data it consumes; the
// monolithic wrappers chain the same per-unit code, which keeps both call
// paths bit-identical when the views agree.
class Mlp {
 public:
  Mlp(int n_in, int n_hidden, int n_out, double learning_rate,
      double momentum);

  void init_weights(Rng& rng);  // uniform in [-0.5, 0.5], momentum cleared

  int input_count() const { return n_in_; }
  int hidden_layer_count() const { return n_hidden_; }
  int output_count() const { return n_out_; }
  double learning_rate() const { return gamma_; }
  double momentum() const { return alpha_; }

  std::vector<double> forward_hidden(std::span<const double> input) const;
  double output_activation(int j, std::span<const double> hidden) const;
  std::vector<double> forward_output(std::span<const double> hidden) const;

  // delta_j = (o_j - t_j) o_j (1 - o_j); local to each output unit.
  static std::vector<double> output_deltas(std::span<const double> output,
                                           std::span<const double> target);

  // delta_i = h_i (1 - h_i) sum_j w_ji delta_j, with w drawn from the given
  // hidden->output matrix mirror (the weights before this step's update).
  double hidden_delta_one(int i, double hidden_i,
                          std::span<const double> output_deltas,
                          std::span<const double> w_ho_mirror) const;
  std::vector<double> hidden_deltas(std::span<const double> hidden,
                                    std::span<const double> output_deltas,
                                    std::span<const double> w_ho_mirror) const;

  void update_output_weights_one(int j, std::span<const double> hidden_seen,
                                 double delta_j);
  void update_output_weights(std::span<const double> hidden_seen,
                             std::span<const double> output_deltas);
  void update_hidden_weights_one(int i, std::span<const double> input,
                                 double delta_i);
  void update_hidden_weights(std::span<const double> input,
                             std::span<const double> hidden_deltas);

  // Full textbook backward pass for one pattern (activations already
  // computed): returns the output deltas it applied.
  std::vector<double> backward_and_update(std::span<const double> input,
                                          std::span<const double> hidden,
                                          std::span<const double> output,
                                          std::span<const double> target);

  EvalResult evaluate(const Dataset& ds) const;

  // Row-major matrices, bias weight last in each row:
  // input->hidden is n_hidden x (n_in + 1), hidden->output n_out x (n_hidden + 1).
  const std::vector<double>& weights_input_hidden() const { return w_ih_; }
  const std::vector<double>& weights_hidden_output() const { return w_ho_; }
  void restore_weights(const std::vector<double>& w_ih,
                       const std::vector<double>& w_ho);
  bool weights_finite() const;

 private:
  int n_in_;
  int n_hidden_;
  int n_out_;
  double gamma_;
  double alpha_;
  std::vector<double> w_ih_;
  std::vector<double> w_ho_;
  std::vector<double> dw_ih_;  // previous weight changes (momentum memory)
  std::vector<double> dw_ho_;
};

// Plain-text dump of both weight matrices, hidden->output first.
void write_weights(std::ostream& os, const Mlp& mlp);

}  // namespace wsnmlp
