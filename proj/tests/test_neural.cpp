#include <doctest.h>

#include <cmath>
#include <limits>
#include <span>
#include <stdexcept>
#include <vector>

#include "wsnmlp/dataset.hpp"
#include "wsnmlp/neural.hpp"
#include "wsnmlp/rng.hpp"

using namespace wsnmlp;

namespace {

// Mean squared error over the dataset under the same convention evaluate()
// uses, computed here from first principles for the gradient checks.
double pattern_half_sq_error(const Mlp& mlp, std::span<const double> input,
                             std::span<const double> target) {
  const std::vector<double> hidden = mlp.forward_hidden(input);
  const std::vector<double> output = mlp.forward_output(hidden);
  double e = 0.0;
  for (std::size_t j = 0; j < output.size(); ++j) {
    const double d = output[j] - target[j];
    e += d * d;
  }
  return 0.5 * e;
}

Mlp perturbed(const Mlp& base, bool in_hidden, std::size_t flat_index,
              double eps) {
  Mlp copy = base;
  std::vector<double> w_ih = base.weights_input_hidden();
  std::vector<double> w_ho = base.weights_hidden_output();
  (in_hidden ? w_ih : w_ho)[flat_index] += eps;
  copy.restore_weights(w_ih, w_ho);
  return copy;
}

}  // namespace

TEST_SUITE("neural") {

TEST_CASE("hidden sizing heuristics") {
  CHECK(hidden_count(SizingFormula::Daqi, 4, 3) == 4);
  CHECK(hidden_count(SizingFormula::Boger, 4, 3) == 5);
  CHECK(hidden_count(SizingFormula::Weka, 4, 3) == 4);
  CHECK(hidden_count(SizingFormula::Kolmogorov, 4, 3) == 9);
  CHECK(hidden_count(SizingFormula::Daqi, 240, 10) == 54);
  CHECK(hidden_count(SizingFormula::Kolmogorov, 240, 10) == 481);
  CHECK(hidden_count(SizingFormula::Boger, 13, 3) == 11);
  // Half-up rounding: 2/3 * (1 + 1) = 1.33 -> 1, (1 + 2)/2 = 1.5 -> 2.
  CHECK(hidden_count(SizingFormula::Boger, 1, 1) == 1);
  CHECK(hidden_count(SizingFormula::Weka, 1, 2) == 2);
  CHECK_THROWS_AS(hidden_count(SizingFormula::Daqi, 0, 3),
                  std::invalid_argument);
  CHECK_THROWS_AS(hidden_count(SizingFormula::Daqi, 1, 0),
                  std::invalid_argument);
}

TEST_CASE("sizing names round-trip") {
  for (const auto f : {SizingFormula::Boger, SizingFormula::Kolmogorov,
                       SizingFormula::Daqi, SizingFormula::Weka}) {
    CHECK(sizing_from_string(to_string(f)) == f);
  }
  CHECK_THROWS_AS(sizing_from_string("nonsense"), std::invalid_argument);
}

TEST_CASE("sigmoid endpoints and stability") {
  CHECK(sigmoid(0.0) == 0.5);
  CHECK(sigmoid(709.0) == doctest::Approx(1.0));
  CHECK(sigmoid(-709.0) == doctest::Approx(0.0));
  CHECK(sigmoid(2000.0) == 1.0);
  CHECK(std::isfinite(sigmoid(-2000.0)));
  CHECK(sigmoid(-2000.0) >= 0.0);
  CHECK(sigmoid(1.5) + sigmoid(-1.5) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("weight initialization range and determinism") {
  Mlp a(6, 5, 3, 0.3, 0.8);
  Mlp b(6, 5, 3, 0.3, 0.8);
  Rng ra(404), rb(404);
  a.init_weights(ra);
  b.init_weights(rb);
  CHECK(a.weights_input_hidden() == b.weights_input_hidden());
  CHECK(a.weights_hidden_output() == b.weights_hidden_output());
  CHECK(a.weights_input_hidden().size() == 5 * 7);
  CHECK(a.weights_hidden_output().size() == 3 * 6);
  for (const double w : a.weights_input_hidden()) {
    CHECK(w >= -0.5);
    CHECK(w < 0.5);
  }
  for (const double w : a.weights_hidden_output()) {
    CHECK(w >= -0.5);
    CHECK(w < 0.5);
  }
}

TEST_CASE("zero weights drive every unit to one half") {
  Mlp mlp(3, 4, 2, 0.3, 0.0);
  mlp.restore_weights(std::vector<double>(4 * 4, 0.0),
                      std::vector<double>(2 * 5, 0.0));
  const std::vector<double> input{0.2, -0.7, 0.9};
  const std::vector<double> hidden = mlp.forward_hidden(input);
  for (const double h : hidden) CHECK(h == 0.5);
  const std::vector<double> output = mlp.forward_output(hidden);
  for (const double o : output) CHECK(o == 0.5);
}

TEST_CASE("saturated inputs stay finite") {
  Mlp mlp(2, 3, 2, 0.3, 0.0);
  mlp.restore_weights(std::vector<double>(3 * 3, 500.0),
                      std::vector<double>(2 * 4, -500.0));
  const std::vector<double> input{1.0, 1.0};
  const std::vector<double> hidden = mlp.forward_hidden(input);
  const std::vector<double> output = mlp.forward_output(hidden);
  for (const double h : hidden) CHECK(std::isfinite(h));
  for (const double o : output) CHECK(std::isfinite(o));
  CHECK(mlp.weights_finite());
}

TEST_CASE("bias sits in the last slot of each weight row") {
  // One input, one hidden, one output; all weights zero except one bias at a
  // time, so the activation isolates which slot feeds the unit.
  Mlp mlp(1, 1, 1, 0.3, 0.0);
  mlp.restore_weights({0.0, 3.0}, {0.0, 0.0});  // hidden bias = 3
  const auto hidden = mlp.forward_hidden(std::vector<double>{0.0});
  CHECK(hidden[0] == doctest::Approx(sigmoid(3.0)));
  mlp.restore_weights({3.0, 0.0}, {0.0, 0.0});  // hidden input weight = 3
  const auto h2 = mlp.forward_hidden(std::vector<double>{0.0});
  CHECK(h2[0] == 0.5);
  mlp.restore_weights({0.0, 0.0}, {0.0, -2.0});  // output bias = -2
  const auto out = mlp.forward_output(std::vector<double>{0.0});
  CHECK(out[0] == doctest::Approx(sigmoid(-2.0)));
}

TEST_CASE("output deltas follow the logistic error form") {
  const std::vector<double> output{0.8, 0.3};
  const std::vector<double> target{1.0, 0.0};
  const std::vector<double> d = Mlp::output_deltas(output, target);
  CHECK(d[0] == doctest::Approx((0.8 - 1.0) * 0.8 * 0.2).epsilon(1e-15));
  CHECK(d[1] == doctest::Approx((0.3 - 0.0) * 0.3 * 0.7).epsilon(1e-15));
}

TEST_CASE("finite differences confirm both gradients") {
  // 100 random small networks; central differences at h = 1e-5.
  Rng shapes(2024);
  for (int trial = 0; trial < 100; ++trial) {
    const int n_in = 1 + static_cast<int>(shapes.uniform_index(4));
    const int n_hid = 1 + static_cast<int>(shapes.uniform_index(4));
    const int n_out = 1 + static_cast<int>(shapes.uniform_index(3));
    Mlp mlp(n_in, n_hid, n_out, 1.0, 0.0);  // gamma 1: delta_w = -gradient
    Rng wr(derive_seed(555, "fd-weights", static_cast<std::uint64_t>(trial)));
    mlp.init_weights(wr);

    std::vector<double> input(static_cast<std::size_t>(n_in));
    std::vector<double> target(static_cast<std::size_t>(n_out));
    for (double& x : input) x = wr.uniform(-1.0, 1.0);
    for (double& t : target) t = wr.uniform_index(2) == 0 ? 0.0 : 1.0;

    // Analytic gradient, recovered from the weight change at alpha = 0.
    Mlp stepped = mlp;
    const std::vector<double> hidden = stepped.forward_hidden(input);
    const std::vector<double> output = stepped.forward_output(hidden);
    stepped.backward_and_update(input, hidden, output, target);

    const double eps = 1e-5;
    const auto check_matrix = [&](bool in_hidden) {
      const std::vector<double>& before =
          in_hidden ? mlp.weights_input_hidden() : mlp.weights_hidden_output();
      const std::vector<double>& after = in_hidden
                                             ? stepped.weights_input_hidden()
                                             : stepped.weights_hidden_output();
      for (std::size_t w = 0; w < before.size(); ++w) {
        const double analytic = before[w] - after[w];  // +gradient at gamma 1
        const Mlp plus = perturbed(mlp, in_hidden, w, eps);
        const Mlp minus = perturbed(mlp, in_hidden, w, -eps);
        const double numeric = (pattern_half_sq_error(plus, input, target) -
                                pattern_half_sq_error(minus, input, target)) /
                               (2.0 * eps);
        // Below the finite-difference noise floor an absolute comparison is
        // the meaningful one; above it, 1e-5 relative.
        const double denom = std::max(std::abs(analytic), std::abs(numeric));
        if (denom < 1e-5) {
          REQUIRE(std::abs(analytic - numeric) < 1e-10);
        } else {
          REQUIRE(std::abs(analytic - numeric) / denom < 1e-5);
        }
      }
    };
    check_matrix(true);
    check_matrix(false);
  }
}

TEST_CASE("momentum accumulates the documented geometric history") {
  // Single weight exercised through its bias path: unit target forces a known
  // delta, so the applied change follows delta_w(k) = -gamma * g(k)
  // + alpha * delta_w(k-1) exactly.
  Mlp mlp(1, 1, 1, 0.3, 0.8);
  mlp.restore_weights({0.0, 0.0}, {0.0, 0.0});

  // First step: output = 0.5, target = 1 -> delta = -0.125; bias gradient on
  // the output unit equals delta (input 1.0).  Change = -0.3 * delta.
  std::vector<double> gradients;
  std::vector<double> applied;
  double prev_bias = 0.0;
  for (int k = 0; k < 20; ++k) {
    const std::vector<double> input{0.0};
    const std::vector<double> hidden = mlp.forward_hidden(input);
    const std::vector<double> output = mlp.forward_output(hidden);
    const std::vector<double> target{1.0};
    const std::vector<double> d =
        Mlp::output_deltas(output, target);
    gradients.push_back(d[0] * 1.0);  // bias input is 1
    mlp.backward_and_update(input, hidden, output, target);
    const double bias = mlp.weights_hidden_output()[1];
    applied.push_back(bias - prev_bias);
    prev_bias = bias;
  }
  // Spot values from the first two steps.
  CHECK(gradients[0] == doctest::Approx(-0.125).epsilon(1e-15));
  CHECK(applied[0] == doctest::Approx(0.0375).epsilon(1e-12));
  // Closed-form unroll: delta_w(k) = -gamma * sum_t alpha^(k-t) g(t).
  for (std::size_t k = 0; k < applied.size(); ++k) {
    double expect = 0.0;
    for (std::size_t t = 0; t <= k; ++t) {
      expect += -0.3 * std::pow(0.8, static_cast<double>(k - t)) *
                gradients[t];
    }
    CHECK(applied[k] == doctest::Approx(expect).epsilon(1e-10));
  }
}

TEST_CASE("scripted unit gradient gives -0.3 then -0.54") {
  // Feeding the per-unit update a hidden activation of 1 with delta 1 scripts
  // a gradient of exactly 1 on both the weight and the bias.
  Mlp mlp(1, 1, 1, 0.3, 0.8);
  mlp.restore_weights({0.0, 0.0}, {0.0, 0.0});
  const std::vector<double> ones{1.0};
  mlp.update_output_weights_one(0, ones, 1.0);
  CHECK(mlp.weights_hidden_output()[0] == doctest::Approx(-0.3).epsilon(1e-15));
  mlp.update_output_weights_one(0, ones, 1.0);
  // -0.3 * 1 + 0.8 * (-0.3) = -0.54, applied on top of -0.3.
  CHECK(mlp.weights_hidden_output()[0] ==
        doctest::Approx(-0.84).epsilon(1e-15));
}

TEST_CASE("momentum example: -0.3 g then -0.3 g' + 0.8 previous") {
  Mlp mlp(1, 1, 1, 0.3, 0.8);
  mlp.restore_weights({0.0, 0.0}, {0.0, 0.0});
  const std::vector<double> input{0.0};
  const std::vector<double> target{1.0};
  auto hidden = mlp.forward_hidden(input);
  auto output = mlp.forward_output(hidden);
  mlp.backward_and_update(input, hidden, output, target);
  const double w1 = mlp.weights_hidden_output()[1];
  const double g0 = (0.5 - 1.0) * 0.5 * 0.5;
  CHECK(w1 == doctest::Approx(-0.3 * g0).epsilon(1e-14));
  hidden = mlp.forward_hidden(input);
  output = mlp.forward_output(hidden);
  const double g1 = (output[0] - 1.0) * output[0] * (1.0 - output[0]) *
                    (hidden[0]);
  // The hidden->output weight (slot 0) sees gradient delta * h.
  const double before = mlp.weights_hidden_output()[0];
  const double first_change = before - 0.0;
  mlp.backward_and_update(input, hidden, output, target);
  const double second_change = mlp.weights_hidden_output()[0] - before;
  CHECK(second_change ==
        doctest::Approx(-0.3 * g1 + 0.8 * first_change).epsilon(1e-12));
}

TEST_CASE("training without momentum still descends on one pattern") {
  Mlp mlp(2, 3, 2, 0.5, 0.0);
  Rng wr(8);
  mlp.init_weights(wr);
  const std::vector<double> input{0.3, -0.6};
  const std::vector<double> target{1.0, 0.0};
  double prev = pattern_half_sq_error(mlp, input, target);
  for (int step = 0; step < 50; ++step) {
    const auto hidden = mlp.forward_hidden(input);
    const auto output = mlp.forward_output(hidden);
    mlp.backward_and_update(input, hidden, output, target);
    const double now = pattern_half_sq_error(mlp, input, target);
    REQUIRE(now < prev);
    prev = now;
  }
}

TEST_CASE("per-unit operations chain exactly into the monolithic pass") {
  Mlp whole(5, 4, 3, 0.3, 0.8);
  Rng wr(99);
  whole.init_weights(wr);
  Mlp pieces = whole;

  Rng data(100);
  for (int pattern = 0; pattern < 25; ++pattern) {
    std::vector<double> input(5);
    for (double& x : input) x = data.uniform(-1.0, 1.0);
    std::vector<double> target{0.0, 0.0, 0.0};
    target[data.uniform_index(3)] = 1.0;

    const auto hidden_w = whole.forward_hidden(input);
    const auto output_w = whole.forward_output(hidden_w);
    whole.backward_and_update(input, hidden_w, output_w, target);

    const auto hidden_p = pieces.forward_hidden(input);
    std::vector<double> output_p(3);
    for (int j = 0; j < 3; ++j) {
      output_p[static_cast<std::size_t>(j)] =
          pieces.output_activation(j, hidden_p);
    }
    const auto d_out = Mlp::output_deltas(output_p, target);
    const std::vector<double> mirror = pieces.weights_hidden_output();
    for (int j = 0; j < 3; ++j) {
      pieces.update_output_weights_one(j, hidden_p,
                                       d_out[static_cast<std::size_t>(j)]);
    }
    std::vector<double> d_hid(4);
    for (int i = 0; i < 4; ++i) {
      d_hid[static_cast<std::size_t>(i)] = pieces.hidden_delta_one(
          i, hidden_p[static_cast<std::size_t>(i)], d_out, mirror);
    }
    for (int i = 0; i < 4; ++i) {
      pieces.update_hidden_weights_one(i, input,
                                       d_hid[static_cast<std::size_t>(i)]);
    }

    REQUIRE(output_w == output_p);
    REQUIRE(whole.weights_input_hidden() == pieces.weights_input_hidden());
    REQUIRE(whole.weights_hidden_output() == pieces.weights_hidden_output());
  }
}

TEST_CASE("hidden deltas use the supplied mirror, not the live weights") {
  Mlp mlp(2, 2, 1, 0.3, 0.0);
  mlp.restore_weights(std::vector<double>(2 * 3, 0.1),
                      std::vector<double>{1.0, 2.0, 0.0});
  const std::vector<double> d_out{0.5};
  const std::vector<double> mirror{10.0, 20.0, 0.0};
  const double d0 = mlp.hidden_delta_one(0, 0.5, d_out, mirror);
  // 0.5 * (1 - 0.5) * (10 * 0.5) = 1.25: only the mirror matters.
  CHECK(d0 == doctest::Approx(1.25).epsilon(1e-15));
  const double d1 = mlp.hidden_delta_one(1, 0.25, d_out, mirror);
  CHECK(d1 == doctest::Approx(0.25 * 0.75 * 10.0).epsilon(1e-15));
}

TEST_CASE("evaluate builds a consistent confusion matrix") {
  // Force a constant predictor by zeroing everything: output is uniform 0.5,
  // argmax picks the first class for every instance.
  Mlp mlp(2, 2, 3, 0.3, 0.0);
  mlp.restore_weights(std::vector<double>(2 * 3, 0.0),
                      std::vector<double>(3 * 3, 0.0));
  Dataset ds;
  ds.name = "toy";
  ds.n_attributes = 2;
  ds.class_names = {"a", "b", "c"};
  for (int i = 0; i < 9; ++i) {
    ds.features.push_back(0.1 * i);
    ds.features.push_back(-0.1 * i);
    ds.labels.push_back(i % 3);
  }
  const EvalResult r = mlp.evaluate(ds);
  CHECK(r.accuracy == doctest::Approx(1.0 / 3.0));
  REQUIRE(r.confusion.size() == 3);
  for (int actual = 0; actual < 3; ++actual) {
    std::uint64_t row_sum = 0;
    for (int pred = 0; pred < 3; ++pred) {
      row_sum += r.confusion[static_cast<std::size_t>(actual)]
                            [static_cast<std::size_t>(pred)];
      if (pred != 0) {
        CHECK(r.confusion[static_cast<std::size_t>(actual)]
                         [static_cast<std::size_t>(pred)] == 0);
      }
    }
    CHECK(row_sum == 3);
  }
  // Every output is 0.5; per-pattern squared error is 0.25 + 0.25 + 0.25
  // against a one-hot target... one term is (0.5-1)^2 and two are (0.5-0)^2,
  // so mse = 3 * 0.25 / 3 = 0.25.
  CHECK(r.mse == doctest::Approx(0.25));
}

TEST_CASE("evaluate on a separable toy problem reaches full accuracy") {
  // Hand-built weights: class = sign of x, big margins.
  Mlp mlp(1, 1, 2, 0.3, 0.0);
  mlp.restore_weights({20.0, 0.0},      // hidden ~ step(x)
                      {40.0, -20.0,     // output 0 fires when hidden ~ 1
                       -40.0, 20.0});   // output 1 fires when hidden ~ 0
  Dataset ds;
  ds.name = "signs";
  ds.n_attributes = 1;
  ds.class_names = {"pos", "neg"};
  for (int i = 1; i <= 10; ++i) {
    ds.features.push_back(0.1 * i);
    ds.labels.push_back(0);
    ds.features.push_back(-0.1 * i);
    ds.labels.push_back(1);
  }
  const EvalResult r = mlp.evaluate(ds);
  CHECK(r.accuracy == 1.0);
  CHECK(r.confusion[0][0] == 10);
  CHECK(r.confusion[1][1] == 10);
  CHECK(r.mse < 0.05);
}

TEST_CASE("weights_finite flags a poisoned matrix") {
  Mlp mlp(2, 2, 2, 0.3, 0.0);
  Rng wr(5);
  mlp.init_weights(wr);
  CHECK(mlp.weights_finite());
  std::vector<double> w_ih = mlp.weights_input_hidden();
  std::vector<double> w_ho = mlp.weights_hidden_output();
  w_ho[1] = std::numeric_limits<double>::quiet_NaN();
  mlp.restore_weights(w_ih, w_ho);
  CHECK_FALSE(mlp.weights_finite());
}

TEST_CASE("constructor rejects bad hyperparameters") {
  CHECK_THROWS_AS(Mlp(0, 2, 2, 0.3, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(Mlp(2, 0, 2, 0.3, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(Mlp(2, 2, 0, 0.3, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(Mlp(2, 2, 2, 0.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(Mlp(2, 2, 2, -0.1, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(Mlp(2, 2, 2, 0.3, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(Mlp(2, 2, 2, 0.3, -0.1), std::invalid_argument);
}

TEST_CASE("restore_weights validates matrix sizes") {
  Mlp mlp(2, 2, 2, 0.3, 0.0);
  CHECK_THROWS_AS(mlp.restore_weights(std::vector<double>(5, 0.0),
                                      std::vector<double>(6, 0.0)),
                  std::invalid_argument);
}

}  // TEST_SUITE
