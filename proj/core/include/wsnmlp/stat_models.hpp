#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "wsnmlp/rng.hpp"

namespace wsnmlp {

// Per-link message drop model.  The probability that a message sent across
// n_hops hops is lost is
//
//   p_drop(n_hops) = (delta0 + delta1 * n_hops^2) / 100, clamped to [0, 1].
//
// The quadratic form comes from the node-count/hop-count relation
// n_nodes = tau * n_hops^2 applied to published per-protocol delivery-rate
// regressions of the form beta0 + beta1 * n_nodes (percent).
struct DropModel {
  std::string name;
  double delta0 = 0.0;  // percent at n_hops -> 0
  double delta1 = 0.0;  // percent per squared hop
};

// Drop probability for a message crossing n_hops hops.  n_hops < 1 is
// rejected; the result is always within [0, 1].
double drop_probability(const DropModel& model, int n_hops);

// Delivery rate (fraction in [0, 1]) of the underlying regression
// beta0 + beta1 * n_nodes, clamped.  Kept alongside drop_probability so the
// two readings of the same regression stay mutually checkable.
double delivery_from_node_count(double beta0, double beta1, int n_nodes);

// Deployed node count reachable within n_hops hops at density tau (> 0).
double nodes_from_hops(double tau, int n_hops);

// Ten routing-protocol presets with their fitted (delta0, delta1) pairs.
std::span<const DropModel> drop_model_presets();

// Case-insensitive preset lookup ("ear", "AODVjr", "opportunistic-flooding",
// ...); returns nullptr when no preset matches.
const DropModel* find_drop_model(std::string_view name);

// Random drop model: delta0 uniform in (-1, 11), delta1 uniform in
// (0.013, 0.09).  The ranges bracket the preset table, excluding the two
// protocols whose fits lie far outside the cluster.
DropModel random_drop_model(Rng& rng);

// Per-hop forwarding delay model: Gaussian with mean mu and deviation sigma,
// truncated to [a, b] (all in units of expected per-hop transit time).  A
// dimensionless multiple theta of mu defines the receiver wait window
// t_wait; message delay in whole wait windows is
//
//   d = floor(sum of n_hops per-hop draws / t_wait).
struct DelayModel {
  double mu = 1.0;
  double sigma = 0.6;
  double a = 0.3;
  double b = 5.0;
  double t_wait = 0.0;  // set per run from wait_time(); must be > 0 to sample
};

// Rejects models violating a < mu < b, sigma > 0.
void validate_shape(const DelayModel& model);

// Density of the truncated Gaussian; zero outside [a, b].  Throws when the
// truncation window carries no numerical mass.
double truncated_gaussian_pdf(double x, const DelayModel& model);

// CDF of the truncated Gaussian (0 below a, 1 above b).
double truncated_gaussian_cdf(double x, const DelayModel& model);

// One per-hop delay draw by inverse-CDF transform; consumes exactly one
// uniform variate, so streams stay alignable across runs.
double sample_truncated_gaussian(Rng& rng, const DelayModel& model);

// Receiver wait window t_wait = theta * mu * l_max, where l_max is the
// network's largest hop count.
double wait_time(double theta, const DelayModel& model, int l_max);

// End-to-end delay of one message across n_hops hops, in whole wait
// windows.  Requires model.t_wait > 0.
int sample_delay(Rng& rng, int n_hops, const DelayModel& model);

// Largest value sample_delay can return: floor(n_hops * b / t_wait).
int max_delay(int n_hops, const DelayModel& model);

}  // namespace wsnmlp
