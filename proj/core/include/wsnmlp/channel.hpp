#pragma once

#include <cstdint>
#include <vector>

#include "wsnmlp/rng.hpp"
#include "wsnmlp/stat_models.hpp"

namespace wsnmlp {

// One directed sender->receiver link of the simulated network.
//
// Lower layers are abstracted into two draws per message: a Bernoulli drop
// with the link's fixed drop probability, and, for delivered messages, an
// integer delay in receiver wait windows.  The receiver keeps the freshest
// value seen so far; a message arriving after fresher data has already been
// consumed is ignored.  Time is the global presentation counter k, which
// the caller advances by one per pattern presentation.
//
// Bookkeeping per link:
//   schedule:  arrival index -> newest origin index scheduled to land there
//              (two messages landing in the same window keep the fresher one);
//   history:   origin index -> transmitted payload, retained long enough to
//              cover the largest possible delay;
//   freshest:  largest origin index consumed so far (0 = initial value).
//
// Both stores are fixed-size rings sized from the link's maximum delay; each
// slot is tagged with the absolute index it holds so stale slots can never
// be misread.
class LinkState {
 public:
  LinkState(int sender, int receiver, int n_hops, double p_drop,
            const DelayModel& delay_model, double initial_value,
            std::uint64_t drop_seed, std::uint64_t delay_seed);

  // Sends the sender's value for presentation k.  Draws the drop Bernoulli
  // and, when delivered, the arrival delay.  k must increase strictly
  // between calls (it need not be contiguous: a link is silent during
  // phases its sender does not participate in).
  void transmit(std::uint64_t k, double value);

  // Deterministic variant used to replay prescribed scenarios; consumes no
  // randomness.  delay must lie within [0, max_delay].
  void transmit_forced(std::uint64_t k, double value, bool delivered,
                       int delay);

  struct Reception {
    double value = 0.0;      // freshest payload available at k
    std::uint64_t origin = 0;  // presentation index it was transmitted at
  };

  // Reads the receiver's view at presentation k: applies any arrival
  // scheduled for k, then returns the freshest value.  Must follow the
  // transmit for the same k when the link is active at k.
  Reception receive(std::uint64_t k);

  int sender() const { return sender_; }
  int receiver() const { return receiver_; }
  int hop_count() const { return n_hops_; }
  double drop_probability() const { return p_drop_; }
  int max_delay() const { return max_delay_; }
  int capacity() const { return capacity_; }
  std::uint64_t freshest() const { return freshest_; }

  // Counters.  sent == dropped + scheduled always holds.
  std::uint64_t sent_count() const { return sent_; }
  std::uint64_t dropped_count() const { return dropped_; }
  std::uint64_t scheduled_count() const { return scheduled_; }
  std::uint64_t receive_count() const { return receives_; }
  // Receives that had to fall back on data older than the current k.
  std::uint64_t delayed_count() const { return delayed_receives_; }
  // Radio transmissions: every send costs n_hops hop traversals, dropped
  // or not (the loss point along the route is not modeled).
  std::uint64_t hop_transmissions() const { return hop_transmissions_; }
  // Mean age (k - origin) of the values consumed, in presentations.
  double mean_staleness() const;

 private:
  struct ArrivalSlot {
    std::uint64_t index = 0;   // arrival presentation this slot describes
    std::uint64_t origin = 0;  // newest origin scheduled to arrive then
    bool live = false;
  };
  struct PayloadSlot {
    std::uint64_t index = 0;
    double value = 0.0;
  };

  int sender_;
  int receiver_;
  int n_hops_;
  double p_drop_;
  DelayModel delay_model_;
  int max_delay_;
  int capacity_;
  std::vector<ArrivalSlot> schedule_;
  std::vector<PayloadSlot> history_;
  Rng drop_rng_;
  Rng delay_rng_;

  std::uint64_t last_sent_k_ = 0;
  std::uint64_t freshest_ = 0;
  double freshest_value_;
  std::uint64_t sent_ = 0;
  std::uint64_t dropped_ = 0;
  std::uint64_t scheduled_ = 0;
  std::uint64_t receives_ = 0;
  std::uint64_t delayed_receives_ = 0;
  std::uint64_t hop_transmissions_ = 0;
  std::uint64_t staleness_sum_ = 0;
};

}  // namespace wsnmlp
