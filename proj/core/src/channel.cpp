#include "wsnmlp/channel.hpp"

#include <stdexcept>
#include <string>

namespace wsnmlp {

LinkState::LinkState(int sender, int receiver, int n_hops, double p_drop,
                     const DelayModel& delay_model, double initial_value,
                     std::uint64_t drop_seed, std::uint64_t delay_seed)
    : sender_(sender),
      receiver_(receiver),
      n_hops_(n_hops),
      p_drop_(p_drop),
      delay_model_(delay_model),
      max_delay_(wsnmlp::max_delay(n_hops, delay_model)),
      // A live arrival at receive time k originated at k - d, d <= max_delay,
      // and was scheduled no later than its own origin; indices resident in
      // either ring therefore span at most max_delay + 1 consecutive values.
      // One spare slot keeps an overwrite from ever landing on a live entry.
      capacity_(max_delay_ + 2),
      schedule_(static_cast<std::size_t>(capacity_)),
      history_(static_cast<std::size_t>(capacity_)),
      drop_rng_(drop_seed),
      delay_rng_(delay_seed),
      freshest_value_(initial_value) {
  if (p_drop < 0.0 || p_drop > 1.0) {
    throw std::invalid_argument("LinkState: p_drop outside [0, 1]");
  }
  history_[0] = {0, initial_value};
}

void LinkState::transmit(std::uint64_t k, double value) {
  // z in (0, 1]: p_drop = 0 can never drop, p_drop = 1 always does.
  const double z = drop_rng_.positive01();
  const bool delivered = z > p_drop_;
  int delay = 0;
  if (delivered) {
    delay = sample_delay(delay_rng_, n_hops_, delay_model_);
  }
  transmit_forced(k, value, delivered, delay);
}

void LinkState::transmit_forced(std::uint64_t k, double value, bool delivered,
                                int delay) {
  if (k == 0 || k <= last_sent_k_) {
    throw std::logic_error("LinkState: presentation index must increase, got " +
                           std::to_string(k) + " after " +
                           std::to_string(last_sent_k_));
  }
  last_sent_k_ = k;
  ++sent_;
  hop_transmissions_ += static_cast<std::uint64_t>(n_hops_);
  history_[k % static_cast<std::uint64_t>(capacity_)] = {k, value};
  if (!delivered) {
    ++dropped_;
    return;
  }
  if (delay < 0 || delay > max_delay_) {
    throw std::logic_error("LinkState: forced delay outside [0, max_delay]");
  }
  const std::uint64_t arrival = k + static_cast<std::uint64_t>(delay);
  ArrivalSlot& slot = schedule_[arrival % static_cast<std::uint64_t>(capacity_)];
  if (slot.live && slot.index == arrival) {
    // Two messages landing in the same window: the fresher origin wins.
    if (k > slot.origin) slot.origin = k;
  } else {
    slot = {arrival, k, true};
  }
  ++scheduled_;
}

LinkState::Reception LinkState::receive(std::uint64_t k) {
  const ArrivalSlot& slot =
      schedule_[k % static_cast<std::uint64_t>(capacity_)];
  if (slot.live && slot.index == k && slot.origin > freshest_) {
    freshest_ = slot.origin;
    const PayloadSlot& payload =
        history_[freshest_ % static_cast<std::uint64_t>(capacity_)];
    // Ring sizing guarantees the payload of any arriving origin is resident.
    if (payload.index != freshest_) {
      throw std::logic_error("LinkState: payload evicted before arrival");
    }
    freshest_value_ = payload.value;
  }
  ++receives_;
  if (freshest_ < k) ++delayed_receives_;
  staleness_sum_ += k - freshest_;
  return {freshest_value_, freshest_};
}

double LinkState::mean_staleness() const {
  if (receives_ == 0) return 0.0;
  return static_cast<double>(staleness_sum_) / static_cast<double>(receives_);
}

}  // namespace wsnmlp
