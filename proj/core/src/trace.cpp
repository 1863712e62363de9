#include "wsnmlp/trace.hpp"

#include <map>
#include <sstream>

#include "wsnmlp/channel.hpp"

namespace wsnmlp {

TraceResult run_delay_drop_trace() {
  DelayModel delay;
  delay.t_wait = 1.0;  // max_delay = floor(1 * 5.0 / 1.0) = 5
  LinkState link(/*sender=*/0, /*receiver=*/1, /*n_hops=*/1, /*p_drop=*/0.5,
                 delay, /*initial_value=*/0.5, /*drop_seed=*/1,
                 /*delay_seed=*/2);

  struct Script {
    std::uint64_t k;
    bool delivered;
    int delay;
    std::uint64_t expected_freshest;
    std::uint64_t expected_origin;
  };
  // Payload convention: the value sent at presentation k is k itself.
  //
  //  k=15  delivered, delay 2  -> lands at 17; nothing to read yet
  //  k=16  delivered, delay 0  -> read immediately
  //  k=17  delivered, delay 1  -> lands at 18; meanwhile the k=15 message
  //        arrives, but origin 15 < freshest 16, so the receiver keeps 16
  //  k=18  delivered, delay 0  -> lands at 18, displacing the pending
  //        origin 17; the receiver consumes 18
  const Script script[] = {
      {15, true, 2, 0, 0},
      {16, true, 0, 16, 16},
      {17, true, 1, 16, 16},
      {18, true, 0, 18, 18},
  };

  TraceResult result;
  result.matches_expected = true;
  std::map<std::uint64_t, std::uint64_t> shadow_schedule;
  for (const Script& s : script) {
    TraceStep step;
    step.k = s.k;
    step.delivered = s.delivered;
    step.delay = s.delay;
    link.transmit_forced(s.k, static_cast<double>(s.k), s.delivered, s.delay);
    if (s.delivered) {
      step.arrival = s.k + static_cast<std::uint64_t>(s.delay);
      std::uint64_t& pending = shadow_schedule[step.arrival];
      if (s.k > pending) pending = s.k;
    }
    if (auto it = shadow_schedule.find(s.k); it != shadow_schedule.end()) {
      step.pending_origin = it->second;
    }
    const LinkState::Reception r = link.receive(s.k);
    step.freshest_after = link.freshest();
    step.origin_used = r.origin;
    step.value_used = r.value;
    step.expected_freshest = s.expected_freshest;
    step.expected_origin = s.expected_origin;
    const double expected_value =
        s.expected_origin == 0 ? 0.5 : static_cast<double>(s.expected_origin);
    step.ok = step.freshest_after == s.expected_freshest &&
              step.origin_used == s.expected_origin &&
              step.value_used == expected_value;
    result.matches_expected = result.matches_expected && step.ok;
    result.steps.push_back(step);
  }
  return result;
}

std::string trace_to_text(const TraceResult& result) {
  std::ostringstream os;
  os << "single-link delay/drop walkthrough (payload sent at k is k; origin 0 "
        "is the initial value)\n";
  for (const TraceStep& s : result.steps) {
    os << "k=" << s.k << "  sent";
    if (s.delivered) {
      os << ", delay " << s.delay << " -> arrives at k=" << s.arrival;
    } else {
      os << ", dropped";
    }
    os << " | pending for this k: ";
    if (s.pending_origin == 0) {
      os << "none";
    } else {
      os << "origin " << s.pending_origin;
    }
    os << " | freshest " << s.freshest_after << ", consumed origin "
       << s.origin_used << " (value " << s.value_used << ")";
    os << (s.ok ? "  [ok]" : "  [MISMATCH: expected freshest " +
                                 std::to_string(s.expected_freshest) +
                                 ", origin " +
                                 std::to_string(s.expected_origin) + "]");
    os << "\n";
  }
  os << (result.matches_expected ? "trace matches the expected protocol state"
                                 : "trace DEVIATES from the expected protocol state")
     << "\n";
  return os.str();
}

}  // namespace wsnmlp
