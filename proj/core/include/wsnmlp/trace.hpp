#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace wsnmlp {

// Scripted single-link walk through the delay/drop bookkeeping, covering the
// three interesting receiver situations: an on-time arrival, a late arrival
// superseded by fresher data already consumed, and two messages landing in
// the same wait window (the fresher origin wins).  Each step carries the
// expected protocol state so drift in the link implementation is caught.
struct TraceStep {
  std::uint64_t k = 0;       // presentation index
  bool delivered = false;
  int delay = 0;
  std::uint64_t arrival = 0;         // k + delay for delivered messages
  std::uint64_t pending_origin = 0;  // origin scheduled to land at k (0: none)
  std::uint64_t freshest_after = 0;  // receiver's newest origin after the step
  std::uint64_t origin_used = 0;     // origin of the value fed to the neuron
  double value_used = 0.0;
  std::uint64_t expected_freshest = 0;
  std::uint64_t expected_origin = 0;
  bool ok = false;
};

struct TraceResult {
  std::vector<TraceStep> steps;
  bool matches_expected = false;
};

// Runs the scripted scenario against a real link instance.
TraceResult run_delay_drop_trace();

// Human-readable rendering, one line per step.
std::string trace_to_text(const TraceResult& result);

}  // namespace wsnmlp
