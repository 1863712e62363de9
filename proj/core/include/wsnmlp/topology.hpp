#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "wsnmlp/rng.hpp"

namespace wsnmlp {

enum class MoteRole { Hidden, Output };

struct MotePosition {
  double x = 0.0;
  double y = 0.0;
  MoteRole role = MoteRole::Hidden;
};

// Physical deployment of the neuron motes.
//
// All motes live in an outer square of side sqrt(n_hidden + n_output); the
// output motes are confined to an inner square of side sqrt(n_output)
// centered within it, and the hidden motes are scattered outside the inner
// square.  Unit distance equals one radio hop, so the expected hop count
// between two motes is their Euclidean distance rounded to the nearest whole
// hop (minimum 1).
struct MoteLayout {
  int n_hidden = 0;
  int n_output = 0;
  double side_outer = 0.0;
  double side_inner = 0.0;
  std::vector<MotePosition> motes;  // hidden motes first, then output motes
  std::vector<int> hop_matrix;      // row-major (n_hidden+n_output)^2
  int l_max = 0;                    // largest entry of hop_matrix

  int mote_count() const { return n_hidden + n_output; }
  int hops(int i, int j) const { return hop_matrix[i * mote_count() + j]; }
  int hidden_index(int h) const { return h; }
  int output_index(int o) const { return n_hidden + o; }
};

// Euclidean distance to whole hops: round half up, floor at one hop.
int hop_count_from_distance(double distance);

// Places n_hidden + n_output motes uniformly at random in their respective
// regions and derives the pairwise hop matrix.  Placement draws x before y
// for each mote, hidden motes first; hidden candidates landing inside the
// inner square are redrawn.
MoteLayout place_motes(Rng& rng, int n_hidden, int n_output);

// Sum of hop counts over all hidden->output pairs: the per-presentation
// radio transmission count of one forward sweep.
std::uint64_t forward_hop_sum(const MoteLayout& layout);

// Plain-text dump: geometry, per-mote positions, hop matrix, l_max.
void write_layout(std::ostream& os, const MoteLayout& layout);

}  // namespace wsnmlp
