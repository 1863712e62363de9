#include "wsnmlp/topology.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <stdexcept>

namespace wsnmlp {

int hop_count_from_distance(double distance) {
  if (distance < 0.0 || !std::isfinite(distance)) {
    throw std::invalid_argument("hop_count_from_distance: bad distance");
  }
  const int rounded = static_cast<int>(std::floor(distance + 0.5));
  return std::max(1, rounded);
}

MoteLayout place_motes(Rng& rng, int n_hidden, int n_output) {
  if (n_hidden < 1 || n_output < 1) {
    throw std::invalid_argument("place_motes: need at least one mote per role");
  }
  MoteLayout layout;
  layout.n_hidden = n_hidden;
  layout.n_output = n_output;
  layout.side_outer =
      std::sqrt(static_cast<double>(n_hidden) + static_cast<double>(n_output));
  layout.side_inner = std::sqrt(static_cast<double>(n_output));

  const double inner_lo = (layout.side_outer - layout.side_inner) / 2.0;
  const double inner_hi = inner_lo + layout.side_inner;
  auto strictly_inside_inner = [&](double x, double y) {
    return x > inner_lo && x < inner_hi && y > inner_lo && y < inner_hi;
  };

  layout.motes.reserve(static_cast<std::size_t>(layout.mote_count()));
  for (int h = 0; h < n_hidden; ++h) {
    double x = 0.0;
    double y = 0.0;
    do {
      x = rng.uniform01() * layout.side_outer;
      y = rng.uniform01() * layout.side_outer;
    } while (strictly_inside_inner(x, y));
    layout.motes.push_back({x, y, MoteRole::Hidden});
  }
  for (int o = 0; o < n_output; ++o) {
    const double x = inner_lo + rng.uniform01() * layout.side_inner;
    const double y = inner_lo + rng.uniform01() * layout.side_inner;
    layout.motes.push_back({x, y, MoteRole::Output});
  }

  const int n = layout.mote_count();
  layout.hop_matrix.assign(static_cast<std::size_t>(n) * n, 0);
  layout.l_max = 1;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      const double dx = layout.motes[i].x - layout.motes[j].x;
      const double dy = layout.motes[i].y - layout.motes[j].y;
      const int hops = hop_count_from_distance(std::sqrt(dx * dx + dy * dy));
      layout.hop_matrix[static_cast<std::size_t>(i) * n + j] = hops;
      layout.l_max = std::max(layout.l_max, hops);
    }
  }
  return layout;
}

std::uint64_t forward_hop_sum(const MoteLayout& layout) {
  std::uint64_t total = 0;
  for (int h = 0; h < layout.n_hidden; ++h) {
    for (int o = 0; o < layout.n_output; ++o) {
      total += static_cast<std::uint64_t>(
          layout.hops(layout.hidden_index(h), layout.output_index(o)));
    }
  }
  return total;
}

void write_layout(std::ostream& os, const MoteLayout& layout) {
  os << "motes " << layout.n_hidden << " hidden, " << layout.n_output
     << " output\n";
  os << std::setprecision(17);
  os << "side_outer " << layout.side_outer << "\n";
  os << "side_inner " << layout.side_inner << "\n";
  os << "# id role x y\n";
  for (int i = 0; i < layout.mote_count(); ++i) {
    const MotePosition& m = layout.motes[static_cast<std::size_t>(i)];
    os << i << ' ' << (m.role == MoteRole::Hidden ? "hidden" : "output") << ' '
       << m.x << ' ' << m.y << "\n";
  }
  os << "hop_matrix\n";
  const int n = layout.mote_count();
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      os << layout.hop_matrix[static_cast<std::size_t>(i) * n + j]
         << (j + 1 == n ? '\n' : ' ');
    }
  }
  os << "l_max " << layout.l_max << "\n";
}

}  // namespace wsnmlp
