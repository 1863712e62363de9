#include "wsnmlp/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <numeric>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "wsnmlp/errors.hpp"

namespace wsnmlp {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' ||
                        s.front() == '\r')) {
    s.remove_prefix(1);
  }
  while (!s.empty() &&
         (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      fields.push_back(line.substr(start));
      break;
    }
    fields.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
  return fields;
}

double parse_feature(std::string_view field, std::size_t line_no,
                     std::size_t column, const std::string& path) {
  const std::string_view token = trim(field);
  double value = 0.0;
  const auto [ptr, ec] =
      std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc{} || ptr != token.data() + token.size() ||
      token.empty()) {
    throw DatasetError(path + ":" + std::to_string(line_no) + ": column " +
                       std::to_string(column) + ": '" + std::string(token) +
                       "' is not a numeric attribute value");
  }
  if (!std::isfinite(value)) {
    throw DatasetError(path + ":" + std::to_string(line_no) + ": column " +
                       std::to_string(column) + ": non-finite value");
  }
  return value;
}

}  // namespace

std::vector<std::size_t> Dataset::class_counts() const {
  std::vector<std::size_t> counts(class_count(), 0);
  for (const int label : labels) {
    counts[static_cast<std::size_t>(label)]++;
  }
  return counts;
}

Dataset load_csv(const std::string& path, const LoadOptions& options) {
  std::ifstream in(path);
  if (!in) {
    throw DatasetError("cannot open dataset file: " + path);
  }
  Dataset ds;
  ds.name = options.name.empty()
                ? std::filesystem::path(path).stem().string()
                : options.name;

  std::string line;
  std::size_t line_no = 0;
  bool skipped_header = !options.has_header;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    if (!skipped_header) {
      skipped_header = true;
      continue;
    }
    const std::vector<std::string_view> fields = split_fields(line);
    if (fields.size() < 2) {
      throw DatasetError(path + ":" + std::to_string(line_no) +
                         ": need at least one attribute and a class label");
    }
    if (ds.n_attributes == 0) {
      ds.n_attributes = fields.size() - 1;
    } else if (fields.size() - 1 != ds.n_attributes) {
      throw DatasetError(path + ":" + std::to_string(line_no) + ": row has " +
                         std::to_string(fields.size() - 1) +
                         " attributes, expected " +
                         std::to_string(ds.n_attributes));
    }
    for (std::size_t c = 0; c < ds.n_attributes; ++c) {
      ds.features.push_back(parse_feature(fields[c], line_no, c + 1, path));
    }
    const std::string label(trim(fields.back()));
    if (label.empty()) {
      throw DatasetError(path + ":" + std::to_string(line_no) +
                         ": empty class label");
    }
    const auto it =
        std::find(ds.class_names.begin(), ds.class_names.end(), label);
    if (it == ds.class_names.end()) {
      ds.labels.push_back(static_cast<int>(ds.class_names.size()));
      ds.class_names.push_back(label);
    } else {
      ds.labels.push_back(
          static_cast<int>(std::distance(ds.class_names.begin(), it)));
    }
  }
  if (ds.size() == 0) {
    throw DatasetError("dataset file has no data rows: " + path);
  }
  return ds;
}

AttributeStats compute_stats(const Dataset& ds) {
  AttributeStats stats;
  stats.min.assign(ds.n_attributes, std::numeric_limits<double>::infinity());
  stats.max.assign(ds.n_attributes, -std::numeric_limits<double>::infinity());
  for (std::size_t i = 0; i < ds.size(); ++i) {
    const std::span<const double> row = ds.row(i);
    for (std::size_t a = 0; a < ds.n_attributes; ++a) {
      stats.min[a] = std::min(stats.min[a], row[a]);
      stats.max[a] = std::max(stats.max[a], row[a]);
    }
  }
  return stats;
}

void min_max_normalize(Dataset& ds, const AttributeStats& stats, bool clip) {
  if (stats.min.size() != ds.n_attributes ||
      stats.max.size() != ds.n_attributes) {
    throw std::invalid_argument("min_max_normalize: stats arity mismatch");
  }
  for (std::size_t i = 0; i < ds.size(); ++i) {
    double* row = ds.features.data() + i * ds.n_attributes;
    for (std::size_t a = 0; a < ds.n_attributes; ++a) {
      const double span = stats.max[a] - stats.min[a];
      double v = span == 0.0 ? 0.0 : 2.0 * (row[a] - stats.min[a]) / span - 1.0;
      if (clip) v = std::clamp(v, -1.0, 1.0);
      row[a] = v;
    }
  }
}

std::vector<double> one_hot(int label, std::size_t class_count) {
  if (label < 0 || static_cast<std::size_t>(label) >= class_count) {
    throw std::out_of_range("one_hot: label " + std::to_string(label) +
                            " outside [0, " + std::to_string(class_count) +
                            ")");
  }
  std::vector<double> target(class_count, 0.0);
  target[static_cast<std::size_t>(label)] = 1.0;
  return target;
}

namespace {

Dataset subset(const Dataset& ds, const std::vector<std::size_t>& rows) {
  Dataset out;
  out.name = ds.name;
  out.n_attributes = ds.n_attributes;
  out.class_names = ds.class_names;
  out.features.reserve(rows.size() * ds.n_attributes);
  out.labels.reserve(rows.size());
  for (const std::size_t r : rows) {
    const std::span<const double> row = ds.row(r);
    out.features.insert(out.features.end(), row.begin(), row.end());
    out.labels.push_back(ds.labels[r]);
  }
  return out;
}

}  // namespace

SplitDataset stratified_split(Rng& rng, const Dataset& ds) {
  const std::size_t n_classes = ds.class_count();
  std::vector<std::vector<std::size_t>> by_class(n_classes);
  for (std::size_t i = 0; i < ds.size(); ++i) {
    by_class[static_cast<std::size_t>(ds.labels[i])].push_back(i);
  }
  for (std::size_t c = 0; c < n_classes; ++c) {
    if (by_class[c].size() < 2) {
      throw DatasetError("stratified_split: class '" + ds.class_names[c] +
                         "' has fewer than 2 instances");
    }
    // Fisher-Yates within the class, classes in index order.
    std::vector<std::size_t>& rows = by_class[c];
    for (std::size_t i = rows.size() - 1; i > 0; --i) {
      std::swap(rows[i], rows[rng.uniform_index(i + 1)]);
    }
  }

  // Largest-remainder apportionment of round(2/3 * N) training slots: each
  // class gets floor of its exact 2/3 share, remaining slots go to the
  // largest fractional parts (ties: larger class first, then lower index).
  const std::size_t total_train = static_cast<std::size_t>(
      std::floor(2.0 * static_cast<double>(ds.size()) / 3.0 + 0.5));
  std::vector<std::size_t> train_counts(n_classes);
  std::vector<double> fractions(n_classes);
  std::size_t assigned = 0;
  for (std::size_t c = 0; c < n_classes; ++c) {
    const double share = 2.0 * static_cast<double>(by_class[c].size()) / 3.0;
    train_counts[c] = static_cast<std::size_t>(std::floor(share));
    fractions[c] = share - std::floor(share);
    assigned += train_counts[c];
  }
  std::vector<std::size_t> order(n_classes);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    if (fractions[x] != fractions[y]) return fractions[x] > fractions[y];
    if (by_class[x].size() != by_class[y].size()) {
      return by_class[x].size() > by_class[y].size();
    }
    return x < y;
  });
  std::size_t remaining = total_train > assigned ? total_train - assigned : 0;
  for (std::size_t idx = 0; remaining > 0 && idx < n_classes; ++idx) {
    const std::size_t c = order[idx];
    // Keep at least one test instance per class.
    if (train_counts[c] + 1 < by_class[c].size()) {
      ++train_counts[c];
      --remaining;
    }
  }

  std::vector<std::size_t> train_rows;
  std::vector<std::size_t> test_rows;
  for (std::size_t c = 0; c < n_classes; ++c) {
    for (std::size_t i = 0; i < by_class[c].size(); ++i) {
      (i < train_counts[c] ? train_rows : test_rows).push_back(by_class[c][i]);
    }
  }
  return {subset(ds, train_rows), subset(ds, test_rows)};
}

Dataset smote(Rng& rng, const Dataset& ds, int k_neighbours,
              std::size_t target_count) {
  if (k_neighbours < 1) {
    throw std::invalid_argument("smote: k_neighbours must be >= 1");
  }
  const std::vector<std::size_t> counts = ds.class_counts();
  const std::size_t target =
      target_count > 0 ? target_count
                       : *std::max_element(counts.begin(), counts.end());

  Dataset out = ds;
  for (std::size_t c = 0; c < ds.class_count(); ++c) {
    if (counts[c] >= target || counts[c] < 2) continue;
    std::vector<std::size_t> members;
    for (std::size_t i = 0; i < ds.size(); ++i) {
      if (ds.labels[i] == static_cast<int>(c)) members.push_back(i);
    }
    const std::size_t k_eff = std::min<std::size_t>(
        static_cast<std::size_t>(k_neighbours), members.size() - 1);

    // k nearest same-class neighbours per member; ties resolved by index so
    // the neighbour lists are deterministic.
    std::vector<std::vector<std::size_t>> neighbours(members.size());
    for (std::size_t mi = 0; mi < members.size(); ++mi) {
      std::vector<std::pair<double, std::size_t>> dist;
      dist.reserve(members.size() - 1);
      const std::span<const double> base = ds.row(members[mi]);
      for (std::size_t mj = 0; mj < members.size(); ++mj) {
        if (mj == mi) continue;
        const std::span<const double> other = ds.row(members[mj]);
        double d2 = 0.0;
        for (std::size_t a = 0; a < ds.n_attributes; ++a) {
          const double diff = base[a] - other[a];
          d2 += diff * diff;
        }
        dist.emplace_back(d2, members[mj]);
      }
      std::sort(dist.begin(), dist.end());
      neighbours[mi].reserve(k_eff);
      for (std::size_t r = 0; r < k_eff; ++r) {
        neighbours[mi].push_back(dist[r].second);
      }
    }

    const std::size_t need = target - counts[c];
    for (std::size_t t = 0; t < need; ++t) {
      const std::size_t mi = t % members.size();
      const std::span<const double> base = ds.row(members[mi]);
      const std::size_t pick = rng.uniform_index(k_eff);
      const std::span<const double> nb = ds.row(neighbours[mi][pick]);
      const double u = rng.uniform01();
      for (std::size_t a = 0; a < ds.n_attributes; ++a) {
        out.features.push_back(base[a] + u * (nb[a] - base[a]));
      }
      out.labels.push_back(static_cast<int>(c));
    }
  }
  return out;
}

std::vector<std::size_t> shuffle_epoch(Rng& rng, std::size_t n) {
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  for (std::size_t i = n; i > 1; --i) {
    std::swap(order[i - 1], order[rng.uniform_index(i)]);
  }
  return order;
}

void write_csv(std::ostream& os, const Dataset& ds) {
  os.precision(17);
  for (std::size_t i = 0; i < ds.size(); ++i) {
    const std::span<const double> row = ds.row(i);
    for (const double v : row) {
      os << v << ',';
    }
    os << ds.class_names[static_cast<std::size_t>(ds.labels[i])] << '\n';
  }
}

}  // namespace wsnmlp
