#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "wsnmlp/rng.hpp"

namespace wsnmlp {

// In-memory tabular classification dataset.  Features are a dense row-major
// matrix; labels are class indices in order of first appearance in the file.
struct Dataset {
  std::string name;
  std::size_t n_attributes = 0;
  std::vector<double> features;  // n_instances x n_attributes, row-major
  std::vector<int> labels;
  std::vector<std::string> class_names;

  std::size_t size() const { return labels.size(); }
  std::size_t class_count() const { return class_names.size(); }
  std::span<const double> row(std::size_t i) const {
    return {features.data() + i * n_attributes, n_attributes};
  }
  std::vector<std::size_t> class_counts() const;
};

struct LoadOptions {
  std::string name;          // defaults to the file stem
  bool has_header = false;
};

// Loads a comma-separated file whose last column is the class label and all
// preceding columns are numeric attributes.  Rejects ragged rows, empty or
// non-numeric feature fields, and non-finite values; error messages name the
// offending line and column.  Blank lines are skipped.
Dataset load_csv(const std::string& path, const LoadOptions& options = {});

struct AttributeStats {
  std::vector<double> min;
  std::vector<double> max;
};

AttributeStats compute_stats(const Dataset& ds);

// Min-max normalization to [-1, 1]: x' = 2 (x - min) / (max - min) - 1.
// Constant attributes map to 0.  With clip set, values outside the stats
// range (possible when stats come from a subset) are clamped to [-1, 1].
void min_max_normalize(Dataset& ds, const AttributeStats& stats,
                       bool clip = false);

// One-hot target vector: 0/1 entries, single 1 at the label position.
std::vector<double> one_hot(int label, std::size_t class_count);

struct SplitDataset {
  Dataset train;
  Dataset test;
};

// Stratified split with a 2/3 : 1/3 target.  Per-class training counts are
// apportioned by largest remainder so the overall training size is exactly
// round(2/3 * N) while every class stays within one instance of its own 2/3
// share and keeps at least one test instance.  Order within each class is
// shuffled; classes require at least two instances each.
SplitDataset stratified_split(Rng& rng, const Dataset& ds);

// Synthetic minority oversampling.  Every class is topped up to
// target_count instances (default: the majority class size) by interpolating
// between a minority instance and one of its k nearest same-class
// neighbours: x' = x + u * (neighbour - x) with u uniform in [0, 1).
// Synthetic rows are appended after the original rows.
Dataset smote(Rng& rng, const Dataset& ds, int k_neighbours = 5,
              std::size_t target_count = 0);

// Random presentation order for one training epoch (Fisher-Yates).
std::vector<std::size_t> shuffle_epoch(Rng& rng, std::size_t n);

// Writes the dataset back out in the load_csv format at full precision, so
// a round trip reproduces identical feature values.
void write_csv(std::ostream& os, const Dataset& ds);

}  // namespace wsnmlp
