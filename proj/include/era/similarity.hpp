// Copyright 2026 The ERA Recommender Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <utility>
#include <vector>

#include "era/dataset.hpp"

namespace era {

// Symmetric sparse object-object similarity. Rows hold every stored value
// (both triangle copies plus the diagonal) with columns sorted ascending,
// so one pass over row(beta) visits all partners of beta in O(nnz(beta)).
// Zero values are never stored: a stored entry implies the two objects
// share at least one training-set user.
class SimilarityMatrix {
 public:
  struct Row {
    std::span<const std::uint32_t> cols;
    std::span<const double> vals;
  };

  std::size_t object_count() const { return object_count_; }

  // Exponent already applied to the stored values; 1.0 means plain RA.
  double exponent() const { return exponent_; }

  Row row(std::uint32_t object) const {
    return {{cols_.data() + row_ptr_[object],
             row_ptr_[object + 1] - row_ptr_[object]},
            {vals_.data() + row_ptr_[object],
             row_ptr_[object + 1] - row_ptr_[object]}};
  }

  // 0.0 when the pair is absent.
  double value_at(std::uint32_t a, std::uint32_t b) const;

  // Stored entries, counting both mirror copies and the diagonal.
  std::size_t stored_count() const { return vals_.size(); }

  // Number of distinct unordered off-diagonal pairs with a stored value.
  std::size_t off_diagonal_pair_count() const;

  // Min/max over all stored values (diagonal included).
  std::pair<double, double> value_range() const;

  // Min/max over stored off-diagonal values.
  std::pair<double, double> off_diagonal_value_range() const;

  std::span<const double> values() const { return vals_; }

 private:
  friend SimilarityMatrix build_ra(const BipartiteDataset&);
  friend SimilarityMatrix enhance(const SimilarityMatrix&, double);

  std::size_t object_count_ = 0;
  double exponent_ = 1.0;
  std::vector<std::size_t> row_ptr_;
  std::vector<std::uint32_t> cols_;
  std::vector<double> vals_;
};

// Resource-allocation similarity of the training network: the stored value
// for (alpha, beta) is the sum of 1/k_u over users u that collected both,
// diagonal included. Rows are accumulated independently (parallel over
// objects) in a fixed order, so the result is identical for any worker
// count and exactly symmetric. Requires at least one training edge.
SimilarityMatrix build_ra(const BipartiteDataset& training);

// Elementwise power: every stored value v becomes v^sigma, the sparsity
// pattern is untouched, and sigma is recorded as the exponent. The input
// must be plain RA (exponent 1.0) and sigma must be positive; sigma == 1
// returns a verbatim copy.
SimilarityMatrix enhance(const SimilarityMatrix& ra, double sigma);

struct LogBinSpec {
  double lo;
  double hi;
  std::size_t count;
};

struct HistogramBin {
  double low;
  double high;
  std::size_t count;
};

// Log-spaced bins over the off-diagonal value range; values outside the
// range clamp into the boundary bins so the counts always total the number
// of stored off-diagonal pairs.
LogBinSpec default_log_bins(const SimilarityMatrix& sim,
                            std::size_t count = 40);
std::vector<HistogramBin> similarity_histogram(const SimilarityMatrix& sim,
                                               const LogBinSpec& bins);

// Mean stored similarity of object pairs grouped by degree bin. Bins are
// linear over [1, max training degree]; zero-degree objects (possible after
// splitting) belong to no bin and are left out of the pair population.
// Absent pairs contribute 0 to their cell's mean.
struct DegreeHeatmap {
  std::size_t bins = 0;
  std::vector<double> mean;        // bins x bins, row major, symmetric
  std::vector<std::size_t> pairs;  // population per cell

  double cell(std::size_t i, std::size_t j) const { return mean[i * bins + j]; }
};

DegreeHeatmap degree_heatmap(const SimilarityMatrix& sim,
                             const BipartiteDataset& training,
                             std::size_t degree_bins);

// CSV schemas: "bin_low,bin_high,count" / "row_bin,col_bin,mean_similarity".
void write_histogram_csv(const std::filesystem::path& path,
                         std::span<const HistogramBin> bins);
void write_heatmap_csv(const std::filesystem::path& path,
                       const DegreeHeatmap& grid);

}  // namespace era
