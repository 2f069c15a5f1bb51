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
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace era {

struct Edge {
  std::uint32_t user;
  std::uint32_t object;

  friend bool operator==(const Edge&, const Edge&) = default;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

struct DatasetStats {
  std::size_t user_count;
  std::size_t object_count;
  std::size_t edge_count;
  double mean_user_degree;
  double mean_object_degree;
};

// Immutable binary user-object interaction network. Adjacency is kept in
// compressed sparse form in both directions, so iterating a user's objects
// or an object's users costs O(degree). Users and objects with zero degree
// stay in the index space; downstream code must expect degree 0.
class BipartiteDataset {
 public:
  BipartiteDataset() = default;

  // Builds from an edge list. `user_count`/`object_count` are explicit so a
  // training subset keeps the index space of its parent network. Throws
  // std::invalid_argument on out-of-range indices or duplicate edges.
  static BipartiteDataset from_edges(std::size_t user_count,
                                     std::size_t object_count,
                                     std::vector<Edge> edges);

  std::size_t user_count() const { return user_count_; }
  std::size_t object_count() const { return object_count_; }
  std::size_t edge_count() const { return edges_.size(); }

  std::size_t user_degree(std::uint32_t user) const {
    return user_ptr_[user + 1] - user_ptr_[user];
  }
  std::size_t object_degree(std::uint32_t object) const {
    return object_ptr_[object + 1] - object_ptr_[object];
  }

  // Sorted ascending.
  std::span<const std::uint32_t> objects_of(std::uint32_t user) const {
    return {user_adj_.data() + user_ptr_[user],
            user_ptr_[user + 1] - user_ptr_[user]};
  }
  std::span<const std::uint32_t> users_of(std::uint32_t object) const {
    return {object_adj_.data() + object_ptr_[object],
            object_ptr_[object + 1] - object_ptr_[object]};
  }

  // Canonical (user-major, object-ascending) edge order.
  const std::vector<Edge>& edges() const { return edges_; }

  bool has_edge(std::uint32_t user, std::uint32_t object) const;

  std::size_t max_object_degree() const;

  DatasetStats stats() const;

 private:
  std::size_t user_count_ = 0;
  std::size_t object_count_ = 0;
  std::vector<Edge> edges_;
  std::vector<std::size_t> user_ptr_;
  std::vector<std::uint32_t> user_adj_;
  std::vector<std::size_t> object_ptr_;
  std::vector<std::uint32_t> object_adj_;
};

// Dataset plus the raw-id maps persisted at ingest time. `user_ids[i]` is
// the raw token that was re-indexed to dense user i; likewise for objects.
struct IngestResult {
  BipartiteDataset dataset;
  std::vector<std::string> user_ids;
  std::vector<std::string> object_ids;
};

// Seeded partition of a network into a training subset and a probe edge
// list. Training keeps the parent's user/object index space; probe edges
// are disjoint from training and together they restore the parent exactly.
struct SplitPair {
  BipartiteDataset training;
  std::vector<Edge> probe;  // canonical (user-major) order
  std::uint64_t seed = 0;
  double train_fraction = 0.9;
};

// Parses "user object [rating [timestamp]]" lines (tab or space separated,
// '#' comments and blank lines skipped). Raw ids are arbitrary tokens and
// get densely re-indexed in order of first appearance. Duplicate (user,
// object) interactions collapse to a single edge. When `min_rating` is set,
// a line contributes an edge only if its rating field is >= min_rating.
// Throws std::runtime_error on malformed lines (naming the line number) or
// when no edges remain.
IngestResult ingest(const std::filesystem::path& path,
                    std::optional<double> min_rating = std::nullopt);

// Deterministic 90/10-style partition: the canonical edge list is shuffled
// by a Fisher-Yates pass driven by std::mt19937_64(seed) with rejection
// sampling for the bounded draws, so identical inputs give bit-identical
// splits on every platform. The first round(train_fraction * q) edges in
// shuffle order become training. Requires 0 < train_fraction < 1.
SplitPair split(const BipartiteDataset& dataset, std::uint64_t seed,
                double train_fraction = 0.9);

// Directory persistence.
//
// Dataset dir:  meta.json, interactions.tsv (dense "user<TAB>object"),
//               users.tsv, objects.tsv (line i = raw id of dense index i).
// Split dir:    split.json (seed, fraction, counts), train.tsv, probe.tsv.
void save_dataset(const IngestResult& data, const std::filesystem::path& dir);
IngestResult load_dataset(const std::filesystem::path& dir);
void save_split(const SplitPair& split, const std::filesystem::path& dir);
SplitPair load_split(const std::filesystem::path& dir);

bool is_dataset_dir(const std::filesystem::path& dir);
bool is_split_dir(const std::filesystem::path& dir);

}  // namespace era
