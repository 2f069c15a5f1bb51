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

#include "era/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <limits>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string_view>
#include <unordered_map>

#include <nlohmann/json.hpp>

namespace era {
namespace {

using json = nlohmann::json;

[[noreturn]] void fail(const std::string& msg) { throw std::runtime_error(msg); }

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail("cannot open " + path.string() + " for reading");
  return in;
}

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) fail("cannot open " + path.string() + " for writing");
  return out;
}

// Unbiased draw in [0, bound) by rejection; the mt19937_64 stream is fully
// specified, so the shuffle below is reproducible across platforms.
std::uint64_t bounded_draw(std::mt19937_64& rng, std::uint64_t bound) {
  const std::uint64_t limit =
      std::numeric_limits<std::uint64_t>::max() -
      std::numeric_limits<std::uint64_t>::max() % bound;
  std::uint64_t x;
  do {
    x = rng();
  } while (x >= limit);
  return x % bound;
}

std::vector<std::string_view> tokenize(std::string_view line) {
  std::vector<std::string_view> tokens;
  std::size_t pos = 0;
  while (pos < line.size()) {
    while (pos < line.size() && (line[pos] == ' ' || line[pos] == '\t')) ++pos;
    std::size_t start = pos;
    while (pos < line.size() && line[pos] != ' ' && line[pos] != '\t') ++pos;
    if (pos > start) tokens.push_back(line.substr(start, pos - start));
  }
  return tokens;
}

}  // namespace

BipartiteDataset BipartiteDataset::from_edges(std::size_t user_count,
                                              std::size_t object_count,
                                              std::vector<Edge> edges) {
  for (const Edge& e : edges) {
    if (e.user >= user_count || e.object >= object_count)
      throw std::invalid_argument("edge (" + std::to_string(e.user) + ", " +
                                  std::to_string(e.object) +
                                  ") outside index space");
  }
  std::sort(edges.begin(), edges.end());
  if (std::adjacent_find(edges.begin(), edges.end()) != edges.end())
    throw std::invalid_argument("duplicate edge in edge list");

  BipartiteDataset d;
  d.user_count_ = user_count;
  d.object_count_ = object_count;
  d.edges_ = std::move(edges);

  d.user_ptr_.assign(user_count + 1, 0);
  d.object_ptr_.assign(object_count + 1, 0);
  for (const Edge& e : d.edges_) {
    ++d.user_ptr_[e.user + 1];
    ++d.object_ptr_[e.object + 1];
  }
  for (std::size_t i = 1; i <= user_count; ++i)
    d.user_ptr_[i] += d.user_ptr_[i - 1];
  for (std::size_t i = 1; i <= object_count; ++i)
    d.object_ptr_[i] += d.object_ptr_[i - 1];

  d.user_adj_.resize(d.edges_.size());
  d.object_adj_.resize(d.edges_.size());
  std::vector<std::size_t> cursor(d.object_ptr_.begin(),
                                  d.object_ptr_.end() - 1);
  std::size_t k = 0;
  for (const Edge& e : d.edges_) {
    d.user_adj_[k++] = e.object;  // user-major sorted order
    d.object_adj_[cursor[e.object]++] = e.user;
  }
  return d;
}

bool BipartiteDataset::has_edge(std::uint32_t user,
                                std::uint32_t object) const {
  const auto objs = objects_of(user);
  return std::binary_search(objs.begin(), objs.end(), object);
}

std::size_t BipartiteDataset::max_object_degree() const {
  std::size_t best = 0;
  for (std::uint32_t o = 0; o < object_count_; ++o)
    best = std::max(best, object_degree(o));
  return best;
}

DatasetStats BipartiteDataset::stats() const {
  const double q = static_cast<double>(edge_count());
  return DatasetStats{
      user_count_, object_count_, edge_count(),
      user_count_ == 0 ? 0.0 : q / static_cast<double>(user_count_),
      object_count_ == 0 ? 0.0 : q / static_cast<double>(object_count_)};
}

IngestResult ingest(const std::filesystem::path& path,
                    std::optional<double> min_rating) {
  std::ifstream in = open_input(path);

  IngestResult result;
  std::unordered_map<std::string, std::uint32_t> user_index;
  std::unordered_map<std::string, std::uint32_t> object_index;
  std::vector<Edge> edges;

  // Dedup via hash set of packed pairs; ids are re-indexed on the fly so
  // the pair fits one 64-bit key.
  std::unordered_map<std::uint64_t, char> seen_pairs;

  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto tokens = tokenize(line);
    if (tokens.empty()) continue;
    if (tokens[0][0] == '#') continue;
    if (tokens.size() < 2)
      fail(path.string() + ":" + std::to_string(line_no) +
           ": expected at least user and object fields");

    if (min_rating.has_value()) {
      if (tokens.size() < 3)
        fail(path.string() + ":" + std::to_string(line_no) +
             ": rating field required by min-rating filter");
      double rating = 0.0;
      const std::string rating_str(tokens[2]);
      std::size_t consumed = 0;
      try {
        rating = std::stod(rating_str, &consumed);
      } catch (const std::exception&) {
        consumed = 0;
      }
      if (consumed != rating_str.size())
        fail(path.string() + ":" + std::to_string(line_no) +
             ": unparseable rating '" + rating_str + "'");
      if (rating < *min_rating) continue;
    }

    const auto user_it =
        user_index.emplace(std::string(tokens[0]),
                           static_cast<std::uint32_t>(user_index.size()));
    const auto object_it =
        object_index.emplace(std::string(tokens[1]),
                             static_cast<std::uint32_t>(object_index.size()));
    const std::uint32_t u = user_it.first->second;
    const std::uint32_t o = object_it.first->second;
    if (user_it.second) result.user_ids.push_back(user_it.first->first);
    if (object_it.second) result.object_ids.push_back(object_it.first->first);

    const std::uint64_t key = (static_cast<std::uint64_t>(u) << 32) | o;
    if (seen_pairs.emplace(key, 1).second) edges.push_back({u, o});
  }

  if (edges.empty())
    fail(path.string() + ": no interactions found (empty dataset)");

  result.dataset = BipartiteDataset::from_edges(
      result.user_ids.size(), result.object_ids.size(), std::move(edges));
  return result;
}

SplitPair split(const BipartiteDataset& dataset, std::uint64_t seed,
                double train_fraction) {
  if (!(train_fraction > 0.0 && train_fraction < 1.0))
    throw std::invalid_argument("train_fraction must lie in (0, 1)");
  const std::size_t q = dataset.edge_count();
  if (q == 0) throw std::invalid_argument("cannot split an empty dataset");

  std::vector<Edge> shuffled = dataset.edges();
  std::mt19937_64 rng(seed);
  for (std::size_t i = q - 1; i > 0; --i) {
    const std::size_t j = static_cast<std::size_t>(bounded_draw(rng, i + 1));
    std::swap(shuffled[i], shuffled[j]);
  }

  const auto train_count = static_cast<std::size_t>(
      std::llround(train_fraction * static_cast<double>(q)));

  SplitPair result;
  result.seed = seed;
  result.train_fraction = train_fraction;
  result.training = BipartiteDataset::from_edges(
      dataset.user_count(), dataset.object_count(),
      {shuffled.begin(), shuffled.begin() + train_count});
  result.probe.assign(shuffled.begin() + train_count, shuffled.end());
  std::sort(result.probe.begin(), result.probe.end());
  return result;
}

namespace {

void write_id_map(const std::filesystem::path& path,
                  const std::vector<std::string>& ids) {
  std::ofstream out = open_output(path);
  for (const auto& id : ids) out << id << '\n';
}

std::vector<std::string> read_id_map(const std::filesystem::path& path) {
  std::ifstream in = open_input(path);
  std::vector<std::string> ids;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    ids.push_back(line);
  }
  return ids;
}

void write_edges(const std::filesystem::path& path,
                 std::span<const Edge> edges) {
  std::ofstream out = open_output(path);
  for (const Edge& e : edges) out << e.user << '\t' << e.object << '\n';
}

std::vector<Edge> read_edges(const std::filesystem::path& path) {
  std::ifstream in = open_input(path);
  std::vector<Edge> edges;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto tokens = tokenize(line);
    if (tokens.empty()) continue;
    if (tokens.size() < 2)
      fail(path.string() + ":" + std::to_string(line_no) + ": bad edge line");
    edges.push_back({static_cast<std::uint32_t>(std::stoul(std::string(tokens[0]))),
                     static_cast<std::uint32_t>(std::stoul(std::string(tokens[1])))});
  }
  return edges;
}

json read_json(const std::filesystem::path& path) {
  std::ifstream in = open_input(path);
  json j;
  in >> j;
  return j;
}

}  // namespace

void save_dataset(const IngestResult& data, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  json meta{{"users", data.dataset.user_count()},
            {"objects", data.dataset.object_count()},
            {"edges", data.dataset.edge_count()}};
  open_output(dir / "meta.json") << meta.dump(2) << '\n';
  write_edges(dir / "interactions.tsv", data.dataset.edges());
  write_id_map(dir / "users.tsv", data.user_ids);
  write_id_map(dir / "objects.tsv", data.object_ids);
}

IngestResult load_dataset(const std::filesystem::path& dir) {
  const json meta = read_json(dir / "meta.json");
  IngestResult result;
  result.user_ids = read_id_map(dir / "users.tsv");
  result.object_ids = read_id_map(dir / "objects.tsv");
  if (result.user_ids.size() != meta.at("users").get<std::size_t>() ||
      result.object_ids.size() != meta.at("objects").get<std::size_t>())
    fail(dir.string() + ": id maps disagree with meta.json");
  result.dataset = BipartiteDataset::from_edges(
      result.user_ids.size(), result.object_ids.size(),
      read_edges(dir / "interactions.tsv"));
  if (result.dataset.edge_count() != meta.at("edges").get<std::size_t>())
    fail(dir.string() + ": edge count disagrees with meta.json");
  return result;
}

void save_split(const SplitPair& split, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  json meta{{"seed", split.seed},
            {"train_fraction", split.train_fraction},
            {"users", split.training.user_count()},
            {"objects", split.training.object_count()},
            {"train_edges", split.training.edge_count()},
            {"probe_edges", split.probe.size()}};
  open_output(dir / "split.json") << meta.dump(2) << '\n';
  write_edges(dir / "train.tsv", split.training.edges());
  write_edges(dir / "probe.tsv", split.probe);
}

SplitPair load_split(const std::filesystem::path& dir) {
  const json meta = read_json(dir / "split.json");
  SplitPair result;
  result.seed = meta.at("seed").get<std::uint64_t>();
  result.train_fraction = meta.at("train_fraction").get<double>();
  result.training = BipartiteDataset::from_edges(
      meta.at("users").get<std::size_t>(), meta.at("objects").get<std::size_t>(),
      read_edges(dir / "train.tsv"));
  result.probe = read_edges(dir / "probe.tsv");
  std::sort(result.probe.begin(), result.probe.end());
  if (result.training.edge_count() != meta.at("train_edges").get<std::size_t>() ||
      result.probe.size() != meta.at("probe_edges").get<std::size_t>())
    fail(dir.string() + ": edge files disagree with split.json");
  return result;
}

bool is_dataset_dir(const std::filesystem::path& dir) {
  return std::filesystem::exists(dir / "meta.json");
}

bool is_split_dir(const std::filesystem::path& dir) {
  return std::filesystem::exists(dir / "split.json");
}

}  // namespace era
