// Copyright 2026 The patmine Authors.
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

// Groups quasi-identical simplifications: connected components of the graph
// linking keys within a small edit distance of each other.

#ifndef PATMINE_CLUSTERING_H_
#define PATMINE_CLUSTERING_H_

#include <cstddef>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace patmine {

// Unit-cost character edit distance.
std::size_t Levenshtein(std::string_view a, std::string_view b);

// Edit distance if it is <= bound, otherwise bound + 1. Only a diagonal band
// of width 2 * bound + 1 is evaluated.
std::size_t BoundedLevenshtein(std::string_view a, std::string_view b,
                               std::size_t bound);

struct Cluster {
  std::size_t id = 0;
  std::vector<std::string> members;  // sorted
  std::string representative;

  bool operator==(const Cluster &) const = default;
};

class Clustering {
 public:
  Clustering() = default;
  explicit Clustering(std::vector<Cluster> clusters);

  const std::vector<Cluster> &clusters() const { return clusters_; }
  bool Contains(const std::string &key) const {
    return cluster_of_.count(key) > 0;
  }
  // Throws NotFoundError for keys that were not clustered.
  const Cluster &ClusterOf(const std::string &key) const;

 private:
  std::vector<Cluster> clusters_;
  std::map<std::string, std::size_t> cluster_of_;
};

// Connected components of the distance <= radius graph. Representatives have
// the largest pair count (missing counts are 0), ties go to the
// lexicographically smallest key. Cluster ids follow the order of each
// cluster's smallest member.
Clustering ClusterSimplifications(
    const std::vector<std::string> &keys, std::size_t radius = 2,
    const std::map<std::string, std::size_t> &pair_counts = {});

// Union of every cluster that intersects `selected`. Throws NotFoundError
// naming the first key that was not clustered.
std::set<std::string> ExpandSelection(const std::set<std::string> &selected,
                                      const Clustering &clustering);

}  // namespace patmine

#endif  // PATMINE_CLUSTERING_H_
