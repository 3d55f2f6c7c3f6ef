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

#include "patmine/clustering.h"

#include <algorithm>
#include <numeric>

#include "patmine/error.h"

namespace patmine {

std::size_t Levenshtein(std::string_view a, std::string_view b) {
  std::vector<std::size_t> prev(b.size() + 1);
  std::vector<std::size_t> cur(b.size() + 1);
  std::iota(prev.begin(), prev.end(), 0);
  for (std::size_t i = 1; i <= a.size(); ++i) {
    cur[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1,
                         prev[j - 1] + (a[i - 1] != b[j - 1] ? 1 : 0)});
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

std::size_t BoundedLevenshtein(std::string_view a, std::string_view b,
                               std::size_t bound) {
  const std::size_t n = a.size();
  const std::size_t m = b.size();
  const std::size_t over = bound + 1;
  if ((n > m ? n - m : m - n) > bound) return over;

  std::vector<std::size_t> prev(m + 1, over);
  std::vector<std::size_t> cur(m + 1, over);
  for (std::size_t j = 0; j <= std::min(m, bound); ++j) prev[j] = j;

  for (std::size_t i = 1; i <= n; ++i) {
    const std::size_t lo = i > bound ? i - bound : 1;
    const std::size_t hi = std::min(m, i + bound);
    cur[lo - 1] = (lo == 1 && i <= bound) ? i : over;
    std::size_t row_min = cur[lo - 1];
    for (std::size_t j = lo; j <= hi; ++j) {
      std::size_t v = std::min({prev[j] + 1, cur[j - 1] + 1,
                                prev[j - 1] + (a[i - 1] != b[j - 1] ? 1 : 0)});
      cur[j] = std::min(v, over);
      row_min = std::min(row_min, cur[j]);
    }
    if (hi < m) cur[hi + 1] = over;
    if (row_min > bound) return over;
    std::swap(prev, cur);
  }
  return std::min(prev[m], over);
}

namespace {

struct DisjointSets {
  explicit DisjointSets(std::size_t n) : parent(n) {
    std::iota(parent.begin(), parent.end(), 0);
  }
  std::size_t Find(std::size_t x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  }
  void Union(std::size_t x, std::size_t y) {
    x = Find(x);
    y = Find(y);
    if (x != y) parent[std::max(x, y)] = std::min(x, y);
  }
  std::vector<std::size_t> parent;
};

}  // namespace

Clustering::Clustering(std::vector<Cluster> clusters)
    : clusters_(std::move(clusters)) {
  for (std::size_t i = 0; i < clusters_.size(); ++i) {
    for (const std::string &m : clusters_[i].members) cluster_of_[m] = i;
  }
}

const Cluster &Clustering::ClusterOf(const std::string &key) const {
  auto it = cluster_of_.find(key);
  if (it == cluster_of_.end()) {
    throw NotFoundError("key not clustered: " + key);
  }
  return clusters_[it->second];
}

Clustering ClusterSimplifications(
    const std::vector<std::string> &keys, std::size_t radius,
    const std::map<std::string, std::size_t> &pair_counts) {
  std::vector<std::string> unique = keys;
  std::sort(unique.begin(), unique.end());
  unique.erase(std::unique(unique.begin(), unique.end()), unique.end());
  const std::size_t n = unique.size();

  // Sorting by length lets the inner loop stop at the first key that is too
  // long to be within `radius`.
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    return unique[x].size() < unique[y].size();
  });

  DisjointSets sets(n);
  for (std::size_t oi = 0; oi < n; ++oi) {
    const std::string &a = unique[order[oi]];
    for (std::size_t oj = oi + 1; oj < n; ++oj) {
      const std::string &b = unique[order[oj]];
      if (b.size() - a.size() > radius) break;
      if (sets.Find(order[oi]) == sets.Find(order[oj])) continue;
      if (BoundedLevenshtein(a, b, radius) <= radius) {
        sets.Union(order[oi], order[oj]);
      }
    }
  }

  // Roots are the smallest index in each set, i.e. the smallest member, so
  // grouping in index order yields clusters ordered by smallest member.
  std::map<std::size_t, std::vector<std::string>> groups;
  for (std::size_t i = 0; i < n; ++i) groups[sets.Find(i)].push_back(unique[i]);

  auto count_of = [&](const std::string &k) -> std::size_t {
    auto it = pair_counts.find(k);
    return it == pair_counts.end() ? 0 : it->second;
  };
  std::vector<Cluster> clusters;
  for (auto &[root, members] : groups) {
    Cluster c;
    c.id = clusters.size();
    c.members = std::move(members);
    c.representative = c.members.front();
    for (const std::string &m : c.members) {
      if (count_of(m) > count_of(c.representative)) c.representative = m;
    }
    clusters.push_back(std::move(c));
  }
  return Clustering(std::move(clusters));
}

std::set<std::string> ExpandSelection(const std::set<std::string> &selected,
                                      const Clustering &clustering) {
  std::set<std::string> out;
  for (const std::string &key : selected) {
    const Cluster &c = clustering.ClusterOf(key);
    out.insert(c.members.begin(), c.members.end());
  }
  return out;
}

}  // namespace patmine
