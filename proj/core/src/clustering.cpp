#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>

#include "prony/solvers.hpp"

namespace prony {

namespace {

struct Cluster {
  std::vector<int> members;
  Complex mean;
};

// Can clusters of the given sizes be merged into groups whose sizes are
// exactly `targets`? Small instances only; plain backtracking.
bool packable(std::vector<int> sizes, std::vector<int> capacity) {
  std::sort(sizes.begin(), sizes.end(), std::greater<>());
  std::function<bool(std::size_t)> place = [&](std::size_t k) {
    if (k == sizes.size()) {
      return std::all_of(capacity.begin(), capacity.end(),
                         [](int c) { return c == 0; });
    }
    for (std::size_t b = 0; b < capacity.size(); ++b) {
      if (capacity[b] < sizes[k]) continue;
      // Bins with equal remaining capacity are interchangeable.
      bool seen = false;
      for (std::size_t e = 0; e < b; ++e) seen |= capacity[e] == capacity[b];
      if (seen) continue;
      capacity[b] -= sizes[k];
      if (place(k + 1)) return true;
      capacity[b] += sizes[k];
    }
    return false;
  };
  return place(0);
}

std::vector<int> sizes_after_merge(const std::vector<Cluster>& clusters,
                                   std::size_t a, std::size_t b) {
  std::vector<int> sizes;
  for (std::size_t c = 0; c < clusters.size(); ++c) {
    if (c == b) continue;
    int size = static_cast<int>(clusters[c].members.size());
    if (c == a) size += static_cast<int>(clusters[b].members.size());
    sizes.push_back(size);
  }
  return sizes;
}

}  // namespace

RootClusters cluster_roots(std::span<const Complex> roots,
                           std::span<const int> multiplicities, double tol) {
  const int total = total_multiplicity(multiplicities);
  if (static_cast<int>(roots.size()) != total) {
    throw InputError("cluster_roots: " + std::to_string(roots.size()) +
                     " roots for total multiplicity " + std::to_string(total));
  }
  for (int l : multiplicities) {
    if (l < 1) throw InputError("multiplicities must be positive");
  }
  const std::vector<int> targets(multiplicities.begin(), multiplicities.end());

  std::vector<Cluster> clusters;
  for (std::size_t r = 0; r < roots.size(); ++r) {
    clusters.push_back({{static_cast<int>(r)}, roots[r]});
  }

  while (clusters.size() > targets.size()) {
    struct Candidate {
      double distance;
      std::size_t a, b;
    };
    std::vector<Candidate> candidates;
    for (std::size_t a = 0; a < clusters.size(); ++a) {
      for (std::size_t b = a + 1; b < clusters.size(); ++b) {
        candidates.push_back({std::abs(clusters[a].mean - clusters[b].mean), a, b});
      }
    }
    std::stable_sort(candidates.begin(), candidates.end(),
                     [](const Candidate& x, const Candidate& y) {
                       return x.distance < y.distance;
                     });
    bool merged = false;
    for (const auto& c : candidates) {
      if (!packable(sizes_after_merge(clusters, c.a, c.b), targets)) continue;
      Cluster& into = clusters[c.a];
      const Cluster& from = clusters[c.b];
      into.members.insert(into.members.end(), from.members.begin(),
                          from.members.end());
      Complex sum(0.0, 0.0);
      for (int r : into.members) sum += roots[r];
      into.mean = sum / static_cast<double>(into.members.size());
      clusters.erase(clusters.begin() + static_cast<std::ptrdiff_t>(c.b));
      merged = true;
      break;
    }
    if (!merged) {
      std::vector<std::vector<int>> groups;
      for (const auto& c : clusters) groups.push_back(c.members);
      throw ClusteringError("cannot form groups of the prescribed sizes",
                            std::move(groups));
    }
  }

  // Sizes now match the targets as a multiset; assign in multiplicity order.
  RootClusters result;
  std::vector<bool> used(clusters.size(), false);
  for (int l : targets) {
    for (std::size_t c = 0; c < clusters.size(); ++c) {
      if (used[c] || static_cast<int>(clusters[c].members.size()) != l) continue;
      used[c] = true;
      result.nodes.push_back(clusters[c].mean);
      result.groups.push_back(clusters[c].members);
      for (int r : clusters[c].members) {
        result.max_spread =
            std::max(result.max_spread, std::abs(roots[r] - clusters[c].mean));
      }
      break;
    }
  }
  if (result.max_spread > tol) {
    throw ClusteringError("root cluster spread " +
                              std::to_string(result.max_spread) +
                              " exceeds tolerance " + std::to_string(tol),
                          result.groups);
  }
  return result;
}

}  // namespace prony
