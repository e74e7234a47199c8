#pragma once

#include "lrec/tree.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <set>

namespace testutil {

// One representative per isomorphism class of rooted trees on n vertices,
// with vertex ids shuffled so that they are not in preorder.
inline std::vector<lrec::DirectedTree> all_trees(int n, unsigned seed = 1) {
  std::vector<lrec::DirectedTree> out;
  std::set<std::string> seen;
  std::vector<int> parent(n, -1);
  std::mt19937 rng(seed + n);
  auto rec = [&](auto&& self, int i) -> void {
    if (i == n) {
      lrec::DirectedTree t(parent);
      if (!seen.insert(lrec::tree_canon_oracle(t)).second) return;
      std::vector<int> perm(n);
      std::iota(perm.begin(), perm.end(), 0);
      std::shuffle(perm.begin(), perm.end(), rng);
      std::vector<int> q(n);
      for (int v = 0; v < n; ++v) q[perm[v]] = parent[v] < 0 ? -1 : perm[parent[v]];
      out.emplace_back(q);
      return;
    }
    for (int p = 0; p < i; ++p) {
      parent[i] = p;
      self(self, i + 1);
    }
  };
  rec(rec, 1);
  return out;
}

inline lrec::DirectedTree random_tree(std::mt19937& rng, int n) {
  std::vector<int> parent(n, -1), perm(n);
  for (int i = 1; i < n; ++i) parent[i] = static_cast<int>(rng() % i);
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), rng);
  std::vector<int> q(n);
  for (int v = 0; v < n; ++v) q[perm[v]] = parent[v] < 0 ? -1 : perm[parent[v]];
  return lrec::DirectedTree(q);
}

inline lrec::DirectedTree relabel(const lrec::DirectedTree& t, std::mt19937& rng) {
  int n = t.size();
  std::vector<int> perm(n), q(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), rng);
  for (int v = 0; v < n; ++v) q[perm[v]] = t.parent(v) < 0 ? -1 : perm[t.parent(v)];
  return lrec::DirectedTree(q);
}

// Tree on [1, n] given by canonical edges, as a 0-based parent array.
inline lrec::DirectedTree tree_of_canon(const lrec::CanonEdges& c) {
  std::vector<int> parent(c.n, -1);
  for (auto [a, b] : c.edges) {
    if (parent[b - 1] != -1) throw lrec::DomainError("canon vertex with two parents");
    parent[b - 1] = a - 1;
  }
  return lrec::DirectedTree(parent);
}

}  // namespace testutil
