#include "lrec/labelled_graph.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>

namespace lrec {

void ExplicitGraph::add_edge(Vertex a, Vertex b) {
  auto& o = out_[a];
  auto it = std::lower_bound(o.begin(), o.end(), b);
  if (it != o.end() && *it == b) return;
  o.insert(it, b);
  ++indeg_[b];
}

bool MemoEngine::member(Vertex v, const Nat& ell) {
  if (ell == 0) return false;
  if (auto it = memo_.find({v, ell}); it != memo_.end()) return it->second;
  struct Frame {
    Vertex v;
    Nat ell;
    size_t idx = 0;
    uint64_t count = 0;
  };
  std::vector<Frame> stack;
  stack.push_back({v, ell});
  bool result = false;
  while (!stack.empty()) {
    Frame& f = stack.back();
    const auto& succ = g_.out(f.v);
    if (f.idx < succ.size()) {
      Vertex b = succ[f.idx];
      Nat lb = (f.ell - 1) / g_.indegree(b);
      if (lb == 0) {
        ++f.idx;
        continue;
      }
      if (auto it = memo_.find({b, lb}); it != memo_.end()) {
        f.count += it->second;
        ++f.idx;
        continue;
      }
      stack.push_back({b, std::move(lb)});
      continue;
    }
    result = g_.in_label(f.v, f.count);
    memo_.emplace(std::make_pair(f.v, f.ell), result);
    stack.pop_back();
    if (!stack.empty()) {
      stack.back().count += result;
      ++stack.back().idx;
    }
  }
  return result;
}

namespace {

int ceil_log2(uint64_t x) { return x <= 1 ? 0 : std::bit_width(x - 1); }

struct Node {
  Vertex v;
  Nat ell;
  std::vector<uint32_t> children;
};

}  // namespace

bool stream_member(LabelledGraph& g, Vertex root, const Nat& ell, StreamStats* stats, uint64_t max_tree_size) {
  // Unravelling. Nodes are created in preorder, so parents precede children.
  std::vector<Node> tree;
  tree.push_back({root, ell, {}});
  std::vector<uint32_t> todo{0};
  while (!todo.empty()) {
    uint32_t id = todo.back();
    todo.pop_back();
    if (tree[id].ell == 0) continue;  // fail leaf
    const auto& succ = g.out(tree[id].v);
    for (Vertex b : succ) {
      if (tree.size() >= max_tree_size) throw std::length_error("unravelling exceeds the node limit");
      Nat lb = (tree[id].ell - 1) / g.indegree(b);
      tree[id].children.push_back(static_cast<uint32_t>(tree.size()));
      tree.push_back({b, std::move(lb), {}});
    }
    for (auto it = tree[id].children.rbegin(); it != tree[id].children.rend(); ++it) todo.push_back(*it);
  }

  const uint64_t w = tree.size();
  std::vector<uint64_t> size(w, 1);
  for (uint64_t i = w; i-- > 0;)
    for (uint32_t c : tree[i].children) size[i] += size[c];
  for (auto& n : tree)
    std::stable_sort(n.children.begin(), n.children.end(), [&](uint32_t a, uint32_t b) {
      if (size[a] != size[b]) return size[a] > size[b];
      return tree[a].v < tree[b].v;
    });

  Nat w3 = Nat(w) * w * w;
  const int budget = static_cast<int>(boost::multiprecision::msb(w3));  // floor(3 log2 |W|)
  const int top_bits = ceil_log2(w);

  struct Level {
    uint32_t node;
    uint64_t j = 0, t = 0, c = 0;
  };
  std::vector<Level> path{{0}};
  int prefix = 0, max_bits = top_bits;
  bool verdict = false;
  while (true) {
    Level& cur = path.back();
    const Node& n = tree[cur.node];
    if (cur.t < n.children.size()) {
      cur.j = cur.t + 1;
      int bits = ceil_log2(cur.j);
      if (cur.t > (uint64_t{1} << bits) - 1 || cur.c > cur.t)
        throw CounterBudgetExceeded("counter overflows its field");
      prefix += bits;
      max_bits = std::max(max_bits, prefix + top_bits);
      if (prefix + top_bits > budget) throw CounterBudgetExceeded("counter budget exceeded on a root path");
      path.push_back({n.children[cur.j - 1]});
      continue;
    }
    if (top_bits < 64 && cur.t > (uint64_t{1} << top_bits) - 1) throw CounterBudgetExceeded("counter overflows its field");
    bool succeeds = n.ell != 0 && g.in_label(n.v, cur.c);
    if (path.size() == 1) {
      verdict = succeeds;
      break;
    }
    path.pop_back();
    Level& parent = path.back();
    prefix -= ceil_log2(parent.j);
    ++parent.t;
    parent.c += succeeds;
  }
  if (stats) *stats = {w, max_bits, budget};
  return verdict;
}

}  // namespace lrec
