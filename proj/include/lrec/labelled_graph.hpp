#pragma once

#include "lrec/structure.hpp"

#include <cstdint>
#include <map>
#include <set>
#include <vector>

namespace lrec {

using Vertex = uint64_t;

// Set of naturals given either by its members or by its complement.
struct Label {
  std::set<uint64_t> values;
  bool complement = false;

  static Label empty() { return {}; }
  static Label of(std::initializer_list<uint64_t> xs) { return {std::set<uint64_t>(xs), false}; }
  static Label all_but(std::initializer_list<uint64_t> xs) { return {std::set<uint64_t>(xs), true}; }
  bool contains(uint64_t c) const { return (values.count(c) != 0) != complement; }
  bool operator==(const Label&) const = default;
};

// Recursion graph with labels. Out-neighbour lists are sorted ascending,
// which is the fixed order used to traverse them.
class LabelledGraph {
 public:
  virtual ~LabelledGraph() = default;
  virtual Vertex num_vertices() const = 0;
  virtual const std::vector<Vertex>& out(Vertex v) = 0;
  virtual uint64_t indegree(Vertex v) = 0;
  virtual bool in_label(Vertex v, uint64_t c) = 0;
};

class ExplicitGraph : public LabelledGraph {
 public:
  explicit ExplicitGraph(Vertex n) : out_(n), indeg_(n, 0), labels_(n) {}

  void add_edge(Vertex a, Vertex b);
  void set_label(Vertex v, Label l) { labels_[v] = std::move(l); }
  const Label& label(Vertex v) const { return labels_[v]; }

  Vertex num_vertices() const override { return out_.size(); }
  const std::vector<Vertex>& out(Vertex v) override { return out_[v]; }
  uint64_t indegree(Vertex v) override { return indeg_[v]; }
  bool in_label(Vertex v, uint64_t c) override { return labels_[v].contains(c); }

 private:
  std::vector<std::vector<Vertex>> out_;
  std::vector<uint64_t> indeg_;
  std::vector<Label> labels_;
};

// (v, ell) in X iff ell > 0 and the number of out-neighbours b with
// (b, floor((ell-1)/|E b|)) in X lies in C(v). Memoised on the exact pair.
class MemoEngine {
 public:
  explicit MemoEngine(LabelledGraph& g) : g_(g) {}
  bool member(Vertex v, const Nat& ell);
  size_t memo_size() const { return memo_.size(); }

 private:
  LabelledGraph& g_;
  std::map<std::pair<Vertex, Nat>, bool> memo_;
};

struct StreamStats {
  uint64_t tree_size = 0;      // |W|
  int max_counter_bits = 0;    // largest sum of l_v(i) over a root path
  int budget_bits = 0;         // floor(3 log2 |W|)
};

struct CounterBudgetExceeded : std::logic_error {
  using std::logic_error::logic_error;
};

// Unravels the graph into the tree of resource-annotated paths, then decides
// the root by a depth-first pass that keeps one pair of bounded counters per
// level, visiting larger subtrees first. Throws CounterBudgetExceeded if the
// counters on a root path would need more than 3 log2 |W| bits.
bool stream_member(LabelledGraph& g, Vertex v, const Nat& ell, StreamStats* stats = nullptr,
                   uint64_t max_tree_size = 50'000'000);

}  // namespace lrec
