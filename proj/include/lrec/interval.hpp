#pragma once

#include "lrec/structure.hpp"
#include "lrec/tree.hpp"

#include <set>
#include <string>
#include <utility>
#include <vector>

namespace lrec {

using VertexSet = std::vector<int>;  // sorted, duplicate free

class UGraph {
 public:
  explicit UGraph(int n = 0);

  int size() const { return n_; }
  void add_edge(int u, int v);
  bool adjacent(int u, int v) const { return adj_[u][v] != 0; }
  VertexSet closed_neighbourhood(int v) const;
  int degree(int v) const;

  // Vertex i of the result is vs[i].
  UGraph induced(const VertexSet& vs) const;
  bool is_clique(const VertexSet& vs) const;
  bool is_module(const VertexSet& vs) const;
  // Ordered by smallest member.
  std::vector<VertexSet> components() const;
  VertexSet apices() const;
  std::set<std::pair<int, int>> edges() const;  // u < v

 private:
  int n_;
  std::vector<std::vector<char>> adj_;
};

// Binary relation E, which must be symmetric and loop free.
UGraph graph_from_structure(const Structure& s);
Structure graph_to_structure(const UGraph& g);
UGraph graph_from_canon(const CanonEdges& c);

struct NotInterval : DomainError {
  std::string certificate;
  explicit NotInterval(std::string why)
      : DomainError("not an interval graph: " + why), certificate(std::move(why)) {}
};

struct MaxClique {
  VertexSet vertices;
  std::pair<int, int> witness;  // N^c(u) & N^c(v), least u*n+v
  bool operator==(const MaxClique&) const = default;
};

// Cliques of the form N^c(u) & N^c(v) that are inclusion maximal among such,
// sorted by vertex set.
std::vector<MaxClique> max_cliques(const UGraph& g);
int span(const std::vector<MaxClique>& cliques, int v);
std::vector<int> spans(const UGraph& g, const std::vector<MaxClique>& cliques);

struct CliquePreorder {
  int m = 0;
  std::vector<std::vector<char>> less;  // less[c][d]: c precedes d
  bool asymmetric = false;
  bool strict_weak = false;
  // Classes of mutually incomparable cliques, in order when strict_weak.
  std::vector<std::vector<int>> classes;

  bool precedes(int c, int d) const { return less[c][d] != 0; }
};

// Least relation containing end < C for all C != end and closed under the
// two derivation rules; computed by forward search over clique pairs.
CliquePreorder clique_preorder(const std::vector<MaxClique>& cliques, int end);
std::vector<int> possible_ends(const std::vector<MaxClique>& cliques);

// A quotient of a graph with linearly ordered max cliques.
struct OrderedQuotient {
  UGraph graph;
  std::vector<VertexSet> classes;  // quotient vertex -> vertices of the source
  std::vector<int> class_of;
  std::vector<VertexSet> cliques;  // max cliques of graph, in order
};

// G_M: merges S_C for every incomparability class C with |C| > 1.
OrderedQuotient collapse_incomparables(const UGraph& g, const std::vector<MaxClique>& cliques, int end);

struct ModularPartition {
  std::vector<std::vector<int>> cells;  // clique indices
  std::vector<VertexSet> modules;       // W_G, ordered by smallest member
  std::vector<int> module_of;
};

// Connected apex-free graphs only; computed through the double collapse.
ModularPartition modular_partition(const UGraph& g);
// W_G in every case: components when disconnected, apex singletons plus the
// rest when there is an apex, singletons for a single vertex.
std::vector<VertexSet> vertex_modules(const UGraph& g);

// L_G with its max cliques in one of their linear orders. Connected graphs.
OrderedQuotient l_graph(const UGraph& g);

struct OrderedCanon {
  CanonEdges canon;
  std::vector<int> number;  // vertex of L -> number in canon
  // Per clique of L (input order): position under the distinguished order,
  // then under its reverse when there are two orders.
  std::vector<std::vector<int>> positions;
  bool reversed = false;   // distinguished order is the reverse of the input
  bool symmetric = false;  // both orders give the same interval model
};

// Renders both clique orders as interval models, keeps the smaller.
OrderedCanon canon_L(const OrderedQuotient& l);

struct DecompositionComponent {
  int clique;  // index into max_cliques(g)
  int n;
  VertexSet vertices;  // V_{M,n}
};

// Component of G[span <= n] meeting the clique; empty if there is none.
VertexSet span_component(const UGraph& g, const std::vector<MaxClique>& cliques, const std::vector<int>& span,
                         int clique, int n);
// The pairs (M,n) satisfying both selection properties.
std::vector<DecompositionComponent> decomposition_components(const UGraph& g);

enum class NodeKind { Root, Component, Arrangement, Module };

struct ModularTreeNode {
  NodeKind kind;
  int parent = -1;
  std::vector<int> children;
  VertexSet vertices;  // root: V; component: V_{M,n}; module: W; arrangement: its component's
  std::vector<std::pair<int, int>> colour;  // sorted tuples of L_a
  // Component: L and its canon. Arrangement: orders held (0 distinguished,
  // 1 reverse). Module: its vertex of L and clique positions.
  OrderedQuotient l;
  OrderedCanon kl;
  std::vector<int> orders;
  int l_vertex = -1;
  std::vector<int> positions;
};

struct ColouredTree {
  std::vector<ModularTreeNode> nodes;  // node 0 is the root s_V

  DirectedTree shape() const;
  Colouring colour_ranks() const;  // rank of colour under lexicographic order
};

ColouredTree build_modular_tree(const UGraph& g);

// -1, 0, 1: colours compared lexicographically, ties broken by the coloured
// profile order of the subtrees. Both trees are the same here.
int coloured_tree_preorder(const ColouredTree& t, int a, int b, bool use_gadgets = false);

struct IntervalModel {
  std::vector<VertexSet> cliques;             // max cliques in a consecutive order
  std::vector<std::pair<int, int>> interval;  // per vertex, 1-based clique positions
};

// Throws NotInterval with the failing check.
IntervalModel interval_model(const UGraph& g);
bool is_interval_graph(const UGraph& g);
std::string format_model(const IntervalModel& m, const std::vector<std::string>& names = {});

CanonEdges interval_canon(const UGraph& g);

}  // namespace lrec
