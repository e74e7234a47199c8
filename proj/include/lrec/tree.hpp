#pragma once

#include "lrec/labelled_graph.hpp"
#include "lrec/structure.hpp"

#include <functional>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

namespace lrec {

class DirectedTree {
 public:
  // parent[v] == -1 marks the root.
  explicit DirectedTree(std::vector<int> parent);

  int size() const { return static_cast<int>(parent_.size()); }
  int root() const { return root_; }
  int parent(int v) const { return parent_[v]; }
  const std::vector<int>& parents() const { return parent_; }
  const std::vector<int>& children(int v) const { return children_[v]; }
  int subtree_size(int v) const { return size_[v]; }
  int children_of_size(int v, int s) const;
  // (size(v), #_1(v), ..., #_{size(v)-1}(v))
  std::vector<int> profile(int v) const;

 private:
  std::vector<int> parent_;
  std::vector<std::vector<int>> children_;
  std::vector<int> size_;
  int root_ = -1;
};

// Relation E read as parent -> child.
DirectedTree tree_from_structure(const Structure& s);
Structure tree_to_structure(const DirectedTree& t);
// One line of whitespace-separated parents, -1 for the root: "-1 0 0 1".
DirectedTree parse_parent_array(const std::string& line);
std::string format_parent_array(const DirectedTree& t);

// Total preorder on vertices given by integer ranks; empty means uncoloured.
using Colouring = std::vector<int>;

struct GadgetVertex {
  int type, a, b, c, d, k;
  bool operator==(const GadgetVertex&) const = default;
};

struct TreeTooSmall : std::invalid_argument {
  TreeTooSmall() : std::invalid_argument("gadgets need at least four vertices") {}
};

// Common base of the two decision-tree gadgets over N(T) x V(T)^4 x N(T).
// Tuples outside the described shapes have no edges and an empty label.
class TreeGadget : public LabelledGraph {
 public:
  TreeGadget(const DirectedTree& t, Colouring colours);

  Vertex num_vertices() const override;
  const std::vector<Vertex>& out(Vertex x) override;
  uint64_t indegree(Vertex x) override;
  bool in_label(Vertex x, uint64_t c) override { return label(x).contains(c); }

  Vertex encode(const GadgetVertex& g) const;
  GadgetVertex decode(Vertex x) const;
  Vertex pair_vertex(int v, int w) const { return encode({0, v, w, v, w, 0}); }
  virtual Label label(Vertex x) = 0;

 protected:
  virtual std::vector<GadgetVertex> successors(const GadgetVertex& g) = 0;
  virtual std::vector<GadgetVertex> predecessor_candidates(const GadgetVertex& g) = 0;
  bool is_pair(const GadgetVertex& g) const { return g.type == 0 && g.c == g.a && g.d == g.b && g.k == 0; }
  bool same_colour(int v, int w) const { return colours_.empty() || colours_[v] == colours_[w]; }
  std::vector<int> children_sized(int v, int s) const;

  const DirectedTree& t_;
  Colouring colours_;
  uint64_t n_;

 private:
  std::unordered_map<Vertex, std::vector<Vertex>> out_;
  std::unordered_map<Vertex, uint64_t> indeg_;
};

// Vertex a_{v,w} is in X for large enough resources iff T_v and T_w are
// isomorphic (respecting colours when given).
class IsoGadget : public TreeGadget {
 public:
  using TreeGadget::TreeGadget;
  Label label(Vertex x) override;
  bool easy(int v, int w) const;

 protected:
  std::vector<GadgetVertex> successors(const GadgetVertex& g) override;
  std::vector<GadgetVertex> predecessor_candidates(const GadgetVertex& g) override;

 private:
  bool valid(const GadgetVertex& g) const;
};

// Vertex a_{v,w} stands for v < w in the profile order. Sibling
// multiplicities are taken from the isomorphism predicate supplied.
class OrderGadget : public TreeGadget {
 public:
  OrderGadget(const DirectedTree& t, Colouring colours, std::function<bool(int, int)> iso);
  Label label(Vertex x) override;
  // -1, 0, 1 comparing colour, then the (coloured) profile
  int key_compare(int v, int w) const;
  bool good(int v, int w, int child) const;

 protected:
  std::vector<GadgetVertex> successors(const GadgetVertex& g) override;
  std::vector<GadgetVertex> predecessor_candidates(const GadgetVertex& g) override;

 private:
  bool valid(const GadgetVertex& g) const;
  int theta(int u, int t) const;
  // Siblings are grouped by (colour, size); without colours this is size.
  std::pair<int, int> group(int v) const;
  std::vector<int> like(int v, int c) const;  // children of v in the group of c
  std::function<bool(int, int)> iso_;
};

struct CanonEdges {
  int n = 0;
  std::set<std::pair<int, int>> edges;  // on [1, n]
  auto operator<=>(const CanonEdges&) const = default;
};

std::string format_canon(const CanonEdges& c);

// Isomorphism, order and canonisation of one tree, each decided through the
// lrec relation X of its gadget. Trees with fewer than four vertices use the
// direct procedures instead.
class TreeLogic {
 public:
  explicit TreeLogic(DirectedTree t, Colouring colours = {});
  TreeLogic(const TreeLogic&) = delete;
  TreeLogic& operator=(const TreeLogic&) = delete;
  ~TreeLogic();

  const DirectedTree& tree() const { return t_; }
  bool uses_gadgets() const { return t_.size() >= 4; }
  Nat query_resource() const;  // |N(T)|^5 - 1

  bool isomorphic(int v, int w);
  bool less(int v, int w);
  // Membership of (a_{v,w}, ell) in X for the respective gadget.
  bool iso_member(int v, int w, const Nat& ell);
  bool order_member(int v, int w, const Nat& ell);

  CanonEdges canon();
  // Preorder position in canon() of every vertex; isomorphic siblings are
  // placed by ascending vertex id.
  std::vector<int> canon_positions();

  IsoGadget& iso_gadget();
  OrderGadget& order_gadget();

 private:
  struct CanonGadget;
  DirectedTree t_;
  Colouring colours_;
  std::unique_ptr<IsoGadget> iso_;
  std::unique_ptr<OrderGadget> order_;
  std::unique_ptr<MemoEngine> iso_memo_, order_memo_;
  std::map<std::pair<int, int>, bool> iso_cache_, less_cache_;
};

bool tree_isomorphic(const DirectedTree& t, int v, int w, const Colouring& colours = {});
bool tree_order_less(const DirectedTree& t, int v, int w, const Colouring& colours = {});
CanonEdges tree_canon(const DirectedTree& t, const Colouring& colours = {});

// Bottom-up encoding by sorted child encodings; "()" for a leaf. With
// colours the rank is written before each opening parenthesis.
std::string tree_canon_oracle(const DirectedTree& t, int v, const Colouring& colours = {});
std::string tree_canon_oracle(const DirectedTree& t, const Colouring& colours = {});
// Direct recursive comparison in the (coloured) profile order: -1, 0, 1.
// With colours, vertices compare by colour, then size, then the number of
// children in each (colour, size) group, then children pairwise.
int tree_order_compare_direct(const DirectedTree& t, int v, int w, const Colouring& colours = {});

}  // namespace lrec
