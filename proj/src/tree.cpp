#include "lrec/tree.hpp"

#include <algorithm>
#include <sstream>

namespace lrec {

DirectedTree::DirectedTree(std::vector<int> parent) : parent_(std::move(parent)) {
  const int n = size();
  if (n == 0) throw DomainError("tree must have a vertex");
  children_.resize(n);
  for (int v = 0; v < n; ++v) {
    int p = parent_[v];
    if (p == -1) {
      if (root_ != -1) throw DomainError("tree has two roots");
      root_ = v;
    } else if (p < 0 || p >= n || p == v) {
      throw DomainError("bad parent of vertex " + std::to_string(v));
    } else {
      children_[p].push_back(v);
    }
  }
  if (root_ == -1) throw DomainError("tree has no root");
  // Preorder from the root; anything unreached sits on a cycle.
  std::vector<int> order, stack{root_};
  while (!stack.empty()) {
    int v = stack.back();
    stack.pop_back();
    order.push_back(v);
    for (int c : children_[v]) stack.push_back(c);
  }
  if (static_cast<int>(order.size()) != n) throw DomainError("parent relation has a cycle");
  size_.assign(n, 1);
  for (auto it = order.rbegin(); it != order.rend(); ++it)
    if (parent_[*it] >= 0) size_[parent_[*it]] += size_[*it];
}

int DirectedTree::children_of_size(int v, int s) const {
  return static_cast<int>(std::count_if(children_[v].begin(), children_[v].end(),
                                        [&](int c) { return size_[c] == s; }));
}

std::vector<int> DirectedTree::profile(int v) const {
  std::vector<int> p(size_[v], 0);
  p[0] = size_[v];
  for (int c : children_[v]) ++p[size_[c]];
  return p;
}

DirectedTree tree_from_structure(const Structure& s) {
  int e = s.vocab().index_of("E");
  if (e < 0 || s.vocab().symbols()[e].arity != 2) throw DomainError("tree needs a binary relation E");
  std::vector<int> parent(s.size(), -1);
  for (auto& t : s.relation(e)) {
    if (parent[t[1]] != -1) throw DomainError("vertex " + s.name_of(t[1]) + " has two parents");
    parent[t[1]] = t[0];
  }
  return DirectedTree(std::move(parent));
}

Structure tree_to_structure(const DirectedTree& t) {
  Structure s(Vocabulary({{"E", 2}}), t.size());
  for (int v = 0; v < t.size(); ++v)
    if (t.parent(v) >= 0) s.add(0, {t.parent(v), v});
  return s;
}

DirectedTree parse_parent_array(const std::string& line) {
  std::istringstream in(line);
  std::vector<int> parent;
  std::string tok;
  while (in >> tok) {
    try {
      size_t used = 0;
      int p = std::stoi(tok, &used);
      if (used != tok.size()) throw std::invalid_argument(tok);
      parent.push_back(p);
    } catch (const std::logic_error&) {
      throw DomainError("bad parent entry '" + tok + "'");
    }
  }
  return DirectedTree(std::move(parent));
}

std::string format_parent_array(const DirectedTree& t) {
  std::string out;
  for (int v = 0; v < t.size(); ++v) out += (v ? " " : "") + std::to_string(t.parent(v));
  return out;
}

// ---------------------------------------------------------------------------

TreeGadget::TreeGadget(const DirectedTree& t, Colouring colours)
    : t_(t), colours_(std::move(colours)), n_(t.size()) {
  if (t.size() < 4) throw TreeTooSmall();
}

Vertex TreeGadget::num_vertices() const { return (n_ + 1) * n_ * n_ * n_ * n_ * (n_ + 1); }

Vertex TreeGadget::encode(const GadgetVertex& g) const {
  return (((((uint64_t(g.type) * n_ + g.a) * n_ + g.b) * n_ + g.c) * n_ + g.d) * (n_ + 1)) + g.k;
}

GadgetVertex TreeGadget::decode(Vertex x) const {
  GadgetVertex g{};
  g.k = static_cast<int>(x % (n_ + 1));
  x /= n_ + 1;
  g.d = static_cast<int>(x % n_);
  x /= n_;
  g.c = static_cast<int>(x % n_);
  x /= n_;
  g.b = static_cast<int>(x % n_);
  x /= n_;
  g.a = static_cast<int>(x % n_);
  g.type = static_cast<int>(x / n_);
  return g;
}

const std::vector<Vertex>& TreeGadget::out(Vertex x) {
  if (auto it = out_.find(x); it != out_.end()) return it->second;
  std::vector<Vertex> succ;
  for (auto& g : successors(decode(x))) succ.push_back(encode(g));
  std::sort(succ.begin(), succ.end());
  succ.erase(std::unique(succ.begin(), succ.end()), succ.end());
  return out_.emplace(x, std::move(succ)).first->second;
}

uint64_t TreeGadget::indegree(Vertex x) {
  if (auto it = indeg_.find(x); it != indeg_.end()) return it->second;
  std::vector<Vertex> cands;
  for (auto& g : predecessor_candidates(decode(x))) cands.push_back(encode(g));
  std::sort(cands.begin(), cands.end());
  cands.erase(std::unique(cands.begin(), cands.end()), cands.end());
  uint64_t d = 0;
  for (Vertex p : cands) {
    const auto& o = out(p);
    d += std::binary_search(o.begin(), o.end(), x);
  }
  indeg_.emplace(x, d);
  return d;
}

std::vector<int> TreeGadget::children_sized(int v, int s) const {
  std::vector<int> r;
  for (int c : t_.children(v))
    if (t_.subtree_size(c) == s) r.push_back(c);
  return r;
}

namespace {

bool is_child(const DirectedTree& t, int c, int v) { return t.parent(c) == v; }

// The profile, or with colours: the size followed by the number of children
// in each (colour, size) group, groups in lexicographic order.
std::vector<int> profile_key(const DirectedTree& t, int v, const Colouring& col) {
  if (col.empty()) return t.profile(v);
  int top = *std::max_element(col.begin(), col.end()) + 1, n = t.size();
  std::vector<int> key(1 + top * n, 0);
  key[0] = t.subtree_size(v);
  for (int c : t.children(v)) ++key[1 + col[c] * n + t.subtree_size(c)];
  return key;
}

}  // namespace

// --- isomorphism gadget -----------------------------------------------------

bool IsoGadget::easy(int v, int w) const { return !same_colour(v, w) || t_.profile(v) != t_.profile(w); }

bool IsoGadget::valid(const GadgetVertex& g) const {
  switch (g.type) {
    case 0:
      return is_pair(g);
    case 1:
      return g.d == g.b && g.k == 0 && is_child(t_, g.c, g.a) && !easy(g.a, g.b);
    case 2:
    case 3:
    case 4: {
      if (!valid({1, g.a, g.b, g.c, g.b, 0})) return false;
      int s = t_.subtree_size(g.c);
      int mult = t_.children_of_size(g.a, s);
      if (!is_child(t_, g.d, g.b) || t_.subtree_size(g.d) != s || g.k < 1 || g.k > mult) return false;
      return g.type == 2 || mult >= 2;
    }
    default:
      return false;
  }
}

std::vector<GadgetVertex> IsoGadget::successors(const GadgetVertex& g) {
  std::vector<GadgetVertex> r;
  if (!valid(g)) return r;
  const int a = g.a, b = g.b, c = g.c, d = g.d, k = g.k;
  switch (g.type) {
    case 0:
      if (!easy(a, b))
        for (int vh : t_.children(a)) r.push_back({1, a, b, vh, b, 0});
      break;
    case 1: {
      int s = t_.subtree_size(c), mult = t_.children_of_size(a, s);
      for (int wh : children_sized(b, s))
        for (int kk = 1; kk <= mult; ++kk) r.push_back({2, a, b, c, wh, kk});
      break;
    }
    case 2:
      r.push_back({0, c, d, c, d, 0});
      if (t_.children_of_size(a, t_.subtree_size(c)) >= 2) {
        r.push_back({3, a, b, c, d, k});
        r.push_back({4, a, b, c, d, k});
      }
      break;
    case 3:
      for (int wr : children_sized(b, t_.subtree_size(c))) r.push_back({0, c, wr, c, wr, 0});
      break;
    case 4:
      for (int vr : children_sized(a, t_.subtree_size(c))) r.push_back({0, vr, d, vr, d, 0});
      break;
  }
  return r;
}

Label IsoGadget::label(Vertex x) {
  GadgetVertex g = decode(x);
  if (!valid(g)) return Label::empty();
  switch (g.type) {
    case 0:
      if (easy(g.a, g.b)) return Label::empty();
      return Label::of({t_.children(g.a).size()});
    case 1:
      return Label::all_but({0});
    case 2:
      return t_.children_of_size(g.a, t_.subtree_size(g.c)) == 1 ? Label::of({1}) : Label::of({3});
    default:
      return Label::of({static_cast<uint64_t>(g.k)});
  }
}

std::vector<GadgetVertex> IsoGadget::predecessor_candidates(const GadgetVertex& g) {
  std::vector<GadgetVertex> r;
  switch (g.type) {
    case 0: {
      if (!is_pair(g)) break;
      int px = t_.parent(g.a), py = t_.parent(g.b);
      if (px < 0 || py < 0) break;
      for (int k = 1; k <= static_cast<int>(n_); ++k) {
        r.push_back({2, px, py, g.a, g.b, k});
        for (int z : t_.children(py)) r.push_back({3, px, py, g.a, z, k});
        for (int z : t_.children(px)) r.push_back({4, px, py, z, g.b, k});
      }
      break;
    }
    case 1:
      r.push_back({0, g.a, g.b, g.a, g.b, 0});
      break;
    case 2:
      r.push_back({1, g.a, g.b, g.c, g.b, 0});
      break;
    case 3:
    case 4:
      r.push_back({2, g.a, g.b, g.c, g.d, g.k});
      break;
  }
  return r;
}

// --- order gadget -----------------------------------------------------------

std::pair<int, int> OrderGadget::group(int v) const {
  return {colours_.empty() ? 0 : colours_[v], t_.subtree_size(v)};
}

std::vector<int> OrderGadget::like(int v, int c) const {
  std::vector<int> r;
  for (int x : t_.children(v))
    if (group(x) == group(c)) r.push_back(x);
  return r;
}

OrderGadget::OrderGadget(const DirectedTree& t, Colouring colours, std::function<bool(int, int)> iso)
    : TreeGadget(t, std::move(colours)), iso_(std::move(iso)) {}

int OrderGadget::key_compare(int v, int w) const {
  if (!colours_.empty() && colours_[v] != colours_[w]) return colours_[v] < colours_[w] ? -1 : 1;
  auto pv = profile_key(t_, v, colours_), pw = profile_key(t_, w, colours_);
  if (pv == pw) return 0;
  return pv < pw ? -1 : 1;
}

int OrderGadget::theta(int u, int t) const {
  int c = 0;
  for (int x : t_.children(u)) c += iso_(x, t);
  return c;
}

bool OrderGadget::good(int v, int w, int child) const {
  if (theta(v, child) <= theta(w, child)) return false;
  for (int x : t_.children(v))
    if (group(x) < group(child) && theta(v, x) != theta(w, x)) return false;
  return true;
}

bool OrderGadget::valid(const GadgetVertex& g) const {
  switch (g.type) {
    case 0:
      return is_pair(g);
    case 1: {
      if (key_compare(g.a, g.b) != 0 || !is_child(t_, g.c, g.a) || !is_child(t_, g.d, g.b)) return false;
      if (group(g.d) != group(g.c) || g.k < 1 || g.k > static_cast<int>(like(g.a, g.c).size())) return false;
      return good(g.a, g.b, g.c);
    }
    case 2:
    case 3:
    case 4:
      return valid({1, g.a, g.b, g.c, g.d, g.k}) && like(g.a, g.c).size() > 1;
    default:
      return false;
  }
}

std::vector<GadgetVertex> OrderGadget::successors(const GadgetVertex& g) {
  std::vector<GadgetVertex> r;
  if (!valid(g)) return r;
  const int a = g.a, b = g.b, c = g.c, d = g.d, k = g.k;
  switch (g.type) {
    case 0:
      if (key_compare(a, b) != 0) break;
      for (int vh : t_.children(a)) {
        if (!good(a, b, vh)) continue;
        int mult = static_cast<int>(like(a, vh).size());
        for (int wh : like(b, vh))
          for (int kk = 1; kk <= mult; ++kk) r.push_back({1, a, b, vh, wh, kk});
      }
      break;
    case 1:
      r.push_back({0, c, d, c, d, 0});
      if (like(a, c).size() > 1)
        for (int ty = 2; ty <= 4; ++ty) r.push_back({ty, a, b, c, d, k});
      break;
    case 2:
      for (int wr : like(b, c)) r.push_back({0, wr, c, wr, c, 0});
      break;
    case 3:
      for (int vr : like(a, c))
        if (!iso_(vr, c)) r.push_back({0, vr, d, vr, d, 0});
      break;
    case 4:
      for (int wp : like(b, c))
        if (theta(a, wp) == theta(b, wp)) r.push_back({0, wp, c, wp, c, 0});
      break;
  }
  return r;
}

Label OrderGadget::label(Vertex x) {
  GadgetVertex g = decode(x);
  if (!valid(g)) return Label::empty();
  switch (g.type) {
    case 0: {
      int cmp = key_compare(g.a, g.b);
      if (cmp < 0) return Label::of({0});
      if (cmp > 0) return Label::empty();
      return Label::all_but({0});
    }
    case 1:
      return like(g.a, g.c).size() == 1 ? Label::of({1}) : Label::of({4});
    default:
      return Label::of({static_cast<uint64_t>(g.k)});
  }
}

std::vector<GadgetVertex> OrderGadget::predecessor_candidates(const GadgetVertex& g) {
  std::vector<GadgetVertex> r;
  switch (g.type) {
    case 0: {
      if (!is_pair(g)) break;
      const int x = g.a, y = g.b, px = t_.parent(x), py = t_.parent(y);
      if (px < 0 || py < 0) break;
      for (int k = 1; k <= static_cast<int>(n_); ++k) {
        r.push_back({1, px, py, x, y, k});
        for (int z : t_.children(px)) {
          r.push_back({2, py, px, y, z, k});
          r.push_back({3, px, py, z, y, k});
          r.push_back({4, py, px, y, z, k});
        }
      }
      break;
    }
    case 1:
      r.push_back({0, g.a, g.b, g.a, g.b, 0});
      break;
    default:
      r.push_back({1, g.a, g.b, g.c, g.d, g.k});
      break;
  }
  return r;
}

// --- canonisation gadget ----------------------------------------------------

// Vertices (v, m, q) of V(T) x N(T)^2 ask whether (m, q) is an edge of the
// canonical copy of T_v. The children of v occupy consecutive blocks after
// position 1, ordered by the profile order, one block per member of each
// isomorphism class. Edges only enter a child's block on coordinates inside
// it, so that every vertex belongs to at most one block.
struct TreeLogic::CanonGadget : LabelledGraph {
  struct Block {
    int start, size;
    std::vector<int> cls;  // isomorphic children, ascending
  };

  CanonGadget(TreeLogic& tl) : t(tl.t_), n(t.size()), blocks(n) {
    for (int v = 0; v < n; ++v) {
      for (int w : t.children(v)) {
        int below = 0;
        std::vector<int> cls;
        for (int x : t.children(v)) {
          if (x != w && tl.less(x, w)) below += t.subtree_size(x);
          if (x == w || tl.isomorphic(x, w)) cls.push_back(x);
        }
        for (int i = 0; i < static_cast<int>(cls.size()); ++i) {
          Block b{2 + below + i * t.subtree_size(w), t.subtree_size(w), cls};
          bool dup = false;
          for (auto& o : blocks[v]) dup |= o.start == b.start && o.cls == b.cls;
          if (!dup) blocks[v].push_back(std::move(b));
        }
      }
      std::sort(blocks[v].begin(), blocks[v].end(), [](const Block& x, const Block& y) {
        return std::tie(x.start, x.cls) < std::tie(y.start, y.cls);
      });
    }
  }

  Vertex id(int v, int m, int q) const { return (uint64_t(v) * (n + 1) + m) * (n + 1) + q; }
  std::tuple<int, int, int> decode(Vertex x) const {
    int q = static_cast<int>(x % (n + 1));
    x /= n + 1;
    return {static_cast<int>(x / (n + 1)), static_cast<int>(x % (n + 1)), q};
  }
  static bool inside(const Block& b, int m) { return m >= b.start && m < b.start + b.size; }

  Vertex num_vertices() const override { return uint64_t(n) * (n + 1) * (n + 1); }

  const std::vector<Vertex>& out(Vertex x) override {
    if (auto it = out_.find(x); it != out_.end()) return it->second;
    auto [v, m, q] = decode(x);
    std::vector<Vertex> r;
    for (auto& b : blocks[v])
      if (inside(b, m) && inside(b, q))
        for (int w : b.cls) r.push_back(id(w, m - b.start + 1, q - b.start + 1));
    std::sort(r.begin(), r.end());
    r.erase(std::unique(r.begin(), r.end()), r.end());
    return out_.emplace(x, std::move(r)).first->second;
  }

  uint64_t indegree(Vertex x) override {
    auto [w, m, q] = decode(x);
    int v = t.parent(w);
    if (v < 0) return 0;
    uint64_t d = 0;
    for (auto& b : blocks[v])
      if (std::binary_search(b.cls.begin(), b.cls.end(), w) && m >= 1 && q >= 1 && m <= b.size && q <= b.size)
        ++d;
    return d;
  }

  bool in_label(Vertex x, uint64_t c) override {
    auto [v, m, q] = decode(x);
    for (auto& b : blocks[v]) {
      if (m == 1 && q == b.start && c == 0) return true;
      if (inside(b, m) && inside(b, q) && c == b.cls.size()) return true;
    }
    return false;
  }

  const DirectedTree& t;
  int n;
  std::vector<std::vector<Block>> blocks;
  std::unordered_map<Vertex, std::vector<Vertex>> out_;
};

// ---------------------------------------------------------------------------

TreeLogic::TreeLogic(DirectedTree t, Colouring colours) : t_(std::move(t)), colours_(std::move(colours)) {
  if (!colours_.empty() && static_cast<int>(colours_.size()) != t_.size())
    throw DomainError("colouring has the wrong length");
}

TreeLogic::~TreeLogic() = default;

Nat TreeLogic::query_resource() const {
  Nat b = t_.size() + 1;
  return b * b * b * b * b - 1;
}

IsoGadget& TreeLogic::iso_gadget() {
  if (!iso_) {
    iso_ = std::make_unique<IsoGadget>(t_, colours_);
    iso_memo_ = std::make_unique<MemoEngine>(*iso_);
  }
  return *iso_;
}

OrderGadget& TreeLogic::order_gadget() {
  if (!order_) {
    order_ = std::make_unique<OrderGadget>(t_, colours_, [this](int a, int b) { return isomorphic(a, b); });
    order_memo_ = std::make_unique<MemoEngine>(*order_);
  }
  return *order_;
}

bool TreeLogic::iso_member(int v, int w, const Nat& ell) {
  IsoGadget& g = iso_gadget();
  return iso_memo_->member(g.pair_vertex(v, w), ell);
}

bool TreeLogic::order_member(int v, int w, const Nat& ell) {
  OrderGadget& g = order_gadget();
  return order_memo_->member(g.pair_vertex(v, w), ell);
}

bool TreeLogic::isomorphic(int v, int w) {
  if (auto it = iso_cache_.find({v, w}); it != iso_cache_.end()) return it->second;
  bool r = uses_gadgets() ? iso_member(v, w, query_resource())
                          : tree_canon_oracle(t_, v, colours_) == tree_canon_oracle(t_, w, colours_);
  iso_cache_[{v, w}] = r;
  return r;
}

bool TreeLogic::less(int v, int w) {
  if (auto it = less_cache_.find({v, w}); it != less_cache_.end()) return it->second;
  bool r = uses_gadgets() ? order_member(v, w, query_resource())
                          : tree_order_compare_direct(t_, v, w, colours_) < 0;
  less_cache_[{v, w}] = r;
  return r;
}

CanonEdges TreeLogic::canon() {
  CanonGadget g(*this);
  MemoEngine memo(g);
  const int n = t_.size();
  // X restricted to the root is sound at every resource, so the existential
  // over the resource is decided by its largest value.
  CanonEdges c;
  c.n = n;
  for (int p = 1; p <= n; ++p)
    for (int q = 1; q <= n; ++q)
      if (memo.member(g.id(t_.root(), p, q), n)) c.edges.insert({p, q});
  return c;
}

std::vector<int> TreeLogic::canon_positions() {
  CanonGadget g(*this);
  std::vector<int> pos(t_.size(), 0);
  std::vector<int> stack{t_.root()};
  pos[t_.root()] = 1;
  while (!stack.empty()) {
    int v = stack.back();
    stack.pop_back();
    std::map<std::vector<int>, int> used;
    for (auto& b : g.blocks[v]) {
      int w = b.cls[used[b.cls]++ % b.cls.size()];
      pos[w] = pos[v] - 1 + b.start;
      stack.push_back(w);
    }
  }
  return pos;
}

bool tree_isomorphic(const DirectedTree& t, int v, int w, const Colouring& colours) {
  return TreeLogic(t, colours).isomorphic(v, w);
}

bool tree_order_less(const DirectedTree& t, int v, int w, const Colouring& colours) {
  return TreeLogic(t, colours).less(v, w);
}

CanonEdges tree_canon(const DirectedTree& t, const Colouring& colours) { return TreeLogic(t, colours).canon(); }

std::string format_canon(const CanonEdges& c) {
  std::string out = "n " + std::to_string(c.n) + "\n";
  for (auto [a, b] : c.edges) out += std::to_string(a) + " " + std::to_string(b) + "\n";
  return out;
}

// --- direct procedures ------------------------------------------------------

std::string tree_canon_oracle(const DirectedTree& t, int v, const Colouring& colours) {
  std::vector<std::string> parts;
  for (int c : t.children(v)) parts.push_back(tree_canon_oracle(t, c, colours));
  std::sort(parts.begin(), parts.end());
  std::string s = colours.empty() ? "" : std::to_string(colours[v]);
  s += "(";
  for (auto& p : parts) s += p;
  return s + ")";
}

std::string tree_canon_oracle(const DirectedTree& t, const Colouring& colours) {
  return tree_canon_oracle(t, t.root(), colours);
}

namespace {

int compare_direct(const DirectedTree& t, int v, int w, const Colouring& col, std::map<std::pair<int, int>, int>& memo) {
  if (auto it = memo.find({v, w}); it != memo.end()) return it->second;
  int r = 0;
  if (!col.empty() && col[v] != col[w]) {
    r = col[v] < col[w] ? -1 : 1;
  } else if (auto pv = profile_key(t, v, col), pw = profile_key(t, w, col); pv != pw) {
    r = pv < pw ? -1 : 1;
  } else {
    auto cmp = [&](int a, int b) { return compare_direct(t, a, b, col, memo) < 0; };
    std::vector<int> cv = t.children(v), cw = t.children(w);
    std::stable_sort(cv.begin(), cv.end(), cmp);
    std::stable_sort(cw.begin(), cw.end(), cmp);
    for (size_t i = 0; i < cv.size() && r == 0; ++i) r = compare_direct(t, cv[i], cw[i], col, memo);
  }
  memo[{v, w}] = r;
  return r;
}

}  // namespace

int tree_order_compare_direct(const DirectedTree& t, int v, int w, const Colouring& colours) {
  std::map<std::pair<int, int>, int> memo;
  return compare_direct(t, v, w, colours, memo);
}

}  // namespace lrec
