#include "lrec/interval.hpp"

#include <algorithm>
#include <climits>
#include <deque>
#include <functional>
#include <map>
#include <numeric>
#include <sstream>

namespace lrec {

UGraph::UGraph(int n) : n_(n), adj_(n, std::vector<char>(n, 0)) {}

void UGraph::add_edge(int u, int v) {
  if (u == v) throw DomainError("loop at vertex " + std::to_string(u));
  adj_[u][v] = adj_[v][u] = 1;
}

VertexSet UGraph::closed_neighbourhood(int v) const {
  VertexSet r;
  for (int u = 0; u < n_; ++u)
    if (u == v || adj_[v][u]) r.push_back(u);
  return r;
}

int UGraph::degree(int v) const { return static_cast<int>(std::count(adj_[v].begin(), adj_[v].end(), 1)); }

UGraph UGraph::induced(const VertexSet& vs) const {
  UGraph h(static_cast<int>(vs.size()));
  for (size_t i = 0; i < vs.size(); ++i)
    for (size_t j = i + 1; j < vs.size(); ++j)
      if (adj_[vs[i]][vs[j]]) h.add_edge(static_cast<int>(i), static_cast<int>(j));
  return h;
}

bool UGraph::is_clique(const VertexSet& vs) const {
  for (size_t i = 0; i < vs.size(); ++i)
    for (size_t j = i + 1; j < vs.size(); ++j)
      if (!adj_[vs[i]][vs[j]]) return false;
  return true;
}

bool UGraph::is_module(const VertexSet& vs) const {
  std::vector<char> in(n_, 0);
  for (int v : vs) in[v] = 1;
  for (int u = 0; u < n_; ++u) {
    if (in[u]) continue;
    size_t k = 0;
    for (int v : vs) k += adj_[u][v];
    if (k != 0 && k != vs.size()) return false;
  }
  return true;
}

std::vector<VertexSet> UGraph::components() const {
  std::vector<VertexSet> out;
  std::vector<char> seen(n_, 0);
  for (int s = 0; s < n_; ++s) {
    if (seen[s]) continue;
    VertexSet comp;
    std::vector<int> stack{s};
    seen[s] = 1;
    while (!stack.empty()) {
      int v = stack.back();
      stack.pop_back();
      comp.push_back(v);
      for (int u = 0; u < n_; ++u)
        if (adj_[v][u] && !seen[u]) {
          seen[u] = 1;
          stack.push_back(u);
        }
    }
    std::sort(comp.begin(), comp.end());
    out.push_back(std::move(comp));
  }
  return out;
}

VertexSet UGraph::apices() const {
  VertexSet r;
  for (int v = 0; v < n_; ++v)
    if (degree(v) == n_ - 1) r.push_back(v);
  return r;
}

std::set<std::pair<int, int>> UGraph::edges() const {
  std::set<std::pair<int, int>> e;
  for (int u = 0; u < n_; ++u)
    for (int v = u + 1; v < n_; ++v)
      if (adj_[u][v]) e.emplace(u, v);
  return e;
}

UGraph graph_from_structure(const Structure& s) {
  int e = s.vocab().index_of("E");
  if (e < 0 || s.vocab().symbols()[e].arity != 2) throw DomainError("graph needs a binary relation E");
  UGraph g(s.size());
  for (auto& t : s.relation(e)) {
    if (t[0] == t[1]) throw DomainError("loop at " + s.name_of(t[0]));
    if (!s.holds(e, Tuple{t[1], t[0]}))
      throw DomainError("E is not symmetric at (" + s.name_of(t[0]) + "," + s.name_of(t[1]) + ")");
    g.add_edge(t[0], t[1]);
  }
  return g;
}

Structure graph_to_structure(const UGraph& g) {
  Structure s(Vocabulary({{"E", 2}}), g.size());
  for (auto [u, v] : g.edges()) {
    s.add(0, {u, v});
    s.add(0, {v, u});
  }
  return s;
}

UGraph graph_from_canon(const CanonEdges& c) {
  UGraph g(c.n);
  for (auto [a, b] : c.edges) g.add_edge(a - 1, b - 1);
  return g;
}

namespace {

VertexSet intersect(const VertexSet& a, const VertexSet& b) {
  VertexSet r;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(r));
  return r;
}

VertexSet unite(const VertexSet& a, const VertexSet& b) {
  VertexSet r;
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(r));
  return r;
}

bool subset(const VertexSet& a, const VertexSet& b) { return std::includes(b.begin(), b.end(), a.begin(), a.end()); }

VertexSet mapped(const VertexSet& local, const VertexSet& ids) {
  VertexSet r;
  for (int v : local) r.push_back(ids[v]);
  std::sort(r.begin(), r.end());
  return r;
}

VertexSet complement(const VertexSet& vs, int n) {
  VertexSet r;
  for (int v = 0, i = 0; v < n; ++v) {
    if (i < static_cast<int>(vs.size()) && vs[i] == v)
      ++i;
    else
      r.push_back(v);
  }
  return r;
}

// Quotient by a representative map; classes ordered by smallest member.
OrderedQuotient quotient(const UGraph& g, const std::vector<int>& rep) {
  const int n = g.size();
  OrderedQuotient q;
  q.class_of.assign(n, -1);
  std::map<int, int> id;
  for (int v = 0; v < n; ++v) {
    auto [it, fresh] = id.emplace(rep[v], static_cast<int>(q.classes.size()));
    if (fresh) q.classes.emplace_back();
    q.classes[it->second].push_back(v);
    q.class_of[v] = it->second;
  }
  q.graph = UGraph(static_cast<int>(q.classes.size()));
  for (auto [u, v] : g.edges())
    if (q.class_of[u] != q.class_of[v]) q.graph.add_edge(q.class_of[u], q.class_of[v]);
  return q;
}

VertexSet image(const OrderedQuotient& q, const VertexSet& vs) {
  VertexSet r;
  for (int v : vs) r.push_back(q.class_of[v]);
  std::sort(r.begin(), r.end());
  r.erase(std::unique(r.begin(), r.end()), r.end());
  return r;
}

std::string set_text(const VertexSet& vs) {
  std::string s = "{";
  for (size_t i = 0; i < vs.size(); ++i) s += (i ? "," : "") + std::to_string(vs[i]);
  return s + "}";
}

}  // namespace

std::vector<MaxClique> max_cliques(const UGraph& g) {
  const int n = g.size();
  std::vector<VertexSet> nc(n);
  for (int v = 0; v < n; ++v) nc[v] = g.closed_neighbourhood(v);
  std::map<VertexSet, std::pair<int, int>> found;
  for (int u = 0; u < n; ++u)
    for (int v = u; v < n; ++v) {
      VertexSet s = intersect(nc[u], nc[v]);
      if (!s.empty() && g.is_clique(s)) found.emplace(std::move(s), std::make_pair(u, v));
    }
  std::vector<MaxClique> out;
  for (auto& [s, w] : found) {
    bool maximal = true;
    for (auto& [t, _] : found)
      if (t.size() > s.size() && subset(s, t)) {
        maximal = false;
        break;
      }
    if (maximal) out.push_back({s, w});
  }
  return out;
}

int span(const std::vector<MaxClique>& cliques, int v) {
  return static_cast<int>(std::count_if(cliques.begin(), cliques.end(), [&](const MaxClique& c) {
    return std::binary_search(c.vertices.begin(), c.vertices.end(), v);
  }));
}

std::vector<int> spans(const UGraph& g, const std::vector<MaxClique>& cliques) {
  std::vector<int> s(g.size(), 0);
  for (auto& c : cliques)
    for (int v : c.vertices) ++s[v];
  return s;
}

CliquePreorder clique_preorder(const std::vector<MaxClique>& cliques, int end) {
  const int m = static_cast<int>(cliques.size());
  int n = 0;
  for (auto& c : cliques)
    if (!c.vertices.empty()) n = std::max(n, c.vertices.back() + 1);
  std::vector<std::vector<char>> in(m, std::vector<char>(n, 0));
  for (int c = 0; c < m; ++c)
    for (int v : cliques[c].vertices) in[c][v] = 1;
  // w[(e*m+c)*m+d]: (E & C) \ D is non-empty
  std::vector<char> w(static_cast<size_t>(m) * m * m, 0);
  for (int e = 0; e < m; ++e)
    for (int c = 0; c < m; ++c) {
      VertexSet ec = intersect(cliques[e].vertices, cliques[c].vertices);
      for (int d = 0; d < m; ++d)
        w[(static_cast<size_t>(e) * m + c) * m + d] =
            std::any_of(ec.begin(), ec.end(), [&](int v) { return !in[d][v]; });
    }
  auto W = [&](int e, int c, int d) { return w[(static_cast<size_t>(e) * m + c) * m + d] != 0; };

  CliquePreorder p;
  p.m = m;
  p.less.assign(m, std::vector<char>(m, 0));
  std::deque<std::pair<int, int>> queue;
  auto add = [&](int c, int d) {
    if (!p.less[c][d]) {
      p.less[c][d] = 1;
      queue.emplace_back(c, d);
    }
  };
  for (int c = 0; c < m; ++c)
    if (c != end) add(end, c);
  while (!queue.empty()) {
    auto [x, y] = queue.front();
    queue.pop_front();
    for (int c = 0; c < m; ++c)
      if (W(x, c, y)) add(c, y);
    for (int d = 0; d < m; ++d)
      if (W(y, d, x)) add(x, d);
  }

  p.asymmetric = true;
  for (int c = 0; c < m && p.asymmetric; ++c)
    for (int d = 0; d < m; ++d)
      if (p.less[c][d] && p.less[d][c]) {
        p.asymmetric = false;
        break;
      }
  auto inc = [&](int c, int d) { return !p.less[c][d] && !p.less[d][c]; };
  p.strict_weak = p.asymmetric;
  for (int a = 0; a < m && p.strict_weak; ++a)
    for (int b = 0; b < m && p.strict_weak; ++b)
      for (int c = 0; c < m; ++c) {
        if ((p.less[a][b] && p.less[b][c] && !p.less[a][c]) || (inc(a, b) && inc(b, c) && !inc(a, c))) {
          p.strict_weak = false;
          break;
        }
      }

  if (p.strict_weak) {
    std::map<int, std::vector<int>> by_preds;
    for (int c = 0; c < m; ++c) {
      int k = 0;
      for (int b = 0; b < m; ++b) k += p.less[b][c];
      by_preds[k].push_back(c);
    }
    for (auto& [_, cls] : by_preds) p.classes.push_back(cls);
  } else {
    std::vector<int> cls(m, -1);
    for (int c = 0; c < m; ++c) {
      if (cls[c] != -1) continue;
      cls[c] = static_cast<int>(p.classes.size());
      p.classes.push_back({c});
      for (size_t i = 0; i < p.classes.back().size(); ++i) {
        int x = p.classes.back()[i];
        for (int d = 0; d < m; ++d)
          if (cls[d] == -1 && inc(x, d)) {
            cls[d] = cls[c];
            p.classes.back().push_back(d);
          }
      }
      std::sort(p.classes.back().begin(), p.classes.back().end());
    }
  }
  return p;
}

std::vector<int> possible_ends(const std::vector<MaxClique>& cliques) {
  std::vector<int> ends;
  for (int c = 0; c < static_cast<int>(cliques.size()); ++c)
    if (clique_preorder(cliques, c).asymmetric) ends.push_back(c);
  return ends;
}

OrderedQuotient collapse_incomparables(const UGraph& g, const std::vector<MaxClique>& cliques, int end) {
  CliquePreorder p = clique_preorder(cliques, end);
  if (!p.asymmetric) throw DomainError("clique " + set_text(cliques[end].vertices) + " is not a possible end");
  if (!p.strict_weak)
    throw NotInterval("order from end " + set_text(cliques[end].vertices) + " is not a strict weak order");
  std::vector<int> sp = spans(g, cliques);
  std::vector<int> rep(g.size());
  std::iota(rep.begin(), rep.end(), 0);
  std::vector<VertexSet> unions;
  for (auto& cls : p.classes) {
    VertexSet u;
    for (int c : cls) u = unite(u, cliques[c].vertices);
    unions.push_back(u);
    if (cls.size() < 2) continue;
    VertexSet s;
    for (int v : u)
      if (sp[v] <= static_cast<int>(cls.size())) s.push_back(v);
    if (s.empty()) throw NotInterval("incomparable cliques without private vertices");
    for (int v : s) rep[v] = s.front();
  }
  OrderedQuotient q = quotient(g, rep);
  for (auto& u : unions) {
    VertexSet c = image(q, u);
    if (!q.graph.is_clique(c)) throw NotInterval("collapsed cliques do not form a clique");
    q.cliques.push_back(std::move(c));
  }
  return q;
}

OrderedQuotient l_graph(const UGraph& g) {
  const int n = g.size();
  if (n == 0) throw DomainError("empty graph");
  if (g.components().size() != 1) throw DomainError("L_G is built for connected graphs");
  VertexSet a = g.apices();
  if (!a.empty()) {
    std::vector<int> rep(n);
    std::iota(rep.begin(), rep.end(), 0);
    VertexSet rest = complement(a, n);
    for (int v : rest) rep[v] = rest.front();
    OrderedQuotient q = quotient(g, rep);
    VertexSet all(q.classes.size());
    std::iota(all.begin(), all.end(), 0);
    q.cliques = {all};
    return q;
  }
  std::vector<MaxClique> cl = max_cliques(g);
  std::vector<int> ends = possible_ends(cl);
  if (ends.empty()) throw NotInterval("no max clique is a possible end");
  OrderedQuotient gm = collapse_incomparables(g, cl, ends.front());
  std::vector<MaxClique> cl2 = max_cliques(gm.graph);
  auto z = std::find_if(cl2.begin(), cl2.end(), [&](const MaxClique& c) { return c.vertices == gm.cliques.back(); });
  if (z == cl2.end()) throw NotInterval("last collapsed clique is not a max clique");
  OrderedQuotient lm = collapse_incomparables(gm.graph, cl2, static_cast<int>(z - cl2.begin()));

  OrderedQuotient l;
  l.graph = lm.graph;
  l.cliques = lm.cliques;
  l.class_of.assign(n, -1);
  for (auto& cls : lm.classes) {
    VertexSet members;
    for (int x : cls) members = unite(members, gm.classes[x]);
    for (int v : members) l.class_of[v] = static_cast<int>(l.classes.size());
    l.classes.push_back(std::move(members));
  }
  if (l.classes.size() < 2) throw NotInterval("decomposition does not split the graph");
  return l;
}

ModularPartition modular_partition(const UGraph& g) {
  if (g.components().size() != 1) throw DomainError("modular partition needs a connected graph");
  if (!g.apices().empty()) throw DomainError("modular partition needs a graph without apices");
  OrderedQuotient l = l_graph(g);
  std::vector<MaxClique> cl = max_cliques(g);
  ModularPartition p;
  p.cells.resize(l.cliques.size());
  for (int c = 0; c < static_cast<int>(cl.size()); ++c) {
    VertexSet img = image(l, cl[c].vertices);
    auto it = std::find(l.cliques.begin(), l.cliques.end(), img);
    if (it == l.cliques.end()) throw NotInterval("clique image is not a clique of L_G");
    p.cells[it - l.cliques.begin()].push_back(c);
  }
  p.modules = l.classes;
  p.module_of = l.class_of;
  return p;
}

std::vector<VertexSet> vertex_modules(const UGraph& g) {
  if (g.size() == 1) return {{0}};
  auto comps = g.components();
  if (comps.size() > 1) return comps;
  return l_graph(g).classes;
}

OrderedCanon canon_L(const OrderedQuotient& l) {
  const int m = static_cast<int>(l.cliques.size());
  const int k = l.graph.size();
  auto model = [&](bool rev) {
    std::vector<std::pair<int, int>> iv(k, {INT_MAX, 0});
    std::vector<int> count(k, 0);
    for (int i = 0; i < m; ++i) {
      int pos = rev ? m - i : i + 1;
      for (int v : l.cliques[i]) {
        iv[v].first = std::min(iv[v].first, pos);
        iv[v].second = std::max(iv[v].second, pos);
        ++count[v];
      }
    }
    for (int v = 0; v < k; ++v)
      if (count[v] == 0 || iv[v].second - iv[v].first + 1 != count[v])
        throw NotInterval("vertex of L is not in consecutive cliques");
    return iv;
  };
  auto key = [](std::vector<std::pair<int, int>> iv) {
    std::sort(iv.begin(), iv.end());
    return iv;
  };
  auto fwd = model(false), bwd = model(true);
  auto kf = key(fwd), kb = key(bwd);
  OrderedCanon oc;
  oc.reversed = kb < kf;
  oc.symmetric = kb == kf;
  const auto& iv = oc.reversed ? bwd : fwd;
  std::vector<int> order(k);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return iv[a] < iv[b]; });
  oc.number.assign(k, 0);
  for (int i = 0; i < k; ++i) oc.number[order[i]] = i + 1;
  oc.canon.n = k;
  for (auto [u, v] : l.graph.edges())
    oc.canon.edges.emplace(std::min(oc.number[u], oc.number[v]), std::max(oc.number[u], oc.number[v]));
  for (int i = 0; i < m; ++i) {
    int pos = oc.reversed ? m - i : i + 1;
    oc.positions.push_back(m > 1 ? std::vector<int>{pos, m + 1 - pos} : std::vector<int>{pos});
  }
  return oc;
}

VertexSet span_component(const UGraph& g, const std::vector<MaxClique>& cliques, const std::vector<int>& span,
                         int clique, int n) {
  VertexSet start;
  for (int v : cliques[clique].vertices)
    if (span[v] <= n) start.push_back(v);
  if (start.empty()) return {};
  std::vector<char> seen(g.size(), 0);
  VertexSet out;
  std::vector<int> stack{start.front()};
  seen[start.front()] = 1;
  while (!stack.empty()) {
    int v = stack.back();
    stack.pop_back();
    out.push_back(v);
    for (int u = 0; u < g.size(); ++u)
      if (!seen[u] && span[u] <= n && g.adjacent(u, v)) {
        seen[u] = 1;
        stack.push_back(u);
      }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<DecompositionComponent> decomposition_components(const UGraph& g) {
  const int N = g.size();
  std::vector<MaxClique> cl = max_cliques(g);
  std::vector<int> sp = spans(g, cl);
  const int m = static_cast<int>(cl.size());
  std::vector<std::vector<VertexSet>> vs(m, std::vector<VertexSet>(N + 1));
  for (int c = 0; c < m; ++c)
    for (int n = 1; n <= N; ++n) vs[c][n] = span_component(g, cl, sp, c, n);

  struct Split {
    std::vector<VertexSet> classes;
    VertexSet apices;
  };
  std::map<VertexSet, Split> splits;
  auto split = [&](const VertexSet& s) -> const Split& {
    auto it = splits.find(s);
    if (it != splits.end()) return it->second;
    UGraph h = g.induced(s);
    Split r;
    for (auto& w : vertex_modules(h)) r.classes.push_back(mapped(w, s));
    r.apices = mapped(h.apices(), s);
    return splits.emplace(s, std::move(r)).first->second;
  };

  std::vector<DecompositionComponent> out;
  for (int c = 0; c < m; ++c)
    for (int n = 1; n <= N; ++n) {
      const VertexSet& d = vs[c][n];
      if (d.empty()) continue;
      bool ok = true;
      for (int n2 = n + 1; n2 <= N && ok; ++n2)
        if (vs[c][n2] == d) ok = false;
      for (int m2 = n + 1; m2 <= N && ok; ++m2) {
        const VertexSet& s = vs[c][m2];
        if (!g.is_module(s)) continue;
        const Split& sp2 = split(s);
        bool inside = std::any_of(sp2.classes.begin(), sp2.classes.end(),
                                  [&](const VertexSet& w) { return w.size() > 1 && subset(d, w); });
        bool apex = std::any_of(sp2.apices.begin(), sp2.apices.end(),
                                [&](int a) { return !std::binary_search(d.begin(), d.end(), a); });
        ok = inside || apex;
      }
      if (ok) out.push_back({c, n, d});
    }
  return out;
}

DirectedTree ColouredTree::shape() const {
  std::vector<int> parent;
  for (auto& x : nodes) parent.push_back(x.parent);
  return DirectedTree(std::move(parent));
}

Colouring ColouredTree::colour_ranks() const {
  std::map<std::vector<std::pair<int, int>>, int> rank;
  for (auto& x : nodes) rank.emplace(x.colour, 0);
  int r = 0;
  for (auto& [_, v] : rank) v = r++;
  Colouring c;
  for (auto& x : nodes) c.push_back(rank[x.colour]);
  return c;
}

ColouredTree build_modular_tree(const UGraph& g) {
  const int N = g.size();
  if (N == 0) throw DomainError("empty graph");
  std::vector<MaxClique> cl = max_cliques(g);
  std::vector<DecompositionComponent> p = decomposition_components(g);
  std::map<int, std::vector<std::pair<int, VertexSet>>> by_clique;  // clique -> (n, V_{M,n}) ascending
  std::map<VertexSet, int> level;
  for (auto& d : p) {
    by_clique[d.clique].emplace_back(d.n, d.vertices);
    level.emplace(d.vertices, d.n);
  }

  ColouredTree t;
  auto add = [&](NodeKind kind, int parent, VertexSet vs) {
    ModularTreeNode x;
    x.kind = kind;
    x.parent = parent;
    x.vertices = std::move(vs);
    t.nodes.push_back(std::move(x));
    int id = static_cast<int>(t.nodes.size()) - 1;
    if (parent >= 0) t.nodes[parent].children.push_back(id);
    return id;
  };

  std::function<void(int, const VertexSet&)> component = [&](int parent, const VertexSet& d) {
    int id = add(NodeKind::Component, parent, d);
    UGraph h = g.induced(d);
    OrderedQuotient l = l_graph(h);
    for (auto& cls : l.classes) cls = mapped(cls, d);
    std::vector<int> class_of(N, -1);
    for (int i = 0; i < static_cast<int>(l.classes.size()); ++i)
      for (int v : l.classes[i]) class_of[v] = i;
    l.class_of = class_of;
    OrderedCanon kl = canon_L(l);
    const int m = static_cast<int>(l.cliques.size());

    // module -> (orders, positions)
    std::map<std::vector<int>, std::vector<std::pair<int, std::vector<int>>>> groups;
    for (int u = 0; u < static_cast<int>(l.classes.size()); ++u) {
      if (l.classes[u].size() < 2) continue;
      int ci = -1;
      for (int i = 0; i < m; ++i)
        if (std::binary_search(l.cliques[i].begin(), l.cliques[i].end(), u)) {
          if (ci != -1) throw NotInterval("module lies in two cliques of L");
          ci = i;
        }
      int pd = kl.positions[ci][0];
      std::vector<int> orders{0}, pos{pd};
      if (kl.symmetric && m > 1) {
        int other = m + 1 - pd;
        pos = {std::min(pd, other), std::max(pd, other)};
        orders = pd < other ? std::vector<int>{0} : pd > other ? std::vector<int>{1} : std::vector<int>{0, 1};
      }
      groups[orders].emplace_back(u, pos);
    }

    auto& node = t.nodes[id];
    node.colour.assign(kl.canon.edges.begin(), kl.canon.edges.end());
    node.l = std::move(l);
    node.kl = std::move(kl);

    const int n = level.at(d);
    for (auto& [orders, mods] : groups) {
      int a = add(NodeKind::Arrangement, id, d);
      t.nodes[a].orders = orders;
      for (auto& [u, pos] : mods) {
        VertexSet w = t.nodes[id].l.classes[u];
        int s = add(NodeKind::Module, a, w);
        t.nodes[s].l_vertex = u;
        t.nodes[s].positions = pos;
        std::map<int, int> count;
        for (int x : pos) ++count[x];
        t.nodes[s].colour.assign(count.begin(), count.end());

        std::set<VertexSet> parts;
        for (int c = 0; c < static_cast<int>(cl.size()); ++c) {
          if (intersect(cl[c].vertices, w).empty()) continue;
          const VertexSet* best = nullptr;
          for (auto& [k, v] : by_clique[c])
            if (k < n) best = &v;
          if (!best) throw std::logic_error("module without decomposition component");
          parts.insert(*best);
        }
        VertexSet covered;
        size_t total = 0;
        for (auto& q : parts) {
          covered = unite(covered, q);
          total += q.size();
        }
        if (covered != w || total != w.size())
          throw std::logic_error("decomposition components do not partition module " + set_text(w));
        for (auto& q : parts) component(s, q);
      }
    }
  };

  add(NodeKind::Root, -1, complement({}, N));
  std::set<VertexSet> top;
  for (auto& d : p)
    if (d.n == N) top.insert(d.vertices);
  for (auto& d : top) component(0, d);
  return t;
}

int coloured_tree_preorder(const ColouredTree& t, int a, int b, bool use_gadgets) {
  const auto& ca = t.nodes[a].colour;
  const auto& cb = t.nodes[b].colour;
  if (ca != cb) return ca < cb ? -1 : 1;
  DirectedTree shape = t.shape();
  Colouring ranks = t.colour_ranks();
  if (!use_gadgets) return tree_order_compare_direct(shape, a, b, ranks);
  TreeLogic logic(shape, ranks);
  if (logic.less(a, b)) return -1;
  if (logic.less(b, a)) return 1;
  return 0;
}

namespace {

std::vector<VertexSet> clique_sequence(const UGraph& g) {
  const int n = g.size();
  if (n == 1) return {{0}};
  std::vector<VertexSet> out;
  auto comps = g.components();
  if (comps.size() > 1) {
    for (auto& c : comps)
      for (auto& q : clique_sequence(g.induced(c))) out.push_back(mapped(q, c));
    return out;
  }
  VertexSet a = g.apices();
  if (!a.empty()) {
    VertexSet rest = complement(a, n);
    if (rest.empty()) return {a};
    for (auto& q : clique_sequence(g.induced(rest))) out.push_back(unite(mapped(q, rest), a));
    return out;
  }
  OrderedQuotient l = l_graph(g);
  std::vector<int> seen(l.classes.size(), 0);
  for (auto& c : l.cliques) {
    VertexSet base;
    int module = -1;
    for (int u : c) {
      if (l.classes[u].size() == 1) {
        base = unite(base, l.classes[u]);
      } else {
        if (module != -1 || seen[u]++) throw NotInterval("module spread over several cliques of L");
        module = u;
      }
    }
    if (module == -1) {
      out.push_back(base);
      continue;
    }
    const VertexSet& w = l.classes[module];
    if (static_cast<int>(w.size()) == n) throw NotInterval("module is the whole graph");
    for (auto& q : clique_sequence(g.induced(w))) out.push_back(unite(base, mapped(q, w)));
  }
  return out;
}

}  // namespace

IntervalModel interval_model(const UGraph& g) {
  if (g.size() == 0) return {};
  IntervalModel m;
  try {
    m.cliques = clique_sequence(g);
  } catch (const NotInterval&) {
    throw;
  } catch (const DomainError& e) {
    throw NotInterval(e.what());
  }
  const int n = g.size();
  m.interval.assign(n, {INT_MAX, 0});
  std::vector<int> count(n, 0);
  for (int i = 0; i < static_cast<int>(m.cliques.size()); ++i)
    for (int v : m.cliques[i]) {
      m.interval[v].first = std::min(m.interval[v].first, i + 1);
      m.interval[v].second = std::max(m.interval[v].second, i + 1);
      ++count[v];
    }
  for (int v = 0; v < n; ++v)
    if (count[v] == 0 || m.interval[v].second - m.interval[v].first + 1 != count[v])
      throw NotInterval("vertex " + std::to_string(v) + " is not in consecutive cliques");
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v) {
      bool meet = m.interval[u].first <= m.interval[v].second && m.interval[v].first <= m.interval[u].second;
      if (meet != g.adjacent(u, v))
        throw NotInterval("model disagrees with the graph at " + std::to_string(u) + "," + std::to_string(v));
    }
  return m;
}

bool is_interval_graph(const UGraph& g) {
  try {
    interval_model(g);
    return true;
  } catch (const NotInterval&) {
    return false;
  }
}

std::string format_model(const IntervalModel& m, const std::vector<std::string>& names) {
  std::ostringstream os;
  for (int v = 0; v < static_cast<int>(m.interval.size()); ++v)
    os << (names.empty() ? std::to_string(v) : names[v]) << ' ' << m.interval[v].first << ' '
       << m.interval[v].second << '\n';
  return os.str();
}

namespace {

void append(CanonEdges& acc, const CanonEdges& part) {
  for (auto [a, b] : part.edges) acc.edges.emplace(a + acc.n, b + acc.n);
  acc.n += part.n;
}

class CanonBuilder {
 public:
  explicit CanonBuilder(const ColouredTree& t) : t_(t), shape_(t.shape()), ranks_(t.colour_ranks()) {}

  CanonEdges root() {
    std::vector<CanonEdges> parts;
    for (int c : t_.nodes[0].children) parts.push_back(component(c));
    std::sort(parts.begin(), parts.end());
    CanonEdges out;
    for (auto& p : parts) append(out, p);
    return out;
  }

 private:
  bool before(int a, int b) {
    auto key = std::make_pair(a, b);
    auto it = memo_.find(key);
    if (it == memo_.end()) it = memo_.emplace(key, tree_order_compare_direct(shape_, a, b, ranks_)).first;
    return it->second < 0;
  }

  CanonEdges module(int s) {
    std::vector<int> kids = t_.nodes[s].children;
    std::stable_sort(kids.begin(), kids.end(), [&](int a, int b) { return before(a, b); });
    CanonEdges out;
    for (int c : kids) append(out, component(c));
    return out;
  }

  CanonEdges component(int v) {
    const auto& node = t_.nodes[v];
    const int k = static_cast<int>(node.vertices.size());
    if (k == 1) return {1, {}};
    const auto& kl = node.kl;
    if (node.l.cliques.size() == 1) {
      CanonEdges out;
      if (!node.children.empty()) out = module(t_.nodes[node.children.front()].children.front());
      int r = out.n;
      for (int a = r + 1; a <= k; ++a)
        for (int b = 1; b < a; ++b) out.edges.emplace(b, a);
      out.n = k;
      return out;
    }

    // (module node, target clique position) in block order
    std::vector<std::pair<int, int>> placed;
    auto by_colour = [&](int a) {
      std::vector<int> mods = t_.nodes[a].children;
      std::stable_sort(mods.begin(), mods.end(),
                       [&](int x, int y) { return t_.nodes[x].colour < t_.nodes[y].colour; });
      return mods;
    };
    if (!kl.symmetric) {
      for (int a : node.children)
        for (int s : by_colour(a)) placed.emplace_back(s, t_.nodes[s].positions.front());
    } else {
      std::vector<int> sides;
      for (int a : node.children) {
        if (t_.nodes[a].orders.size() == 2) {
          for (int s : by_colour(a)) placed.emplace_back(s, t_.nodes[s].positions.front());
        } else {
          sides.push_back(a);
        }
      }
      std::stable_sort(sides.begin(), sides.end(), [&](int a, int b) { return before(a, b); });
      for (size_t i = 0; i < sides.size(); ++i)
        for (int s : by_colour(sides[i]))
          placed.emplace_back(s, i == 0 ? t_.nodes[s].positions.front() : t_.nodes[s].positions.back());
    }

    // Interval of every canon number under the distinguished order.
    const int m = static_cast<int>(node.l.cliques.size());
    const int kL = kl.canon.n;
    std::vector<std::pair<int, int>> iv(kL + 1, {INT_MAX, 0});
    for (int i = 0; i < m; ++i) {
      int pos = kl.reversed ? m - i : i + 1;
      for (int u : node.l.cliques[i]) {
        int x = kl.number[u];
        iv[x].first = std::min(iv[x].first, pos);
        iv[x].second = std::max(iv[x].second, pos);
      }
    }
    std::vector<int> block(kL + 1, -1);  // canon number -> index into placed
    for (int i = 0; i < static_cast<int>(placed.size()); ++i) {
      int target = placed[i].second, z = 1;
      while (z <= kL && (block[z] != -1 || iv[z] != std::make_pair(target, target))) ++z;
      if (z > kL) throw std::logic_error("no vertex of L to replace at clique " + std::to_string(target));
      block[z] = i;
    }
    std::vector<int> f(kL + 1, 0);
    for (int x = 1, r = 0; x <= kL; ++x) {
      if (block[x] != -1)
        ++r;
      else
        f[x] = x - r;
    }
    std::vector<CanonEdges> sub;
    std::vector<int> offset;
    int next = kL - static_cast<int>(placed.size());
    for (auto& [s, _] : placed) {
      sub.push_back(module(s));
      offset.push_back(next);
      next += sub.back().n;
    }
    CanonEdges out;
    out.n = next;
    auto members = [&](int x) {
      std::vector<int> r;
      if (block[x] == -1) return std::vector<int>{f[x]};
      for (int i = 1; i <= sub[block[x]].n; ++i) r.push_back(offset[block[x]] + i);
      return r;
    };
    for (auto [a, b] : kl.canon.edges)
      for (int x : members(a))
        for (int y : members(b)) out.edges.emplace(std::min(x, y), std::max(x, y));
    for (size_t i = 0; i < sub.size(); ++i)
      for (auto [a, b] : sub[i].edges) out.edges.emplace(a + offset[i], b + offset[i]);
    if (out.n != k) throw std::logic_error("canon of component has the wrong size");
    return out;
  }

  const ColouredTree& t_;
  DirectedTree shape_;
  Colouring ranks_;
  std::map<std::pair<int, int>, int> memo_;
};

}  // namespace

CanonEdges interval_canon(const UGraph& g) {
  if (g.size() == 0) return {};
  interval_model(g);
  ColouredTree t = build_modular_tree(g);
  return CanonBuilder(t).root();
}

}  // namespace lrec
