#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "graph_enum.hpp"
#include "lrec/interval.hpp"

#include <functional>

using namespace lrec;
using namespace testutil;

namespace {

// Interval graphs up to isomorphism with 1..7 vertices, filtered by the
// clique-permutation oracle.
const std::vector<UGraph>& interval_graphs() {
  static const std::vector<UGraph> all = [] {
    std::vector<UGraph> out;
    for (int n = 1; n <= 7; ++n)
      for (auto& g : all_graphs(n))
        if (is_interval_oracle(g)) out.push_back(g);
    return out;
  }();
  return all;
}

std::vector<VertexSet> sets(const std::vector<MaxClique>& cl) {
  std::vector<VertexSet> r;
  for (auto& c : cl) r.push_back(c.vertices);
  return r;
}

UGraph path(int n) {
  UGraph g(n);
  for (int i = 0; i + 1 < n; ++i) g.add_edge(i, i + 1);
  return g;
}

UGraph complete(int n) {
  UGraph g(n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) g.add_edge(i, j);
  return g;
}

UGraph star(int leaves) {
  UGraph g(leaves + 1);
  for (int i = 1; i <= leaves; ++i) g.add_edge(0, i);
  return g;
}

// Vertices a..u except i, intervals read off the clique columns 0..10.
UGraph sample_graph() {
  return from_intervals({{0, 0}, {0, 3}, {1, 9}, {6, 10}, {10, 10}, {1, 1}, {2, 2}, {2, 3}, {3, 3}, {4, 5},
                         {4, 5}, {4, 4}, {5, 5}, {6, 8}, {7, 9}, {7, 9}, {9, 9}, {6, 6}, {7, 7}, {8, 8}});
}
const std::string kSampleNames = "abcdefghjklmnopqrstu";

VertexSet named(const std::string& s) {
  VertexSet r;
  for (char c : s) r.push_back(static_cast<int>(kSampleNames.find(c)));
  std::sort(r.begin(), r.end());
  return r;
}

int index_of(const std::vector<MaxClique>& cl, const VertexSet& s) {
  for (int i = 0; i < static_cast<int>(cl.size()); ++i)
    if (cl[i].vertices == s) return i;
  return -1;
}

bool connected(const UGraph& g) { return g.components().size() == 1; }

// Coloured tree encoding with explicit colours, independent of treelogic.
std::string encode(const ColouredTree& t, int v) {
  std::string s = "[";
  for (auto [a, b] : t.nodes[v].colour) s += std::to_string(a) + ":" + std::to_string(b) + ",";
  std::vector<std::string> kids;
  for (int c : t.nodes[v].children) kids.push_back(encode(t, c));
  std::sort(kids.begin(), kids.end());
  s += "(";
  for (auto& k : kids) s += k;
  return s + ")]";
}

}  // namespace

TEST_CASE("graph basics") {
  UGraph g = path(4);
  CHECK(g.closed_neighbourhood(1) == VertexSet{0, 1, 2});
  CHECK(g.is_module({0, 2}) == false);
  CHECK(star(3).is_module({1, 2, 3}));
  CHECK(g.components().size() == 1);
  CHECK(g.apices().empty());
  CHECK(star(3).apices() == VertexSet{0});
  CHECK(g.induced({1, 2, 3}).edges() == std::set<std::pair<int, int>>{{0, 1}, {1, 2}});
  Structure s = graph_to_structure(g);
  CHECK(graph_from_structure(s).edges() == g.edges());
  CHECK_THROWS_AS(graph_from_structure(parse_structure("vocab E/2\nuniverse 2\nE 0 1\n")), DomainError);
  CHECK_THROWS_AS(graph_from_structure(parse_structure("vocab E/2\nuniverse 2\nE 0 0\n")), DomainError);
}

TEST_CASE("max cliques") {
  CHECK(sets(max_cliques(complete(3))) == std::vector<VertexSet>{{0, 1, 2}});
  CHECK(sets(max_cliques(path(3))) == std::vector<VertexSet>{{0, 1}, {1, 2}});
  auto cl = max_cliques(path(3));
  CHECK(cl[0].witness == std::make_pair(0, 0));
  CHECK(cl[1].witness == std::make_pair(1, 2));
  UGraph f = sample_graph();
  auto fc = max_cliques(f);
  CHECK(fc.size() == 11);
  CHECK(span(fc, 0) == 1);
  CHECK(span(fc, 2) == 9);   // c spans columns 1..9
  CHECK(span(fc, 1) == 4);   // b spans columns 0..3
  CHECK(span(max_cliques(path(3)), 1) == 2);

  for (auto& g : interval_graphs()) CHECK(sets(max_cliques(g)) == bron_kerbosch(g));
  std::mt19937 rng(11);
  for (int i = 0; i < 300; ++i) {
    UGraph g = random_interval_graph(8, 12, rng);
    CHECK(sets(max_cliques(g)) == bron_kerbosch(g));
  }
}

TEST_CASE("clique preorder and possible ends") {
  auto pc = max_cliques(path(3));
  CliquePreorder p = clique_preorder(pc, 0);
  CHECK(p.precedes(0, 1));
  CHECK_FALSE(p.precedes(1, 0));
  CHECK(p.asymmetric);
  CHECK(possible_ends(pc) == std::vector<int>{0, 1});
  CHECK(possible_ends(max_cliques(complete(4))) == std::vector<int>{0});

  auto sc = max_cliques(star(3));
  CliquePreorder q = clique_preorder(sc, 0);
  CHECK(q.asymmetric);
  CHECK_FALSE(q.precedes(1, 2));
  CHECK_FALSE(q.precedes(2, 1));
  CHECK(q.classes == std::vector<std::vector<int>>{{0}, {1, 2}});

  // asymmetric <=> strict weak order <=> first clique of a consecutive order
  int checked = 0;
  for (auto& g : interval_graphs()) {
    if (!connected(g)) continue;
    auto cl = max_cliques(g);
    std::set<int> firsts = first_cliques(g);
    for (int c = 0; c < static_cast<int>(cl.size()); ++c) {
      CliquePreorder r = clique_preorder(cl, c);
      CHECK(r.asymmetric == r.strict_weak);
      CHECK(r.asymmetric == (firsts.count(c) == 1));
      ++checked;
    }
    auto ends = possible_ends(cl);
    CHECK(std::set<int>(ends.begin(), ends.end()) == firsts);
  }
  CHECK(checked > 1000);
}

TEST_CASE("collapsing incomparable cliques") {
  auto pc = max_cliques(path(3));
  OrderedQuotient q = collapse_incomparables(path(3), pc, 0);
  CHECK(q.graph.edges() == path(3).edges());
  CHECK(q.cliques == std::vector<VertexSet>{{0, 1}, {1, 2}});

  OrderedQuotient s = collapse_incomparables(star(3), max_cliques(star(3)), 0);
  CHECK(s.graph.size() == 3);
  CHECK(s.classes == std::vector<VertexSet>{{0}, {1}, {2, 3}});

  // the middle clique of a four-vertex path is not an end
  CHECK_THROWS_AS(collapse_incomparables(path(4), max_cliques(path(4)), 1), DomainError);
}

TEST_CASE("collapse over all small interval graphs") {
  for (auto& g : interval_graphs()) {
    if (!connected(g)) continue;
    auto cl = max_cliques(g);
    for (int c = 0; c < static_cast<int>(cl.size()); ++c) {
      if (!clique_preorder(cl, c).asymmetric) {
        CHECK_THROWS_AS(collapse_incomparables(g, cl, c), DomainError);
        continue;
      }
      CliquePreorder p = clique_preorder(cl, c);
      std::vector<int> sp = spans(g, cl);
      for (auto& cls : p.classes) {
        if (cls.size() < 2) continue;
        VertexSet in, out;
        for (int d = 0; d < static_cast<int>(cl.size()); ++d)
          for (int v : cl[d].vertices)
            (std::find(cls.begin(), cls.end(), d) != cls.end() ? in : out).push_back(v);
        VertexSet s, by_span;
        for (int v = 0; v < g.size(); ++v) {
          bool i = std::count(in.begin(), in.end(), v) > 0, o = std::count(out.begin(), out.end(), v) > 0;
          if (i && !o) s.push_back(v);
          if (i && sp[v] <= static_cast<int>(cls.size())) by_span.push_back(v);
        }
        CHECK(s == by_span);
        CHECK(g.is_module(s));
      }
      OrderedQuotient q = collapse_incomparables(g, cl, c);
      auto qc = max_cliques(q.graph);
      CHECK(qc.size() == q.cliques.size());
      std::vector<VertexSet> sorted = q.cliques;
      std::sort(sorted.begin(), sorted.end());
      CHECK(sets(qc) == sorted);
      // the collapsed order is consecutive, so its first clique is an end
      int first = index_of(qc, q.cliques.front());
      auto ends = possible_ends(qc);
      CHECK(std::find(ends.begin(), ends.end(), first) != ends.end());
    }
  }
}

TEST_CASE("modular partition") {
  ModularPartition p = modular_partition(path(4));
  CHECK(p.cells.size() == 3);
  for (auto& cell : p.cells) CHECK(cell.size() == 1);
  CHECK(p.modules.size() == 4);
  CHECK_THROWS_AS(modular_partition(star(3)), DomainError);
  CHECK_THROWS_AS(modular_partition(UGraph(2)), DomainError);

  UGraph f = sample_graph();
  ModularPartition fp = modular_partition(f);
  CHECK(fp.cells.size() == 5);
  std::set<VertexSet> big;
  for (auto& w : fp.modules)
    if (w.size() > 1) big.insert(w);
  CHECK(big == std::set<VertexSet>{named("fghj"), named("klmn"), named("opqrstu")});

  for (auto& g : interval_graphs()) {
    if (!connected(g) || !g.apices().empty() || g.size() == 1) continue;
    ModularPartition mp = modular_partition(g);
    auto cl = max_cliques(g);
    std::vector<std::vector<int>> cells = mp.cells;
    for (auto& c : cells) std::sort(c.begin(), c.end());
    std::sort(cells.begin(), cells.end());
    CHECK(cells == partition_oracle(sets(cl)));
    CHECK(cells.size() >= 3);
    auto mods = mp.modules;
    std::sort(mods.begin(), mods.end());
    CHECK(mods == modules_oracle(g));
    for (auto& w : mp.modules) CHECK(g.is_module(w));
  }
}

TEST_CASE("L_G from every possible end") {
  // Collapsing twice from any possible end yields isomorphic graphs.
  for (auto& g : interval_graphs()) {
    if (!connected(g) || !g.apices().empty() || g.size() == 1) continue;
    auto cl = max_cliques(g);
    std::vector<UGraph> ls;
    for (int e : possible_ends(cl)) {
      OrderedQuotient gm = collapse_incomparables(g, cl, e);
      auto cl2 = max_cliques(gm.graph);
      OrderedQuotient lm = collapse_incomparables(gm.graph, cl2, index_of(cl2, gm.cliques.back()));
      ls.push_back(lm.graph);
      // the composite classes are W_G
      std::vector<VertexSet> classes;
      for (auto& c : lm.classes) {
        VertexSet u;
        for (int x : c) u.insert(u.end(), gm.classes[x].begin(), gm.classes[x].end());
        std::sort(u.begin(), u.end());
        classes.push_back(u);
      }
      std::sort(classes.begin(), classes.end());
      CHECK(classes == modules_oracle(g));
    }
    for (auto& l : ls) CHECK(isomorphic(l, ls.front()));
  }
}

TEST_CASE("canon of L") {
  OrderedQuotient single;
  single.graph = complete(3);
  single.classes = {{0}, {1}, {2}};
  single.class_of = {0, 1, 2};
  single.cliques = {{0, 1, 2}};
  OrderedCanon k = canon_L(single);
  CHECK(k.canon.n == 3);
  CHECK(k.canon.edges.size() == 3);
  CHECK(k.positions == std::vector<std::vector<int>>{{1}});

  OrderedQuotient p4;
  p4.graph = path(4);
  p4.classes = {{0}, {1}, {2}, {3}};
  p4.class_of = {0, 1, 2, 3};
  p4.cliques = {{0, 1}, {1, 2}, {2, 3}};
  OrderedCanon kp = canon_L(p4);
  CHECK(kp.symmetric);
  CHECK_FALSE(kp.reversed);
  CHECK(kp.canon.edges == std::set<std::pair<int, int>>{{1, 2}, {2, 3}, {3, 4}});
  CHECK(kp.positions == std::vector<std::vector<int>>{{1, 3}, {2, 2}, {3, 1}});

  // Graphs that equal their own L: canon isomorphic, orders mirror each other.
  int seen = 0;
  for (auto& g : interval_graphs()) {
    if (g.size() > 6 || !connected(g)) continue;
    OrderedQuotient l = l_graph(g);
    OrderedCanon kl = canon_L(l);
    CHECK(isomorphic(graph_from_canon(kl.canon), l.graph));
    OrderedQuotient rev = l;
    std::reverse(rev.cliques.begin(), rev.cliques.end());
    OrderedCanon kr = canon_L(rev);
    CHECK(kr.canon == kl.canon);
    CHECK(kr.symmetric == kl.symmetric);
    if (l.graph.size() == g.size()) ++seen;
  }
  CHECK(seen > 20);
}

TEST_CASE("decomposition components") {
  auto component_sets = [](const UGraph& g) {
    std::set<VertexSet> r;
    for (auto& x : decomposition_components(g)) r.insert(x.vertices);
    return r;
  };
  // b is an apex of a-b-c, so {a,c} is a decomposition module
  CHECK(component_sets(path(3)) == std::set<VertexSet>{{0}, {2}, {0, 1, 2}});
  CHECK(component_sets(path(4)) == std::set<VertexSet>{{0, 1, 2, 3}});
  for (auto& x : decomposition_components(sample_graph()))
    if (x.n == 20) CHECK(x.vertices.size() == 20);

  for (auto& g : interval_graphs()) {
    std::set<VertexSet> got;
    auto cl = max_cliques(g);
    for (auto& x : decomposition_components(g)) {
      got.insert(x.vertices);
      if (x.n == g.size()) CHECK(std::find(g.components().begin(), g.components().end(), x.vertices) !=
                                 g.components().end());
    }
    CHECK(got == decomposition_oracle(g));
  }
}

TEST_CASE("coloured modular decomposition tree") {
  ColouredTree k = build_modular_tree(complete(4));
  CHECK(k.nodes.size() == 2);
  CHECK(k.nodes[1].kind == NodeKind::Component);
  ColouredTree k1 = build_modular_tree(complete(1));
  CHECK(k1.nodes.size() == 2);
  CHECK(k1.nodes[1].colour.empty());

  ColouredTree t = build_modular_tree(sample_graph());
  CHECK(t.nodes[0].kind == NodeKind::Root);
  REQUIRE(t.nodes[0].children.size() == 1);
  const auto& vv = t.nodes[t.nodes[0].children[0]];
  CHECK(vv.children.size() == 3);
  std::map<VertexSet, std::vector<int>> colours;
  int arrangements = 0;
  for (auto& x : t.nodes) {
    if (x.kind == NodeKind::Module) colours[x.vertices] = x.positions;
    if (x.kind == NodeKind::Arrangement) ++arrangements;
    if (x.kind == NodeKind::Component) CHECK(x.children.size() <= 3);
  }
  CHECK(arrangements == 6);
  CHECK(colours == std::map<VertexSet, std::vector<int>>{{named("fghj"), {2, 4}},
                                                           {named("klmn"), {3, 3}},
                                                           {named("opqrstu"), {2, 4}},
                                                           {named("tu"), {2}},
                                                           {named("gj"), {1}},
                                                           {named("mn"), {1}}});

  // tree isomorphism <=> graph isomorphism
  std::map<std::string, int> first;
  std::mt19937 rng(3);
  const auto& gs = interval_graphs();
  for (int i = 0; i < static_cast<int>(gs.size()); ++i) {
    ColouredTree ti = build_modular_tree(gs[i]);
    std::string e = encode(ti, 0);
    CHECK(first.emplace(e, i).second);
    CHECK(encode(build_modular_tree(random_relabel(gs[i], rng)), 0) == e);
  }
}

TEST_CASE("coloured tree preorder") {
  ColouredTree t = build_modular_tree(sample_graph());
  int n = static_cast<int>(t.nodes.size());
  for (int a = 0; a < n; ++a) CHECK(coloured_tree_preorder(t, a, a) == 0);
  // the two {2,4} modules have the same colour but different subtrees
  int x = -1, y = -1;
  for (int i = 0; i < n; ++i)
    if (t.nodes[i].kind == NodeKind::Module && t.nodes[i].positions == std::vector<int>{2, 4}) (x < 0 ? x : y) = i;
  CHECK(coloured_tree_preorder(t, x, y) != 0);
  CHECK(coloured_tree_preorder(t, x, y) == -coloured_tree_preorder(t, y, x));

  // random coloured trees: equal <=> same explicit encoding; gadgets agree
  std::mt19937 rng(5);
  for (int trial = 0; trial < 150; ++trial) {
    std::uniform_int_distribution<int> size(2, 8);
    ColouredTree r;
    int m = size(rng);
    for (int v = 0; v < m; ++v) {
      ModularTreeNode node;
      node.kind = v == 0 ? NodeKind::Root : NodeKind::Component;
      node.parent = v == 0 ? -1 : std::uniform_int_distribution<int>(0, v - 1)(rng);
      if (rng() % 2) node.colour = {{static_cast<int>(rng() % 2) + 1, 1}};
      if (v > 0) r.nodes[node.parent].children.push_back(v);
      r.nodes.push_back(node);
    }
    for (int a = 0; a < m; ++a)
      for (int b = 0; b < m; ++b) {
        int c = coloured_tree_preorder(r, a, b);
        CHECK((c == 0) == (encode(r, a) == encode(r, b)));
        if (trial < 40) CHECK(coloured_tree_preorder(r, a, b, true) == c);
      }
  }
}

TEST_CASE("interval models and recognition") {
  UGraph f = sample_graph();
  IntervalModel m = interval_model(f);
  CHECK(m.cliques.size() == 11);
  CHECK(format_model(interval_model(path(3))) == "0 1 1\n1 1 2\n2 2 2\n");

  UGraph c4 = path(4);
  c4.add_edge(0, 3);
  CHECK_THROWS_AS(interval_model(c4), NotInterval);
  CHECK_THROWS_AS(interval_canon(c4), NotInterval);
  for (int n = 1; n <= 6; ++n)
    for (auto& g : all_graphs(n)) CHECK(is_interval_graph(g) == is_interval_oracle(g));
}

TEST_CASE("interval canonisation") {
  CHECK(format_canon(interval_canon(UGraph(1))) == "n 1\n");
  CHECK(format_canon(interval_canon(complete(3))) == "n 3\n1 2\n1 3\n2 3\n");

  std::set<CanonEdges> canons;
  std::mt19937 rng(9);
  for (auto& g : interval_graphs()) {
    CanonEdges c = interval_canon(g);
    CHECK(c.n == g.size());
    CHECK(canons.insert(c).second);
    UGraph cg = graph_from_canon(c);
    CHECK(isomorphic(cg, g));
    CHECK(interval_canon(cg) == c);
    for (int r = 0; r < 3; ++r) CHECK(interval_canon(random_relabel(g, rng)) == c);
  }
  for (int i = 0; i < 100; ++i) {
    UGraph g = random_interval_graph(20, 30, rng);
    CHECK(format_canon(interval_canon(g)) == format_canon(interval_canon(random_relabel(g, rng))));
  }
}
