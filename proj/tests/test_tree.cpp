#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "lrec/circuit.hpp"
#include "lrec/tree.hpp"
#include "tree_enum.hpp"

#include <fstream>
#include <sstream>

using namespace lrec;
using testutil::all_trees;

TEST_CASE("directed trees") {
  DirectedTree t = parse_parent_array("-1 0 0 1 1 1");
  CHECK(t.root() == 0);
  CHECK(t.subtree_size(0) == 6);
  CHECK(t.subtree_size(1) == 4);
  CHECK(t.children_of_size(0, 1) == 1);
  CHECK(t.profile(0) == std::vector<int>{6, 1, 0, 0, 1, 0});
  CHECK(t.profile(1) == std::vector<int>{4, 3, 0, 0});
  CHECK(format_parent_array(t) == "-1 0 0 1 1 1");
  CHECK_THROWS_AS(parse_parent_array("-1 -1"), DomainError);
  CHECK_THROWS_AS(parse_parent_array("-1 2 1"), DomainError);
  CHECK_THROWS_AS(parse_parent_array("1 0"), DomainError);
  CHECK_THROWS_AS(parse_parent_array("-1 x"), DomainError);
  CHECK_THROWS_AS(parse_parent_array(""), DomainError);

  Structure s = tree_to_structure(t);
  CHECK(tree_from_structure(s).parents() == t.parents());
  Structure bad = parse_structure("vocab E/2\nuniverse 3\nE 0 2\nE 1 2\n");
  CHECK_THROWS_AS(tree_from_structure(bad), DomainError);

  for (int n = 1; n <= 8; ++n)
    for (auto& tr : all_trees(n))
      for (int v = 0; v < n; ++v) {
        auto p = tr.profile(v);
        int sum = 0;
        for (int s = 1; s < static_cast<int>(p.size()); ++s) sum += s * p[s];
        CHECK(sum == tr.subtree_size(v) - 1);
      }
  CHECK(all_trees(7).size() == 48);
  CHECK(all_trees(8).size() == 115);
}

TEST_CASE("oracle encoding") {
  CHECK(tree_canon_oracle(parse_parent_array("-1")) == "()");
  CHECK(tree_canon_oracle(parse_parent_array("-1 0 0")) == "(()())");
  CHECK(tree_canon_oracle(parse_parent_array("1 -1 1")) == "(()())");
  CHECK(tree_canon_oracle(parse_parent_array("-1 0 0"), {2, 0, 1}) == "2(0()1())");
}

namespace {

// In-degrees counted over the whole tuple space.
void check_indegrees(TreeGadget& g) {
  std::map<Vertex, uint64_t> deg;
  for (Vertex x = 0; x < g.num_vertices(); ++x)
    for (Vertex y : g.out(x)) ++deg[y];
  for (Vertex x = 0; x < g.num_vertices(); ++x) {
    REQUIRE(g.indegree(x) == deg[x]);
    if (g.decode(x).type != 0) CHECK(deg[x] <= 1);
  }
}

}  // namespace

TEST_CASE("gadget in-degrees match a full count") {
  for (int n = 4; n <= 5; ++n)
    for (auto& t : all_trees(n)) {
      TreeLogic tl(t);
      check_indegrees(tl.iso_gadget());
      check_indegrees(tl.order_gadget());
    }
  DirectedTree t = parse_parent_array("-1 0 0 1 1 2");
  TreeLogic tl(t, {0, 1, 1, 2, 2, 2});
  check_indegrees(tl.iso_gadget());
  check_indegrees(tl.order_gadget());
}

TEST_CASE("isomorphism gadget shape") {
  DirectedTree path = parse_parent_array("-1 0 1 2");
  IsoGadget g(path, {});
  Vertex r = g.pair_vertex(0, 0);
  CHECK(g.label(r) == Label::of({1}));
  CHECK(g.out(r).size() == 1);
  CHECK(g.decode(g.out(r)[0]) == GadgetVertex{1, 0, 0, 1, 0, 0});

  DirectedTree star = parse_parent_array("-1 0 0 0");
  IsoGadget s(star, {});
  CHECK(s.easy(1, 0));
  CHECK(s.out(s.pair_vertex(1, 0)).empty());
  CHECK(s.label(s.pair_vertex(1, 0)) == Label::empty());
  // three leaves of equal size: the type 2 vertices fan out to types 3 and 4
  auto t1 = s.out(s.pair_vertex(0, 0));
  CHECK(t1.size() == 3);
  auto t2 = s.out(t1[0]);
  CHECK(t2.size() == 9);
  CHECK(s.out(t2[0]).size() == 3);
  CHECK(s.label(t2[0]) == Label::of({3}));
  CHECK(s.indegree(s.pair_vertex(1, 2)) == 3 + 2 * 9);
  CHECK_THROWS_AS(IsoGadget(parse_parent_array("-1 0 0"), {}), TreeTooSmall);
}

TEST_CASE("tree isomorphism against the oracle") {
  for (int n = 1; n <= 7; ++n)
    for (auto& t : all_trees(n)) {
      TreeLogic tl(t);
      for (int v = 0; v < n; ++v)
        for (int w = 0; w < n; ++w)
          REQUIRE(tl.isomorphic(v, w) == (tree_canon_oracle(t, v) == tree_canon_oracle(t, w)));
    }
  DirectedTree t = parse_parent_array("-1 0 0 1 2");
  CHECK(tree_isomorphic(t, 3, 4));
  CHECK(tree_isomorphic(t, 1, 2));
  CHECK_FALSE(tree_isomorphic(t, 0, 1));
}

TEST_CASE("isomorphism gadget soundness and completeness threshold") {
  for (int n = 4; n <= 6; ++n)
    for (auto& t : all_trees(n)) {
      TreeLogic tl(t);
      for (int v = 0; v < n; ++v)
        for (int w = 0; w < n; ++w) {
          bool iso = tree_canon_oracle(t, v) == tree_canon_oracle(t, w);
          int s5 = 1;
          for (int i = 0; i < 5; ++i) s5 *= t.subtree_size(v);
          for (int ell = 0; ell <= s5; ++ell) {
            bool in = tl.iso_member(v, w, ell);
            if (in) REQUIRE(iso);
            if (ell == s5) REQUIRE(in == iso);
          }
        }
    }
}

TEST_CASE("profile order") {
  DirectedTree t = parse_parent_array("-1 0 0 2");
  CHECK(tree_order_less(t, 1, 2));
  CHECK_FALSE(tree_order_less(t, 2, 1));
  CHECK_FALSE(tree_order_less(t, 1, 1));

  for (int n = 1; n <= 7; ++n)
    for (auto& tr : all_trees(n)) {
      TreeLogic tl(tr);
      std::vector<std::vector<bool>> lt(n, std::vector<bool>(n));
      for (int v = 0; v < n; ++v)
        for (int w = 0; w < n; ++w) {
          lt[v][w] = tl.less(v, w);
          REQUIRE(lt[v][w] == (tree_order_compare_direct(tr, v, w) < 0));
        }
      for (int v = 0; v < n; ++v) {
        CHECK_FALSE(lt[v][v]);
        for (int w = 0; w < n; ++w) {
          CHECK_FALSE((lt[v][w] && lt[w][v]));
          bool incomparable = !lt[v][w] && !lt[w][v];
          CHECK(incomparable == (tree_canon_oracle(tr, v) == tree_canon_oracle(tr, w)));
          for (int x = 0; x < n; ++x) {
            if (lt[v][w] && lt[w][x]) CHECK(lt[v][x]);
            // incomparability is transitive
            if (!lt[v][w] && !lt[w][v] && !lt[w][x] && !lt[x][w]) CHECK((!lt[v][x] && !lt[x][v]));
          }
        }
      }
    }
}

TEST_CASE("canonisation") {
  CHECK(tree_canon(parse_parent_array("-1")) == CanonEdges{1, {}});
  CHECK(tree_canon(parse_parent_array("1 2 -1")) == CanonEdges{3, {{1, 2}, {2, 3}}});
  CHECK(format_canon(tree_canon(parse_parent_array("-1 0 1"))) == "n 3\n1 2\n2 3\n");

  std::vector<std::pair<CanonEdges, std::string>> seen;
  std::mt19937 rng(17);
  for (int n = 1; n <= 8; ++n)
    for (auto& t : all_trees(n)) {
      TreeLogic tl(t);
      CanonEdges c = tl.canon();
      std::string key = tree_canon_oracle(t);
      REQUIRE(c.n == n);
      CHECK(tree_canon_oracle(testutil::tree_of_canon(c)) == key);
      auto pos = tl.canon_positions();
      std::set<std::pair<int, int>> from_pos;
      for (int v = 0; v < n; ++v)
        if (t.parent(v) >= 0) from_pos.insert({pos[t.parent(v)], pos[v]});
      CHECK(from_pos == c.edges);
      CHECK(tree_canon(testutil::relabel(t, rng)) == c);
      for (auto& [c2, k2] : seen) CHECK((c2 == c) == (k2 == key));
      seen.push_back({c, key});
    }
}

TEST_CASE("coloured trees") {
  std::mt19937 rng(23);
  for (int trial = 0; trial < 150; ++trial) {
    int n = 1 + trial % 8;
    DirectedTree t = testutil::random_tree(rng, n);
    Colouring col(n);
    for (auto& c : col) c = static_cast<int>(rng() % 2);
    TreeLogic tl(t, col);
    for (int v = 0; v < n; ++v)
      for (int w = 0; w < n; ++w) {
        bool iso = tree_canon_oracle(t, v, col) == tree_canon_oracle(t, w, col);
        REQUIRE(tl.isomorphic(v, w) == iso);
        int cmp = tree_order_compare_direct(t, v, w, col);
        REQUIRE(tl.less(v, w) == (cmp < 0));
        CHECK((cmp == 0) == iso);
      }
    // Colours carried to canonical positions determine the coloured class.
    CanonEdges c = tl.canon();
    auto pos = tl.canon_positions();
    Colouring moved(n);
    for (int v = 0; v < n; ++v) moved[pos[v] - 1] = col[v];
    CHECK(tree_canon_oracle(testutil::tree_of_canon(c), moved) == tree_canon_oracle(t, col));
  }
}

TEST_CASE("disjoint unions of random trees") {
  std::mt19937 rng(29);
  for (int trial = 0; trial < 6; ++trial) {
    DirectedTree a = testutil::random_tree(rng, 50);
    DirectedTree b = trial % 2 ? testutil::relabel(a, rng) : testutil::random_tree(rng, 50);
    // new root 0, a on 1..50, b on 51..100
    std::vector<int> parent(101, -1);
    for (int v = 0; v < 50; ++v) {
      parent[1 + v] = a.parent(v) < 0 ? 0 : 1 + a.parent(v);
      parent[51 + v] = b.parent(v) < 0 ? 0 : 51 + b.parent(v);
    }
    DirectedTree u(parent);
    TreeLogic tl(u);
    int ra = 1 + a.root(), rb = 51 + b.root();
    CHECK(tl.isomorphic(ra, rb) == (tree_canon_oracle(a) == tree_canon_oracle(b)));
    if (trial % 2) CHECK(tl.isomorphic(ra, rb));
  }
}

namespace {

std::string slurp(const std::string& name) {
  std::ifstream in(std::string(LREC_TEST_DATA) + "/" + name);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

bool direct_value(const Structure& c, int g) {
  std::vector<int> kids;
  for (auto& t : c.relation("E"))
    if (t[0] == g) kids.push_back(t[1]);
  int ones = 0;
  for (int k : kids) ones += direct_value(c, k);
  if (c.holds(c.vocab().index_of("P_and"), {g})) return ones == static_cast<int>(kids.size());
  if (c.holds(c.vocab().index_of("P_or"), {g})) return ones > 0;
  if (c.holds(c.vocab().index_of("P_not"), {g})) return ones == 0;
  return c.holds(c.vocab().index_of("P_1"), {g});
}

}  // namespace

TEST_CASE("circuits") {
  Structure c = parse_structure(slurp("circuit.txt"));
  CHECK(circuit_value(c, c.element("a")));
  CHECK_FALSE(circuit_value(c, c.element("g")));
  CHECK(circuit_value(c, c.element("a"), {Engine::Stream}));
  Vocabulary sigma({{"E", 2}, {"P_and", 1}, {"P_or", 1}, {"P_not", 1}, {"P_0", 1}, {"P_1", 1}});
  Structure one(sigma, 1);
  one.add("P_1", {0});
  CHECK(circuit_value(one, 0));

  std::mt19937 rng(31);
  for (int trial = 0; trial < 200; ++trial) {
    int n = 1 + static_cast<int>(rng() % 15);
    DirectedTree t = testutil::random_tree(rng, n);
    Structure s(sigma, n);
    for (int v = 0; v < n; ++v) {
      if (t.parent(v) >= 0) s.add("E", {t.parent(v), v});
      const auto& ch = t.children(v);
      if (ch.empty()) s.add(rng() % 2 ? "P_1" : "P_0", {v});
      else if (ch.size() == 1 && rng() % 3 == 0) s.add("P_not", {v});
      else s.add(rng() % 2 ? "P_and" : "P_or", {v});
    }
    REQUIRE(circuit_value(s, t.root()) == direct_value(s, t.root()));
  }

  // Along 0, 1, 3, 4 the in-degree product is 2 * 3 = 6 > |C| = 5.
  Structure dense(sigma, 5);
  for (auto [a, b] : std::vector<std::pair<int, int>>{{0, 1}, {0, 2}, {1, 3}, {2, 3}, {3, 4}, {1, 4}, {2, 4}})
    dense.add("E", {a, b});
  try {
    check_path_property(dense);
    FAIL("expected rejection");
  } catch (const CircuitRejected& e) {
    CHECK(e.path.size() >= 3);
  }
  Structure cyc(sigma, 3);
  cyc.add("E", {0, 1});
  cyc.add("E", {1, 2});
  cyc.add("E", {2, 1});
  try {
    check_path_property(cyc);
    FAIL("expected rejection");
  } catch (const CircuitRejected& e) {
    CHECK(e.path.size() == 2);
  }
}
