#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "lrec/formula.hpp"

#include <random>

using namespace lrec;

namespace {

const char* kCircuit =
    "exists #r1 exists #r2 ([lrec x, y, #p : E(x,y) ; "
    "(Pand(x) and count(y; E(x,y)) = #p) or (Por(x) and not #p = 0) or (Pnot(x) and #p = 0) or Pone(x)]"
    "(z, (#r1,#r2)) and forall #r (#r <= #r1 and #r <= #r2))";

std::set<Var> vars(std::initializer_list<const char*> xs) { return {xs.begin(), xs.end()}; }

// Random formulas over E/2 and P/1 for round-trip testing.
FormulaPtr random_formula(std::mt19937& rng, int depth) {
  static const VarTuple ev = {"x", "y", "z"}, nv = {"#p", "#q"};
  auto pick = [&](const VarTuple& t) { return t[rng() % t.size()]; };
  int choice = depth <= 0 ? rng() % 4 : rng() % 12;
  switch (choice) {
    case 0: return atom("E", {pick(ev), pick(ev)});
    case 1: return atom("P", {pick(ev)});
    case 2: return eq(pick(ev), pick(ev));
    case 3: return leq(pick(nv), pick(nv));
    case 4: return lnot(random_formula(rng, depth - 1));
    case 5: return land(random_formula(rng, depth - 1), random_formula(rng, depth - 1));
    case 6: return lor(random_formula(rng, depth - 1), random_formula(rng, depth - 1));
    case 7: return exists(pick(rng() % 2 ? ev : nv), random_formula(rng, depth - 1));
    case 8: return forall(pick(ev), random_formula(rng, depth - 1));
    case 9: return count({pick(ev)}, random_formula(rng, depth - 1), {pick(nv)});
    case 10:
      return make_lrec({"x"}, {"y"}, {"#p"}, random_formula(rng, depth - 1), random_formula(rng, depth - 1),
                  {pick(ev)}, {pick(nv), pick(nv)});
    default:
      return make_dtc({"x"}, {"y"}, random_formula(rng, depth - 1), {pick(ev)}, {pick(ev)});
  }
}

}  // namespace

TEST_CASE("atoms and connectives parse") {
  auto f = parse_formula("E(x,y)");
  CHECK(f->kind == Kind::Atom);
  CHECK(f->args == VarTuple{"x", "y"});
  CHECK(parse_formula("not x = y")->kind == Kind::Not);
  auto g = parse_formula("E(x,y) and E(y,x) or x = y");
  CHECK(g->kind == Kind::Or);
  CHECK(g->sub[0]->kind == Kind::And);
}

TEST_CASE("implication is desugared") {
  auto f = parse_formula("E(x,y) -> E(y,x)");
  CHECK(same_formula(f, lor(lnot(atom("E", {"x", "y"})), atom("E", {"y", "x"}))));
  auto g = parse_formula("E(x,y) <-> E(y,x)");
  CHECK(g->kind == Kind::And);
}

TEST_CASE("circuit formula parses to lrec under two existentials") {
  auto f = parse_formula(kCircuit);
  REQUIRE(f->kind == Kind::Exists);
  CHECK(f->u[0] == "#r1");
  REQUIRE(f->sub[0]->kind == Kind::Exists);
  auto body = f->sub[0]->sub[0];
  REQUIRE(body->kind == Kind::And);
  auto rec = body->sub[0];
  REQUIRE(rec->kind == Kind::Lrec);
  CHECK(rec->u == VarTuple{"x"});
  CHECK(rec->v == VarTuple{"y"});
  CHECK(rec->p == VarTuple{"#p"});
  CHECK(rec->w == VarTuple{"z"});
  CHECK(rec->r == VarTuple{"#r1", "#r2"});
  CHECK(free_variables(f) == vars({"z"}));
}

TEST_CASE("constants are desugared into bound variables") {
  auto f = parse_formula("#p = 0");
  CHECK(f->kind == Kind::Exists);
  CHECK(free_variables(f) == vars({"#p"}));
  auto g = parse_formula("[lreceq x, y, #p : E(x,y) ; not x = x ; x = t](s, 1)");
  CHECK(free_variables(g) == vars({"s", "t"}));
  // fresh names avoid every name in the input
  auto h = parse_formula("#_c0 = 1");
  CHECK(free_variables(h) == vars({"#_c0"}));
}

TEST_CASE("parse errors carry line and column") {
  auto err = [](const std::string& s) -> std::pair<int, int> {
    try {
      parse_formula(s);
    } catch (const ParseError& e) {
      return {e.line, e.column};
    }
    return {0, 0};
  };
  CHECK(err("E(x,y) and") == std::pair{1, 11});
  CHECK(err("E(x,\n  #p)") == std::pair{2, 3});
  CHECK(err("x <= y").first == 1);
  CHECK(err("[lrec (x1,x2), y, #p : E(x1,y) ; x1 = x1](z, #r)") == std::pair{1, 2});
  CHECK(err("[lrec x, y, z : E(x,y) ; x = x](z, #r)") == std::pair{1, 13});
  CHECK(err("x = #p") == std::pair{1, 5});
  CHECK(err("E(x,y) $") == std::pair{1, 8});
  CHECK(err("#p = 7") == std::pair{1, 6});
}

TEST_CASE("free variables") {
  CHECK(free_variables(parse_formula("#p <= #q")) == vars({"#p", "#q"}));
  CHECK(free_variables(parse_formula("forall x exists y E(x,y)")).empty());
  CHECK(free_variables(parse_formula("count(x; E(x,y)) = #p")) == vars({"y", "#p"}));
  auto f = parse_formula("[lrec x, y, #p : E(x,y) and P(z) ; #p <= #q and x = a](w, #r)");
  CHECK(free_variables(f) == vars({"z", "#q", "a", "w", "#r"}));
  auto g = parse_formula("[lreceq x, y, #p : E(x,b) ; E(x,y) ; P(y)](w, #r)");
  CHECK(free_variables(g) == vars({"b", "y", "w", "#r"}));
}

TEST_CASE("dtc free variables after binding the resource") {
  auto f = parse_formula("[dtc x, y : E(x,y) and P(c)](s, t)");
  CHECK(free_variables(f) == vars({"c", "s", "t"}));
  auto g = expand_dtc(f);
  CHECK(free_variables(g) == vars({"c", "s", "t"}));
  REQUIRE(g->kind == Kind::Exists);
  auto rec = g->sub[0];
  REQUIRE(rec->kind == Kind::Lrec);
  CHECK(rec->u == VarTuple{"y"});
  CHECK(rec->v == VarTuple{"x"});
  CHECK(rec->w == VarTuple{"t"});
  CHECK(rec->r.size() == 1);
  CHECK(rec->p.size() == 1);
}

TEST_CASE("dtc expansion renames binders that would capture the source") {
  auto f = parse_formula("[dtc x, y : E(x,y)](y, x)");
  auto g = expand_dtc(f);
  CHECK(free_variables(g) == vars({"x", "y"}));
}

TEST_CASE("expand_dtc leaves dtc-free formulas untouched and is idempotent") {
  auto f = parse_formula(kCircuit);
  CHECK(expand_dtc(f) == f);
  auto g = expand_dtc(parse_formula("exists s [dtc x, y : [dtc a, b : E(a,b)](x, y)](s, t)"));
  CHECK(same_formula(expand_dtc(g), g));
  CHECK(pretty(g).find("dtc") == std::string::npos);
}

TEST_CASE("pretty printing round-trips") {
  CHECK(same_formula(parse_formula(pretty(parse_formula(kCircuit))), parse_formula(kCircuit)));
  std::mt19937 rng(7);
  for (int i = 0; i < 500; ++i) {
    auto f = random_formula(rng, 4);
    auto g = parse_formula(pretty(f));
    REQUIRE_MESSAGE(same_formula(f, g), pretty(f));
    auto e = expand_dtc(f);
    CHECK(free_variables(e) == free_variables(f));
    CHECK(same_formula(expand_dtc(e), e));
    CHECK(same_formula(parse_formula(pretty(e)), e));
  }
}
