#include "lrec/formula.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <map>
#include <optional>

namespace lrec {

namespace {

enum class Tok { Ident, NumVar, Literal, Punct, End };

struct Token {
  Tok type;
  std::string text;
  int line, column;
};

std::vector<Token> tokenize(const std::string& src) {
  std::vector<Token> out;
  int line = 1, col = 1;
  size_t i = 0;
  auto advance = [&](size_t k) {
    for (size_t j = 0; j < k; ++j) {
      if (src[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
      ++i;
    }
  };
  auto ident_char = [](char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\''; };
  while (i < src.size()) {
    char c = src[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    int l = line, cl = col;
    if (c == '%') {  // comment to end of line
      while (i < src.size() && src[i] != '\n') advance(1);
      continue;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      size_t j = i;
      while (j < src.size() && ident_char(src[j])) ++j;
      out.push_back({Tok::Ident, src.substr(i, j - i), l, cl});
      advance(j - i);
      continue;
    }
    if (c == '#') {
      size_t j = i + 1;
      while (j < src.size() && ident_char(src[j])) ++j;
      if (j == i + 1) throw ParseError("expected a name after '#'", l, cl);
      out.push_back({Tok::NumVar, src.substr(i, j - i), l, cl});
      advance(j - i);
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      size_t j = i;
      while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
      std::string lit = src.substr(i, j - i);
      if (lit != "0" && lit != "1") throw ParseError("only the constants 0 and 1 are supported", l, cl);
      out.push_back({Tok::Literal, lit, l, cl});
      advance(j - i);
      continue;
    }
    static const char* puncts[] = {"<->", "->", "<=", "!=", "(", ")", "[", "]", ",", ";", ":", "=", "<"};
    bool matched = false;
    for (const char* p : puncts) {
      std::string ps(p);
      if (src.compare(i, ps.size(), ps) == 0) {
        out.push_back({Tok::Punct, ps, l, cl});
        advance(ps.size());
        matched = true;
        break;
      }
    }
    if (!matched) throw ParseError(std::string("unexpected character '") + c + "'", l, cl);
  }
  out.push_back({Tok::End, "", line, col});
  return out;
}

bool is_keyword(const std::string& s) {
  static const std::set<std::string> kw = {"not", "and", "or", "exists", "forall", "count", "lrec", "lreceq", "dtc"};
  return kw.count(s) != 0;
}

// A term as written: a variable or one of the literals 0 and 1.
struct Term {
  std::string text;
  bool literal;
  int line, column;
  bool number() const { return literal || is_number_var(text); }
};

class Parser {
 public:
  explicit Parser(const std::string& src) : toks_(tokenize(src)) {
    std::set<Var> taken;
    for (auto& t : toks_)
      if (t.type == Tok::Ident || t.type == Tok::NumVar) taken.insert(t.text);
    fresh_.emplace(std::move(taken));
  }

  FormulaPtr parse() {
    FormulaPtr f = formula();
    if (peek().type != Tok::End) fail("unexpected '" + peek().text + "'");
    return f;
  }

 private:
  const Token& peek(size_t k = 0) const { return toks_[std::min(pos_ + k, toks_.size() - 1)]; }
  bool at(const std::string& p) const {
    const Token& t = peek();
    return (t.type == Tok::Punct || t.type == Tok::Ident) && t.text == p;
  }
  [[noreturn]] void fail(const std::string& msg) const { fail_at(msg, peek()); }
  [[noreturn]] static void fail_at(const std::string& msg, const Token& t) {
    throw ParseError(msg, t.line, t.column);
  }
  [[noreturn]] static void fail_at(const std::string& msg, const Term& t) {
    throw ParseError(msg, t.line, t.column);
  }
  void expect(const std::string& p) {
    if (!at(p)) fail("expected '" + p + "'" + (peek().type == Tok::End ? " at end of input" : ", got '" + peek().text + "'"));
    ++pos_;
  }
  bool accept(const std::string& p) {
    if (!at(p)) return false;
    ++pos_;
    return true;
  }

  FormulaPtr formula() {
    FormulaPtr a = disjunction();
    if (accept("->")) return lor(lnot(a), formula());
    if (accept("<->")) {
      FormulaPtr b = formula();
      return land(lor(lnot(a), b), lor(lnot(b), a));
    }
    return a;
  }

  FormulaPtr disjunction() {
    FormulaPtr a = conjunction();
    while (accept("or")) a = lor(a, conjunction());
    return a;
  }

  FormulaPtr conjunction() {
    FormulaPtr a = unary();
    while (accept("and")) a = land(a, unary());
    return a;
  }

  FormulaPtr unary() {
    if (accept("not")) return lnot(unary());
    if (at("exists") || at("forall")) {
      bool ex = peek().text == "exists";
      ++pos_;
      Term x = term();
      if (x.literal) fail_at("cannot quantify a constant", x);
      FormulaPtr body = unary();
      return ex ? exists(x.text, body) : forall(x.text, body);
    }
    return primary();
  }

  Term term() {
    const Token& t = peek();
    if (t.type == Tok::Literal) {
      ++pos_;
      return {t.text, true, t.line, t.column};
    }
    if (t.type == Tok::NumVar || (t.type == Tok::Ident && !is_keyword(t.text))) {
      ++pos_;
      return {t.text, false, t.line, t.column};
    }
    fail(t.type == Tok::End ? "unexpected end of input" : "expected a variable, got '" + t.text + "'");
  }

  std::vector<Term> tuple() {
    if (!accept("(")) return {term()};
    std::vector<Term> out{term()};
    while (accept(",")) out.push_back(term());
    expect(")");
    return out;
  }

  static VarTuple names(const std::vector<Term>& ts) {
    VarTuple out;
    for (auto& t : ts) out.push_back(t.text);
    return out;
  }

  static void no_literals(const std::vector<Term>& ts) {
    for (auto& t : ts)
      if (t.literal) fail_at("a constant cannot be bound", t);
  }

  static void all_numbers(const std::vector<Term>& ts, const std::string& what) {
    for (auto& t : ts)
      if (!t.number()) fail_at(what + " must be number terms", t);
  }

  static void compatible(const std::vector<Term>& a, const std::vector<Term>& b, const Token& where) {
    if (a.size() != b.size()) fail_at("incompatible tuple lengths", where);
    for (size_t i = 0; i < a.size(); ++i)
      if (a[i].number() != b[i].number()) fail_at("sort mismatch between tuples", b[i]);
  }

  // Replaces literal terms with fresh number variables pinned to the constant.
  FormulaPtr pin_literals(std::vector<Term*> terms, const std::function<FormulaPtr()>& build) {
    std::map<std::string, Var> lit;
    for (Term* t : terms)
      if (t->literal) {
        auto it = lit.find(t->text);
        if (it == lit.end()) it = lit.emplace(t->text, fresh_->number("c")).first;
        t->text = it->second;
        t->literal = false;
      }
    FormulaPtr f = build();
    for (auto it = lit.rbegin(); it != lit.rend(); ++it)
      f = exists(it->second, land(it->first == "0" ? zero(it->second) : one(it->second), f));
    return f;
  }

  FormulaPtr zero(const Var& x) {
    Var g = fresh_->number("g");
    return forall(g, leq(x, g));
  }

  FormulaPtr one(const Var& x) {
    Var z = fresh_->number("z"), h = fresh_->number("h");
    return exists(z, land(zero(z), land(lnot(leq(x, z)), forall(h, lor(leq(h, z), leq(x, h))))));
  }

  FormulaPtr primary() {
    const Token start = peek();
    if (accept("(")) {
      FormulaPtr f = formula();
      expect(")");
      return f;
    }
    if (accept("[")) return recursion(start);
    if (start.type == Tok::Ident && start.text == "count") {
      ++pos_;
      expect("(");
      std::vector<Term> u{term()};
      while (accept(",")) u.push_back(term());
      no_literals(u);
      expect(";");
      FormulaPtr body = formula();
      expect(")");
      expect("=");
      std::vector<Term> p = tuple();
      all_numbers(p, "count values");
      std::vector<Term*> refs;
      for (auto& t : p) refs.push_back(&t);
      return pin_literals(refs, [&] { return count(names(u), body, names(p)); });
    }
    if (start.type == Tok::Ident && !is_keyword(start.text) && peek(1).type == Tok::Punct && peek(1).text == "(") {
      pos_ += 2;
      std::vector<Term> args{term()};
      while (accept(",")) args.push_back(term());
      expect(")");
      for (auto& a : args)
        if (a.number()) fail_at("relation arguments must be structure variables", a);
      return atom(start.text, names(args));
    }
    Term a = term();
    const Token op = peek();
    if (!(at("=") || at("!=") || at("<=") || at("<")))
      fail("expected '=', '!=', '<=' or '<' after '" + a.text + "'");
    ++pos_;
    Term b = term();
    if (op.text == "=" || op.text == "!=") {
      if (a.number() != b.number()) fail_at("sort clash in equality", b);
      return pin_literals({&a, &b}, [&] {
        FormulaPtr e = eq(a.text, b.text);
        return op.text == "=" ? e : lnot(e);
      });
    }
    if (!a.number()) fail_at("'" + op.text + "' needs number terms", a);
    if (!b.number()) fail_at("'" + op.text + "' needs number terms", b);
    return pin_literals({&a, &b}, [&] { return op.text == "<=" ? leq(a.text, b.text) : lnot(leq(b.text, a.text)); });
  }

  FormulaPtr recursion(const Token& open) {
    const Token kw = peek();
    if (!(at("lrec") || at("lreceq") || at("dtc"))) fail("expected 'lrec', 'lreceq' or 'dtc'");
    ++pos_;
    std::vector<Term> u = tuple();
    expect(",");
    std::vector<Term> v = tuple();
    no_literals(u);
    no_literals(v);
    compatible(u, v, kw);
    std::vector<Term> p;
    if (kw.text != "dtc") {
      expect(",");
      p = tuple();
      no_literals(p);
      all_numbers(p, "recursion labels");
    }
    expect(":");
    std::vector<FormulaPtr> parts{formula()};
    size_t nparts = kw.text == "lrec" ? 2 : kw.text == "lreceq" ? 3 : 1;
    while (parts.size() < nparts) {
      expect(";");
      parts.push_back(formula());
    }
    expect("]");
    expect("(");
    std::vector<Term> w = tuple();
    expect(",");
    std::vector<Term> r = tuple();
    expect(")");
    compatible(u, w, open);
    std::vector<Term*> refs;
    for (auto& t : w) refs.push_back(&t);
    if (kw.text == "dtc") {
      compatible(u, r, open);
      for (auto& t : r) refs.push_back(&t);
      return pin_literals(refs, [&] { return make_dtc(names(u), names(v), parts[0], names(w), names(r)); });
    }
    all_numbers(r, "resources");
    for (auto& t : r) refs.push_back(&t);
    return pin_literals(refs, [&] {
      if (kw.text == "lrec") return make_lrec(names(u), names(v), names(p), parts[0], parts[1], names(w), names(r));
      return make_lreceq(names(u), names(v), names(p), parts[0], parts[1], parts[2], names(w), names(r));
    });
  }

  std::vector<Token> toks_;
  size_t pos_ = 0;
  std::optional<FreshNames> fresh_;
};

}  // namespace

FormulaPtr parse_formula(const std::string& text) { return Parser(text).parse(); }

}  // namespace lrec
