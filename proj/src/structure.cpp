#include "lrec/structure.hpp"

#include <algorithm>
#include <optional>
#include <sstream>

namespace lrec {

ParseError::ParseError(const std::string& msg, int line_, int column_)
    : std::runtime_error(std::to_string(line_) + ":" + std::to_string(column_) + ": " + msg),
      line(line_),
      column(column_) {}

Vocabulary::Vocabulary(std::vector<Symbol> symbols) {
  for (auto& s : symbols) add(s.name, s.arity);
}

void Vocabulary::add(const std::string& name, int arity) {
  if (arity < 1) throw DomainError("arity of " + name + " must be at least 1");
  if (index_of(name) >= 0) throw DomainError("duplicate symbol " + name);
  symbols_.push_back({name, arity});
}

int Vocabulary::index_of(const std::string& name) const {
  for (size_t i = 0; i < symbols_.size(); ++i)
    if (symbols_[i].name == name) return static_cast<int>(i);
  return -1;
}

namespace {
constexpr size_t kDenseLimit = size_t{1} << 22;
}

Structure::Structure(Vocabulary vocab, int n) : vocab_(std::move(vocab)), n_(n) {
  if (n < 1) throw DomainError("universe must be non-empty");
  rels_.resize(vocab_.size());
  dense_.resize(vocab_.size());
  for (size_t i = 0; i < vocab_.size(); ++i) {
    size_t cells = 1;
    bool fits = true;
    for (int a = 0; a < vocab_.symbols()[i].arity && fits; ++a) {
      cells *= static_cast<size_t>(n);
      fits = cells <= kDenseLimit;
    }
    if (fits) dense_[i].assign(cells, 0);
  }
}

size_t Structure::dense_index(int sym, const int* t) const {
  size_t idx = 0;
  for (int a = 0; a < vocab_.symbols()[sym].arity; ++a) idx = idx * n_ + t[a];
  return idx;
}

void Structure::add(int sym, const Tuple& t) {
  if (sym < 0 || sym >= static_cast<int>(vocab_.size())) throw DomainError("unknown symbol");
  if (static_cast<int>(t.size()) != vocab_.symbols()[sym].arity)
    throw DomainError("tuple length does not match arity of " + vocab_.symbols()[sym].name);
  for (int x : t)
    if (x < 0 || x >= n_) throw DomainError("element out of range");
  rels_[sym].insert(t);
  if (!dense_[sym].empty()) dense_[sym][dense_index(sym, t.data())] = 1;
}

void Structure::add(const std::string& sym, const Tuple& t) {
  int i = vocab_.index_of(sym);
  if (i < 0) throw DomainError("unknown symbol " + sym);
  add(i, t);
}

bool Structure::holds(int sym, const int* t) const {
  if (!dense_[sym].empty()) return dense_[sym][dense_index(sym, t)] != 0;
  return rels_[sym].count(Tuple(t, t + vocab_.symbols()[sym].arity)) != 0;
}

bool Structure::holds(int sym, const Tuple& t) const { return holds(sym, t.data()); }

const std::set<Tuple>& Structure::relation(const std::string& sym) const {
  int i = vocab_.index_of(sym);
  if (i < 0) throw DomainError("unknown symbol " + sym);
  return rels_[i];
}

void Structure::set_names(std::vector<std::string> names) {
  if (static_cast<int>(names.size()) != n_) throw DomainError("need one name per element");
  name_index_.clear();
  for (int i = 0; i < n_; ++i)
    if (!name_index_.emplace(names[i], i).second) throw DomainError("duplicate element name " + names[i]);
  names_ = std::move(names);
}

std::string Structure::name_of(int e) const {
  return names_.empty() ? std::to_string(e) : names_[e];
}

int Structure::element(const std::string& name) const {
  if (!names_.empty()) {
    auto it = name_index_.find(name);
    if (it != name_index_.end()) return it->second;
  }
  if (name.empty() || !std::all_of(name.begin(), name.end(), ::isdigit)) return -1;
  long v = std::stol(name);
  return v < n_ ? static_cast<int>(v) : -1;
}

namespace {

struct Token {
  std::string text;
  int column;
};

std::vector<Token> split_line(const std::string& line) {
  std::vector<Token> out;
  size_t i = 0;
  while (i < line.size()) {
    if (line[i] == '#') break;
    if (isspace(static_cast<unsigned char>(line[i]))) {
      ++i;
      continue;
    }
    size_t j = i;
    while (j < line.size() && !isspace(static_cast<unsigned char>(line[j])) && line[j] != '#') ++j;
    out.push_back({line.substr(i, j - i), static_cast<int>(i) + 1});
    i = j;
  }
  return out;
}

int parse_int(const Token& t, int lineno) {
  if (t.text.empty() || !std::all_of(t.text.begin(), t.text.end(), ::isdigit))
    throw ParseError("expected a number, got '" + t.text + "'", lineno, t.column);
  return std::stoi(t.text);
}

}  // namespace

Structure parse_structure(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  Vocabulary vocab;
  bool have_vocab = false;
  std::optional<Structure> s;
  while (std::getline(in, line)) {
    ++lineno;
    auto toks = split_line(line);
    if (toks.empty()) continue;
    const std::string& head = toks[0].text;
    if (head == "vocab") {
      if (have_vocab) throw ParseError("duplicate vocab line", lineno, toks[0].column);
      for (size_t i = 1; i < toks.size(); ++i) {
        auto slash = toks[i].text.find('/');
        if (slash == std::string::npos)
          throw ParseError("expected NAME/ARITY", lineno, toks[i].column);
        Token ar{toks[i].text.substr(slash + 1), toks[i].column + static_cast<int>(slash) + 1};
        try {
          vocab.add(toks[i].text.substr(0, slash), parse_int(ar, lineno));
        } catch (const DomainError& e) {
          throw ParseError(e.what(), lineno, toks[i].column);
        }
      }
      have_vocab = true;
    } else if (head == "universe") {
      if (!have_vocab) throw ParseError("universe before vocab", lineno, toks[0].column);
      if (s) throw ParseError("duplicate universe line", lineno, toks[0].column);
      if (toks.size() != 2) throw ParseError("expected 'universe N'", lineno, toks[0].column);
      int n = parse_int(toks[1], lineno);
      if (n < 1) throw ParseError("universe must be non-empty", lineno, toks[1].column);
      s.emplace(vocab, n);
    } else if (head == "names") {
      if (!s) throw ParseError("names before universe", lineno, toks[0].column);
      std::vector<std::string> names;
      for (size_t i = 1; i < toks.size(); ++i) names.push_back(toks[i].text);
      try {
        s->set_names(std::move(names));
      } catch (const DomainError& e) {
        throw ParseError(e.what(), lineno, toks[0].column);
      }
    } else {
      if (!s) throw ParseError("tuple before universe", lineno, toks[0].column);
      int sym = s->vocab().index_of(head);
      if (sym < 0) throw ParseError("unknown relation symbol '" + head + "'", lineno, toks[0].column);
      int arity = s->vocab().symbols()[sym].arity;
      if (static_cast<int>(toks.size()) - 1 != arity)
        throw ParseError("expected " + std::to_string(arity) + " elements", lineno, toks[0].column);
      Tuple t;
      for (size_t i = 1; i < toks.size(); ++i) {
        int e = s->element(toks[i].text);
        if (e < 0) throw ParseError("unknown element '" + toks[i].text + "'", lineno, toks[i].column);
        t.push_back(e);
      }
      s->add(sym, t);
    }
  }
  if (!s) throw ParseError("missing universe line", lineno + 1, 1);
  return std::move(*s);
}

std::string format_structure(const Structure& s) {
  std::ostringstream out;
  out << "vocab";
  for (auto& sym : s.vocab().symbols()) out << ' ' << sym.name << '/' << sym.arity;
  out << "\nuniverse " << s.size() << '\n';
  if (!s.names().empty()) {
    out << "names";
    for (auto& nm : s.names()) out << ' ' << nm;
    out << '\n';
  }
  for (size_t i = 0; i < s.vocab().size(); ++i)
    for (auto& t : s.relation(static_cast<int>(i))) {
      out << s.vocab().symbols()[i].name;
      for (int x : t) out << ' ' << s.name_of(x);
      out << '\n';
    }
  return out.str();
}

Nat num_encode(const std::vector<int>& t, int n) {
  Nat v = 0, w = 1;
  for (int x : t) {
    if (x < 0 || x > n) throw DomainError("number entry out of range");
    v += w * x;
    w *= n + 1;
  }
  return v;
}

std::vector<int> num_decode(const Nat& v, int k, int n) {
  if (v < 0) throw std::out_of_range("negative value");
  std::vector<int> out(k);
  Nat rest = v;
  for (int i = 0; i < k; ++i) {
    out[i] = static_cast<int>(rest % (n + 1));
    rest /= n + 1;
  }
  if (rest != 0) throw std::out_of_range("value does not fit in the given width");
  return out;
}

Quotient quotient_by_equivalence(const std::vector<std::vector<Tuple>>& classes,
                                 const std::set<std::pair<Tuple, Tuple>>& edges) {
  std::vector<std::pair<Tuple, size_t>> mins;
  for (size_t c = 0; c < classes.size(); ++c) {
    if (classes[c].empty()) throw DomainError("empty class");
    mins.emplace_back(*std::min_element(classes[c].begin(), classes[c].end()), c);
  }
  std::sort(mins.begin(), mins.end());
  Quotient q;
  for (size_t i = 0; i < mins.size(); ++i) {
    q.reps.push_back(mins[i].first);
    for (auto& t : classes[mins[i].second])
      if (!q.class_of.emplace(t, static_cast<int>(i)).second)
        throw DomainError("classes overlap");
  }
  for (auto& [a, b] : edges) {
    auto ia = q.class_of.find(a), ib = q.class_of.find(b);
    if (ia == q.class_of.end() || ib == q.class_of.end())
      throw DomainError("edge endpoint outside every class");
    q.edges.emplace(ia->second, ib->second);
  }
  return q;
}

Structure generate_layered_graph(int n) {
  if (n < 1) throw DomainError("layered graph needs n >= 1");
  Structure g(Vocabulary({{"E", 2}}), 2 * n * n);
  auto id = [n](int side, int layer, int k) { return (side * n + layer) * n + k; };
  for (int side = 0; side < 2; ++side)
    for (int layer = 0; layer + 1 < n; ++layer)
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) g.add(0, {id(side, layer, a), id(side, layer + 1, b)});
  return g;
}

}  // namespace lrec
