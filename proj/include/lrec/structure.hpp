#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <iosfwd>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace lrec {

using Nat = boost::multiprecision::cpp_int;
using Tuple = std::vector<int>;

struct DomainError : std::domain_error {
  using std::domain_error::domain_error;
};

struct ParseError : std::runtime_error {
  int line, column;
  ParseError(const std::string& msg, int line_, int column_);
};

struct Symbol {
  std::string name;
  int arity;
};

class Vocabulary {
 public:
  Vocabulary() = default;
  explicit Vocabulary(std::vector<Symbol> symbols);

  void add(const std::string& name, int arity);
  int index_of(const std::string& name) const;  // -1 if absent
  const std::vector<Symbol>& symbols() const { return symbols_; }
  size_t size() const { return symbols_.size(); }

 private:
  std::vector<Symbol> symbols_;
};

// Finite relational structure over the universe {0,...,n-1}. The number sort
// {0,...,n} is implicit.
class Structure {
 public:
  Structure(Vocabulary vocab, int n);

  int size() const { return n_; }
  const Vocabulary& vocab() const { return vocab_; }

  void add(int sym, const Tuple& t);
  void add(const std::string& sym, const Tuple& t);
  bool holds(int sym, const Tuple& t) const;
  bool holds(int sym, const int* t) const;
  const std::set<Tuple>& relation(int sym) const { return rels_[sym]; }
  const std::set<Tuple>& relation(const std::string& sym) const;

  const std::vector<std::string>& names() const { return names_; }
  void set_names(std::vector<std::string> names);
  std::string name_of(int e) const;
  int element(const std::string& name) const;  // -1 if unknown

 private:
  size_t dense_index(int sym, const int* t) const;

  Vocabulary vocab_;
  int n_;
  std::vector<std::set<Tuple>> rels_;
  std::vector<std::vector<uint8_t>> dense_;  // empty when n^arity is too large
  std::vector<std::string> names_;
  std::map<std::string, int> name_index_;
};

Structure parse_structure(const std::string& text);
std::string format_structure(const Structure& s);

// Little-endian base-(n+1) encoding of a number tuple.
Nat num_encode(const std::vector<int>& t, int n);
std::vector<int> num_decode(const Nat& v, int k, int n);

struct Quotient {
  // Representative (lexicographic minimum) of every class, in increasing order.
  std::vector<Tuple> reps;
  std::map<Tuple, int> class_of;
  std::set<std::pair<int, int>> edges;
};

Quotient quotient_by_equivalence(const std::vector<std::vector<Tuple>>& classes,
                                 const std::set<std::pair<Tuple, Tuple>>& edges);

// Two sides of n layers with n vertices each, numbered layer-major:
// side j in {0,1}, layer i, position k -> (j*n + i)*n + k.
Structure generate_layered_graph(int n);

}  // namespace lrec
