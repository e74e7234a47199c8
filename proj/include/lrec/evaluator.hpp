#pragma once

#include "lrec/formula.hpp"
#include "lrec/labelled_graph.hpp"
#include "lrec/structure.hpp"

#include <map>
#include <memory>
#include <string>

namespace lrec {

// Element variables take values in [0, n), number variables in [0, n].
using Assignment = std::map<Var, int>;

struct EvalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class Engine { Memo, Stream };

struct EvalOptions {
  Engine engine = Engine::Memo;
  // Edges of an lrec graph are materialised up front when |Dom(u)|^2 is at
  // most this many pairs, and computed per vertex on demand otherwise.
  uint64_t eager_edge_threshold = 1'000'000;
};

class Evaluator {
 public:
  explicit Evaluator(const Structure& a, EvalOptions opts = {});
  ~Evaluator();

  bool eval(const FormulaPtr& f, const Assignment& alpha = {});

  // Membership of (vertex, ell) in the relation X of an lrec or lreceq node,
  // with the node's parameters taken from alpha. For lreceq the vertex is
  // any member of its class.
  bool lrec_membership(const FormulaPtr& node, const Assignment& alpha, const Tuple& vertex, const Nat& ell);
  bool lrec_membership_streaming(const FormulaPtr& node, const Assignment& alpha, const Tuple& vertex,
                                 const Nat& ell, StreamStats* stats = nullptr);

  const Structure& structure() const { return a_; }

  struct Impl;

 private:
  const Structure& a_;
  std::unique_ptr<Impl> impl_;
};

bool eval(const Structure& a, const FormulaPtr& f, const Assignment& alpha = {}, EvalOptions opts = {});

struct TargetRelation {
  std::string name;
  std::vector<VarTuple> args;  // one tuple per position, each compatible with u
  FormulaPtr def;
};

struct Transduction {
  VarTuple u, v;
  FormulaPtr domain;       // theta_V(u)
  FormulaPtr equivalence;  // theta_approx(u, v)
  std::vector<TargetRelation> relations;
};

// Universe is theta_V modulo the equivalence generated by theta_approx,
// numbered by lexicographically least member.
Structure apply_transduction(const Transduction& t, const Structure& a, EvalOptions opts = {});

}  // namespace lrec
