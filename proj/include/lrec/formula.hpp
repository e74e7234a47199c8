#pragma once

#include "lrec/structure.hpp"

#include <memory>
#include <set>
#include <string>
#include <vector>

namespace lrec {

// Variables are plain names; a leading '#' marks a number variable.
using Var = std::string;
using VarTuple = std::vector<Var>;

inline bool is_number_var(const Var& v) { return !v.empty() && v[0] == '#'; }

enum class Kind { Atom, Eq, Leq, Not, And, Or, Exists, Forall, Count, Lrec, LrecEq, Dtc };

struct Formula;
using FormulaPtr = std::shared_ptr<const Formula>;

// Field use per kind:
//   Atom    rel(args)
//   Eq,Leq  args[0] = args[1], args[0] <= args[1]
//   Not     sub[0]
//   And,Or  sub[0], sub[1]
//   Exists,Forall  u[0] bound in sub[0]
//   Count   count(u; sub[0]) = p
//   Lrec    [lrec u,v,p : sub[0] ; sub[1]](w, r)
//   LrecEq  [lreceq u,v,p : sub[0] ; sub[1] ; sub[2]](w, r)
//   Dtc     [dtc u,v : sub[0]](w, r), w the source and r the target
struct Formula {
  Kind kind;
  std::string rel;
  VarTuple args;
  std::vector<FormulaPtr> sub;
  VarTuple u, v, p, w, r;

  bool operator==(const Formula& o) const;
};

bool same_formula(const FormulaPtr& a, const FormulaPtr& b);

FormulaPtr atom(std::string rel, VarTuple args);
FormulaPtr eq(Var a, Var b);
FormulaPtr leq(Var a, Var b);
FormulaPtr lnot(FormulaPtr f);
FormulaPtr land(FormulaPtr a, FormulaPtr b);
FormulaPtr lor(FormulaPtr a, FormulaPtr b);
FormulaPtr exists(Var x, FormulaPtr f);
FormulaPtr forall(Var x, FormulaPtr f);
FormulaPtr count(VarTuple u, FormulaPtr f, VarTuple p);
FormulaPtr make_lrec(VarTuple u, VarTuple v, VarTuple p, FormulaPtr fe, FormulaPtr fc, VarTuple w, VarTuple r);
FormulaPtr make_lreceq(VarTuple u, VarTuple v, VarTuple p, FormulaPtr feq, FormulaPtr fe, FormulaPtr fc,
                  VarTuple w, VarTuple r);
FormulaPtr make_dtc(VarTuple u, VarTuple v, FormulaPtr psi, VarTuple s, VarTuple t);

// Throws ParseError with line and column on malformed input.
FormulaPtr parse_formula(const std::string& text);
std::string pretty(const FormulaPtr& f);

std::set<Var> free_variables(const FormulaPtr& f);
std::set<Var> all_variables(const FormulaPtr& f);

// Renames free occurrences. Targets must not occur in f.
FormulaPtr rename_free(const FormulaPtr& f, const std::map<Var, Var>& m);

FormulaPtr expand_dtc(const FormulaPtr& f);

// Generates names absent from a reserved set.
class FreshNames {
 public:
  explicit FreshNames(std::set<Var> taken) : taken_(std::move(taken)) {}
  Var element(const std::string& stem);
  Var number(const std::string& stem);

 private:
  Var next(const std::string& base);
  std::set<Var> taken_;
};

}  // namespace lrec
