#include "lrec/formula.hpp"

#include <sstream>

namespace lrec {

bool Formula::operator==(const Formula& o) const {
  if (kind != o.kind || rel != o.rel || args != o.args || u != o.u || v != o.v || p != o.p ||
      w != o.w || r != o.r || sub.size() != o.sub.size())
    return false;
  for (size_t i = 0; i < sub.size(); ++i)
    if (!same_formula(sub[i], o.sub[i])) return false;
  return true;
}

bool same_formula(const FormulaPtr& a, const FormulaPtr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  return *a == *b;
}

namespace {
FormulaPtr make(Formula f) { return std::make_shared<const Formula>(std::move(f)); }
}  // namespace

FormulaPtr atom(std::string rel, VarTuple args) {
  return make({Kind::Atom, std::move(rel), std::move(args), {}, {}, {}, {}, {}, {}});
}
FormulaPtr eq(Var a, Var b) { return make({Kind::Eq, {}, {std::move(a), std::move(b)}, {}, {}, {}, {}, {}, {}}); }
FormulaPtr leq(Var a, Var b) { return make({Kind::Leq, {}, {std::move(a), std::move(b)}, {}, {}, {}, {}, {}, {}}); }
FormulaPtr lnot(FormulaPtr f) { return make({Kind::Not, {}, {}, {std::move(f)}, {}, {}, {}, {}, {}}); }
FormulaPtr land(FormulaPtr a, FormulaPtr b) {
  return make({Kind::And, {}, {}, {std::move(a), std::move(b)}, {}, {}, {}, {}, {}});
}
FormulaPtr lor(FormulaPtr a, FormulaPtr b) {
  return make({Kind::Or, {}, {}, {std::move(a), std::move(b)}, {}, {}, {}, {}, {}});
}
FormulaPtr exists(Var x, FormulaPtr f) {
  return make({Kind::Exists, {}, {}, {std::move(f)}, {std::move(x)}, {}, {}, {}, {}});
}
FormulaPtr forall(Var x, FormulaPtr f) {
  return make({Kind::Forall, {}, {}, {std::move(f)}, {std::move(x)}, {}, {}, {}, {}});
}
FormulaPtr count(VarTuple u, FormulaPtr f, VarTuple p) {
  return make({Kind::Count, {}, {}, {std::move(f)}, std::move(u), {}, std::move(p), {}, {}});
}
FormulaPtr make_lrec(VarTuple u, VarTuple v, VarTuple p, FormulaPtr fe, FormulaPtr fc, VarTuple w, VarTuple r) {
  return make({Kind::Lrec, {}, {}, {std::move(fe), std::move(fc)}, std::move(u), std::move(v), std::move(p),
               std::move(w), std::move(r)});
}
FormulaPtr make_lreceq(VarTuple u, VarTuple v, VarTuple p, FormulaPtr feq, FormulaPtr fe, FormulaPtr fc, VarTuple w,
                  VarTuple r) {
  return make({Kind::LrecEq, {}, {}, {std::move(feq), std::move(fe), std::move(fc)}, std::move(u), std::move(v),
               std::move(p), std::move(w), std::move(r)});
}
FormulaPtr make_dtc(VarTuple u, VarTuple v, FormulaPtr psi, VarTuple s, VarTuple t) {
  return make({Kind::Dtc, {}, {}, {std::move(psi)}, std::move(u), std::move(v), {}, std::move(s), std::move(t)});
}

namespace {

std::string tuple_str(const VarTuple& t) {
  if (t.size() == 1) return t[0];
  std::string s = "(";
  for (size_t i = 0; i < t.size(); ++i) s += (i ? "," : "") + t[i];
  return s + ")";
}

void print(std::ostream& out, const FormulaPtr& f) {
  switch (f->kind) {
    case Kind::Atom: {
      out << f->rel << '(';
      for (size_t i = 0; i < f->args.size(); ++i) out << (i ? "," : "") << f->args[i];
      out << ')';
      break;
    }
    case Kind::Eq: out << f->args[0] << " = " << f->args[1]; break;
    case Kind::Leq: out << f->args[0] << " <= " << f->args[1]; break;
    case Kind::Not: out << "not "; print(out, f->sub[0]); break;
    case Kind::And:
    case Kind::Or:
      out << '(';
      print(out, f->sub[0]);
      out << (f->kind == Kind::And ? " and " : " or ");
      print(out, f->sub[1]);
      out << ')';
      break;
    case Kind::Exists:
    case Kind::Forall:
      out << (f->kind == Kind::Exists ? "exists " : "forall ") << f->u[0] << ' ';
      print(out, f->sub[0]);
      break;
    case Kind::Count: {
      out << "count(";
      for (size_t i = 0; i < f->u.size(); ++i) out << (i ? ", " : "") << f->u[i];
      out << "; ";
      print(out, f->sub[0]);
      out << ") = " << tuple_str(f->p);
      break;
    }
    case Kind::Lrec:
    case Kind::LrecEq:
      out << (f->kind == Kind::Lrec ? "[lrec " : "[lreceq ") << tuple_str(f->u) << ", " << tuple_str(f->v)
          << ", " << tuple_str(f->p) << " : ";
      for (size_t i = 0; i < f->sub.size(); ++i) {
        if (i) out << " ; ";
        print(out, f->sub[i]);
      }
      out << "](" << tuple_str(f->w) << ", " << tuple_str(f->r) << ')';
      break;
    case Kind::Dtc:
      out << "[dtc " << tuple_str(f->u) << ", " << tuple_str(f->v) << " : ";
      print(out, f->sub[0]);
      out << "](" << tuple_str(f->w) << ", " << tuple_str(f->r) << ')';
      break;
  }
}

void erase_all(std::set<Var>& s, const VarTuple& t) {
  for (auto& x : t) s.erase(x);
}

}  // namespace

std::string pretty(const FormulaPtr& f) {
  std::ostringstream out;
  print(out, f);
  return out.str();
}

std::set<Var> free_variables(const FormulaPtr& f) {
  std::set<Var> out;
  switch (f->kind) {
    case Kind::Atom:
    case Kind::Eq:
    case Kind::Leq:
      out.insert(f->args.begin(), f->args.end());
      break;
    case Kind::Not:
    case Kind::And:
    case Kind::Or:
      for (auto& s : f->sub) {
        auto fs = free_variables(s);
        out.insert(fs.begin(), fs.end());
      }
      break;
    case Kind::Exists:
    case Kind::Forall:
    case Kind::Count:
      out = free_variables(f->sub[0]);
      erase_all(out, f->u);
      out.insert(f->p.begin(), f->p.end());
      break;
    case Kind::Lrec:
    case Kind::LrecEq: {
      size_t nedge = f->sub.size() - 1;
      for (size_t i = 0; i < nedge; ++i) {
        auto fe = free_variables(f->sub[i]);
        erase_all(fe, f->u);
        erase_all(fe, f->v);
        out.insert(fe.begin(), fe.end());
      }
      auto fc = free_variables(f->sub.back());
      erase_all(fc, f->u);
      erase_all(fc, f->p);
      out.insert(fc.begin(), fc.end());
      out.insert(f->w.begin(), f->w.end());
      out.insert(f->r.begin(), f->r.end());
      break;
    }
    case Kind::Dtc:
      out = free_variables(f->sub[0]);
      erase_all(out, f->u);
      erase_all(out, f->v);
      out.insert(f->w.begin(), f->w.end());
      out.insert(f->r.begin(), f->r.end());
      break;
  }
  return out;
}

std::set<Var> all_variables(const FormulaPtr& f) {
  std::set<Var> out;
  for (auto* t : {&f->args, &f->u, &f->v, &f->p, &f->w, &f->r}) out.insert(t->begin(), t->end());
  for (auto& s : f->sub) {
    auto sv = all_variables(s);
    out.insert(sv.begin(), sv.end());
  }
  return out;
}

namespace {

VarTuple map_tuple(const VarTuple& t, const std::map<Var, Var>& m) {
  VarTuple out = t;
  for (auto& x : out) {
    auto it = m.find(x);
    if (it != m.end()) x = it->second;
  }
  return out;
}

std::map<Var, Var> without(std::map<Var, Var> m, std::initializer_list<const VarTuple*> bound) {
  for (auto* t : bound)
    for (auto& x : *t) m.erase(x);
  return m;
}

}  // namespace

FormulaPtr rename_free(const FormulaPtr& f, const std::map<Var, Var>& m) {
  if (m.empty()) return f;
  Formula g = *f;
  switch (f->kind) {
    case Kind::Atom:
    case Kind::Eq:
    case Kind::Leq:
      g.args = map_tuple(f->args, m);
      break;
    case Kind::Not:
    case Kind::And:
    case Kind::Or:
      for (auto& s : g.sub) s = rename_free(s, m);
      break;
    case Kind::Exists:
    case Kind::Forall:
      g.sub[0] = rename_free(f->sub[0], without(m, {&f->u}));
      break;
    case Kind::Count:
      g.sub[0] = rename_free(f->sub[0], without(m, {&f->u}));
      g.p = map_tuple(f->p, m);
      break;
    case Kind::Lrec:
    case Kind::LrecEq: {
      auto me = without(m, {&f->u, &f->v});
      for (size_t i = 0; i + 1 < f->sub.size(); ++i) g.sub[i] = rename_free(f->sub[i], me);
      g.sub.back() = rename_free(f->sub.back(), without(m, {&f->u, &f->p}));
      g.w = map_tuple(f->w, m);
      g.r = map_tuple(f->r, m);
      break;
    }
    case Kind::Dtc:
      g.sub[0] = rename_free(f->sub[0], without(m, {&f->u, &f->v}));
      g.w = map_tuple(f->w, m);
      g.r = map_tuple(f->r, m);
      break;
  }
  return make(std::move(g));
}

Var FreshNames::next(const std::string& base) {
  for (int i = 0;; ++i) {
    Var cand = base + std::to_string(i);
    if (taken_.insert(cand).second) return cand;
  }
}

Var FreshNames::element(const std::string& stem) { return next("_" + stem); }
Var FreshNames::number(const std::string& stem) { return next("#_" + stem); }

namespace {

FormulaPtr conj_eq(const VarTuple& a, const VarTuple& b) {
  FormulaPtr out = eq(a[0], b[0]);
  for (size_t i = 1; i < a.size(); ++i) out = land(out, eq(a[i], b[i]));
  return out;
}

void fresh_tuple_like(const VarTuple& t, FreshNames& fresh, VarTuple& out, const std::string& stem) {
  out.clear();
  for (auto& x : t) out.push_back(is_number_var(x) ? fresh.number(stem) : fresh.element(stem));
}

FormulaPtr expand(const FormulaPtr& f, FreshNames& fresh) {
  if (f->kind != Kind::Dtc) {
    bool changed = false;
    std::vector<FormulaPtr> subs;
    for (auto& s : f->sub) {
      subs.push_back(expand(s, fresh));
      changed |= subs.back() != s;
    }
    if (!changed) return f;
    Formula g = *f;
    g.sub = std::move(subs);
    return make(std::move(g));
  }
  FormulaPtr psi = expand(f->sub[0], fresh);
  VarTuple u = f->u, v = f->v;
  const VarTuple &s = f->w, &t = f->r;
  // The source tuple is free in the label formula, where u and v are bound;
  // rename the bound tuples if they would capture it.
  bool clash = false;
  for (auto& x : s)
    for (auto* bt : {&u, &v})
      for (auto& y : *bt) clash |= x == y;
  if (clash) {
    VarTuple nu, nv;
    fresh_tuple_like(u, fresh, nu, "u");
    fresh_tuple_like(v, fresh, nv, "v");
    std::map<Var, Var> m;
    for (size_t i = 0; i < u.size(); ++i) m[u[i]] = nu[i];
    for (size_t i = 0; i < v.size(); ++i) m[v[i]] = nv[i];
    psi = rename_free(psi, m);
    u = nu;
    v = nv;
  }
  VarTuple v2, p, r;
  fresh_tuple_like(v, fresh, v2, "v");
  for (size_t i = 0; i < u.size(); ++i) {
    p.push_back(fresh.number("p"));
    r.push_back(fresh.number("r"));
  }
  std::map<Var, Var> to_v2;
  for (size_t i = 0; i < v.size(); ++i) to_v2[v[i]] = v2[i];
  // Unique successor: psi(u,v) and every v' with psi(u,v') equals v.
  FormulaPtr uniq = lor(lnot(rename_free(psi, to_v2)), conj_eq(v2, v));
  for (size_t i = v2.size(); i-- > 0;) uniq = forall(v2[i], uniq);
  FormulaPtr fe = land(psi, uniq);
  // p != 0 as: some component exceeds some number.
  Var z = fresh.number("z");
  FormulaPtr nonzero = exists(z, lnot(leq(p[0], z)));
  for (size_t i = 1; i < p.size(); ++i) nonzero = lor(nonzero, exists(z, lnot(leq(p[i], z))));
  FormulaPtr fc = lor(conj_eq(v, s), land(lnot(conj_eq(v, s)), nonzero));
  FormulaPtr out = make_lrec(v, u, p, fe, fc, t, r);
  for (size_t i = r.size(); i-- > 0;) out = exists(r[i], out);
  return out;
}

}  // namespace

FormulaPtr expand_dtc(const FormulaPtr& f) {
  FreshNames fresh(all_variables(f));
  return expand(f, fresh);
}

}  // namespace lrec
