#include "lrec/evaluator.hpp"

#include <numeric>
#include <optional>
#include <unordered_map>

namespace lrec {

namespace {

struct CNode {
  Kind kind;
  int rel = -1;
  std::vector<int> args, u, v, p, w, r;
  std::vector<std::unique_ptr<CNode>> sub;
  std::vector<int> outer;  // slots the recursion graph depends on
};

class UnionFind {
 public:
  explicit UnionFind(size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }
  size_t find(size_t x) {
    while (parent_[x] != x) x = parent_[x] = parent_[parent_[x]];
    return x;
  }
  void unite(size_t a, size_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent_[std::max(a, b)] = std::min(a, b);
  }

 private:
  std::vector<size_t> parent_;
};

}  // namespace

struct Evaluator::Impl {
  const Structure& a;
  EvalOptions opts;
  int n;
  std::map<Var, int> slot_of;
  std::vector<int> env;
  std::vector<FormulaPtr> keep_alive;
  std::map<const Formula*, std::unique_ptr<CNode>> compiled;

  struct Instance {
    std::unique_ptr<LabelledGraph> graph;
    std::vector<Vertex> class_of;  // lreceq only
    std::unique_ptr<MemoEngine> memo;
  };
  std::map<std::pair<const CNode*, std::vector<int>>, std::unique_ptr<Instance>> instances;

  Impl(const Structure& s, EvalOptions o) : a(s), opts(o), n(s.size()) {}

  std::vector<char> slot_number;

  int slot(const Var& x) {
    auto [it, fresh] = slot_of.emplace(x, static_cast<int>(slot_of.size()));
    if (fresh) {
      env.push_back(0);
      slot_number.push_back(is_number_var(x));
    }
    return it->second;
  }

  std::vector<int> slots(const VarTuple& t) {
    std::vector<int> out;
    for (auto& x : t) out.push_back(slot(x));
    return out;
  }

  int range(int s) const { return slot_number[s] ? n + 1 : n; }

  std::unique_ptr<CNode> compile(const FormulaPtr& f) {
    auto c = std::make_unique<CNode>();
    c->kind = f->kind;
    if (f->kind == Kind::Atom) {
      c->rel = a.vocab().index_of(f->rel);
      if (c->rel < 0) throw EvalError("unknown relation symbol " + f->rel);
      if (a.vocab().symbols()[c->rel].arity != static_cast<int>(f->args.size()))
        throw EvalError("wrong arity for " + f->rel);
    }
    c->args = slots(f->args);
    c->u = slots(f->u);
    c->v = slots(f->v);
    c->p = slots(f->p);
    c->w = slots(f->w);
    c->r = slots(f->r);
    for (auto& s : f->sub) c->sub.push_back(compile(s));
    if (f->kind == Kind::Lrec || f->kind == Kind::LrecEq) {
      std::set<Var> outer;
      for (size_t i = 0; i + 1 < f->sub.size(); ++i) {
        auto fs = free_variables(f->sub[i]);
        for (auto& x : fs)
          if (std::find(f->u.begin(), f->u.end(), x) == f->u.end() &&
              std::find(f->v.begin(), f->v.end(), x) == f->v.end())
            outer.insert(x);
      }
      for (auto& x : free_variables(f->sub.back()))
        if (std::find(f->u.begin(), f->u.end(), x) == f->u.end() &&
            std::find(f->p.begin(), f->p.end(), x) == f->p.end())
          outer.insert(x);
      for (auto& x : outer) c->outer.push_back(slot(x));
    }
    return c;
  }

  const CNode* get(const FormulaPtr& f) {
    auto it = compiled.find(f.get());
    if (it != compiled.end()) return it->second.get();
    FormulaPtr g = expand_dtc(f);
    keep_alive.push_back(f);
    keep_alive.push_back(g);
    auto c = compile(g);
    const CNode* raw = c.get();
    compiled.emplace(f.get(), std::move(c));
    return raw;
  }

  void bind(const Assignment& alpha, const std::set<Var>& needed) {
    for (auto& x : needed) {
      auto it = alpha.find(x);
      if (it == alpha.end()) throw EvalError("unbound free variable " + x);
      int hi = is_number_var(x) ? n : n - 1;
      if (it->second < 0 || it->second > hi) throw EvalError("value of " + x + " out of range");
      env[slot(x)] = it->second;
    }
  }

  // Tuples of Dom(u) are numbered with the first component most significant,
  // so numeric order is lexicographic order.
  struct Domain {
    std::vector<int> radix;
    Vertex size = 1;
    void decode(Vertex id, int* out) const {
      for (size_t i = radix.size(); i-- > 0;) {
        out[i] = static_cast<int>(id % radix[i]);
        id /= radix[i];
      }
    }
    Vertex encode(const int* t) const {
      Vertex id = 0;
      for (size_t i = 0; i < radix.size(); ++i) id = id * radix[i] + t[i];
      return id;
    }
  };

  Domain domain(const std::vector<int>& u) {
    Domain d;
    for (int s : u) {
      d.radix.push_back(range(s));
      if (d.size > (Vertex{1} << 40) / d.radix.back()) throw EvalError("recursion domain too large");
      d.size *= d.radix.back();
    }
    return d;
  }

  void assign(const std::vector<int>& slots_, const Domain& d, Vertex id) {
    int buf[64];
    d.decode(id, buf);
    for (size_t i = 0; i < slots_.size(); ++i) env[slots_[i]] = buf[i];
  }

  bool eval(const CNode* c);
  bool quantify(const CNode* c, bool exists_);
  bool count(const CNode* c);
  bool recursion(const CNode* c);
  Instance& instance(const CNode* c);
};

bool Evaluator::Impl::eval(const CNode* c) {
  switch (c->kind) {
    case Kind::Atom: {
      int buf[64];
      for (size_t i = 0; i < c->args.size(); ++i) buf[i] = env[c->args[i]];
      return a.holds(c->rel, buf);
    }
    case Kind::Eq: return env[c->args[0]] == env[c->args[1]];
    case Kind::Leq: return env[c->args[0]] <= env[c->args[1]];
    case Kind::Not: return !eval(c->sub[0].get());
    case Kind::And: return eval(c->sub[0].get()) && eval(c->sub[1].get());
    case Kind::Or: return eval(c->sub[0].get()) || eval(c->sub[1].get());
    case Kind::Exists: return quantify(c, true);
    case Kind::Forall: return quantify(c, false);
    case Kind::Count: return count(c);
    case Kind::Lrec:
    case Kind::LrecEq: return recursion(c);
    case Kind::Dtc: break;
  }
  throw EvalError("dtc must be expanded before evaluation");
}

bool Evaluator::Impl::quantify(const CNode* c, bool exists_) {
  int s = c->u[0];
  int saved = env[s];
  int hi = range(s);
  bool result = !exists_;
  for (int x = 0; x < hi; ++x) {
    env[s] = x;
    if (eval(c->sub[0].get()) == exists_) {
      result = exists_;
      break;
    }
  }
  env[s] = saved;
  return result;
}

bool Evaluator::Impl::count(const CNode* c) {
  Domain d = domain(c->u);
  std::vector<int> saved;
  for (int s : c->u) saved.push_back(env[s]);
  uint64_t k = 0;
  for (Vertex id = 0; id < d.size; ++id) {
    assign(c->u, d, id);
    k += eval(c->sub[0].get());
  }
  for (size_t i = 0; i < c->u.size(); ++i) env[c->u[i]] = saved[i];
  std::vector<int> pv;
  for (int s : c->p) pv.push_back(env[s]);
  return num_encode(pv, n) == k;
}

namespace {

// Recursion graph of an lrec node, evaluated against a snapshot of the
// assignment. Edges and in-degrees are cached per vertex.
class FormulaGraph : public LabelledGraph {
 public:
  using Impl = Evaluator::Impl;

  FormulaGraph(Impl& impl, const CNode* c, bool eager)
      : impl_(impl), c_(c), env_(impl.env), dom_(impl.domain(c->u)) {
    if (eager) {
      all_out_.resize(dom_.size);
      all_indeg_.assign(dom_.size, 0);
      for (Vertex a = 0; a < dom_.size; ++a) {
        all_out_[a] = compute_out(a);
        for (Vertex b : all_out_[a]) ++all_indeg_[b];
      }
      eager_ = true;
    }
  }

  Vertex num_vertices() const override { return dom_.size; }

  const std::vector<Vertex>& out(Vertex v) override {
    if (eager_) return all_out_[v];
    auto it = out_.find(v);
    if (it == out_.end()) it = out_.emplace(v, compute_out(v)).first;
    return it->second;
  }

  uint64_t indegree(Vertex v) override {
    if (eager_) return all_indeg_[v];
    auto it = indeg_.find(v);
    if (it != indeg_.end()) return it->second;
    uint64_t k = 0;
    for (Vertex a = 0; a < dom_.size; ++a) k += edge(a, v);
    indeg_.emplace(v, k);
    return k;
  }

  bool in_label(Vertex v, uint64_t cnt) override {
    auto key = std::make_pair(v, cnt);
    auto it = label_.find(key);
    if (it != label_.end()) return it->second;
    bool in = false;
    Nat limit = 1;
    for (size_t i = 0; i < c_->p.size(); ++i) limit *= impl_.n + 1;
    if (cnt < limit) {
      auto digits = num_decode(cnt, static_cast<int>(c_->p.size()), impl_.n);
      with_env([&] {
        impl_.assign(c_->u, dom_, v);
        for (size_t i = 0; i < c_->p.size(); ++i) impl_.env[c_->p[i]] = digits[i];
        in = impl_.eval(c_->sub.back().get());
      });
    }
    label_.emplace(key, in);
    return in;
  }

  bool edge(Vertex a, Vertex b) {
    bool e = false;
    with_env([&] {
      impl_.assign(c_->u, dom_, a);
      impl_.assign(c_->v, dom_, b);
      e = impl_.eval(c_->sub[c_->sub.size() - 2].get());
    });
    return e;
  }

  const Impl::Domain& domain() const { return dom_; }

 private:
  template <class F>
  void with_env(F&& f) {
    std::vector<int> saved = impl_.env;
    std::copy(env_.begin(), env_.end(), impl_.env.begin());
    f();
    impl_.env = std::move(saved);
  }

  std::vector<Vertex> compute_out(Vertex a) {
    std::vector<Vertex> o;
    for (Vertex b = 0; b < dom_.size; ++b)
      if (edge(a, b)) o.push_back(b);
    return o;
  }

  Impl& impl_;
  const CNode* c_;
  std::vector<int> env_;
  Impl::Domain dom_;
  bool eager_ = false;
  std::vector<std::vector<Vertex>> all_out_;
  std::vector<uint64_t> all_indeg_;
  std::unordered_map<Vertex, std::vector<Vertex>> out_;
  std::unordered_map<Vertex, uint64_t> indeg_;
  std::map<std::pair<Vertex, uint64_t>, bool> label_;
};

}  // namespace

Evaluator::Impl::Instance& Evaluator::Impl::instance(const CNode* c) {
  std::vector<int> key;
  for (int s : c->outer) key.push_back(env[s]);
  auto it = instances.find({c, key});
  if (it != instances.end()) return *it->second;

  auto inst = std::make_unique<Instance>();
  Domain d = domain(c->u);
  bool eager = Nat(d.size) * d.size <= opts.eager_edge_threshold;
  auto fg = std::make_unique<FormulaGraph>(*this, c, eager && c->kind == Kind::Lrec);
  if (c->kind == Kind::Lrec) {
    inst->graph = std::move(fg);
  } else {
    // The equivalence generated by the first formula, then the quotient graph
    // with the union of member labels.
    std::vector<int> saved = env;
    UnionFind uf(d.size);
    for (Vertex x = 0; x < d.size; ++x)
      for (Vertex y = 0; y < d.size; ++y) {
        assign(c->u, d, x);
        assign(c->v, d, y);
        if (eval(c->sub[0].get())) uf.unite(x, y);
      }
    env = saved;
    std::map<Vertex, std::vector<Tuple>> members;
    std::vector<int> buf(c->u.size());
    for (Vertex x = 0; x < d.size; ++x) {
      d.decode(x, buf.data());
      members[uf.find(x)].emplace_back(buf);
    }
    std::vector<std::vector<Tuple>> classes;
    for (auto& [root, m] : members) classes.push_back(std::move(m));
    std::set<std::pair<Tuple, Tuple>> edges;
    std::vector<int> bx(c->u.size()), by(c->u.size());
    for (Vertex x = 0; x < d.size; ++x)
      for (Vertex y = 0; y < d.size; ++y)
        if (fg->edge(x, y)) {
          d.decode(x, bx.data());
          d.decode(y, by.data());
          edges.emplace(bx, by);
        }
    Quotient q = quotient_by_equivalence(classes, edges);
    auto g = std::make_unique<ExplicitGraph>(q.reps.size());
    for (auto [x, y] : q.edges) g->add_edge(x, y);
    inst->class_of.resize(d.size);
    for (Vertex x = 0; x < d.size; ++x) {
      d.decode(x, bx.data());
      inst->class_of[x] = q.class_of.at(bx);
    }
    std::vector<std::vector<Vertex>> by_class(q.reps.size());
    for (Vertex x = 0; x < d.size; ++x) by_class[inst->class_of[x]].push_back(x);
    for (Vertex k = 0; k < q.reps.size(); ++k) {
      Label l;
      uint64_t deg = g->out(k).size();
      for (uint64_t cnt = 0; cnt <= deg; ++cnt)
        for (Vertex x : by_class[k])
          if (fg->in_label(x, cnt)) {
            l.values.insert(cnt);
            break;
          }
      g->set_label(k, std::move(l));
    }
    inst->graph = std::move(g);
  }
  inst->memo = std::make_unique<MemoEngine>(*inst->graph);
  return *instances.emplace(std::make_pair(c, key), std::move(inst)).first->second;
}

bool Evaluator::Impl::recursion(const CNode* c) {
  Instance& inst = instance(c);
  Domain d = domain(c->u);
  std::vector<int> wv, rv;
  for (int s : c->w) wv.push_back(env[s]);
  for (int s : c->r) rv.push_back(env[s]);
  Vertex v = d.encode(wv.data());
  if (!inst.class_of.empty()) v = inst.class_of[v];
  Nat ell = num_encode(rv, n);
  if (opts.engine == Engine::Stream) return stream_member(*inst.graph, v, ell);
  return inst.memo->member(v, ell);
}

Evaluator::Evaluator(const Structure& a, EvalOptions opts) : a_(a), impl_(std::make_unique<Impl>(a, opts)) {}
Evaluator::~Evaluator() = default;

bool Evaluator::eval(const FormulaPtr& f, const Assignment& alpha) {
  const CNode* c = impl_->get(f);
  impl_->bind(alpha, free_variables(f));
  return impl_->eval(c);
}

namespace {

// Free variables the recursion graph depends on; w and r are not needed.
std::set<Var> graph_parameters(const FormulaPtr& node, const Tuple& vertex) {
  if (node->kind != Kind::Lrec && node->kind != Kind::LrecEq) throw EvalError("not an lrec node");
  if (vertex.size() != node->u.size()) throw EvalError("vertex has the wrong width");
  Formula g = *node;
  g.w.clear();
  g.r.clear();
  return free_variables(std::make_shared<const Formula>(std::move(g)));
}

}  // namespace

bool Evaluator::lrec_membership(const FormulaPtr& node, const Assignment& alpha, const Tuple& vertex,
                                const Nat& ell) {
  auto needed = graph_parameters(node, vertex);
  const CNode* c = impl_->get(node);
  impl_->bind(alpha, needed);
  auto& inst = impl_->instance(c);
  Vertex v = impl_->domain(c->u).encode(vertex.data());
  if (!inst.class_of.empty()) v = inst.class_of[v];
  return inst.memo->member(v, ell);
}

bool Evaluator::lrec_membership_streaming(const FormulaPtr& node, const Assignment& alpha, const Tuple& vertex,
                                          const Nat& ell, StreamStats* stats) {
  auto needed = graph_parameters(node, vertex);
  const CNode* c = impl_->get(node);
  impl_->bind(alpha, needed);
  auto& inst = impl_->instance(c);
  Vertex v = impl_->domain(c->u).encode(vertex.data());
  if (!inst.class_of.empty()) v = inst.class_of[v];
  return stream_member(*inst.graph, v, ell, stats);
}

bool eval(const Structure& a, const FormulaPtr& f, const Assignment& alpha, EvalOptions opts) {
  return Evaluator(a, opts).eval(f, alpha);
}

Structure apply_transduction(const Transduction& t, const Structure& a, EvalOptions opts) {
  if (t.u.size() != t.v.size() || t.u.empty()) throw EvalError("transduction tuples must be compatible");
  Evaluator ev(a, opts);
  const int n = a.size();
  std::vector<int> radix;
  for (auto& x : t.u) radix.push_back(is_number_var(x) ? n + 1 : n);
  uint64_t dsize = 1;
  for (int r : radix) dsize *= r;
  auto decode = [&](uint64_t id) {
    Tuple out(radix.size());
    for (size_t i = radix.size(); i-- > 0;) {
      out[i] = static_cast<int>(id % radix[i]);
      id /= radix[i];
    }
    return out;
  };
  auto bind = [](Assignment& al, const VarTuple& vars, const Tuple& vals) {
    for (size_t i = 0; i < vars.size(); ++i) al[vars[i]] = vals[i];
  };

  std::vector<uint64_t> dom;
  for (uint64_t id = 0; id < dsize; ++id) {
    Assignment al;
    bind(al, t.u, decode(id));
    if (ev.eval(t.domain, al)) dom.push_back(id);
  }
  if (dom.empty()) throw EvalError("transduction undefined: empty domain");

  UnionFind uf(dsize);
  for (uint64_t x = 0; x < dsize; ++x)
    for (uint64_t y = 0; y < dsize; ++y) {
      Assignment al;
      bind(al, t.u, decode(x));
      bind(al, t.v, decode(y));
      if (ev.eval(t.equivalence, al)) uf.unite(x, y);
    }
  // Class ids in order of least member; dom is already sorted.
  std::map<uint64_t, int> class_id;
  std::vector<int> elem(dom.size());
  for (size_t i = 0; i < dom.size(); ++i) {
    auto [it, fresh] = class_id.emplace(uf.find(dom[i]), static_cast<int>(class_id.size()));
    elem[i] = it->second;
  }

  Vocabulary vocab;
  for (auto& r : t.relations) vocab.add(r.name, static_cast<int>(r.args.size()));
  Structure out(vocab, static_cast<int>(class_id.size()));
  for (size_t ri = 0; ri < t.relations.size(); ++ri) {
    const auto& rel = t.relations[ri];
    size_t k = rel.args.size();
    for (auto& a_i : rel.args)
      if (a_i.size() != t.u.size()) throw EvalError("relation tuple incompatible with domain tuple");
    std::vector<size_t> idx(k, 0);
    while (true) {
      Assignment al;
      for (size_t j = 0; j < k; ++j) bind(al, rel.args[j], decode(dom[idx[j]]));
      if (ev.eval(rel.def, al)) {
        Tuple tup;
        for (size_t j = 0; j < k; ++j) tup.push_back(elem[idx[j]]);
        out.add(static_cast<int>(ri), tup);
      }
      size_t j = k;
      while (j > 0 && ++idx[j - 1] == dom.size()) idx[--j] = 0;
      if (j == 0) break;
    }
  }
  return out;
}

}  // namespace lrec
